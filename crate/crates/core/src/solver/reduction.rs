//! Minimal cut set extraction through one exact unreliability computation.
//!
//! With the basic events enumerated as `v_0 … v_{n-1}` and `p(v_i) = 10^(-2^i)`,
//! every minimal cut set `f` contributes `10^(-κ(f))` where the binary digits
//! of the integer `κ(f)` are exactly `f`. The distinct powers of ten cannot
//! carry into each other, so the position of the leading decimal digit of
//! the unreliability is `κ` of the minimal cut set with the smallest `κ`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::tree::{FaultTree, NodeId, Prob, SafetyEvent};

use super::sfpa::solve_sfpa2;

/// `10^(2^16)` is the practical wall for exact arithmetic.
pub const REDUCTION_CAP: usize = 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("{bes} basic events exceed the reduction cap of {cap}")]
    CapExceeded { bes: usize, cap: usize },
    #[error("the tree has no cut sets")]
    NoCutSets,
}

/// Smallest `k ≥ 0` with `u · 10^k ≥ 1`, i.e. `-⌊log10 u⌋` for `0 < u ≤ 1`.
fn leading_digit_position(u: &BigRational) -> u64 {
    let (n, d) = (u.numer(), u.denom());
    let digits = |x: &BigInt| x.to_string().len() as i64;
    let mut k = (digits(d) - digits(n)).max(0) as u64;
    let ten = BigInt::from(10u32);
    let scaled = |k: u64| n * num_traits::pow(ten.clone(), k as usize);
    while scaled(k) < *d {
        k += 1;
    }
    while k > 0 && scaled(k - 1) >= *d {
        k -= 1;
    }
    k
}

/// Returns a minimal cut set of `t`, ignoring its probabilities.
///
/// Basic events are enumerated by name; bit `i` of the internal `κ` is the
/// state of the `i`-th name.
pub fn minimal_cut_set_via_reduction(t: &FaultTree, cap: usize) -> Result<SafetyEvent, ReductionError> {
    let mut bes = t.basic_events();
    let cap = cap.min(REDUCTION_CAP);
    if bes.len() > cap {
        return Err(ReductionError::CapExceeded { bes: bes.len(), cap });
    }
    bes.sort_by(|&a, &b| t.name(a).cmp(t.name(b)));
    let mut rank = vec![usize::MAX; t.len()];
    for (i, v) in bes.iter().enumerate() {
        rank[v.index()] = i;
    }
    let ten = BigInt::from(10u32);
    let augmented = t.with_probabilities(|v: NodeId| {
        let exponent = 1usize << rank[v.index()];
        Prob::from_exact(BigRational::new(BigInt::one(), num_traits::pow(ten.clone(), exponent)))
    });

    let u = solve_sfpa2::<BigRational>(&augmented).unreliability;
    if u.is_zero() {
        return Err(ReductionError::NoCutSets);
    }
    debug_assert!(u.is_positive() && u <= BigRational::one());
    let kappa = leading_digit_position(&u);
    assert!(
        kappa < (1u64 << bes.len()),
        "leading digit position {kappa} does not encode an event over {} basic events",
        bes.len()
    );
    Ok(SafetyEvent::new(bes.iter().enumerate().map(|(i, &v)| (v, kappa >> i & 1 == 1)).collect()))
}
