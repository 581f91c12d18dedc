use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rustc_hash::FxHashMap;

use super::{AlgebraError, Coefficient, VarSet};

/// Largest variable count accepted by [`interpolate`] and
/// [`SquarefreePoly::tabulate`].
pub const MAX_TABLE_VARS: usize = 20;

/// Element of the squarefree polynomial algebra: a sparse map from monomials
/// (sets of variables) to non-zero coefficients, subject to `x·x = x`.
#[derive(Clone, PartialEq)]
pub struct SquarefreePoly<C> {
    terms: FxHashMap<VarSet, C>,
}

impl<C: Coefficient> Default for SquarefreePoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coefficient> SquarefreePoly<C> {
    pub fn zero() -> Self {
        SquarefreePoly { terms: FxHashMap::default() }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(VarSet::new(), c)
    }

    /// The bare variable `x`.
    pub fn var(x: usize) -> Self {
        Self::monomial(VarSet::singleton(x), C::one())
    }

    pub fn monomial(vars: VarSet, c: C) -> Self {
        let mut terms = FxHashMap::default();
        if !c.is_zero() {
            terms.insert(vars, c);
        }
        SquarefreePoly { terms }
    }

    /// Sums the given terms; repeated monomials accumulate.
    pub fn from_terms(iter: impl IntoIterator<Item = (VarSet, C)>) -> Self {
        let mut terms: FxHashMap<VarSet, C> = FxHashMap::default();
        for (k, c) in iter {
            *terms.entry(k).or_insert_with(C::zero) += &c;
        }
        terms.retain(|_, c| !c.is_zero());
        SquarefreePoly { terms }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&VarSet, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, vars: &VarSet) -> Option<&C> {
        self.terms.get(vars)
    }

    /// The value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<C> {
        match self.terms.len() {
            0 => Some(C::zero()),
            1 => self.terms.get(&VarSet::new()).cloned(),
            _ => None,
        }
    }

    /// Union of all monomials.
    pub fn variables(&self) -> VarSet {
        self.terms.keys().fold(VarSet::new(), |acc, k| acc.union(k))
    }

    pub fn contains_var(&self, x: usize) -> bool {
        self.terms.keys().any(|k| k.contains(x))
    }

    /// Terms sorted by monomial size, then by bitset value.
    pub fn sorted_terms(&self) -> Vec<(&VarSet, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(b.0)));
        v
    }

    pub fn add(&self, other: &Self) -> Self {
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        let mut terms = big.terms.clone();
        for (k, c) in &small.terms {
            match terms.get_mut(k) {
                Some(e) => {
                    *e += c;
                    if e.is_zero() {
                        terms.remove(k);
                    }
                }
                None => {
                    terms.insert(k.clone(), c.clone());
                }
            }
        }
        SquarefreePoly { terms }
    }

    pub fn neg(&self) -> Self {
        SquarefreePoly { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c.clone())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    /// `1 - self`.
    pub fn one_minus(&self) -> Self {
        Self::one().sub(self)
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut terms = FxHashMap::with_capacity_and_hasher(self.len(), Default::default());
        for (k, a) in &self.terms {
            let p = a.mul_ref(c);
            if !p.is_zero() {
                terms.insert(k.clone(), p);
            }
        }
        SquarefreePoly { terms }
    }

    /// Product; monomials combine by set union, which is the `x·x = x` law.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let mut terms: FxHashMap<VarSet, C> =
            FxHashMap::with_capacity_and_hasher(self.len() * other.len(), Default::default());
        for (ka, a) in &self.terms {
            for (kb, b) in &other.terms {
                let p = a.mul_ref(b);
                *terms.entry(ka.union(kb)).or_insert_with(C::zero) += &p;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        SquarefreePoly { terms }
    }

    /// `self[x ↦ bit]`. Setting `x` to one folds each monomial containing `x`
    /// onto the monomial without it; setting it to zero drops those monomials.
    pub fn restrict(&self, x: usize, bit: bool) -> Self {
        if !bit {
            return SquarefreePoly {
                terms: self.terms.iter().filter(|(k, _)| !k.contains(x)).map(|(k, c)| (k.clone(), c.clone())).collect(),
            };
        }
        Self::from_terms(
            self.terms.iter().map(|(k, c)| (if k.contains(x) { k.without(x) } else { k.clone() }, c.clone())),
        )
    }

    /// The terms containing `x`, with `x` removed; equal to
    /// `self[x ↦ 1] - self[x ↦ 0]` without the cancellation.
    fn cofactor(&self, x: usize) -> Self {
        SquarefreePoly {
            terms: self.terms.iter().filter(|(k, _)| k.contains(x)).map(|(k, c)| (k.without(x), c.clone())).collect(),
        }
    }

    /// `self[x ↦ b]`, computed as `self[x ↦ 0] + (self[x ↦ 1] - self[x ↦ 0])·b`.
    pub fn substitute(&self, x: usize, b: &Self) -> Result<Self, AlgebraError> {
        if b.contains_var(x) {
            return Err(AlgebraError::VariableInReplacement(x));
        }
        if !self.contains_var(x) {
            return Ok(self.clone());
        }
        let base = self.restrict(x, false);
        Ok(base.add(&self.cofactor(x).mul(b)))
    }

    /// Value at a 0/1 assignment; every variable of `self` must be assigned.
    pub fn eval(&self, assignment: impl Fn(usize) -> Option<bool>) -> Result<C, AlgebraError> {
        let mut unassigned = None;
        let mut total = C::zero();
        for (k, c) in &self.terms {
            let mut on = true;
            for x in k.iter() {
                match assignment(x) {
                    Some(b) => on &= b,
                    None => {
                        unassigned = Some(unassigned.map_or(x, |u: usize| u.min(x)));
                    }
                }
            }
            if on {
                total += c;
            }
        }
        match unassigned {
            Some(x) => Err(AlgebraError::UnassignedVariable(x)),
            None => Ok(total),
        }
    }

    /// Values on all `2^n` assignments of `vars`; entry `mask` has `vars[i]`
    /// set to bit `i` of `mask`.
    pub fn tabulate(&self, vars: &[usize]) -> Result<Vec<C>, AlgebraError> {
        if vars.len() > MAX_TABLE_VARS {
            return Err(AlgebraError::TooManyVariables(vars.len()));
        }
        let mut table = vec![C::zero(); 1 << vars.len()];
        for (k, c) in &self.terms {
            let mut mask = 0usize;
            for x in k.iter() {
                let i = vars.iter().position(|&v| v == x).ok_or(AlgebraError::UnassignedVariable(x))?;
                mask |= 1 << i;
            }
            table[mask] += c;
        }
        // Zeta transform: sum over subsets.
        for i in 0..vars.len() {
            for mask in 0..table.len() {
                if mask >> i & 1 == 1 {
                    let lower = table[mask ^ (1 << i)].clone();
                    table[mask] += &lower;
                }
            }
        }
        Ok(table)
    }

    /// Renders with variable names from `name`, e.g. `0.25 + 0.75*b`.
    pub fn display_with<'a>(&'a self, name: impl Fn(usize) -> String + 'a) -> impl fmt::Display + 'a {
        struct D<'a, C, F>(&'a SquarefreePoly<C>, F);
        impl<C: Coefficient, F: Fn(usize) -> String> fmt::Display for D<'_, C, F> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let terms = self.0.sorted_terms();
                if terms.is_empty() {
                    return f.write_str("0");
                }
                for (i, (k, c)) in terms.into_iter().enumerate() {
                    let text = c.to_string();
                    let (negative, magnitude) = match text.strip_prefix('-') {
                        Some(m) => (true, m.to_owned()),
                        None => (false, text),
                    };
                    match (i, negative) {
                        (0, true) => f.write_str("-")?,
                        (0, false) => {}
                        (_, true) => f.write_str(" - ")?,
                        (_, false) => f.write_str(" + ")?,
                    }
                    let mono: Vec<String> = k.iter().map(&self.1).collect();
                    if mono.is_empty() {
                        f.write_str(&magnitude)?;
                    } else if c.clone() == C::one() || -c.clone() == C::one() {
                        f.write_str(&mono.join("*"))?;
                    } else {
                        write!(f, "{}*{}", magnitude, mono.join("*"))?;
                    }
                }
                Ok(())
            }
        }
        D(self, name)
    }
}

impl<C: Coefficient> fmt::Display for SquarefreePoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(|x| format!("x{x}")))
    }
}

impl<C: Coefficient> fmt::Debug for SquarefreePoly<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SquarefreePoly({self})")
    }
}

/// The unique polynomial whose values on the `2^n` assignments of `vars` are
/// `table` (indexed as in [`SquarefreePoly::tabulate`]).
///
/// The evaluation map is unit lower triangular in subset order; the in-place
/// Möbius transform below is forward substitution on that system.
pub fn interpolate<C: Coefficient>(vars: &[usize], table: &[C]) -> Result<SquarefreePoly<C>, AlgebraError> {
    if vars.len() > MAX_TABLE_VARS {
        return Err(AlgebraError::TooManyVariables(vars.len()));
    }
    let expected = 1usize << vars.len();
    if table.len() != expected {
        return Err(AlgebraError::IncompleteTable { expected, got: table.len() });
    }
    for (i, v) in vars.iter().enumerate() {
        if vars[..i].contains(v) {
            return Err(AlgebraError::DuplicateVariable(*v));
        }
    }
    let mut coeffs = table.to_vec();
    for i in 0..vars.len() {
        for mask in 0..expected {
            if mask >> i & 1 == 1 {
                let lower = coeffs[mask ^ (1 << i)].clone();
                coeffs[mask] -= &lower;
            }
        }
    }
    Ok(SquarefreePoly::from_terms(coeffs.into_iter().enumerate().map(|(mask, c)| {
        let k: VarSet = (0..vars.len()).filter(|i| mask >> i & 1 == 1).map(|i| vars[i]).collect();
        (k, c)
    })))
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl<C: Coefficient> $tr<&SquarefreePoly<C>> for &SquarefreePoly<C> {
            type Output = SquarefreePoly<C>;
            fn $m(self, rhs: &SquarefreePoly<C>) -> SquarefreePoly<C> {
                SquarefreePoly::$m(self, rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl<C: Coefficient> Neg for &SquarefreePoly<C> {
    type Output = SquarefreePoly<C>;
    fn neg(self) -> SquarefreePoly<C> {
        SquarefreePoly::neg(self)
    }
}
