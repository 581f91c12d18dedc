use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

/// A set of variable indices: a bitset stored as sorted non-zero 64-bit blocks.
///
/// Only blocks that hold at least one member are kept, so a monomial over a
/// handful of variables with large indices stays small.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct VarSet {
    blocks: SmallVec<[(u32, u64); 2]>,
}

#[inline]
fn split(v: usize) -> (u32, u64) {
    ((v / 64) as u32, 1u64 << (v % 64))
}

impl VarSet {
    pub fn new() -> Self {
        VarSet { blocks: SmallVec::new() }
    }

    pub fn singleton(v: usize) -> Self {
        let mut s = VarSet::new();
        s.blocks.push(split(v));
        s
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn len(&self) -> usize {
        self.blocks.iter().map(|(_, w)| w.count_ones() as usize).sum()
    }

    pub fn contains(&self, v: usize) -> bool {
        let (b, bit) = split(v);
        match self.blocks.binary_search_by_key(&b, |&(i, _)| i) {
            Ok(i) => self.blocks[i].1 & bit != 0,
            Err(_) => false,
        }
    }

    pub fn insert(&mut self, v: usize) {
        let (b, bit) = split(v);
        match self.blocks.binary_search_by_key(&b, |&(i, _)| i) {
            Ok(i) => self.blocks[i].1 |= bit,
            Err(i) => self.blocks.insert(i, (b, bit)),
        }
    }

    /// The set with `v` removed.
    pub fn without(&self, v: usize) -> Self {
        let (b, bit) = split(v);
        let mut out = self.clone();
        if let Ok(i) = out.blocks.binary_search_by_key(&b, |&(i, _)| i) {
            out.blocks[i].1 &= !bit;
            if out.blocks[i].1 == 0 {
                out.blocks.remove(i);
            }
        }
        out
    }

    pub fn union(&self, other: &VarSet) -> VarSet {
        if other.is_empty() {
            return self.clone();
        }
        if self.is_empty() {
            return other.clone();
        }
        let (a, b) = (&self.blocks, &other.blocks);
        let mut out = SmallVec::with_capacity(a.len().max(b.len()));
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 | b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        VarSet { blocks: out }
    }

    pub fn is_subset(&self, other: &VarSet) -> bool {
        self.blocks.iter().all(|&(b, w)| match other.blocks.binary_search_by_key(&b, |&(i, _)| i) {
            Ok(i) => w & !other.blocks[i].1 == 0,
            Err(_) => false,
        })
    }

    /// Members in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().flat_map(|&(b, w)| {
            let base = b as usize * 64;
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(base + t)
            })
        })
    }
}

impl FromIterator<usize> for VarSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VarSet::new();
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl Ord for VarSet {
    /// Numeric order of the bitset read as an unsigned integer.
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b) = (&self.blocks, &other.blocks);
        let (mut i, mut j) = (a.len(), b.len());
        while i > 0 && j > 0 {
            let (x, y) = (a[i - 1], b[j - 1]);
            match x.0.cmp(&y.0).then(x.1.cmp(&y.1)) {
                Ordering::Equal => {
                    i -= 1;
                    j -= 1;
                }
                ord => return ord,
            }
        }
        i.cmp(&j)
    }
}

impl PartialOrd for VarSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VarSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
