//! Sparse vectors over `Q` indexed by words, and a semi-echelon basis.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};

/// A word in the generator letters.
pub type Word = Vec<u32>;

/// Sparse element of the tensor algebra.
pub type SparseVec = BTreeMap<Word, BigRational>;

pub fn add_scaled(v: &mut SparseVec, w: &SparseVec, c: &BigRational) {
    for (k, x) in w {
        let entry = v.entry(k.clone()).or_insert_with(BigRational::zero);
        *entry += x * c;
        if entry.is_zero() {
            v.remove(k);
        }
    }
}

/// `[g, v] = g v - v g` for a single letter `g`.
pub fn bracket_letter(g: u32, v: &SparseVec) -> SparseVec {
    let mut out = SparseVec::new();
    for (w, c) in v {
        let mut left = Vec::with_capacity(w.len() + 1);
        left.push(g);
        left.extend_from_slice(w);
        let mut right = w.clone();
        right.push(g);
        for (word, coef) in [(left, c.clone()), (right, -c.clone())] {
            let entry = out.entry(word).or_insert_with(BigRational::zero);
            *entry += coef;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

/// `[a, b] = a b - b a` for two single letters.
pub fn bracket_letters(a: u32, b: u32) -> SparseVec {
    let mut v = SparseVec::new();
    v.insert(vec![b], BigRational::one());
    bracket_letter(a, &v)
}

/// Rows with distinct pivots, the pivot of a row being its largest word
/// (coefficient normalised to 1).
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: Vec<SparseVec>,
    pivots: HashMap<Word, usize>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    /// Reduces `v` against the rows until its largest word is not a pivot.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        loop {
            let Some((w, c)) = v.iter().next_back() else {
                return v;
            };
            let Some(&r) = self.pivots.get(w) else {
                return v;
            };
            let c = -c.clone();
            add_scaled(&mut v, &self.rows[r], &c);
        }
    }

    /// Adds `v` to the span; returns true if it was independent.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let mut v = self.reduce(v);
        let Some((w, c)) = v.iter().next_back() else {
            return false;
        };
        let (w, inv) = (w.clone(), c.recip());
        for x in v.values_mut() {
            *x *= &inv;
        }
        self.pivots.insert(w, self.rows.len());
        self.rows.push(v);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn jacobi_identity_holds_in_coordinates() {
        // [a,[b,c]] + [b,[c,a]] + [c,[a,b]] = 0
        let mut total = SparseVec::new();
        for (x, y, z) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            add_scaled(&mut total, &bracket_letter(x, &bracket_letters(y, z)), &rat(1));
        }
        assert!(total.is_empty());
        assert!(bracket_letters(3, 3).is_empty());
    }

    #[test]
    fn echelon_rank() {
        let mut e = Echelon::new();
        let ab = bracket_letters(0, 1);
        assert!(e.insert(ab.clone()));
        assert!(!e.insert(bracket_letters(1, 0)));
        let mut twice = SparseVec::new();
        add_scaled(&mut twice, &ab, &rat(2));
        assert!(!e.insert(twice));
        assert!(e.insert(bracket_letters(0, 2)));
        assert_eq!(e.rank(), 2);
        assert!(e.reduce(ab).is_empty());
    }
}
