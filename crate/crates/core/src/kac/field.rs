//! Small finite fields `F_q`, `q <= 16`, by lookup tables.

use crate::error::{Error, Result};

/// Largest field size the tables support.
pub const MAX_Q: u32 = 16;

/// `F_q` with elements `0..q`; an element's base-`p` digits are its
/// coefficients over the prime field in the polynomial basis.
#[derive(Clone, Debug)]
pub struct FiniteField {
    q: u32,
    p: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
}

/// `(p, k)` with `q = p^k`, or `None` when `q` is not a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|p| q.is_multiple_of(*p))?;
    let mut rest = q;
    let mut k = 0;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// Remainder of `a` modulo the monic `m`, coefficients ascending, over `F_p`.
fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    let dm = m.len() - 1;
    while r.len() > dm {
        let lead = *r.last().expect("nonempty");
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p * p - (lead * c) % p) % p;
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r
}

/// Monic polynomials of degree `deg` over `F_p`, coefficients ascending.
fn monic(deg: u32, p: u32) -> impl Iterator<Item = Vec<u32>> {
    (0..p.pow(deg)).map(move |mut n| {
        let mut c = Vec::with_capacity(deg as usize + 1);
        for _ in 0..deg {
            c.push(n % p);
            n /= p;
        }
        c.push(1);
        c
    })
}

fn irreducible(deg: u32, p: u32) -> Vec<u32> {
    monic(deg, p)
        .find(|f| (1..=deg / 2).all(|e| monic(e, p).all(|g| !poly_rem(f, &g, p).is_empty())))
        .expect("irreducible polynomials exist in every degree")
}

impl FiniteField {
    pub fn new(q: u32) -> Result<Self> {
        let (p, k) = prime_power(q)
            .filter(|_| q <= MAX_Q)
            .ok_or_else(|| Error::InvalidArgument(format!("{q} is not a prime power <= {MAX_Q}")))?;
        let modulus = irreducible(k, p);
        let digits = |mut x: u32| {
            let mut c = vec![];
            for _ in 0..k {
                c.push(x % p);
                x /= p;
            }
            c
        };
        let undigits = |c: &[u32]| c.iter().rev().fold(0, |acc, &d| acc * p + d);
        let n = q as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[(a * q + b) as usize] = undigits(&s) as u8;
                let mut prod = vec![0u32; 2 * k as usize];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                let mut r = poly_rem(&prod, &modulus, p);
                r.resize(k as usize, 0);
                mul[(a * q + b) as usize] = undigits(&r) as u8;
            }
        }
        let mut neg = vec![0u8; n];
        let mut inv = vec![0u8; n];
        for a in 0..q {
            neg[a as usize] = (0..q)
                .find(|&b| add[(a * q + b) as usize] == 0)
                .expect("additive inverse") as u8;
            if a != 0 {
                inv[a as usize] = (1..q).find(|&b| mul[(a * q + b) as usize] == 1).expect("field") as u8;
            }
        }
        Ok(FiniteField {
            q,
            p,
            add,
            mul,
            neg,
            inv,
        })
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u8, b: u8) -> u8 {
        self.add[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: u8, b: u8) -> u8 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u8, b: u8) -> u8 {
        self.mul[a as usize * self.q as usize + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u8) -> u8 {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    /// Reduces `rows` to reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&self, rows: &mut Vec<Vec<u8>>) -> Vec<usize> {
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut pivots = vec![];
        let mut r = 0;
        for c in 0..ncols {
            let Some(pr) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
                continue;
            };
            rows.swap(r, pr);
            let inv = self.inv(rows[r][c]);
            for x in rows[r].iter_mut() {
                *x = self.mul(*x, inv);
            }
            for i in 0..rows.len() {
                if i != r && rows[i][c] != 0 {
                    let f = rows[i][c];
                    for j in 0..ncols {
                        let v = self.mul(f, rows[r][j]);
                        rows[i][j] = self.sub(rows[i][j], v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        pivots
    }

    pub fn rank(&self, rows: &[Vec<u8>]) -> usize {
        let mut m = rows.to_vec();
        self.rref(&mut m).len()
    }

    /// Basis of `{x : M x = 0}` for the matrix with the given rows and `ncols` columns.
    pub fn nullspace(&self, rows: &[Vec<u8>], ncols: usize) -> Vec<Vec<u8>> {
        let mut m = rows.to_vec();
        let pivots = self.rref(&mut m);
        let mut basis = vec![];
        for free in (0..ncols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u8; ncols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = self.neg[m[r][free] as usize];
            }
            basis.push(v);
        }
        basis
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms() {
        for q in [2, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = FiniteField::new(q).unwrap();
            for a in 0..q as u8 {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a)), 1);
                }
                for b in 0..q as u8 {
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    for c in 0..q as u8 {
                        assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    }
                }
            }
            // the multiplicative group has no zero divisors
            for a in 1..q as u8 {
                for b in 1..q as u8 {
                    assert_ne!(f.mul(a, b), 0);
                }
            }
        }
        assert!(FiniteField::new(6).is_err());
        assert!(FiniteField::new(25).is_err());
    }

    #[test]
    fn nullspace_dimension() {
        let f = FiniteField::new(3).unwrap();
        let rows = vec![vec![1, 2, 0], vec![2, 1, 0]];
        let ns = f.nullspace(&rows, 3);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                let dot = r.iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)));
                assert_eq!(dot, 0);
            }
        }
    }
}
