//! Orbit counts of quiver representations over `F_q` by Burnside's lemma.
//!
//! `#orbits = (1/|G|) sum_g |Fix(g)|` with `G = prod_i GL_{d_i}(F_q)`. For the
//! plain flavour `Fix(g)` is a linear space of dimension
//! `sum_a dim ker(x -> g_t x - x g_s)`; the flavoured counts enumerate it.
//! `|Fix(g)|` depends only on the conjugacy class of `g`, so the sum runs
//! over classes, identified by invariant factors, weighted by class size.

use std::collections::HashMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::classes::invariant_factors;
use super::field::FiniteField;
use super::Flavour;
use crate::error::{Error, Result};
use crate::quiver::{DimVector, Quiver};

/// Largest total dimension accepted.
pub const MAX_TOTAL_DIM: u32 = 4;
/// Largest `|G|` accepted.
pub const MAX_GROUP_ORDER: u128 = 3_000_000;
/// Largest representation space enumerated by the flavoured counts.
pub const MAX_ENUMERATED: u128 = 1 << 22;

/// `|GL_n(F_q)|`.
pub fn gl_order(n: u32, q: u32) -> u128 {
    let qn = (q as u128).pow(n);
    (0..n).map(|i| qn - (q as u128).pow(i)).product()
}

/// All invertible `n x n` matrices, row-major.
fn gl_elements(n: usize, f: &FiniteField) -> Vec<Vec<u8>> {
    if n == 0 {
        return vec![vec![]];
    }
    let q = f.order() as u64;
    let total = q.pow((n * n) as u32);
    let mut out = vec![];
    for code in 0..total {
        let mut m = vec![0u8; n * n];
        let mut c = code;
        for x in m.iter_mut() {
            *x = (c % q) as u8;
            c /= q;
        }
        let rows: Vec<Vec<u8>> = m.chunks(n).map(|r| r.to_vec()).collect();
        if f.rank(&rows) == n {
            out.push(m);
        }
    }
    out
}

/// Matrix of `x -> g_t x - x g_s` on `d_t x d_s` matrices, one row per output entry.
fn fix_map(f: &FiniteField, gt: &[u8], gs: &[u8], dt: usize, ds: usize) -> Vec<Vec<u8>> {
    let n = dt * ds;
    let mut rows = vec![vec![0u8; n]; n];
    for r in 0..dt {
        for c in 0..ds {
            let row = &mut rows[r * ds + c];
            for k in 0..dt {
                let col = k * ds + c;
                row[col] = f.add(row[col], gt[r * dt + k]);
            }
            for l in 0..ds {
                let col = r * ds + l;
                row[col] = f.sub(row[col], gs[l * ds + c]);
            }
        }
    }
    rows
}

/// Nilpotency of the arrows in `active` by the chain `V_{k+1} = sum_a x_a V_k`.
fn chain_vanishes(f: &FiniteField, q: &Quiver, d: &DimVector, xs: &[Vec<u8>], active: &[usize]) -> bool {
    let n = q.rank();
    let mut spans: Vec<Vec<Vec<u8>>> = (0..n)
        .map(|i| {
            let di = d.get(i) as usize;
            (0..di)
                .map(|j| {
                    let mut v = vec![0u8; di];
                    v[j] = 1;
                    v
                })
                .collect()
        })
        .collect();
    for _ in 0..=d.total() {
        if spans.iter().all(|s| s.is_empty()) {
            return true;
        }
        let mut next: Vec<Vec<Vec<u8>>> = vec![vec![]; n];
        for &a in active {
            let (s, t) = q.arrows()[a];
            let (ds, dt) = (d.get(s) as usize, d.get(t) as usize);
            for v in &spans[s] {
                let mut w = vec![0u8; dt];
                for r in 0..dt {
                    let mut acc = 0;
                    for c in 0..ds {
                        acc = f.add(acc, f.mul(xs[a][r * ds + c], v[c]));
                    }
                    w[r] = acc;
                }
                if w.iter().any(|&x| x != 0) {
                    next[t].push(w);
                }
            }
        }
        for s in next.iter_mut() {
            if !s.is_empty() {
                f.rref(s);
            }
        }
        spans = next;
    }
    spans.iter().all(|s| s.is_empty())
}

/// Number of isomorphism classes of (flavour-restricted) `d`-dimensional
/// representations over `F_q`.
pub fn brute_force_counts(q: &Quiver, d: &DimVector, fq: u32, flavour: Flavour) -> Result<u128> {
    if d.rank() != q.rank() {
        return Err(Error::DimensionMismatch {
            expected: q.rank(),
            found: d.rank(),
        });
    }
    if d.total() > MAX_TOTAL_DIM {
        return Err(Error::SizeLimit(format!(
            "brute force needs |d| <= {MAX_TOTAL_DIM}, got {d}"
        )));
    }
    let f = FiniteField::new(fq)?;
    let order: u128 = d.entries().iter().map(|&n| gl_order(n, fq)).product();
    if order > MAX_GROUP_ORDER {
        return Err(Error::SizeLimit(format!(
            "|GL_d(F_{fq})| = {order} at {d} exceeds {MAX_GROUP_ORDER}"
        )));
    }
    if flavour != Flavour::Plain {
        let dim: u32 = q.arrows().iter().map(|&(s, t)| d.get(s) * d.get(t)).sum();
        let points = (fq as u128).checked_pow(dim).unwrap_or(u128::MAX);
        if points > MAX_ENUMERATED {
            return Err(Error::SizeLimit(format!(
                "{points} representations of dimension {d} over F_{fq} exceed {MAX_ENUMERATED}"
            )));
        }
    }
    let groups: Vec<Vec<Vec<u8>>> = d.entries().iter().map(|&n| gl_elements(n as usize, &f)).collect();
    let sizes: Vec<usize> = groups.iter().map(|g| g.len()).collect();
    debug_assert_eq!(sizes.iter().map(|&s| s as u128).product::<u128>(), order);

    let active: Vec<usize> = (0..q.arrows().len())
        .filter(|&a| match flavour {
            Flavour::Plain => false,
            Flavour::Nilpotent => true,
            Flavour::OneNilpotent => q.arrows()[a].0 == q.arrows()[a].1,
        })
        .collect();

    let element = |index: u128| -> Vec<&Vec<u8>> {
        let mut rest = index;
        groups
            .iter()
            .zip(&sizes)
            .map(|(grp, &s)| {
                let e = &grp[(rest % s as u128) as usize];
                rest /= s as u128;
                e
            })
            .collect()
    };
    let fixed = |index: u128| -> u128 {
        let g = element(index);
        let kernels: Vec<Vec<Vec<u8>>> = q
            .arrows()
            .iter()
            .map(|&(s, t)| {
                let (ds, dt) = (d.get(s) as usize, d.get(t) as usize);
                f.nullspace(&fix_map(&f, g[t], g[s], dt, ds), dt * ds)
            })
            .collect();
        let dim: usize = kernels.iter().map(|k| k.len()).sum();
        if flavour == Flavour::Plain {
            return (fq as u128).pow(dim as u32);
        }
        count_restricted(&f, q, d, &kernels, &active)
    };
    // class key -> (class size, smallest member index)
    type Classes = HashMap<Vec<Vec<Vec<u8>>>, (u128, u128)>;
    let key = |index: u128| -> Vec<Vec<Vec<u8>>> {
        element(index)
            .into_iter()
            .zip(d.entries())
            .map(|(g, &n)| invariant_factors(&f, g, n as usize))
            .collect()
    };
    let add = |mut m: Classes, index: u128| {
        let e = m.entry(key(index)).or_insert((0, index));
        e.0 += 1;
        e.1 = e.1.min(index);
        m
    };

    #[cfg(feature = "parallel")]
    let classes: Classes = (0..order)
        .into_par_iter()
        .fold(HashMap::new, add)
        .reduce(HashMap::new, |mut a, b| {
            for (k, (n, rep)) in b {
                let e = a.entry(k).or_insert((0, rep));
                e.0 += n;
                e.1 = e.1.min(rep);
            }
            a
        });
    #[cfg(not(feature = "parallel"))]
    let classes: Classes = (0..order).fold(HashMap::new(), add);

    let reps: Vec<(u128, u128)> = classes.into_values().collect();
    #[cfg(feature = "parallel")]
    let total: u128 = reps.par_iter().map(|&(n, rep)| n * fixed(rep)).sum();
    #[cfg(not(feature = "parallel"))]
    let total: u128 = reps.iter().map(|&(n, rep)| n * fixed(rep)).sum();

    if !total.is_multiple_of(order) {
        return Err(Error::Internal(format!(
            "Burnside sum {total} not divisible by |G| = {order} at {d}"
        )));
    }
    Ok(total / order)
}

/// Number of points of `prod_a ker_a` whose `active` arrows are nilpotent.
fn count_restricted(f: &FiniteField, q: &Quiver, d: &DimVector, kernels: &[Vec<Vec<u8>>], active: &[usize]) -> u128 {
    let fq = f.order() as u128;
    let dim: usize = kernels.iter().map(|k| k.len()).sum();
    let mut count = 0u128;
    let mut coeffs = vec![0u8; dim];
    let mut xs: Vec<Vec<u8>> = q
        .arrows()
        .iter()
        .map(|&(s, t)| vec![0u8; (d.get(s) * d.get(t)) as usize])
        .collect();
    for _ in 0..fq.pow(dim as u32) {
        let mut offset = 0;
        for (a, k) in kernels.iter().enumerate() {
            xs[a].iter_mut().for_each(|x| *x = 0);
            for (j, b) in k.iter().enumerate() {
                let c = coeffs[offset + j];
                if c == 0 {
                    continue;
                }
                for (x, &bv) in xs[a].iter_mut().zip(b) {
                    *x = f.add(*x, f.mul(c, bv));
                }
            }
            offset += k.len();
        }
        if chain_vanishes(f, q, d, &xs, active) {
            count += 1;
        }
        // next coefficient vector, little-endian
        for c in coeffs.iter_mut() {
            *c += 1;
            if u32::from(*c) < f.order() {
                break;
            }
            *c = 0;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    #[test]
    fn group_orders() {
        assert_eq!(gl_order(2, 2), 6);
        assert_eq!(gl_order(3, 2), 168);
        assert_eq!(gl_order(0, 5), 1);
        let f = FiniteField::new(3).unwrap();
        assert_eq!(gl_elements(2, &f).len() as u128, gl_order(2, 3));
    }

    #[test]
    fn count_examples() {
        // similarity classes of 2x2 matrices over F_2
        assert_eq!(
            brute_force_counts(&Quiver::jordan(), &dv(&[2]), 2, Flavour::Plain).unwrap(),
            6
        );
        assert_eq!(
            brute_force_counts(&Quiver::a2(), &dv(&[1, 0]), 5, Flavour::Plain).unwrap(),
            1
        );
        assert_eq!(
            brute_force_counts(&Quiver::jordan(), &dv(&[1]), 3, Flavour::Nilpotent).unwrap(),
            1
        );
        // q^2 + q similarity classes of 2x2 matrices; q + 1 on A2 at (1,1) is 2 orbits
        assert_eq!(
            brute_force_counts(&Quiver::jordan(), &dv(&[2]), 3, Flavour::Plain).unwrap(),
            12
        );
        assert_eq!(
            brute_force_counts(&Quiver::a2(), &dv(&[1, 1]), 4, Flavour::Plain).unwrap(),
            2
        );
        // nilpotent 2x2 matrices up to conjugacy: the two partitions of 2
        assert_eq!(
            brute_force_counts(&Quiver::jordan(), &dv(&[2]), 4, Flavour::Nilpotent).unwrap(),
            2
        );
    }

    #[test]
    fn flavour_ordering() {
        let q = Quiver::from_arrows(2, &[(0, 0), (0, 1)]);
        for d in [dv(&[1, 1]), dv(&[2, 1])] {
            let plain = brute_force_counts(&q, &d, 2, Flavour::Plain).unwrap();
            let one = brute_force_counts(&q, &d, 2, Flavour::OneNilpotent).unwrap();
            let nil = brute_force_counts(&q, &d, 2, Flavour::Nilpotent).unwrap();
            assert!(nil <= one && one <= plain, "{nil} {one} {plain}");
        }
    }

    #[test]
    fn limits() {
        assert!(matches!(
            brute_force_counts(&Quiver::jordan(), &dv(&[5]), 2, Flavour::Plain),
            Err(Error::SizeLimit(_))
        ));
        assert!(matches!(
            brute_force_counts(&Quiver::jordan(), &dv(&[3]), 9, Flavour::Plain),
            Err(Error::SizeLimit(_))
        ));
    }
}
