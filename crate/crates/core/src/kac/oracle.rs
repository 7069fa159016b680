//! Kac polynomials recovered from finite-field counts.
//!
//! `sum_d M_d z^d = Exp_{q,z}(sum_d A_d z^d)`. Processing `e` in graded order,
//! `[z^e]` of the right side is `A_e` plus a polynomial in the earlier `A`s,
//! so `A_e(v)` follows from `M_e(v)` at each sampled prime power `v`, and `A_e`
//! from interpolation under the degree bound `1 - chi(e,e)`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{brute_force_counts, Flavour, KacTable};
use crate::error::{Error, Result};
use crate::poly::{rat, QPoly};
use crate::quiver::{DimVector, Quiver};
use crate::series::{GradedSeries, Mode};

/// Prime powers sampled by default, in sampling order.
pub const DEFAULT_FIELDS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

/// Coefficients (ascending) of the polynomial through the given points.
pub fn interpolate(points: &[(BigRational, BigRational)]) -> Vec<BigRational> {
    let n = points.len();
    // Newton divided differences
    let mut dd: Vec<BigRational> = points.iter().map(|(_, y)| y.clone()).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            dd[i] = (&dd[i] - &dd[i - 1]) / (&points[i].0 - &points[i - level].0);
        }
    }
    let mut coeffs = vec![BigRational::zero(); n];
    for i in (0..n).rev() {
        // coeffs = coeffs * (x - x_i) + dd[i]
        let mut next = vec![BigRational::zero(); n];
        for k in 0..n {
            if k + 1 < n {
                next[k + 1] += &coeffs[k];
            }
            next[k] -= &coeffs[k] * &points[i].0;
        }
        next[0] += &dd[i];
        coeffs = next;
    }
    coeffs
}

fn process(q: &Quiver, dims: &[DimVector], flavour: Flavour, fields: &[u32]) -> Result<BTreeMap<DimVector, QPoly>> {
    let mut known: BTreeMap<DimVector, QPoly> = BTreeMap::new();
    for e in dims.iter().filter(|e| !e.is_zero()) {
        let degree = 1 - q.euler_form(e, e)?;
        if degree < 0 {
            known.insert(e.clone(), QPoly::zero());
            continue;
        }
        let degree = degree as usize;
        let mut partial = GradedSeries::new(q.rank(), e.total());
        for (d, a) in &known {
            if d.fits_in(e) {
                partial.set(d.clone(), a.clone());
            }
        }
        let offset = partial.pleth_exp(Mode::QZ)?.coeff(e);

        let mut points = vec![];
        for &v in fields {
            if points.len() == degree + 2 {
                break;
            }
            let m = match brute_force_counts(q, e, v, flavour) {
                Ok(m) => m,
                Err(Error::SizeLimit(_)) => continue,
                Err(err) => return Err(err),
            };
            let x = rat(v as i64);
            let y = BigRational::from_integer((m as i128).into()) - offset.eval_at_prime_power(&x)?;
            points.push((x, y));
        }
        if points.len() < degree + 1 {
            return Err(Error::InsufficientFields {
                dim: e.clone(),
                degree,
                available: points.len(),
            });
        }
        let check = (points.len() == degree + 2).then(|| points.pop().expect("nonempty"));
        let coeffs = interpolate(&points);
        let mut a = QPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_integer() {
                return Err(Error::assertion(
                    e,
                    format!("interpolated coefficient {c} is not an integer"),
                ));
            }
            a.add_term(2 * k as i64, c);
        }
        if let Some((x, y)) = check {
            if a.eval_at_prime_power(&x)? != y {
                return Err(Error::assertion(
                    e,
                    format!("interpolant {a} misses the check point q = {x}"),
                ));
            }
        }
        known.insert(e.clone(), a);
    }
    Ok(known)
}

/// `A_d` of the given flavour from finite-field counts over `fields`.
pub fn oracle_kac(q: &Quiver, d: &DimVector, flavour: Flavour, fields: &[u32]) -> Result<QPoly> {
    if d.rank() != q.rank() {
        return Err(Error::DimensionMismatch {
            expected: q.rank(),
            found: d.rank(),
        });
    }
    let mut table = process(q, &d.sub_vectors(), flavour, fields)?;
    Ok(table.remove(d).unwrap_or_default())
}

/// Oracle Kac polynomials for every `|d| <= bound`.
pub fn oracle_kac_table(q: &Quiver, bound: u32, flavour: Flavour, fields: &[u32]) -> Result<KacTable> {
    let dims = DimVector::all_up_to(q.rank(), bound, None);
    let entries = process(q, &dims, flavour, fields)?;
    let mut table = KacTable::new(q.clone(), bound, None, flavour);
    for (d, a) in entries {
        table.insert(d, a);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    #[test]
    fn interpolation() {
        let pts: Vec<_> = [1, 2, 3].iter().map(|&x| (rat(x), rat(x * x - 2 * x + 5))).collect();
        assert_eq!(interpolate(&pts), vec![rat(5), rat(-2), rat(1)]);
    }

    #[test]
    fn oracle_examples() {
        let f = &DEFAULT_FIELDS;
        assert_eq!(
            oracle_kac(&Quiver::jordan(), &dv(&[2]), Flavour::Plain, f).unwrap(),
            QPoly::q_pow(1)
        );
        assert_eq!(
            oracle_kac(&Quiver::a2(), &dv(&[1, 1]), Flavour::Plain, f).unwrap(),
            QPoly::one()
        );
        assert_eq!(
            oracle_kac(&Quiver::loops(2), &dv(&[1]), Flavour::Plain, f).unwrap(),
            QPoly::q_pow(2)
        );
        assert!(oracle_kac(&Quiver::a2(), &dv(&[2, 1]), Flavour::Plain, f)
            .unwrap()
            .is_zero());
    }

    #[test]
    fn insufficient_fields() {
        let err = oracle_kac(&Quiver::loops(2), &dv(&[1]), Flavour::Plain, &[2, 3]).unwrap_err();
        assert!(matches!(err, Error::InsufficientFields { degree: 2, .. }));
    }
}
