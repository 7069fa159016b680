//! Absolutely cuspidal polynomials by inverting the GKM character, cuspidal
//! polynomials from absolute ones, and intersection Poincaré polynomials.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::gkm::{free_lie_character, EngineConfig, GkmEngine, WeightFunction};
use crate::kac::{hua_kac_capped, oracle_kac_table, Flavour, KacTable};
use crate::poly::{rat, QPoly};
use crate::quiver::{DimVector, Quiver};
use crate::roots::{canonical_decomposition_with, CartanDatum, RootClass, RootTables};
use crate::series::{sym_power_coeff, GradedSeries, Mode, Series};

/// `C^abs` and `C` for one quiver and flavour up to a bound.
#[derive(Clone, Debug)]
pub struct CuspidalTable {
    pub quiver: Quiver,
    pub flavour: Flavour,
    pub bound: u32,
    pub caps: Option<DimVector>,
    pub roots: RootTables,
    /// Nonzero `C^abs_d`.
    pub abs: BTreeMap<DimVector, QPoly>,
    /// Nonzero `C_d`.
    pub cusp: BTreeMap<DimVector, QPoly>,
}

impl CuspidalTable {
    pub fn abs(&self, d: &DimVector) -> QPoly {
        self.abs.get(d).cloned().unwrap_or_else(QPoly::zero)
    }

    pub fn cusp(&self, d: &DimVector) -> QPoly {
        self.cusp.get(d).cloned().unwrap_or_else(QPoly::zero)
    }
}

/// Inverts `target = ch n+` degree by degree, keeping the engine so that the
/// caller can reuse its ideal spans.
pub fn invert_with_engine(
    tables: &RootTables,
    target: &GradedSeries,
    bound: u32,
    config: EngineConfig,
) -> Result<(BTreeMap<DimVector, QPoly>, GkmEngine)> {
    if !target.constant_term().is_zero() {
        return Err(Error::Precondition("target must vanish at z^0".into()));
    }
    if target.bound() < bound || tables.bound() < bound {
        return Err(Error::InvalidArgument(format!(
            "inversion to degree {bound} needs input to that degree, have {}",
            target.bound().min(tables.bound())
        )));
    }
    let cartan = tables.cartan();
    for e in tables.phi_plus() {
        if e.class == RootClass::Real && e.dim.total() <= bound && !target.coeff(&e.dim).is_one() {
            return Err(Error::assertion(&e.dim, "target at a real simple root must be 1"));
        }
    }
    let caps = tables.caps().cloned();
    let mut engine = GkmEngine::new(cartan.clone(), bound, caps.clone(), config);
    let mut p = BTreeMap::new();
    for level in 1..=bound {
        engine.compute_next_level()?;
        for d in DimVector::all_up_to(cartan.rank(), level, caps.as_ref()) {
            if d.total() != level {
                continue;
            }
            let mut pd = target.coeff(&d);
            pd.sub_assign(&engine.bracket_dims(&d));
            if pd.is_zero() {
                continue;
            }
            if tables.entry(&d).is_none() {
                return Err(Error::assertion(&d, format!("generator count {pd} off Phi+")));
            }
            if !(pd.has_integer_coeffs() && pd.has_nonnegative_coeffs()) {
                return Err(Error::assertion(
                    &d,
                    format!("generator count {pd} is not a nonnegative integer polynomial"),
                ));
            }
            engine.add_generators(&d, &pd)?;
            p.insert(d, pd);
        }
    }
    Ok((p, engine))
}

/// The weight function whose GKM character is `target` up to `bound`.
pub fn invert_character(
    tables: &RootTables,
    target: &GradedSeries,
    bound: u32,
    config: EngineConfig,
) -> Result<WeightFunction> {
    let (p, _) = invert_with_engine(tables, target, bound, config)?;
    WeightFunction::new(tables, p)
}

/// Inversion through the free Lie algebra alone, valid when no relation
/// applies (every `a_mn < 0` and no real roots).
pub fn free_lie_inversion(target: &GradedSeries) -> Result<GradedSeries> {
    let mut p = target.empty_like();
    for d in target.domain().into_iter().skip(1) {
        let f = free_lie_character(&p)?.coeff(&d);
        let mut pd = target.coeff(&d);
        pd.sub_assign(&f);
        p.set(d, pd);
    }
    Ok(p)
}

/// Kac table of the requested flavour.
pub fn kac_input(
    q: &Quiver,
    bound: u32,
    caps: Option<&DimVector>,
    flavour: Flavour,
    fields: &[u32],
) -> Result<KacTable> {
    match flavour {
        Flavour::Plain => hua_kac_capped(q, bound, caps),
        _ if caps.is_some() => Err(Error::InvalidArgument(
            "capped tables exist for the plain flavour only".into(),
        )),
        _ => oracle_kac_table(q, bound, flavour, fields),
    }
}

fn check_degree_and_monic(q: &Quiver, d: &DimVector, c: &QPoly) -> Result<()> {
    let expected = 1 - q.euler_form(d, d)?;
    let deg = c.max_half().map(|h| h / 2);
    if deg != Some(expected) || !c.leading_coeff().is_some_and(|l| *l == rat(1)) {
        return Err(Error::assertion(
            d,
            format!("absolutely cuspidal polynomial {c} is not monic of degree {expected}"),
        ));
    }
    Ok(())
}

/// `C^abs` by inverting the Kac character, then `C` from it.
pub fn absolutely_cuspidal(
    q: &Quiver,
    bound: u32,
    flavour: Flavour,
    fields: &[u32],
    config: EngineConfig,
) -> Result<CuspidalTable> {
    absolutely_cuspidal_capped(q, bound, None, flavour, fields, config)
}

pub fn absolutely_cuspidal_capped(
    q: &Quiver,
    bound: u32,
    caps: Option<&DimVector>,
    flavour: Flavour,
    fields: &[u32],
    config: EngineConfig,
) -> Result<CuspidalTable> {
    let kac = kac_input(q, bound, caps, flavour, fields)?;
    let roots = RootTables::compute(&CartanDatum::from_quiver(q), bound, caps);
    let (abs, _) = invert_with_engine(&roots, &kac.to_series(), bound, config)?;
    finish_table(q, flavour, bound, caps, roots, abs)
}

pub(crate) fn finish_table(
    q: &Quiver,
    flavour: Flavour,
    bound: u32,
    caps: Option<&DimVector>,
    roots: RootTables,
    abs: BTreeMap<DimVector, QPoly>,
) -> Result<CuspidalTable> {
    if flavour == Flavour::Plain {
        for e in roots.phi_plus() {
            let c = abs.get(&e.dim).cloned().unwrap_or_else(QPoly::zero);
            check_degree_and_monic(q, &e.dim, &c)?;
        }
    }
    let cusp = cuspidal_from_abs(&roots, &abs)?;
    Ok(CuspidalTable {
        quiver: q.clone(),
        flavour,
        bound,
        caps: caps.cloned(),
        roots,
        abs,
        cusp,
    })
}

/// True for polynomials in `q` taking integer values at every integer; the
/// cuspidal polynomials need not have integer coefficients.
fn is_integer_valued(c: &QPoly) -> bool {
    if !c.has_integral_exponents() || c.min_half().unwrap_or(0) < 0 {
        return false;
    }
    let deg = c.max_half().unwrap_or(0) / 2;
    (0..=deg).all(|v| c.eval_at_prime_power(&rat(v)).is_ok_and(|x| x.is_integer()))
}

/// `C_d = C^abs_d` off isotropic lines; on the line through a primitive
/// isotropic `m`, `Exp_z(sum C_{lm} z^{lm}) = Exp_{q,z}(sum C^abs_{lm} z^{lm})`.
pub fn cuspidal_from_abs(roots: &RootTables, abs: &BTreeMap<DimVector, QPoly>) -> Result<BTreeMap<DimVector, QPoly>> {
    let mut out = BTreeMap::new();
    let mut lines: BTreeMap<DimVector, BTreeMap<u32, QPoly>> = BTreeMap::new();
    for (d, c) in abs {
        match roots.entry(d) {
            Some(e) if e.class == RootClass::Isotropic => {
                lines
                    .entry(e.primitive.clone())
                    .or_default()
                    .insert(e.multiplier, c.clone());
            }
            _ => {
                out.insert(d.clone(), c.clone());
            }
        }
    }
    for (m, line) in lines {
        let len = roots.bound() / m.total();
        let mut s: GradedSeries = Series::new(1, len);
        for (l, c) in line {
            s.set(DimVector::new(vec![l]), c);
        }
        let c_line = s.pleth_exp(Mode::QZ)?.pleth_log(Mode::ZOnly)?;
        for (l, c) in c_line.iter() {
            let d = m.scale(l.get(0));
            if !is_integer_valued(c) {
                return Err(Error::assertion(
                    &d,
                    format!("cuspidal polynomial {c} is not integer-valued"),
                ));
            }
            out.insert(d, c.clone());
        }
    }
    Ok(out)
}

/// Intersection Poincaré polynomial at `d in Sigma`, in the variable `v`
/// with full cohomological degrees.
pub fn ip_polynomial(table: &CuspidalTable, d: &DimVector) -> Result<QPoly> {
    if d.total() > table.bound {
        return Err(Error::InvalidArgument(format!(
            "{d} exceeds the table bound {}",
            table.bound
        )));
    }
    if !table.roots.in_sigma(d) {
        return Err(Error::InvalidArgument(format!("{d} is not in Sigma")));
    }
    Ok(table.abs(d).substitute_power(-2))
}

/// Intersection Poincaré polynomial for any nonzero `d`, as the product of
/// symmetric powers over the canonical decomposition.
pub fn ip_general(table: &CuspidalTable, d: &DimVector) -> Result<QPoly> {
    if d.total() > table.bound {
        return Err(Error::InvalidArgument(format!(
            "{d} exceeds the table bound {}",
            table.bound
        )));
    }
    let parts = canonical_decomposition_with(&table.roots, d, &|_| {})?;
    let mut out = QPoly::one();
    for (part, m) in parts {
        out = &out * &sym_power_coeff(&ip_polynomial(table, &part)?, m);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    fn plain(q: &Quiver, n: u32) -> CuspidalTable {
        absolutely_cuspidal(q, n, Flavour::Plain, &[], EngineConfig::default()).unwrap()
    }

    #[test]
    fn a2_only_simple_roots() {
        let t = plain(&Quiver::a2(), 4);
        let keys: Vec<_> = t.abs.keys().cloned().collect();
        assert_eq!(keys, vec![dv(&[0, 1]), dv(&[1, 0])]);
        assert!(t.abs.values().all(|c| c.is_one()));
    }

    #[test]
    fn jordan_and_kronecker_lines() {
        let q: QPoly = "q".parse().unwrap();
        let t = plain(&Quiver::jordan(), 4);
        for n in 1..=4 {
            assert_eq!(t.abs(&dv(&[n])), q);
        }
        assert_eq!(t.cusp(&dv(&[1])), q);
        // q Jordan blocks plus (q^2 - q)/2 irreducible quadratics
        assert_eq!(t.cusp(&dv(&[2])), "1/2*q + 1/2*q^2".parse().unwrap());
        let t = plain(&Quiver::kronecker(), 4);
        assert_eq!(t.abs(&dv(&[1, 1])), q);
        assert_eq!(t.abs(&dv(&[2, 2])), q);
        assert!(t.abs(&dv(&[2, 1])).is_zero());
    }

    #[test]
    fn two_loops() {
        let t = plain(&Quiver::loops(2), 3);
        assert_eq!(t.abs(&dv(&[1])), "q^2".parse().unwrap());
        let p = free_lie_inversion(&crate::kac::hua_kac(&Quiver::loops(2), 3).unwrap().to_series()).unwrap();
        for n in 1..=3 {
            assert_eq!(p.coeff(&dv(&[n])), t.abs(&dv(&[n])));
        }
    }

    #[test]
    fn ip_values() {
        let t = plain(&Quiver::jordan(), 2);
        let ip = ip_polynomial(&t, &dv(&[1])).unwrap();
        assert_eq!(ip.render_var("v"), "v^-2");
        assert!(ip_polynomial(&t, &dv(&[2])).is_err());
        let general = ip_general(&t, &dv(&[2])).unwrap();
        assert_eq!(general, sym_power_coeff(&ip, 2));
        let t = plain(&Quiver::loops(2), 1);
        assert_eq!(ip_polynomial(&t, &dv(&[1])).unwrap().render_var("v"), "v^-4");
        let t = plain(&Quiver::a2(), 3);
        assert!(ip_general(&t, &dv(&[2, 1])).unwrap().is_one());
    }

    #[test]
    fn nilpotent_jordan() {
        let t = absolutely_cuspidal(
            &Quiver::jordan(),
            3,
            Flavour::Nilpotent,
            &[2, 3, 4, 5],
            EngineConfig::default(),
        )
        .unwrap();
        for n in 1..=3 {
            assert!(t.abs(&dv(&[n])).is_one());
        }
    }
}
