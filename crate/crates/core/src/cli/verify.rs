//! The invariant suite behind `qgk verify`.

use std::sync::Arc;

use super::Common;
use crate::cuspidal::{absolutely_cuspidal, ip_general, ip_polynomial};
use crate::error::{Error, Result};
use crate::gkm::{gkm_character, gkm_dims, EngineConfig, WeightFunction};
use crate::kac::{hua_kac, oracle_kac, Flavour};
use crate::quiver::{DimVector, Quiver};
use crate::roots::{canonical_decomposition_with, refines, sigma_decompositions, to_dim, weyl_reflect, RootTables};
use crate::series::Mode;

/// Largest total dimension checked against the finite-field oracle.
const ORACLE_LIMIT: u32 = 2;

type Outcome = std::result::Result<(), String>;

fn check(ok: bool, detail: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(detail())
    }
}

fn internal(e: Error) -> String {
    e.to_string()
}

/// Runs every property; invalid input aborts, a violated property is a FAIL row.
pub(super) fn run_suite(q: &Quiver, c: &Common) -> Result<Vec<(&'static str, Outcome)>> {
    let n = c.bound;
    let mut out: Vec<(&'static str, Outcome)> = vec![];
    let kac = match hua_kac(q, n) {
        Ok(k) => k,
        Err(e) if e.is_internal() => {
            out.push(("kac-integrality", Err(internal(e))));
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    out.push(("kac-integrality", Ok(())));

    let oracle = (|| {
        for (d, a) in kac.iter().filter(|(d, _)| d.total() <= ORACLE_LIMIT.min(n)) {
            match oracle_kac(q, d, Flavour::Plain, &c.fields) {
                Ok(o) => check(&o == a, || format!("{d}: Hua {a} vs oracle {o}"))?,
                Err(Error::SizeLimit(_) | Error::InsufficientFields { .. }) => {}
                Err(e) => return Err(internal(e)),
            }
        }
        Ok(())
    })();
    out.push(("kac-oracle", oracle));

    let weyl = (|| {
        for (d, a) in kac.iter() {
            let mut frontier = vec![d.clone()];
            for _ in 0..3 {
                let mut next = vec![];
                for e in &frontier {
                    for i in (0..q.rank()).filter(|&i| q.is_loop_free(i)) {
                        let Some(w) = weyl_reflect(q, i, e).ok().and_then(|v| to_dim(&v)) else {
                            continue;
                        };
                        if w.is_zero() || w.total() > n {
                            continue;
                        }
                        let b = kac.get(&w).cloned().unwrap_or_default();
                        check(&b == a, || format!("A at {d} is {a}, at {w} is {b}"))?;
                        next.push(w);
                    }
                }
                frontier = next;
            }
        }
        Ok(())
    })();
    out.push(("weyl-invariance", weyl));

    let series = kac.to_series();
    let exp_log = series
        .pleth_exp(Mode::QZ)
        .and_then(|e| e.pleth_log(Mode::QZ))
        .map_err(internal)
        .and_then(|l| check(l.same_terms(&series), || "Log(Exp(A)) differs from A".into()));
    out.push(("exp-log-round-trip", exp_log));

    let table = match absolutely_cuspidal(q, n, Flavour::Plain, &c.fields, EngineConfig::default()) {
        Ok(t) => {
            out.push(("cuspidal-positivity-degree", Ok(())));
            t
        }
        Err(e) if e.is_internal() => {
            out.push(("cuspidal-positivity-degree", Err(internal(e))));
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    let tables = &table.roots;

    let support = (|| {
        for d in DimVector::all_up_to(q.rank(), n, None).into_iter().skip(1) {
            let nonzero = !table.abs(&d).is_zero();
            check(nonzero == tables.entry(&d).is_some(), || {
                format!("C_abs at {d} is {}", table.abs(&d))
            })?;
        }
        Ok(())
    })();
    out.push(("cuspidal-support", support));

    let round_trip = (|| {
        let w = WeightFunction::new(tables, table.abs.clone()).map_err(internal)?;
        let dims = gkm_dims(tables, &w, n, EngineConfig::default()).map_err(internal)?;
        check(gkm_character(&dims).same_terms(&series), || {
            "character of the inverted weights differs".into()
        })?;
        let reversed = EngineConfig {
            letter_ids: Some(Arc::new(|i| u32::MAX - i as u32)),
            ..EngineConfig::default()
        };
        let other = gkm_dims(tables, &w, n, reversed).map_err(internal)?;
        check(other.entries == dims.entries, || {
            "dimensions depend on the alphabet order".into()
        })
    })();
    out.push(("inversion-round-trip", round_trip));

    let canonical = (|| {
        for d in DimVector::all_up_to(q.rank(), n, None).into_iter().skip(1) {
            let canon = canonical_decomposition_with(tables, &d, &|_| {}).map_err(internal)?;
            let coarse: Vec<DimVector> = canon
                .iter()
                .flat_map(|(p, m)| std::iter::repeat_n(p.clone(), *m as usize))
                .collect();
            for fine in sigma_decompositions(tables, &d) {
                check(refines(&fine, &coarse), || {
                    format!("{fine:?} does not refine {coarse:?} at {d}")
                })?;
            }
        }
        Ok(())
    })();
    out.push(("canonical-refinement", canonical));

    let ip = (|| {
        for d in tables.sigma() {
            let a = ip_polynomial(&table, d).map_err(internal)?;
            let b = ip_general(&table, d).map_err(internal)?;
            check(a == b, || format!("{d}: {a} vs {b}"))?;
        }
        Ok(())
    })();
    out.push(("ip-general-on-sigma", ip));

    let roots_agree = {
        let again = RootTables::for_quiver(q, n);
        check(again.phi_plus().eq(tables.phi_plus()), || {
            "root tables are not reproducible".into()
        })
    };
    out.push(("roots-deterministic", roots_agree));
    Ok(out)
}
