//! Acceptance criteria 1-9. Runs without the libtest harness so that the
//! PASS/FAIL line of every criterion is always printed; exits nonzero if any
//! criterion fails.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use qgk::cuspidal::{absolutely_cuspidal, free_lie_inversion, ip_general, ip_polynomial};
use qgk::gkm::{gkm_dims, EngineConfig, WeightFunction};
use qgk::kac::{hua_kac, oracle_kac, Flavour};
use qgk::nakajima::lw_decompose;
use qgk::poly::{rat, QPoly};
use qgk::quiver::{DimVector, Quiver};
use qgk::roots::{canonical_decomposition_with, refines, sigma_decompositions, to_dim, weyl_reflect, RootTables};
use qgk::series::{GradedSeries, Mode, Series};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn dv(v: &[u32]) -> DimVector {
    DimVector::new(v.to_vec())
}

fn p(s: &str) -> QPoly {
    s.parse().expect("valid polynomial")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn config() -> EngineConfig {
    EngineConfig::default()
}

fn c1() -> Outcome {
    let q = Quiver::jordan();
    let kac = hua_kac(&q, 6).map_err(err)?;
    for n in 1..=6 {
        let a = kac.get(&dv(&[n])).cloned().unwrap_or_default();
        ensure(a == p("q"), || format!("A_{n} = {a}"))?;
    }
    for n in 1..=3 {
        let o = oracle_kac(&q, &dv(&[n]), Flavour::Plain, &[2, 3, 4, 5]).map_err(err)?;
        ensure(o == p("q"), || format!("oracle A_{n} = {o}"))?;
    }
    Ok("A_n = q for n <= 6, oracle agrees for n <= 3".into())
}

fn c2() -> Outcome {
    let q = Quiver::kronecker();
    let kac = hua_kac(&q, 6).map_err(err)?;
    let d = dv(&[1, 1]);
    let o = oracle_kac(&q, &d, Flavour::Plain, &qgk::kac::DEFAULT_FIELDS).map_err(err)?;
    ensure(Some(&o) == kac.get(&d), || {
        format!("Hua {:?} vs oracle {o}", kac.get(&d))
    })?;
    let t = absolutely_cuspidal(&q, 6, Flavour::Plain, &[], config()).map_err(err)?;
    for l in 1..=3 {
        let c = t.abs(&dv(&[l, l]));
        ensure(c == p("q"), || format!("C_abs at ({l},{l}) = {c}"))?;
    }
    Ok(format!("A_(1,1) = {o}; C_abs = q on l(1,1), l <= 3"))
}

fn c3() -> Outcome {
    let q = Quiver::a2();
    let t = absolutely_cuspidal(&q, 4, Flavour::Plain, &[], config()).map_err(err)?;
    for d in DimVector::all_up_to(2, 4, None).into_iter().skip(1) {
        let want = if d.total() == 1 { QPoly::one() } else { QPoly::zero() };
        ensure(t.abs(&d) == want, || format!("C_abs at {d} = {}", t.abs(&d)))?;
    }
    let w = WeightFunction::new(&t.roots, t.abs.clone()).map_err(err)?;
    let dims = gkm_dims(&t.roots, &w, 4, config()).map_err(err)?;
    ensure(dims.dims(&dv(&[2, 1])).is_zero(), || "n+ at (2,1) is nonzero".into())?;
    ensure(dims.dims(&dv(&[1, 1])).is_one(), || {
        "n+ at (1,1) is not one-dimensional".into()
    })?;
    Ok("C_abs = 1 at simple roots only; Serre kills (2,1)".into())
}

fn c4() -> Outcome {
    let q = Quiver::loops(2);
    let t = absolutely_cuspidal(&q, 5, Flavour::Plain, &[], config()).map_err(err)?;
    let target = hua_kac(&q, 5).map_err(err)?.to_series();
    let free = free_lie_inversion(&target).map_err(err)?;
    for n in 1..=5u32 {
        let d = dv(&[n]);
        let c = t.abs(&d);
        ensure(c == free.coeff(&d), || {
            format!("at {n}: GKM {c} vs free Lie {}", free.coeff(&d))
        })?;
        let deg = 1 + (n * n) as i64;
        ensure(
            c.max_half() == Some(2 * deg) && c.leading_coeff().is_some_and(|l| *l == rat(1)),
            || format!("C_abs_{n} = {c} is not monic of degree {deg}"),
        )?;
        ensure(c.has_integer_coeffs() && c.has_nonnegative_coeffs(), || {
            format!("C_abs_{n} = {c} has negative coefficients")
        })?;
    }
    Ok("GKM and free-Lie inversions agree; monic of degree 1 + d^2, nonnegative".into())
}

fn c5() -> Outcome {
    let n = 6;
    let out = lw_decompose(&Quiver::jordan(), &dv(&[1]), n, config()).map_err(err)?;
    ensure(out.blocks.len() == 1, || format!("{} blocks", out.blocks.len()))?;
    let b = &out.blocks[0];
    ensure(b.dim == dv(&[0]) && b.multiplicity.is_one(), || {
        format!("block at {} with multiplicity {}", b.dim, b.multiplicity)
    })?;
    let mut expected: GradedSeries = Series::one(1, n);
    for k in 1..=n {
        let mut factor: GradedSeries = Series::one(1, n);
        factor.set(dv(&[k]), p("-q^-1"));
        expected = expected.mul(&factor.inv().map_err(err)?).map_err(err)?;
    }
    ensure(b.chl.same_terms(&expected), || {
        "chL differs from prod (1 - q^-1 z^k)^-1".into()
    })?;
    ensure(out.reconstruct().same_terms(&out.framed), || {
        "reconstruction fails".into()
    })?;
    let tables = RootTables::compute(
        &qgk::roots::CartanDatum::from_quiver(&Quiver::jordan().frame(&dv(&[1])).map_err(err)?),
        n + 1,
        Some(&dv(&[n, 1])),
    );
    let framed_roots: Vec<_> = tables
        .phi_plus()
        .filter(|e| e.dim.get(1) == 1)
        .map(|e| e.dim.clone())
        .collect();
    ensure(framed_roots == vec![dv(&[0, 1])], || {
        format!("(d,1) roots: {framed_roots:?}")
    })?;
    Ok("one block, multiplicity 1, chL = prod (1 - q^-1 z^k)^-1".into())
}

fn c6() -> Outcome {
    let mut checked = 0;
    for q in [Quiver::a2(), Quiver::kronecker()] {
        let kac = hua_kac(&q, 4).map_err(err)?;
        for (d, a) in kac.iter() {
            let mut frontier = vec![d.clone()];
            for _ in 0..3 {
                let mut next = vec![];
                for e in &frontier {
                    for i in 0..q.rank() {
                        let Some(w) = to_dim(&weyl_reflect(&q, i, e).map_err(err)?) else {
                            continue;
                        };
                        if w.is_zero() || w.total() > 4 {
                            continue;
                        }
                        let b = kac.get(&w).cloned().unwrap_or_default();
                        ensure(&b == a, || format!("A at {d} is {a}, at {w} is {b}"))?;
                        checked += 1;
                        next.push(w);
                    }
                }
                frontier = next;
            }
        }
    }
    Ok(format!("{checked} reflected pairs agree"))
}

fn c7() -> Outcome {
    let mut count = 0;
    for q in [Quiver::a2(), Quiver::kronecker(), Quiver::loops(2)] {
        let t = absolutely_cuspidal(&q, 5, Flavour::Plain, &[], config()).map_err(err)?;
        for d in DimVector::all_up_to(q.rank(), 5, None).into_iter().skip(1) {
            let canon = canonical_decomposition_with(&t.roots, &d, &|_| {}).map_err(err)?;
            let coarse: Vec<DimVector> = canon
                .iter()
                .flat_map(|(part, m)| std::iter::repeat_n(part.clone(), *m as usize))
                .collect();
            for fine in sigma_decompositions(&t.roots, &d) {
                ensure(refines(&fine, &coarse), || {
                    format!("{fine:?} does not refine {coarse:?}")
                })?;
                count += 1;
            }
            if t.roots.in_sigma(&d) {
                let a = ip_polynomial(&t, &d).map_err(err)?;
                let b = ip_general(&t, &d).map_err(err)?;
                ensure(a == b, || format!("IP at {d}: {a} vs {b}"))?;
            }
        }
    }
    Ok(format!("{count} Sigma-decompositions refine the canonical one"))
}

fn c8() -> Outcome {
    let q = Quiver::jordan();
    for n in 1..=3 {
        let a = oracle_kac(&q, &dv(&[n]), Flavour::Nilpotent, &qgk::kac::DEFAULT_FIELDS).map_err(err)?;
        ensure(a.is_one(), || format!("A_nil_{n} = {a}"))?;
    }
    let t = absolutely_cuspidal(&q, 3, Flavour::Nilpotent, &qgk::kac::DEFAULT_FIELDS, config()).map_err(err)?;
    for n in 1..=3 {
        ensure(t.abs(&dv(&[n])).is_one(), || {
            format!("C_nil_abs_{n} = {}", t.abs(&dv(&[n])))
        })?;
    }
    Ok("A_nil = C_nil_abs = 1 for d <= 3".into())
}

fn random_poly(rng: &mut ChaCha8Rng) -> QPoly {
    let mut p = QPoly::zero();
    for _ in 0..rng.gen_range(0..3) {
        p.add_term(2 * rng.gen_range(-2i64..=3), &rat(rng.gen_range(-3i64..=3)));
    }
    p
}

fn random_series(rng: &mut ChaCha8Rng, rank: usize, bound: u32) -> GradedSeries {
    let mut s = Series::new(rank, bound);
    for d in DimVector::all_up_to(rank, bound, None).into_iter().skip(1) {
        s.set(d, random_poly(rng));
    }
    s
}

fn random_weights(rng: &mut ChaCha8Rng) -> (RootTables, WeightFunction) {
    let quivers = [
        Quiver::a2(),
        Quiver::kronecker(),
        Quiver::loops(2),
        Quiver::from_arrows(2, &[(0, 0), (0, 1)]),
        Quiver::from_arrows(3, &[(0, 1), (1, 2)]),
    ];
    let q = &quivers[rng.gen_range(0..quivers.len())];
    let tables = RootTables::for_quiver(q, 4);
    let mut map = BTreeMap::new();
    for e in tables.phi_plus() {
        let w = if tables.cartan().form(&e.dim, &e.dim) == 2 {
            QPoly::one()
        } else {
            let mut w = QPoly::zero();
            for k in 1..=3 {
                w.add_term(2 * k, &rat(rng.gen_range(0i64..=2)));
            }
            w
        };
        map.insert(e.dim.clone(), w);
    }
    let w = WeightFunction::new(&tables, map).expect("valid weights");
    (tables, w)
}

fn c9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0009);
    const CASES: usize = 100;
    for case in 0..CASES {
        let rank = rng.gen_range(1..=2);
        let s = random_series(&mut rng, rank, 4);
        for mode in [Mode::QZ, Mode::ZOnly] {
            let back = s.pleth_exp(mode).and_then(|e| e.pleth_log(mode)).map_err(err)?;
            ensure(back.same_terms(&s), || {
                format!("Log(Exp(f)) != f in {mode:?}, case {case}")
            })?;
            let one_plus = s.add(&Series::one(rank, 4)).map_err(err)?;
            let again = one_plus.pleth_log(mode).and_then(|l| l.pleth_exp(mode)).map_err(err)?;
            ensure(again.same_terms(&one_plus), || {
                format!("Exp(Log(g)) != g in {mode:?}, case {case}")
            })?;
        }
    }
    for case in 0..CASES {
        let rank = rng.gen_range(1..=2);
        let a = random_series(&mut rng, rank, 3);
        let b = random_series(&mut rng, rank, 3);
        let lhs = a.add(&b).and_then(|s| s.pleth_exp(Mode::QZ)).map_err(err)?;
        let rhs = a
            .pleth_exp(Mode::QZ)
            .and_then(|x| x.mul(&b.pleth_exp(Mode::QZ)?))
            .map_err(err)?;
        ensure(lhs.same_terms(&rhs), || format!("Exp not additive, case {case}"))?;
    }
    for case in 0..CASES {
        let (tables, w) = random_weights(&mut rng);
        let salt: u32 = rng.gen();
        let base = gkm_dims(&tables, &w, 4, config()).map_err(err)?;
        let permuted = EngineConfig {
            letter_ids: Some(Arc::new(move |i| (i as u32 ^ salt).wrapping_mul(0x9e37_79b9))),
            ..config()
        };
        let other = gkm_dims(&tables, &w, 4, permuted).map_err(err)?;
        ensure(base.entries == other.entries, || {
            format!("alphabet order changes dims, case {case}")
        })?;
    }
    let dir = tempfile::tempdir().map_err(err)?;
    for case in 0..CASES {
        let n = rng.gen_range(1..=2usize);
        let arrows: Vec<(usize, usize)> = (0..rng.gen_range(0..=3))
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect();
        let q = Quiver::from_arrows(n, &arrows);
        let path = dir.path().join(format!("q{case}.json"));
        std::fs::write(&path, q.to_json()).map_err(err)?;
        let path = path.to_str().expect("utf-8 path").to_string();
        let command = ["kac", "gkm-dims", "roots"][case % 3];
        let mut outputs = vec![];
        for threads in ["1", "2", "4"] {
            let mut args = vec!["qgk", command, path.as_str(), "--bound", "3", "--threads", threads];
            if command == "gkm-dims" {
                args.push("--from-kac");
            }
            let (mut out, mut errs) = (vec![], vec![]);
            let code = qgk::cli::run(args, &mut out, &mut errs);
            ensure(code == 0, || {
                format!(
                    "{command} failed on {}: {}",
                    q.to_json(),
                    String::from_utf8_lossy(&errs)
                )
            })?;
            outputs.push(out);
        }
        ensure(outputs.windows(2).all(|w| w[0] == w[1]), || {
            format!("{command} output depends on worker count, case {case}")
        })?;
    }
    Ok(format!(
        "{CASES} cases each: Exp/Log inverse, Exp additivity, order independence, worker determinism"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (1, "Jordan Kac polynomials", Duration::from_secs(5), c1),
        (2, "Kronecker cuspidal line", Duration::from_secs(30), c2),
        (3, "A2 Serre sentinel", Duration::from_secs(10), c3),
        (4, "two-loop inversion", Duration::from_secs(60), c4),
        (5, "framed Jordan decomposition", Duration::from_secs(60), c5),
        (6, "Weyl invariance", Duration::from_secs(10), c6),
        (7, "canonical decomposition", Duration::from_secs(30), c7),
        (8, "nilpotent Jordan", Duration::from_secs(60), c8),
        (9, "randomized property suites", Duration::from_secs(600), c9),
    ];
    let mut failed = 0;
    for (n, name, budget, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > budget => Err(format!("{msg}, but took {elapsed:.2?} > {budget:?}")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("PASS criterion {n} ({name}) in {elapsed:.2?}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {n} ({name}) in {elapsed:.2?}: {msg}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
