//! Positive halves of cohomologically graded GKM algebras: weight functions,
//! dimension tables, characters, and lowest-weight extraction.

pub mod engine;
pub mod linalg;

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly::{rat, QPoly};
use crate::quiver::DimVector;
use crate::roots::RootTables;
use crate::series::{GradedSeries, Mode, Series};

pub use engine::{EngineConfig, Generator, GkmEngine, LetterIds, DEFAULT_CAPACITY};

/// Generator counts `P_m`, one polynomial per positive root.
///
/// Coefficients are nonnegative integers, half-exponents are even, and
/// `P_m = 1` at every real member of `Phi+` (the real simple roots).
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFunction {
    entries: BTreeMap<DimVector, QPoly>,
}

impl WeightFunction {
    pub fn new(tables: &RootTables, entries: BTreeMap<DimVector, QPoly>) -> Result<Self> {
        let mut clean = BTreeMap::new();
        for (d, p) in entries {
            if p.is_zero() {
                continue;
            }
            if tables.entry(&d).is_none() {
                if d.total() > tables.bound() {
                    continue;
                }
                return Err(Error::InvalidArgument(format!(
                    "weight function nonzero at {d}, which is not a positive root"
                )));
            }
            if p.terms().any(|(j, _)| j % 2 != 0) {
                return Err(Error::OddDegree(d));
            }
            if !(p.has_integer_coeffs() && p.has_nonnegative_coeffs()) {
                return Err(Error::InvalidArgument(format!(
                    "weight at {d} must have nonnegative integer coefficients, got {p}"
                )));
            }
            clean.insert(d, p);
        }
        for e in tables.phi_plus() {
            if tables.cartan().form(&e.dim, &e.dim) == 2 && !clean.get(&e.dim).is_some_and(|p| p.is_one()) {
                return Err(Error::InvalidArgument(format!(
                    "weight at the real root {} must be 1",
                    e.dim
                )));
            }
        }
        Ok(WeightFunction { entries: clean })
    }

    pub fn get(&self, d: &DimVector) -> QPoly {
        self.entries.get(d).cloned().unwrap_or_else(QPoly::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DimVector, &QPoly)> {
        self.entries.iter()
    }

    /// `sum_m P_m z^m`.
    pub fn to_series(&self, rank: usize, bound: u32, caps: Option<DimVector>) -> GradedSeries {
        let mut s = Series::with_caps(rank, bound, caps);
        for (d, p) in &self.entries {
            s.set(d.clone(), p.clone());
        }
        s
    }
}

/// `dim n+_{d,j}` for every nonzero block up to the bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkmDimTable {
    pub rank: usize,
    pub bound: u32,
    pub caps: Option<DimVector>,
    pub entries: BTreeMap<(DimVector, i64), u64>,
}

impl GkmDimTable {
    pub fn from_engine(rank: usize, engine: &GkmEngine, caps: Option<DimVector>) -> Self {
        GkmDimTable {
            rank,
            bound: engine.bound(),
            caps,
            entries: engine.dim_table(),
        }
    }

    /// Graded dimension at `d` as `sum_j dim q^{j/2}`.
    pub fn dims(&self, d: &DimVector) -> QPoly {
        let mut p = QPoly::zero();
        for ((_, j), n) in self.entries.range((d.clone(), i64::MIN)..=(d.clone(), i64::MAX)) {
            p.add_term(*j, &rat(*n as i64));
        }
        p
    }
}

fn require_even(s: &GradedSeries) -> Result<()> {
    for (d, c) in s.iter() {
        if c.terms().any(|(j, _)| j % 2 != 0) {
            return Err(Error::OddDegree(d.clone()));
        }
    }
    Ok(())
}

/// Character of the free Lie algebra on a graded space with character `ch_v`.
pub fn free_lie_character(ch_v: &GradedSeries) -> Result<GradedSeries> {
    if !ch_v.constant_term().is_zero() {
        return Err(Error::Precondition("generator character must vanish at z^0".into()));
    }
    require_even(ch_v)?;
    let mut one = ch_v.empty_like();
    one.set(DimVector::zero(ch_v.rank()), QPoly::one());
    one.sub(ch_v)?.inv()?.pleth_log(Mode::QZ)
}

/// Builds `n+` for the weight function `p` up to `bound` and tabulates it.
pub fn gkm_dims(tables: &RootTables, p: &WeightFunction, bound: u32, config: EngineConfig) -> Result<GkmDimTable> {
    let caps = tables.caps().cloned();
    let mut engine = GkmEngine::new(tables.cartan().clone(), bound, caps.clone(), config);
    for level in 1..=bound {
        engine.compute_next_level()?;
        for (d, poly) in p.iter().filter(|(d, _)| d.total() == level) {
            engine.add_generators(d, poly)?;
        }
    }
    Ok(GkmDimTable::from_engine(tables.cartan().rank(), &engine, caps))
}

/// `sum dim q^{j/2} z^d`.
pub fn gkm_character(table: &GkmDimTable) -> GradedSeries {
    let mut s: GradedSeries = Series::with_caps(table.rank, table.bound, table.caps.clone());
    for ((d, j), n) in &table.entries {
        let mut c = s.coeff(d);
        c.add_term(*j, &rat(*n as i64));
        s.set(d.clone(), c);
    }
    s
}

/// Character of the enveloping algebra, by the PBW theorem.
pub fn uea_character(ch_l: &GradedSeries) -> Result<GradedSeries> {
    ch_l.pleth_exp(Mode::QZ)
}

/// Solves `F(e) = sum_{d <= e} V_d chL_d(e - d)` for the lowest-weight
/// characters `chL_d`, normalised by `[z^0] chL_d = 1`.
///
/// Blocks listed in `known` are taken as given. At each `e` at most one
/// unknown value may enter, and it is obtained by exact division by its
/// multiplicity; with every block known the call only checks the identity.
pub fn lowest_weight_extract(
    f: &GradedSeries,
    mults: &BTreeMap<DimVector, QPoly>,
    known: &BTreeMap<DimVector, GradedSeries>,
    bound: u32,
) -> Result<BTreeMap<DimVector, GradedSeries>> {
    let rank = f.rank();
    let mut out: BTreeMap<DimVector, GradedSeries> = BTreeMap::new();
    for d in mults.iter().filter(|(_, v)| !v.is_zero()).map(|(d, _)| d) {
        if d.total() > bound {
            continue;
        }
        let chl = match known.get(d) {
            Some(k) => {
                if !k.constant_term().is_one() {
                    return Err(Error::assertion(d, "known block is not normalised at z^0"));
                }
                k.truncate(bound - d.total())
            }
            None => {
                let mut s = Series::new(rank, bound - d.total());
                s.set(DimVector::zero(rank), QPoly::one());
                s
            }
        };
        out.insert(d.clone(), chl);
    }
    for e in DimVector::all_up_to(rank, bound, None) {
        let mut residual = f.coeff(&e);
        let mut unknown: Option<DimVector> = None;
        for (d, chl) in &out {
            let Some(offset) = e.checked_sub(d) else {
                continue;
            };
            if !offset.is_zero() && !known.contains_key(d) {
                if unknown.is_some() {
                    return Err(Error::Precondition(format!(
                        "two unknown lowest-weight blocks meet at {e}"
                    )));
                }
                unknown = Some(d.clone());
                continue;
            }
            residual.sub_assign(&(&mults[d] * &chl.coeff(&offset)));
        }
        match unknown {
            None if !residual.is_zero() => {
                return Err(Error::assertion(
                    &e,
                    format!("lowest-weight decomposition leaves {residual}"),
                ));
            }
            None => {}
            Some(d) => {
                let value = residual.div_exact(&mults[&d]).ok_or_else(|| {
                    Error::assertion(&e, "lowest-weight coefficient is not divisible by its multiplicity")
                })?;
                let offset = e.checked_sub(&d).expect("d <= e");
                out.get_mut(&d).expect("block present").set(offset, value);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn dv(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    fn weights(tables: &RootTables, w: &[(&[u32], &str)]) -> WeightFunction {
        let map = w.iter().map(|(d, p)| (dv(d), p.parse().unwrap())).collect();
        WeightFunction::new(tables, map).unwrap()
    }

    #[test]
    fn sl3_serre() {
        let t = RootTables::for_quiver(&Quiver::a2(), 3);
        let p = weights(&t, &[(&[1, 0], "1"), (&[0, 1], "1")]);
        let table = gkm_dims(&t, &p, 3, EngineConfig::default()).unwrap();
        assert_eq!(table.dims(&dv(&[1, 1])), QPoly::one());
        assert!(table.dims(&dv(&[2, 1])).is_zero());
        assert!(table.dims(&dv(&[1, 2])).is_zero());
        assert_eq!(table.entries.len(), 3);
        let ch = gkm_character(&table);
        let u = uea_character(&ch).unwrap();
        assert_eq!(u.coeff(&dv(&[1, 1])), QPoly::from(2));
    }

    #[test]
    fn free_lie_witt() {
        let mut v: GradedSeries = Series::new(1, 6);
        v.set(dv(&[1]), QPoly::one());
        let ch = free_lie_character(&v).unwrap();
        let got: Vec<_> = (1..=6).map(|n| ch.coeff(&dv(&[n]))).collect();
        // one letter generates a one-dimensional Lie algebra
        assert_eq!(got[0], QPoly::one());
        assert!(got[1..].iter().all(|c| c.is_zero()));
        v.set(dv(&[1]), QPoly::from(2));
        let ch = free_lie_character(&v).unwrap();
        let got: Vec<_> = (1..=6).map(|n| ch.coeff(&dv(&[n]))).collect();
        let witt: Vec<_> = [2, 1, 2, 3, 6, 9].into_iter().map(QPoly::from).collect();
        assert_eq!(got, witt);
    }

    #[test]
    fn even_generator_squares_to_zero() {
        let t = RootTables::for_quiver(&Quiver::loops(2), 2);
        let p = weights(&t, &[(&[1], "q^2")]);
        let table = gkm_dims(&t, &p, 2, EngineConfig::default()).unwrap();
        assert!(table.dims(&dv(&[2])).is_zero());
    }

    #[test]
    fn jordan_commutes() {
        let t = RootTables::for_quiver(&Quiver::jordan(), 3);
        let p = weights(&t, &[(&[1], "q"), (&[2], "q"), (&[3], "q")]);
        let table = gkm_dims(&t, &p, 3, EngineConfig::default()).unwrap();
        for n in 1..=3 {
            assert_eq!(table.dims(&dv(&[n])), "q".parse().unwrap());
        }
    }

    #[test]
    fn rejects_odd_and_bad_real() {
        let t = RootTables::for_quiver(&Quiver::loops(2), 2);
        let map = [(dv(&[1]), "q^(1/2)".parse().unwrap())].into_iter().collect();
        assert!(matches!(WeightFunction::new(&t, map), Err(Error::OddDegree(_))));
        let t = RootTables::for_quiver(&Quiver::a2(), 2);
        let map = [(dv(&[1, 0]), "q".parse().unwrap())].into_iter().collect();
        assert!(WeightFunction::new(&t, map).is_err());
    }

    #[test]
    fn single_block_extraction() {
        let mut f: GradedSeries = Series::new(1, 3);
        for n in 0..=3 {
            f.set(dv(&[n]), "q^-1 + 1".parse().unwrap());
        }
        let mults = [(dv(&[0]), "q^-1 + 1".parse().unwrap())].into_iter().collect();
        let out = lowest_weight_extract(&f, &mults, &BTreeMap::new(), 3).unwrap();
        for n in 0..=3 {
            assert!(out[&dv(&[0])].coeff(&dv(&[n])).is_one());
        }
    }
}

#[cfg(test)]
mod props {
    use std::sync::Arc;

    use super::*;
    use crate::quiver::Quiver;
    use proptest::prelude::*;

    /// A valid weight function: 1 at the real roots, small even-degree
    /// counts at the imaginary ones.
    fn weights(q: Quiver, bound: u32) -> impl Strategy<Value = (RootTables, WeightFunction)> {
        let tables = RootTables::for_quiver(&q, bound);
        let imaginary: Vec<DimVector> = tables
            .phi_plus()
            .filter(|e| tables.cartan().form(&e.dim, &e.dim) != 2)
            .map(|e| e.dim.clone())
            .collect();
        prop::collection::vec(prop::collection::vec(0u32..=2, 3), imaginary.len()).prop_map(move |counts| {
            let mut map = BTreeMap::new();
            for e in tables.phi_plus().filter(|e| tables.cartan().form(&e.dim, &e.dim) == 2) {
                map.insert(e.dim.clone(), QPoly::one());
            }
            for (d, c) in imaginary.iter().zip(counts) {
                let mut p = QPoly::zero();
                for (k, n) in c.into_iter().enumerate() {
                    p.add_term(2 * k as i64 + 2, &rat(n as i64));
                }
                map.insert(d.clone(), p);
            }
            let w = WeightFunction::new(&tables, map).unwrap();
            (tables.clone(), w)
        })
    }

    fn any_case() -> impl Strategy<Value = (RootTables, WeightFunction)> {
        prop_oneof![
            weights(Quiver::a2(), 4),
            weights(Quiver::kronecker(), 4),
            weights(Quiver::loops(2), 4),
            weights(Quiver::from_arrows(2, &[(0, 0), (0, 1)]), 4),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn dims_ignore_alphabet_order((tables, w) in any_case(), seed in any::<u32>()) {
            let plain = gkm_dims(&tables, &w, tables.bound(), EngineConfig::default()).unwrap();
            let config = EngineConfig {
                letter_ids: Some(Arc::new(move |i| (i as u32).wrapping_mul(2_654_435_761).wrapping_add(seed) ^ 0x5555)),
                ..EngineConfig::default()
            };
            let shuffled = gkm_dims(&tables, &w, tables.bound(), config).unwrap();
            prop_assert_eq!(plain.entries, shuffled.entries);
        }

        #[test]
        fn enveloping_character_is_nonnegative((tables, w) in any_case()) {
            let table = gkm_dims(&tables, &w, tables.bound(), EngineConfig::default()).unwrap();
            let u = uea_character(&gkm_character(&table)).unwrap();
            prop_assert!(u.is_nonneg_integral());
            prop_assert!(table.entries.keys().all(|(_, j)| j % 2 == 0));
        }

        #[test]
        fn free_case_matches_free_lie(counts in prop::collection::vec(0u32..=2, 4)) {
            let q = Quiver::loops(3);
            let tables = RootTables::for_quiver(&q, 4);
            let mut map = BTreeMap::new();
            for (n, c) in (1..=4u32).zip(counts) {
                map.insert(DimVector::new(vec![n]), QPoly::from_q_coeffs(&[(2 * n as i64, c as i64)]));
            }
            let w = WeightFunction::new(&tables, map).unwrap();
            let table = gkm_dims(&tables, &w, 4, EngineConfig::default()).unwrap();
            let expected = free_lie_character(&w.to_series(1, 4, None)).unwrap();
            prop_assert_eq!(gkm_character(&table), expected);
        }
    }
}
