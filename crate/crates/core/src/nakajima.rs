//! Framed quivers: Poincaré characters of Nakajima quiver varieties and their
//! decomposition into lowest-weight module characters.
//!
//! All framed computations run on `Q_f` restricted to framing degree at most
//! one, i.e. with componentwise caps `(N, ..., N, 1)` and total bound `N + 1`.

use std::collections::BTreeMap;

use crate::cuspidal::{finish_table, invert_with_engine};
use crate::error::{Error, Result};
use crate::gkm::{lowest_weight_extract, EngineConfig};
use crate::kac::{hua_kac_capped, Flavour};
use crate::poly::QPoly;
use crate::quiver::{DimVector, Quiver};
use crate::roots::{CartanDatum, RootTables};
use crate::series::{GradedSeries, Series};

/// One summand `V_d (x) L_d` of the framed character.
#[derive(Clone, Debug, PartialEq)]
pub struct LowestWeightBlock {
    pub dim: DimVector,
    /// Intersection Poincaré polynomial of the framed variety at `(d, 1)`,
    /// in the variable of the framed character.
    pub multiplicity: QPoly,
    /// `lambda_d(e_i)` for each vertex `i`; the functional is linear.
    pub weight: Vec<i64>,
    /// Lowest-weight module character with `[z^0] = 1`.
    pub chl: GradedSeries,
}

impl LowestWeightBlock {
    pub fn weight_at(&self, d: &DimVector) -> i64 {
        self.weight.iter().zip(d.entries()).map(|(w, &x)| w * x as i64).sum()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LowestWeightDecomposition {
    pub quiver: Quiver,
    pub framing: DimVector,
    pub bound: u32,
    /// Ascending in `(|d|, lex)`.
    pub blocks: Vec<LowestWeightBlock>,
    pub framed: GradedSeries,
}

impl LowestWeightDecomposition {
    /// `sum_blocks V_d chL_d z^d`.
    pub fn reconstruct(&self) -> GradedSeries {
        let mut s = Series::new(self.quiver.rank(), self.bound);
        for b in &self.blocks {
            for (e, c) in b.chl.iter() {
                s.add_at(&b.dim.add(e), &(&b.multiplicity * c));
            }
        }
        s
    }
}

fn framed_caps(rank: usize, bound: u32) -> DimVector {
    DimVector::new(vec![bound; rank]).extend(1)
}

fn check_framing(q: &Quiver, f: &DimVector) -> Result<Quiver> {
    if f.rank() != q.rank() {
        return Err(Error::DimensionMismatch {
            expected: q.rank(),
            found: f.rank(),
        });
    }
    q.frame(f)
}

/// `e -> A_{Q_f,(e,1)}(q^{-1})` for `|e| <= bound`.
pub fn framed_character(q: &Quiver, f: &DimVector, bound: u32) -> Result<GradedSeries> {
    let qf = check_framing(q, f)?;
    let caps = framed_caps(q.rank(), bound);
    let kac = hua_kac_capped(&qf, bound + 1, Some(&caps))?;
    let mut s = Series::new(q.rank(), bound);
    for e in DimVector::all_up_to(q.rank(), bound, None) {
        if let Some(a) = kac.get(&e.extend(1)) {
            s.set(e, a.substitute_power(-1));
        }
    }
    Ok(s)
}

/// Splits the framed character into lowest-weight blocks, one per
/// `(d, 1) in Phi+(Q_f)`, and checks the reconstruction identity.
pub fn lw_decompose(q: &Quiver, f: &DimVector, bound: u32, config: EngineConfig) -> Result<LowestWeightDecomposition> {
    let qf = check_framing(q, f)?;
    let rank = q.rank();
    let caps = framed_caps(rank, bound);
    let kac = hua_kac_capped(&qf, bound + 1, Some(&caps))?;
    let roots = RootTables::compute(&CartanDatum::from_quiver(&qf), bound + 1, Some(&caps));
    let (abs, engine) = invert_with_engine(&roots, &kac.to_series(), bound + 1, config)?;
    let table = finish_table(&qf, Flavour::Plain, bound + 1, Some(&caps), roots, abs)?;

    let framed = framed_character(q, f, bound)?;
    let mut mults = BTreeMap::new();
    let mut known = BTreeMap::new();
    let infinity = rank;
    for (root, c) in &table.abs {
        if root.get(infinity) != 1 {
            continue;
        }
        let d = root.truncate_last();
        let seed = engine
            .generators()
            .iter()
            .position(|g| g.root == *root)
            .ok_or_else(|| Error::Internal(format!("no generator at {root}")))?;
        let span = engine.cyclic_submodule(seed, &|g| g.root.get(infinity) == 0)?;
        let mut chl = Series::new(rank, bound - d.total());
        for (offset, dims) in span {
            chl.set(offset.truncate_last(), dims.substitute_power(-1));
        }
        mults.insert(d.clone(), c.substitute_power(-1));
        known.insert(d, chl);
    }
    let solved = lowest_weight_extract(&framed, &mults, &known, bound)?;

    let mut blocks = vec![];
    for (d, chl) in solved {
        let weight = (0..rank)
            .map(|i| Ok(q.sym_form(&d, &DimVector::unit(rank, i))? - f.get(i) as i64))
            .collect::<Result<Vec<_>>>()?;
        blocks.push(LowestWeightBlock {
            multiplicity: mults[&d].clone(),
            dim: d,
            weight,
            chl,
        });
    }
    let out = LowestWeightDecomposition {
        quiver: q.clone(),
        framing: f.clone(),
        bound,
        blocks,
        framed,
    };
    let rebuilt = out.reconstruct();
    if let Some(e) = out
        .framed
        .domain()
        .into_iter()
        .find(|e| rebuilt.coeff(e) != out.framed.coeff(e))
    {
        return Err(Error::assertion(
            &e,
            "lowest-weight blocks do not reconstruct the framed character",
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    fn a1() -> Quiver {
        Quiver::from_arrows(1, &[])
    }

    #[test]
    fn framed_jordan_single_block() {
        let n = 4;
        let out = lw_decompose(&Quiver::jordan(), &dv(&[1]), n, EngineConfig::default()).unwrap();
        assert_eq!(out.blocks.len(), 1);
        let b = &out.blocks[0];
        assert_eq!(b.dim, dv(&[0]));
        assert!(b.multiplicity.is_one());
        assert_eq!(b.weight, vec![-1]);
        // prod_k (1 - q^-1 z^k)^-1 up to z^4
        let expected: Vec<QPoly> = [
            "1",
            "q^-1",
            "q^-2 + q^-1",
            "q^-3 + q^-2 + q^-1",
            "q^-4 + q^-3 + 2*q^-2 + q^-1",
        ]
        .iter()
        .map(|s| s.parse().unwrap())
        .collect();
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(&b.chl.coeff(&dv(&[k as u32])), e, "z^{k}");
        }
        assert_eq!(out.framed.coeff(&dv(&[1])), "q^-1".parse().unwrap());
    }

    #[test]
    fn framed_a1_is_two_dimensional() {
        let out = lw_decompose(&a1(), &dv(&[1]), 3, EngineConfig::default()).unwrap();
        assert_eq!(out.blocks.len(), 1);
        let chl = &out.blocks[0].chl;
        assert!(chl.coeff(&dv(&[0])).is_one());
        assert!(chl.coeff(&dv(&[1])).is_one());
        assert!(chl.coeff(&dv(&[2])).is_zero());
        let f = framed_character(&a1(), &dv(&[1]), 3).unwrap();
        assert!(f.coeff(&dv(&[1])).is_one());
        assert!(f.coeff(&dv(&[2])).is_zero());
    }

    #[test]
    fn zero_framing() {
        let f = framed_character(&Quiver::jordan(), &dv(&[0]), 3).unwrap();
        assert!(f.coeff(&dv(&[0])).is_one());
        assert_eq!(f.iter().count(), 1);
        let out = lw_decompose(&Quiver::jordan(), &dv(&[0]), 3, EngineConfig::default()).unwrap();
        assert_eq!(out.blocks.len(), 1);
        assert_eq!(out.blocks[0].chl.iter().count(), 1);
    }

    #[test]
    fn reconstruction_on_several_framings() {
        let cases = [
            (Quiver::a2(), dv(&[1, 0]), 4),
            (Quiver::a2(), dv(&[1, 1]), 4),
            (Quiver::kronecker(), dv(&[1, 0]), 3),
            (Quiver::loops(2), dv(&[1]), 3),
            (Quiver::jordan(), dv(&[2]), 3),
        ];
        for (q, f, n) in cases {
            let out = lw_decompose(&q, &f, n, EngineConfig::default()).unwrap();
            assert_eq!(out.reconstruct(), out.framed, "{f:?}");
            assert_eq!(out.blocks[0].dim, DimVector::zero(q.rank()));
            for b in &out.blocks {
                let fd = b.dim.extend(1);
                for i in 0..q.rank() {
                    let e = DimVector::unit(q.rank(), i).extend(0);
                    assert_eq!(b.weight[i], q.frame(&f).unwrap().sym_form(&fd, &e).unwrap());
                }
            }
        }
    }
}
