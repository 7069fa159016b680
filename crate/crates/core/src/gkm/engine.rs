//! Positive half of a graded GKM algebra, built degree by degree.
//!
//! The free Lie algebra on the generators sits inside the tensor algebra, so
//! Lie elements are sparse combinations of words. For every block `(d, j)`
//! (multidegree, cohomological degree) the engine keeps an echelon basis of
//! the ideal `I_{d,j} = R_{d,j} + sum_g [g, I_{d - deg g, j - j_g}]`, where `R`
//! holds the Serre and commutation relations. The block dimension of `n+` is
//! the number of Lyndon words of that degree minus the rank of the ideal.
//!
//! Generators at multidegree `d` are added only after the blocks of total
//! degree `|d|` are computed, so the computed block dimensions count
//! brackets of length at least two and the generators are added on top.

use std::collections::BTreeMap;
use std::sync::Arc;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use super::linalg::{bracket_letter, bracket_letters, Echelon, SparseVec};
use crate::error::{Error, Result};
use crate::poly::{rat, QPoly};
use crate::quiver::DimVector;
use crate::roots::CartanDatum;

/// Default cap on the free Lie dimension of a single block.
pub const DEFAULT_CAPACITY: usize = 20_000;

/// Maps the `n`-th generator to its letter; must be injective.
pub type LetterIds = Arc<dyn Fn(usize) -> u32 + Send + Sync>;

#[derive(Clone)]
pub struct EngineConfig {
    pub capacity: usize,
    /// Letter assignment; sequential when `None`. Changing it permutes the
    /// alphabet order, which must not change any dimension.
    pub letter_ids: Option<LetterIds>,
    /// Compute the blocks of one total degree concurrently.
    pub parallel: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            capacity: DEFAULT_CAPACITY,
            letter_ids: None,
            parallel: true,
        }
    }
}

impl std::fmt::Debug for EngineConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EngineConfig")
            .field("capacity", &self.capacity)
            .field("custom_letters", &self.letter_ids.is_some())
            .field("parallel", &self.parallel)
            .finish()
    }
}

/// One generator `e_{m,j,l}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub root: DimVector,
    pub j: i64,
    pub letter: u32,
    pub real: bool,
}

#[derive(Clone, Debug)]
struct Block {
    free: u128,
    ideal: Echelon,
}

#[derive(Clone, Debug)]
pub struct GkmEngine {
    cartan: CartanDatum,
    bound: u32,
    caps: Option<DimVector>,
    config: EngineConfig,
    gens: Vec<Generator>,
    blocks: BTreeMap<DimVector, BTreeMap<i64, Block>>,
    level: u32,
}

fn mobius(n: u32) -> i64 {
    let mut n = n;
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn multinomial(parts: &[u32]) -> u128 {
    let mut total = 0u128;
    let mut acc = 1u128;
    for &k in parts {
        for i in 1..=k as u128 {
            total += 1;
            acc = acc * total / i;
        }
    }
    acc
}

/// Number of Lyndon words with the given letter multiplicities.
fn lyndon_count(content: &[u32]) -> u128 {
    let n: u32 = content.iter().sum();
    let g = content.iter().fold(0, |a, &b| num_integer::gcd(a, b));
    let mut total: i128 = 0;
    for k in (1..=g).filter(|k| g % k == 0) {
        let mu = mobius(k);
        if mu != 0 {
            let reduced: Vec<u32> = content.iter().map(|c| c / k).collect();
            total += mu as i128 * multinomial(&reduced) as i128;
        }
    }
    debug_assert!(total >= 0 && total % n as i128 == 0);
    (total / n as i128) as u128
}

impl GkmEngine {
    pub fn new(cartan: CartanDatum, bound: u32, caps: Option<DimVector>, config: EngineConfig) -> Self {
        GkmEngine {
            cartan,
            bound,
            caps,
            config,
            gens: vec![],
            blocks: BTreeMap::new(),
            level: 0,
        }
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    fn in_domain(&self, d: &DimVector) -> bool {
        d.total() <= self.bound && self.caps.as_ref().is_none_or(|c| d.fits_in(c))
    }

    /// Adds `P` generators at `root`: `c` of them in degree `j` for each term `c q^{j/2}`.
    pub fn add_generators(&mut self, root: &DimVector, p: &QPoly) -> Result<()> {
        if root.total() != self.level {
            return Err(Error::Internal(format!(
                "generators at {root} added while at level {}",
                self.level
            )));
        }
        let real = self.cartan.form(root, root) == 2;
        if real && !p.is_one() && !p.is_zero() {
            return Err(Error::InvalidArgument(format!(
                "weight at the real root {root} must be 1, got {p}"
            )));
        }
        for (j, c) in p.terms() {
            if j % 2 != 0 {
                return Err(Error::OddDegree(root.clone()));
            }
            if !c.is_integer() || c < &rat(0) {
                return Err(Error::InvalidArgument(format!(
                    "generator count {c} at {root} is not a nonnegative integer"
                )));
            }
            let count: usize = c
                .to_integer()
                .try_into()
                .map_err(|_| Error::SizeLimit(format!("too many generators at {root}")))?;
            for _ in 0..count {
                let n = self.gens.len();
                let letter = match &self.config.letter_ids {
                    Some(f) => f(n),
                    None => n as u32,
                };
                self.gens.push(Generator {
                    root: root.clone(),
                    j,
                    letter,
                    real,
                });
            }
        }
        Ok(())
    }

    /// Free Lie dimensions of the blocks at `d`, by letter content.
    fn lyndon_by_degree(&self, d: &DimVector) -> BTreeMap<i64, u128> {
        let mut out = BTreeMap::new();
        let gens: Vec<&Generator> = self.gens.iter().filter(|g| g.root.fits_in(d)).collect();
        let mut content = vec![0u32; gens.len()];
        fn rec(
            i: usize,
            rest: &DimVector,
            j: i64,
            gens: &[&Generator],
            content: &mut Vec<u32>,
            out: &mut BTreeMap<i64, u128>,
        ) {
            if rest.is_zero() {
                let used: Vec<u32> = content.iter().copied().filter(|&c| c > 0).collect();
                if used.iter().sum::<u32>() >= 2 {
                    *out.entry(j).or_default() += lyndon_count(&used);
                }
                return;
            }
            if i == gens.len() {
                return;
            }
            rec(i + 1, rest, j, gens, content, out);
            let mut r = rest.clone();
            let mut jj = j;
            while let Some(next) = r.checked_sub(&gens[i].root) {
                content[i] += 1;
                jj += gens[i].j;
                rec(i + 1, &next, jj, gens, content, out);
                r = next;
            }
            content[i] = 0;
        }
        rec(0, d, 0, &gens, &mut content, &mut out);
        out.retain(|_, v| *v > 0);
        out
    }

    /// `ad(e)^k (v)`.
    fn ad_power(letter: u32, k: i64, v: SparseVec) -> SparseVec {
        (0..k).fold(v, |acc, _| bracket_letter(letter, &acc))
    }

    fn relations(&self, d: &DimVector, j: i64) -> Vec<SparseVec> {
        let mut out = vec![];
        for e in self.gens.iter().filter(|g| g.real) {
            for g in &self.gens {
                if g.root == e.root || g.j != j {
                    continue;
                }
                let k = 1 - self.cartan.form(&e.root, &g.root);
                if k < 1 || g.root.add(&e.root.scale(k as u32)) != *d {
                    continue;
                }
                let mut v = SparseVec::new();
                v.insert(vec![g.letter], rat(1));
                out.push(Self::ad_power(e.letter, k, v));
            }
        }
        for (a, ga) in self.gens.iter().enumerate() {
            for gb in &self.gens[a + 1..] {
                if ga.j + gb.j == j && ga.root.add(&gb.root) == *d && self.cartan.form(&ga.root, &gb.root) == 0 {
                    out.push(bracket_letters(ga.letter, gb.letter));
                }
            }
        }
        out
    }

    fn compute_blocks(&self, d: &DimVector) -> Result<BTreeMap<i64, Block>> {
        let mut out = BTreeMap::new();
        for (j, free) in self.lyndon_by_degree(d) {
            if free > self.config.capacity as u128 {
                return Err(Error::Capacity {
                    dim: d.clone(),
                    size: free.min(usize::MAX as u128) as usize,
                    cap: self.config.capacity,
                });
            }
            let mut ideal = Echelon::new();
            for r in self.relations(d, j) {
                ideal.insert(r);
            }
            for g in &self.gens {
                let Some(lower) = d.checked_sub(&g.root) else {
                    continue;
                };
                let Some(block) = self.blocks.get(&lower).and_then(|b| b.get(&(j - g.j))) else {
                    continue;
                };
                for row in block.ideal.rows() {
                    ideal.insert(bracket_letter(g.letter, row));
                }
            }
            if ideal.rank() as u128 > free {
                return Err(Error::Internal(format!(
                    "ideal rank {} exceeds free dimension {free} at ({d}, {j})",
                    ideal.rank()
                )));
            }
            out.insert(j, Block { free, ideal });
        }
        Ok(out)
    }

    /// Computes every block of total degree `self.level + 1`.
    pub fn compute_next_level(&mut self) -> Result<()> {
        let level = self.level + 1;
        if level > self.bound {
            return Err(Error::Internal("engine already at its bound".into()));
        }
        let dims: Vec<DimVector> = DimVector::all_up_to(self.cartan.rank(), level, self.caps.as_ref())
            .into_iter()
            .filter(|d| d.total() == level)
            .collect();
        let results: Vec<Result<BTreeMap<i64, Block>>> = self.map_dims(&dims);
        for (d, r) in dims.into_iter().zip(results) {
            self.blocks.insert(d, r?);
        }
        self.level = level;
        Ok(())
    }

    #[cfg(feature = "parallel")]
    fn map_dims(&self, dims: &[DimVector]) -> Vec<Result<BTreeMap<i64, Block>>> {
        if self.config.parallel {
            dims.par_iter().map(|d| self.compute_blocks(d)).collect()
        } else {
            dims.iter().map(|d| self.compute_blocks(d)).collect()
        }
    }

    #[cfg(not(feature = "parallel"))]
    fn map_dims(&self, dims: &[DimVector]) -> Vec<Result<BTreeMap<i64, Block>>> {
        dims.iter().map(|d| self.compute_blocks(d)).collect()
    }

    /// Dimensions at `d` coming from brackets of length at least two.
    pub fn bracket_dims(&self, d: &DimVector) -> QPoly {
        let mut p = QPoly::zero();
        if let Some(blocks) = self.blocks.get(d) {
            for (j, b) in blocks {
                let dim = b.free - b.ideal.rank() as u128;
                p.add_term(*j, &rat(dim as i64));
            }
        }
        p
    }

    /// Full block dimensions: brackets plus generators.
    pub fn dims(&self, d: &DimVector) -> QPoly {
        let mut p = self.bracket_dims(d);
        for g in self.gens.iter().filter(|g| g.root == *d) {
            p.add_term(g.j, &rat(1));
        }
        p
    }

    /// All computed `(d, j) -> dim` entries with nonzero dimension.
    pub fn dim_table(&self) -> BTreeMap<(DimVector, i64), u64> {
        let mut out = BTreeMap::new();
        for d in DimVector::all_up_to(self.cartan.rank(), self.level, self.caps.as_ref()) {
            for (j, c) in self.dims(&d).terms() {
                let n: u64 = c.to_integer().try_into().expect("dimension fits u64");
                out.insert((d.clone(), j), n);
            }
        }
        out
    }

    /// Dimensions of the `U(n+)`-submodule generated by the generator `seed`
    /// under the generators selected by `acting`, keyed by the offset from
    /// the seed's degree. Requires every level up to the bound.
    pub fn cyclic_submodule(
        &self,
        seed: usize,
        acting: &dyn Fn(&Generator) -> bool,
    ) -> Result<BTreeMap<DimVector, QPoly>> {
        if self.level < self.bound {
            return Err(Error::Internal("cyclic submodule needs all levels".into()));
        }
        let s = &self.gens[seed];
        let mut spans: BTreeMap<(DimVector, i64), Vec<SparseVec>> = BTreeMap::new();
        let mut single = SparseVec::new();
        single.insert(vec![s.letter], rat(1));
        spans.insert((s.root.clone(), s.j), vec![single]);
        let mut out: BTreeMap<DimVector, QPoly> = BTreeMap::new();
        out.insert(DimVector::zero(s.root.rank()), QPoly::one());

        let acting: Vec<&Generator> = self.gens.iter().filter(|g| acting(g)).collect();
        for e in DimVector::all_up_to(self.cartan.rank(), self.bound, self.caps.as_ref()) {
            if e.total() <= s.root.total() || !s.root.fits_in(&e) || !self.in_domain(&e) {
                continue;
            }
            let mut by_j: BTreeMap<i64, Vec<SparseVec>> = BTreeMap::new();
            for g in &acting {
                let Some(lower) = e.checked_sub(&g.root) else {
                    continue;
                };
                for ((_, lj), vs) in spans.range((lower.clone(), i64::MIN)..=(lower.clone(), i64::MAX)) {
                    for v in vs {
                        by_j.entry(lj + g.j).or_default().push(bracket_letter(g.letter, v));
                    }
                }
            }
            for (j, candidates) in by_j {
                let mut ech = self
                    .blocks
                    .get(&e)
                    .and_then(|b| b.get(&j))
                    .map(|b| b.ideal.clone())
                    .unwrap_or_default();
                let mut kept = vec![];
                for v in candidates {
                    let r = ech.reduce(v);
                    if !r.is_empty() && ech.insert(r.clone()) {
                        kept.push(r);
                    }
                }
                if !kept.is_empty() {
                    let offset = e.checked_sub(&s.root).expect("seed fits");
                    out.entry(offset)
                        .or_default()
                        .add_term(j - s.j, &rat(kept.len() as i64));
                    spans.insert((e.clone(), j), kept);
                }
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lyndon_counts() {
        // Witt numbers for two letters: 2, 1, 2, 3, 6
        let total = |n: u32| {
            (0..=n)
                .map(|a| lyndon_count(&[a, n - a].iter().copied().filter(|&x| x > 0).collect::<Vec<_>>()))
                .sum::<u128>()
        };
        assert_eq!((1..=5).map(total).collect::<Vec<_>>(), vec![2, 1, 2, 3, 6]);
        assert_eq!(lyndon_count(&[2]), 0);
        assert_eq!(lyndon_count(&[1, 1, 1]), 2);
        assert_eq!(mobius(1), 1);
        assert_eq!(mobius(4), 0);
        assert_eq!(mobius(6), 1);
        assert_eq!(mobius(7), -1);
    }
}
