//! Root theory of the symmetrised Euler form.
//!
//! `p(d) = 2 - (d,d)`. The primitive positive roots `Sigma` are the `d` with
//! `p(d) >= 0` and `p(d)` strictly larger than `sum p(d_j)` over every
//! nontrivial decomposition `d = sum d_j`. The simple positive roots add the
//! multiples of isotropic members of `Sigma`.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quiver::{DimVector, Quiver};

/// Symmetric integer matrix of a bilinear form on the standard basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanDatum {
    matrix: Vec<Vec<i64>>,
}

impl CartanDatum {
    pub fn new(matrix: Vec<Vec<i64>>) -> Result<Self> {
        let n = matrix.len();
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidArgument("Cartan matrix is not square".into()));
            }
            if row[i] % 2 != 0 {
                return Err(Error::InvalidArgument("Cartan diagonal must be even".into()));
            }
            for j in 0..n {
                if matrix[j][i] != row[j] {
                    return Err(Error::InvalidArgument("Cartan matrix is not symmetric".into()));
                }
            }
        }
        Ok(CartanDatum { matrix })
    }

    /// The matrix of `(1_i, 1_j)_Q`.
    pub fn from_quiver(q: &Quiver) -> Self {
        let n = q.rank();
        let units: Vec<DimVector> = (0..n).map(|i| DimVector::unit(n, i)).collect();
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| q.sym_form(&units[i], &units[j]).expect("same rank"))
                    .collect()
            })
            .collect();
        CartanDatum { matrix }
    }

    pub fn rank(&self) -> usize {
        self.matrix.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.matrix[i][j]
    }

    /// Basis vectors with `(1_i,1_i) = 2`, the loop-free vertices of a quiver.
    pub fn is_real_capable(&self, i: usize) -> bool {
        self.matrix[i][i] == 2
    }

    pub fn form(&self, d: &DimVector, e: &DimVector) -> i64 {
        self.form_i64(&d.as_i64(), &e.as_i64())
    }

    pub fn form_i64(&self, d: &[i64], e: &[i64]) -> i64 {
        let mut total = 0;
        for i in 0..self.rank() {
            if d[i] == 0 {
                continue;
            }
            for j in 0..self.rank() {
                total += d[i] * self.matrix[i][j] * e[j];
            }
        }
        total
    }

    /// `p(d) = 2 - (d,d)`.
    pub fn p(&self, d: &DimVector) -> i64 {
        2 - self.form(d, d)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RootClass {
    Real,
    Isotropic,
    Hyperbolic,
}

impl RootClass {
    pub fn of_norm(norm: i64) -> RootClass {
        match norm {
            2 => RootClass::Real,
            0 => RootClass::Isotropic,
            _ => RootClass::Hyperbolic,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            RootClass::Real => "real",
            RootClass::Isotropic => "isotropic",
            RootClass::Hyperbolic => "hyperbolic",
        }
    }
}

/// One member of `Phi+`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootEntry {
    pub dim: DimVector,
    pub class: RootClass,
    pub p: i64,
    pub in_sigma: bool,
    /// `dim = multiplier * primitive`; the primitive is `dim` itself unless isotropic.
    pub primitive: DimVector,
    pub multiplier: u32,
}

/// `Sigma` and `Phi+` up to a total-degree bound, with an optional componentwise cap.
#[derive(Clone, Debug)]
pub struct RootTables {
    cartan: CartanDatum,
    bound: u32,
    caps: Option<DimVector>,
    best: HashMap<DimVector, i64>,
    sigma: BTreeSet<DimVector>,
    phi: BTreeMap<DimVector, RootEntry>,
}

/// `best(d) = max(p(d), best(a) + best(b))` over splits, and the split maximum alone.
fn best_and_split(c: &CartanDatum, d: &DimVector, best: &HashMap<DimVector, i64>) -> (i64, Option<i64>) {
    let mut split: Option<i64> = None;
    for a in d.sub_vectors() {
        if a.is_zero() || a == *d {
            continue;
        }
        let b = d.checked_sub(&a).expect("a <= d");
        if b < a {
            continue;
        }
        let v = best[&a] + best[&b];
        split = Some(split.map_or(v, |s| s.max(v)));
    }
    let p = c.p(d);
    (split.map_or(p, |s| s.max(p)), split)
}

impl RootTables {
    pub fn compute(cartan: &CartanDatum, bound: u32, caps: Option<&DimVector>) -> Self {
        let rank = cartan.rank();
        let mut best = HashMap::new();
        let mut sigma = BTreeSet::new();
        for d in DimVector::all_up_to(rank, bound, caps).into_iter().skip(1) {
            let (b, split) = best_and_split(cartan, &d, &best);
            let p = cartan.p(&d);
            if p >= 0 && split.is_none_or(|s| p > s) {
                sigma.insert(d.clone());
            }
            best.insert(d, b);
        }
        let mut phi = BTreeMap::new();
        for m in &sigma {
            let norm = cartan.form(m, m);
            let class = RootClass::of_norm(norm);
            let mut l = 1;
            loop {
                let dim = m.scale(l);
                let fits = dim.total() <= bound && caps.is_none_or(|c| dim.fits_in(c));
                if !fits || (l > 1 && class != RootClass::Isotropic) {
                    break;
                }
                phi.insert(
                    dim.clone(),
                    RootEntry {
                        p: cartan.p(&dim),
                        in_sigma: l == 1,
                        dim,
                        class,
                        primitive: m.clone(),
                        multiplier: l,
                    },
                );
                l += 1;
            }
        }
        RootTables {
            cartan: cartan.clone(),
            bound,
            caps: caps.cloned(),
            best,
            sigma,
            phi,
        }
    }

    pub fn for_quiver(q: &Quiver, bound: u32) -> Self {
        RootTables::compute(&CartanDatum::from_quiver(q), bound, None)
    }

    pub fn cartan(&self) -> &CartanDatum {
        &self.cartan
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn caps(&self) -> Option<&DimVector> {
        self.caps.as_ref()
    }

    pub fn in_sigma(&self, d: &DimVector) -> bool {
        self.sigma.contains(d)
    }

    pub fn sigma(&self) -> impl Iterator<Item = &DimVector> {
        self.sigma.iter()
    }

    /// `Phi+` in graded order.
    pub fn phi_plus(&self) -> impl Iterator<Item = &RootEntry> {
        self.phi.values()
    }

    pub fn entry(&self, d: &DimVector) -> Option<&RootEntry> {
        self.phi.get(d)
    }

    pub fn is_simple_root(&self, d: &DimVector) -> bool {
        self.phi.contains_key(d)
    }

    pub fn best(&self, d: &DimVector) -> Option<i64> {
        self.best.get(d).copied()
    }
}

/// Membership of `d` in `Sigma`, computed by the dynamic program on the sub-vectors of `d`.
pub fn sigma_membership(c: &CartanDatum, d: &DimVector) -> Result<bool> {
    if d.is_zero() {
        return Err(Error::InvalidArgument("zero dimension vector".into()));
    }
    if d.rank() != c.rank() {
        return Err(Error::DimensionMismatch {
            expected: c.rank(),
            found: d.rank(),
        });
    }
    let mut best = HashMap::new();
    for e in d.sub_vectors().into_iter().skip(1) {
        if e == *d {
            let (_, split) = best_and_split(c, &e, &best);
            let p = c.p(&e);
            return Ok(p >= 0 && split.is_none_or(|s| p > s));
        }
        let (b, _) = best_and_split(c, &e, &best);
        best.insert(e, b);
    }
    unreachable!("d is its own largest sub-vector")
}

/// `s_i(d) = d - (1_i, d) 1_i` on lattice vectors.
pub fn reflect_lattice(q: &Quiver, i: usize, d: &[i64]) -> Result<Vec<i64>> {
    if i >= q.rank() {
        return Err(Error::InvalidArgument(format!("vertex {i} out of range")));
    }
    if !q.is_loop_free(i) {
        return Err(Error::LoopVertex(i));
    }
    let mut unit = vec![0; q.rank()];
    unit[i] = 1;
    let mut out = d.to_vec();
    out[i] -= q.sym_form_i64(&unit, d);
    Ok(out)
}

/// Weyl reflection of a dimension vector; the result may leave the positive orthant.
pub fn weyl_reflect(q: &Quiver, i: usize, d: &DimVector) -> Result<Vec<i64>> {
    if d.rank() != q.rank() {
        return Err(Error::DimensionMismatch {
            expected: q.rank(),
            found: d.rank(),
        });
    }
    reflect_lattice(q, i, &d.as_i64())
}

/// Converts a lattice vector back to a dimension vector when it is nonnegative.
pub fn to_dim(v: &[i64]) -> Option<DimVector> {
    v.iter()
        .map(|&x| u32::try_from(x).ok())
        .collect::<Option<Vec<_>>>()
        .map(DimVector::new)
}

/// Connected support and `(d, 1_i) <= 0` at every loop-free vertex.
pub fn fundamental_cone_membership(q: &Quiver, d: &DimVector) -> Result<bool> {
    if d.is_zero() {
        return Err(Error::InvalidArgument("zero dimension vector".into()));
    }
    if d.rank() != q.rank() {
        return Err(Error::DimensionMismatch {
            expected: q.rank(),
            found: d.rank(),
        });
    }
    if !q.support_connected(d) {
        return Ok(false);
    }
    Ok((0..q.rank())
        .filter(|&i| q.is_loop_free(i))
        .all(|i| q.sym_form(d, &DimVector::unit(q.rank(), i)).expect("same rank") <= 0))
}

/// Positive roots with `|d| <= bound`: the Weyl closure of the real simple
/// roots and the fundamental cone, inside the box `|d| <= 2 * bound`.
pub fn positive_roots(q: &Quiver, bound: u32) -> BTreeSet<DimVector> {
    let n = q.rank();
    let box_bound = 2 * bound;
    let mut seen: BTreeSet<DimVector> = BTreeSet::new();
    let mut queue = VecDeque::new();
    for i in 0..n {
        let u = DimVector::unit(n, i);
        if seen.insert(u.clone()) {
            queue.push_back(u);
        }
    }
    for d in DimVector::all_up_to(n, box_bound, None).into_iter().skip(1) {
        if fundamental_cone_membership(q, &d).unwrap_or(false) && seen.insert(d.clone()) {
            queue.push_back(d);
        }
    }
    while let Some(d) = queue.pop_front() {
        for i in (0..n).filter(|&i| q.is_loop_free(i)) {
            let r = weyl_reflect(q, i, &d).expect("loop-free vertex");
            if let Some(e) = to_dim(&r) {
                if !e.is_zero() && e.total() <= box_bound && seen.insert(e.clone()) {
                    queue.push_back(e);
                }
            }
        }
    }
    seen.into_iter().filter(|d| d.total() <= bound).collect()
}

/// Root test by descent: reflect while some loop-free `(d,1_i) > 0`.
pub fn is_root_by_descent(q: &Quiver, d: &DimVector) -> bool {
    let n = q.rank();
    let mut cur = d.clone();
    loop {
        if cur.total() == 1 {
            return true;
        }
        if fundamental_cone_membership(q, &cur).unwrap_or(false) {
            return true;
        }
        let step = (0..n)
            .filter(|&i| q.is_loop_free(i))
            .find(|&i| q.sym_form(&cur, &DimVector::unit(n, i)).expect("same rank") > 0);
        let Some(i) = step else {
            return false;
        };
        match to_dim(&weyl_reflect(q, i, &cur).expect("loop-free")) {
            Some(next) if !next.is_zero() => cur = next,
            _ => return false,
        }
    }
}

/// Canonical decomposition as sorted `(part, multiplicity)` pairs.
pub fn canonical_decomposition(q: &Quiver, d: &DimVector) -> Result<Vec<(DimVector, u32)>> {
    let tables = RootTables::for_quiver(q, d.total());
    canonical_decomposition_with(&tables, d, &|_| {})
}

/// Merge scan on sub-multisets of size 2..=4. `permute` reorders candidate
/// merges within each size, which lets tests check order independence.
pub fn canonical_decomposition_with(
    tables: &RootTables,
    d: &DimVector,
    permute: &dyn Fn(&mut Vec<Vec<usize>>),
) -> Result<Vec<(DimVector, u32)>> {
    if d.is_zero() {
        return Err(Error::InvalidArgument("zero dimension vector".into()));
    }
    if d.rank() != tables.cartan.rank() {
        return Err(Error::DimensionMismatch {
            expected: tables.cartan.rank(),
            found: d.rank(),
        });
    }
    if d.total() > tables.bound {
        return Err(Error::InvalidArgument(format!("{d} exceeds the root table bound")));
    }
    let n = d.rank();
    let mut parts: Vec<DimVector> = vec![];
    for i in 0..n {
        parts.extend(std::iter::repeat_n(DimVector::unit(n, i), d.get(i) as usize));
    }
    'outer: loop {
        parts.sort();
        for k in 2..=4.min(parts.len()) {
            let mut combos = combinations(parts.len(), k);
            combos.dedup_by(|a, b| a.iter().map(|&i| &parts[i]).eq(b.iter().map(|&i| &parts[i])));
            permute(&mut combos);
            for combo in combos {
                let sum = combo.iter().fold(DimVector::zero(n), |acc, &i| acc.add(&parts[i]));
                if tables.in_sigma(&sum) {
                    for &i in combo.iter().rev() {
                        parts.remove(i);
                    }
                    parts.push(sum);
                    continue 'outer;
                }
            }
        }
        break;
    }
    let mut out: BTreeMap<DimVector, u32> = BTreeMap::new();
    for p in parts {
        *out.entry(p).or_default() += 1;
    }
    Ok(out.into_iter().collect())
}

/// All `k`-subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// All multisets of `Sigma` members summing to `d`, each as a sorted list.
pub fn sigma_decompositions(tables: &RootTables, d: &DimVector) -> Vec<Vec<DimVector>> {
    let members: Vec<DimVector> = tables.sigma().filter(|m| m.fits_in(d)).cloned().collect();
    let mut out = vec![];
    fn rec(
        members: &[DimVector],
        start: usize,
        rest: &DimVector,
        cur: &mut Vec<DimVector>,
        out: &mut Vec<Vec<DimVector>>,
    ) {
        if rest.is_zero() {
            out.push(cur.clone());
            return;
        }
        for (i, m) in members.iter().enumerate().skip(start) {
            if let Some(r) = rest.checked_sub(m) {
                cur.push(m.clone());
                rec(members, i, &r, cur, out);
                cur.pop();
            }
        }
    }
    rec(&members, 0, d, &mut vec![], &mut out);
    out
}

/// True if the parts of `fine` can be grouped so the groups sum to the parts of `coarse`.
pub fn refines(fine: &[DimVector], coarse: &[DimVector]) -> bool {
    fn rec(fine: &[DimVector], idx: usize, bins: &mut Vec<DimVector>) -> bool {
        if idx == fine.len() {
            return bins.iter().all(|b| b.is_zero());
        }
        for j in 0..bins.len() {
            if j > 0 && bins[j] == bins[j - 1] {
                continue;
            }
            if let Some(r) = bins[j].checked_sub(&fine[idx]) {
                let old = std::mem::replace(&mut bins[j], r);
                if rec(fine, idx + 1, bins) {
                    return true;
                }
                bins[j] = old;
            }
        }
        false
    }
    let mut bins = coarse.to_vec();
    bins.sort();
    let mut fine = fine.to_vec();
    fine.sort_by(|a, b| b.cmp(a));
    rec(&fine, 0, &mut bins)
}


#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn reflections_are_isometric_involutions(
            arrows in prop::collection::vec((0usize..3, 0usize..3), 0..6),
            v in prop::collection::vec(-4i64..6, 3),
            i in 0usize..3,
        ) {
            let q = Quiver::from_arrows(3, &arrows);
            prop_assume!(q.is_loop_free(i));
            let r = reflect_lattice(&q, i, &v).unwrap();
            prop_assert_eq!(q.sym_form_i64(&r, &r), q.sym_form_i64(&v, &v));
            prop_assert_eq!(reflect_lattice(&q, i, &r).unwrap(), v);
        }
    }
}
