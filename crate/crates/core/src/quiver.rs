//! Quivers, dimension vectors and the Euler form.
//!
//! A [`Quiver`] keeps its vertices in input order; that order fixes the
//! coordinates of every [`DimVector`] and the row order of every table the
//! crate produces.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A dimension vector, with coordinates in the vertex order of its quiver.
///
/// The total order is graded: first by total dimension `|d|`, then
/// lexicographically. Every table in the crate is sorted this way.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct DimVector(Vec<u32>);

impl DimVector {
    pub fn new(entries: Vec<u32>) -> Self {
        DimVector(entries)
    }

    pub fn zero(rank: usize) -> Self {
        DimVector(vec![0; rank])
    }

    pub fn unit(rank: usize, i: usize) -> Self {
        let mut v = vec![0; rank];
        v[i] = 1;
        DimVector(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    /// Componentwise `self <= other`.
    pub fn fits_in(&self, other: &DimVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| self.0[i] > 0).collect()
    }

    pub fn add(&self, other: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self - other`, or `None` when some coordinate would go negative.
    pub fn checked_sub(&self, other: &DimVector) -> Option<DimVector> {
        if self.0.len() != other.0.len() {
            return None;
        }
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(DimVector)
    }

    pub fn scale(&self, k: u32) -> DimVector {
        DimVector(self.0.iter().map(|a| a * k).collect())
    }

    /// Exact quotient `self / k` if every coordinate is divisible by `k`.
    pub fn div_exact(&self, k: u32) -> Option<DimVector> {
        if k == 0 || self.0.iter().any(|a| a % k != 0) {
            return None;
        }
        Some(DimVector(self.0.iter().map(|a| a / k).collect()))
    }

    /// Greatest common divisor of the coordinates (0 for the zero vector).
    pub fn content(&self) -> u32 {
        self.0.iter().fold(0, |g, &a| num_integer::gcd(g, a))
    }

    /// Appends one coordinate, e.g. the framing vertex.
    pub fn extend(&self, last: u32) -> DimVector {
        let mut v = self.0.clone();
        v.push(last);
        DimVector(v)
    }

    /// Drops the last coordinate.
    pub fn truncate_last(&self) -> DimVector {
        DimVector(self.0[..self.0.len() - 1].to_vec())
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&a| a as i64).collect()
    }

    /// All `e` with `0 <= e <= self` componentwise, in graded order.
    pub fn sub_vectors(&self) -> Vec<DimVector> {
        let mut out = vec![];
        let mut cur = vec![0u32; self.0.len()];
        loop {
            out.push(DimVector(cur.clone()));
            let mut i = 0;
            loop {
                if i == cur.len() {
                    out.sort();
                    return out;
                }
                if cur[i] < self.0[i] {
                    cur[i] += 1;
                    break;
                }
                cur[i] = 0;
                i += 1;
            }
        }
    }

    /// All dimension vectors of the given rank with `|d| <= bound`, in graded
    /// order, optionally restricted to a componentwise cap.
    pub fn all_up_to(rank: usize, bound: u32, caps: Option<&DimVector>) -> Vec<DimVector> {
        let mut out = vec![];
        let mut cur = vec![0u32; rank];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, caps: Option<&DimVector>, out: &mut Vec<DimVector>) {
            if i == cur.len() {
                out.push(DimVector(cur.clone()));
                return;
            }
            let max = caps.map_or(left, |c| c.0[i].min(left));
            for x in 0..=max {
                cur[i] = x;
                rec(i + 1, left - x, cur, caps, out);
            }
            cur[i] = 0;
        }
        rec(0, bound, &mut cur, caps, &mut out);
        out.sort();
        out
    }
}

impl Ord for DimVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total().cmp(&other.total()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for DimVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for DimVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::InvalidArgument(format!("bad dimension vector entry {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(DimVector)
    }
}

impl From<Vec<u32>> for DimVector {
    fn from(v: Vec<u32>) -> Self {
        DimVector(v)
    }
}

/// A finite quiver. Loops and parallel arrows are stored as repeated entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    vertices: Vec<String>,
    arrows: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct QuiverFile {
    vertices: Vec<String>,
    arrows: Vec<(String, String)>,
}

impl Quiver {
    /// Builds a quiver from vertex names and arrows given by vertex index.
    pub fn new(vertices: Vec<String>, arrows: Vec<(usize, usize)>) -> Result<Self> {
        let mut seen = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if seen.insert(v.as_str(), i).is_some() {
                return Err(Error::InvalidQuiver(format!("duplicate vertex {v:?}")));
            }
        }
        for &(s, t) in &arrows {
            if s >= vertices.len() || t >= vertices.len() {
                return Err(Error::InvalidQuiver(format!("arrow ({s},{t}) names a missing vertex")));
            }
        }
        Ok(Quiver { vertices, arrows })
    }

    /// Quiver with vertices named `0..n`.
    pub fn from_arrows(n: usize, arrows: &[(usize, usize)]) -> Self {
        Quiver::new((0..n).map(|i| i.to_string()).collect(), arrows.to_vec()).expect("arrow endpoints in range")
    }

    /// One vertex with `g` loops.
    pub fn loops(g: usize) -> Self {
        Quiver::from_arrows(1, &vec![(0, 0); g])
    }

    pub fn jordan() -> Self {
        Quiver::loops(1)
    }

    pub fn a2() -> Self {
        Quiver::from_arrows(2, &[(0, 1)])
    }

    pub fn kronecker() -> Self {
        Quiver::from_arrows(2, &[(0, 1), (0, 1)])
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: QuiverFile =
            serde_json::from_str(text).map_err(|e| Error::InvalidQuiver(format!("malformed quiver file: {e}")))?;
        let index: HashMap<&str, usize> = file.vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| Error::InvalidQuiver(format!("arrow endpoint {name:?} is not a vertex")))
        };
        let arrows = file
            .arrows
            .iter()
            .map(|(s, t)| Ok((lookup(s)?, lookup(t)?)))
            .collect::<Result<Vec<_>>>()?;
        Quiver::new(file.vertices.clone(), arrows)
    }

    pub fn to_json(&self) -> String {
        let file = QuiverFile {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|&(s, t)| (self.vertices[s].clone(), self.vertices[t].clone()))
                .collect(),
        };
        serde_json::to_string(&file).expect("quiver serialises")
    }

    pub fn rank(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    /// Number of loops at vertex `i`.
    pub fn loops_at(&self, i: usize) -> usize {
        self.arrows.iter().filter(|&&(s, t)| s == i && t == i).count()
    }

    /// Number of arrows `i -> j`.
    pub fn arrows_between(&self, i: usize, j: usize) -> usize {
        self.arrows.iter().filter(|&&(s, t)| s == i && t == j).count()
    }

    pub fn is_loop_free(&self, i: usize) -> bool {
        self.loops_at(i) == 0
    }

    fn check(&self, d: &DimVector) -> Result<()> {
        if d.rank() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: d.rank(),
            });
        }
        Ok(())
    }

    /// The Euler form `sum_i d_i e_i - sum_a d_s(a) e_t(a)`.
    pub fn euler_form(&self, d: &DimVector, e: &DimVector) -> Result<i64> {
        self.check(d)?;
        self.check(e)?;
        let diag: i64 = d.0.iter().zip(&e.0).map(|(&a, &b)| a as i64 * b as i64).sum();
        let off: i64 = self.arrows.iter().map(|&(s, t)| d.0[s] as i64 * e.0[t] as i64).sum();
        Ok(diag - off)
    }

    /// The symmetrised Euler form `(d,e) = chi(d,e) + chi(e,d)`.
    pub fn sym_form(&self, d: &DimVector, e: &DimVector) -> Result<i64> {
        Ok(self.euler_form(d, e)? + self.euler_form(e, d)?)
    }

    /// Symmetrised Euler form on integer (possibly negative) vectors.
    pub fn sym_form_i64(&self, d: &[i64], e: &[i64]) -> i64 {
        let mut total = 0;
        for i in 0..self.rank() {
            total += 2 * d[i] * e[i];
        }
        for &(s, t) in &self.arrows {
            total -= d[s] * e[t] + e[s] * d[t];
        }
        total
    }

    /// Adds the reversed arrow `a*` for every arrow `a`.
    pub fn double(&self) -> Quiver {
        let mut arrows = self.arrows.clone();
        arrows.extend(self.arrows.iter().map(|&(s, t)| (t, s)));
        Quiver {
            vertices: self.vertices.clone(),
            arrows,
        }
    }

    /// The double with one extra loop at each vertex.
    pub fn triple(&self) -> Quiver {
        let mut q = self.double();
        q.arrows.extend((0..self.rank()).map(|i| (i, i)));
        q
    }

    /// Name of the framing vertex added by [`Quiver::frame`].
    pub fn framing_vertex_name(&self) -> String {
        let mut name = "∞".to_string();
        while self.vertices.contains(&name) {
            name.push('\'');
        }
        name
    }

    /// The framed quiver: a new last vertex with `f_i` arrows to each `i`.
    pub fn frame(&self, f: &DimVector) -> Result<Quiver> {
        self.check(f)?;
        let inf = self.rank();
        let mut vertices = self.vertices.clone();
        vertices.push(self.framing_vertex_name());
        let mut arrows = self.arrows.clone();
        for i in 0..self.rank() {
            arrows.extend(std::iter::repeat_n((inf, i), f.0[i] as usize));
        }
        Ok(Quiver { vertices, arrows })
    }

    /// Reverses a single arrow.
    pub fn reverse_arrow(&self, index: usize) -> Quiver {
        let mut q = self.clone();
        let (s, t) = q.arrows[index];
        q.arrows[index] = (t, s);
        q
    }

    /// True when the full subquiver on `d`'s support is connected.
    pub fn support_connected(&self, d: &DimVector) -> bool {
        let support = d.support();
        let Some(&start) = support.first() else {
            return false;
        };
        let mut seen = vec![false; self.rank()];
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for &(s, t) in &self.arrows {
                for (a, b) in [(s, t), (t, s)] {
                    if a == v && d.0[b] > 0 && !seen[b] {
                        seen[b] = true;
                        stack.push(b);
                    }
                }
            }
        }
        support.iter().all(|&i| seen[i])
    }

    /// Parses a comma separated dimension vector for this quiver.
    pub fn parse_dim(&self, s: &str) -> Result<DimVector> {
        let d: DimVector = s.parse()?;
        self.check(&d)?;
        Ok(d)
    }
}
