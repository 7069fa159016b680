//! Kac polynomials from Hua's generating sum.
//!
//! With `t = q^{-1}` the term of a multipartition `pi` is
//! `t^{-E(pi)} / prod_i prod_k (t;t)_{m_k(pi_i)}` where
//! `E(pi) = sum_a <pi_s, pi_t> - sum_i <pi_i, pi_i>` and `<l, m> = sum_k l'_k m'_k`.
//! Substituting `z^d -> z^d t^{s|d|}` with `s >= E(pi)/|pi|` for every `pi`
//! puts all coefficients in `Q[[t]]`; the substitution commutes with the
//! Adams operations, so `Log` can run on the twisted series.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{Flavour, HuaConvention, KacTable};
use crate::error::{Error, Result};
use crate::poly::{rat, QPoly};
use crate::quiver::{DimVector, Quiver};
use crate::series::{Mode, Ring, Series, TPoly};

/// Extra `t`-precision kept beyond the largest exponent that is read back.
const PRECISION_MARGIN: u32 = 3;

/// An integer partition with its conjugate.
#[derive(Clone, Debug)]
struct Partition {
    index: usize,
    size: u32,
    conj: Vec<u32>,
    parts: Vec<u32>,
}

impl Partition {
    fn new(parts: Vec<u32>) -> Self {
        let size = parts.iter().sum();
        let max = parts.first().copied().unwrap_or(0);
        let conj = (1..=max)
            .map(|k| parts.iter().filter(|&&p| p >= k).count() as u32)
            .collect();
        Partition {
            index: 0,
            size,
            conj,
            parts,
        }
    }

    /// Multiplicities `m_k` of every part size that occurs.
    fn multiplicities(&self) -> Vec<u32> {
        let mut out = vec![];
        let mut i = 0;
        while i < self.parts.len() {
            let j = (i..self.parts.len())
                .find(|&j| self.parts[j] != self.parts[i])
                .unwrap_or(self.parts.len());
            out.push((j - i) as u32);
            i = j;
        }
        out
    }
}

/// `<l, m> = sum_k l'_k m'_k`.
fn pairing(a: &Partition, b: &Partition) -> i64 {
    a.conj.iter().zip(&b.conj).map(|(&x, &y)| x as i64 * y as i64).sum()
}

/// Partitions of every size `0..=n`, parts descending.
fn partitions_up_to(n: u32) -> Vec<Partition> {
    let mut out = vec![];
    fn rec(left: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        out.push(Partition::new(cur.clone()));
        for p in (1..=max.min(left)).rev() {
            cur.push(p);
            rec(left - p, p, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut vec![], &mut out);
    for (i, p) in out.iter_mut().enumerate() {
        p.index = i;
    }
    out
}

/// Calls `visit` on every multipartition of total size `1..=bound` within `caps`.
fn for_each_multipartition(
    rank: usize,
    bound: u32,
    caps: Option<&DimVector>,
    parts: &[Partition],
    visit: &mut dyn FnMut(&[&Partition]),
) {
    fn rec<'a>(
        i: usize,
        rank: usize,
        left: u32,
        caps: Option<&DimVector>,
        parts: &'a [Partition],
        cur: &mut Vec<&'a Partition>,
        visit: &mut dyn FnMut(&[&Partition]),
    ) {
        if i == rank {
            if cur.iter().any(|p| p.size > 0) {
                visit(cur);
            }
            return;
        }
        let cap = caps.map_or(left, |c| c.get(i).min(left));
        for p in parts.iter().filter(|p| p.size <= cap) {
            cur.push(p);
            rec(i + 1, rank, left - p.size, caps, parts, cur, visit);
            cur.pop();
        }
    }
    let mut cur = Vec::with_capacity(rank);
    rec(0, rank, bound, caps, parts, &mut cur, visit);
}

fn exponent(q: &Quiver, pi: &[&Partition]) -> i64 {
    let arrows: i64 = q.arrows().iter().map(|&(s, t)| pairing(pi[s], pi[t])).sum();
    let diag: i64 = pi.iter().map(|p| pairing(p, p)).sum();
    arrows - diag
}

/// `1 / prod_k (t;t)_{m_k}` modulo `t^prec`.
fn inverse_q_factorials(p: &Partition, prec: u32) -> TPoly {
    let mut prod = TPoly::new(vec![rat(1)], prec);
    for m in p.multiplicities() {
        for j in 1..=m as usize {
            let mut c = vec![BigRational::zero(); j + 1];
            c[0] = rat(1);
            c[j] = rat(-1);
            prod = prod.mul(&TPoly::new(c, prec));
        }
    }
    prod.inverse().expect("constant term 1")
}

/// The twisted Hua sum and its twist `s`.
pub(crate) fn twisted_sum(q: &Quiver, bound: u32, caps: Option<&DimVector>) -> (Series<TPoly>, u32, u32) {
    let rank = q.rank();
    let parts = partitions_up_to(bound);
    let mut s: i64 = 0;
    for_each_multipartition(rank, bound, caps, &parts, &mut |pi| {
        let size: i64 = pi.iter().map(|p| p.size as i64).sum();
        let e = exponent(q, pi);
        s = s.max((e + size - 1).div_euclid(size));
    });
    let s = s as u32;
    let prec = s * bound + 2 + PRECISION_MARGIN;
    let factorials: Vec<TPoly> = parts.iter().map(|p| inverse_q_factorials(p, prec)).collect();

    let mut sum: Series<TPoly> = Series::with_caps(rank, bound, caps.cloned());
    sum.set(DimVector::zero(rank), TPoly::new(vec![rat(1)], prec));
    for_each_multipartition(rank, bound, caps, &parts, &mut |pi| {
        let d = DimVector::new(pi.iter().map(|p| p.size).collect());
        let shift = s as i64 * d.total() as i64 - exponent(q, pi);
        let mut term = TPoly::t_pow(shift as usize).with_prec(prec);
        for p in pi {
            if p.size > 0 {
                term = term.mul(&factorials[p.index]);
            }
        }
        sum.add_at(&d, &term);
    });
    (sum, s, prec)
}

/// Kac polynomials `A_{Q,d}` for `|d| <= bound` (within `caps`) by Hua's formula.
pub fn hua_kac_with(q: &Quiver, bound: u32, caps: Option<&DimVector>, convention: HuaConvention) -> Result<KacTable> {
    if bound == 0 {
        return Err(Error::InvalidArgument("bound must be at least 1".into()));
    }
    let (sum, s, prec) = twisted_sum(q, bound, caps);
    let log = sum.pleth_log(Mode::QZ)?;
    let one_minus_t = TPoly::new(vec![rat(1), rat(-1)], TPoly::EXACT);
    let mut table = KacTable::new(q.clone(), bound, caps.cloned(), Flavour::Plain);
    for d in sum.domain().into_iter().skip(1) {
        let f = log.coeff(&d);
        let (g, top) = match convention {
            HuaConvention::QMinusOneLog => (f.mul(&one_minus_t), s * d.total() + 1),
            HuaConvention::RawSumIsCount => (f, s * d.total()),
        };
        for j in top + 1..prec {
            if !g.coeff(j as usize).is_zero() {
                return Err(Error::assertion(&d, "Hua sum is not a polynomial in q"));
            }
        }
        let mut a = QPoly::zero();
        for j in 0..=top {
            a.add_term(2 * (top - j) as i64, &g.coeff(j as usize));
        }
        if !a.has_integer_coeffs() {
            return Err(Error::assertion(&d, format!("non-integral Kac polynomial {a}")));
        }
        if a.terms().any(|(_, c)| c.is_negative()) {
            return Err(Error::assertion(&d, format!("negative Kac coefficient in {a}")));
        }
        table.insert(d, a);
    }
    Ok(table)
}
