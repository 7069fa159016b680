//! Truncated multigraded power series and plethystic `Exp`/`Log`.
//!
//! A [`Series`] is a finite map from dimension vectors to coefficients,
//! truncated at total degree `bound`. An optional componentwise cap further
//! restricts the domain; monomials outside a cap form an ideal, so every
//! operation here is compatible with it.

use std::collections::BTreeMap;
use std::fmt::Debug;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{rat, QPoly};
use crate::quiver::DimVector;

/// Which variables the Adams operations `psi_n` act on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// `z -> z^n` only.
    ZOnly,
    /// `z -> z^n` and `q -> q^n`.
    QZ,
}

/// Coefficient ring of a [`Series`].
pub trait Ring: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, other: &Self);
    fn sub_assign(&mut self, other: &Self);
    fn mul(&self, other: &Self) -> Self;
    fn scale(&self, r: &BigRational) -> Self;
    /// Adams operation on the coefficient variable, `q -> q^n` for `n >= 1`.
    fn psi(&self, n: i64) -> Self;
    /// Multiplicative inverse, if this element is a unit.
    fn inverse(&self) -> Option<Self>;
}

impl Ring for QPoly {
    fn zero() -> Self {
        QPoly::zero()
    }
    fn one() -> Self {
        QPoly::one()
    }
    fn is_zero(&self) -> bool {
        QPoly::is_zero(self)
    }
    fn add_assign(&mut self, other: &Self) {
        QPoly::add_assign(self, other)
    }
    fn sub_assign(&mut self, other: &Self) {
        QPoly::sub_assign(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn scale(&self, r: &BigRational) -> Self {
        QPoly::scale(self, r)
    }
    fn psi(&self, n: i64) -> Self {
        self.substitute_power(n)
    }
    fn inverse(&self) -> Option<Self> {
        if self.len() != 1 {
            return None;
        }
        let (k, c) = self.terms().next()?;
        Some(QPoly::monomial(-k, c.recip()))
    }
}

/// A power series in `t` known modulo `t^prec`.
///
/// `prec == u32::MAX` marks an exact polynomial; arithmetic keeps the
/// smaller precision of its operands.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TPoly {
    coeffs: Vec<BigRational>,
    prec: u32,
}

impl TPoly {
    pub const EXACT: u32 = u32::MAX;

    pub fn new(mut coeffs: Vec<BigRational>, prec: u32) -> Self {
        coeffs.truncate(prec.min(coeffs.len() as u32) as usize);
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        TPoly { coeffs, prec }
    }

    /// `t^e`, exact.
    pub fn t_pow(e: usize) -> Self {
        let mut c = vec![BigRational::zero(); e + 1];
        c[e] = rat(1);
        TPoly::new(c, TPoly::EXACT)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigRational {
        self.coeffs.get(i).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        TPoly::new(self.coeffs.clone(), self.prec.min(prec))
    }

    fn combine(&self, other: &Self, sign: i64) -> Self {
        let prec = self.prec.min(other.prec);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut c = Vec::with_capacity(n);
        for i in 0..n {
            let mut x = self.coeff(i);
            if sign > 0 {
                x += other.coeff(i);
            } else {
                x -= other.coeff(i);
            }
            c.push(x);
        }
        TPoly::new(c, prec)
    }
}

impl Ring for TPoly {
    fn zero() -> Self {
        TPoly::new(vec![], TPoly::EXACT)
    }
    fn one() -> Self {
        TPoly::new(vec![rat(1)], TPoly::EXACT)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
    fn add_assign(&mut self, other: &Self) {
        *self = self.combine(other, 1);
    }
    fn sub_assign(&mut self, other: &Self) {
        *self = self.combine(other, -1);
    }
    fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.min(other.prec);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return TPoly::new(vec![], prec);
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(prec as usize);
        let mut c = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                c[i + j] += a * b;
            }
        }
        TPoly::new(c, prec)
    }
    fn scale(&self, r: &BigRational) -> Self {
        TPoly::new(self.coeffs.iter().map(|c| c * r).collect(), self.prec)
    }
    fn psi(&self, n: i64) -> Self {
        assert!(n >= 1, "t-series support psi_n only for n >= 1");
        let n = n as usize;
        if self.coeffs.is_empty() {
            return self.clone();
        }
        let mut c = vec![BigRational::zero(); (self.coeffs.len() - 1) * n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * n] = a.clone();
        }
        let prec = if self.prec == TPoly::EXACT {
            TPoly::EXACT
        } else {
            self.prec.saturating_mul(n as u32)
        };
        TPoly::new(c, prec)
    }
    fn inverse(&self) -> Option<Self> {
        let c0 = self.coeffs.first()?;
        if self.prec == TPoly::EXACT && self.coeffs.len() > 1 {
            // not a polynomial unit, and no precision to truncate at
            return None;
        }
        let inv0 = c0.recip();
        let len = if self.prec == TPoly::EXACT {
            1
        } else {
            self.prec as usize
        };
        let mut out = vec![BigRational::zero(); len];
        out[0] = inv0.clone();
        for k in 1..len {
            let mut s = BigRational::zero();
            for j in 1..=k.min(self.coeffs.len() - 1) {
                s += &self.coeffs[j] * &out[k - j];
            }
            out[k] = -(s * &inv0);
        }
        Some(TPoly::new(out, self.prec))
    }
}

/// A truncated series `sum_d c_d z^d` over dimension vectors of fixed rank.
#[derive(Clone, PartialEq, Debug)]
pub struct Series<C: Ring> {
    rank: usize,
    bound: u32,
    caps: Option<DimVector>,
    terms: BTreeMap<DimVector, C>,
}

/// The series with [`QPoly`] coefficients used throughout the crate.
pub type GradedSeries = Series<QPoly>;

impl<C: Ring> Series<C> {
    pub fn new(rank: usize, bound: u32) -> Self {
        Series {
            rank,
            bound,
            caps: None,
            terms: BTreeMap::new(),
        }
    }

    pub fn with_caps(rank: usize, bound: u32, caps: Option<DimVector>) -> Self {
        Series {
            rank,
            bound,
            caps,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize, bound: u32) -> Self {
        let mut s = Series::new(rank, bound);
        s.set(DimVector::zero(rank), C::one());
        s
    }

    /// Same shape (rank, bound, caps), no terms.
    pub fn empty_like(&self) -> Self {
        Series::with_caps(self.rank, self.bound, self.caps.clone())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn caps(&self) -> Option<&DimVector> {
        self.caps.as_ref()
    }

    /// True if `d` lies in the truncation domain.
    pub fn in_domain(&self, d: &DimVector) -> bool {
        d.rank() == self.rank && d.total() <= self.bound && self.caps.as_ref().is_none_or(|c| d.fits_in(c))
    }

    /// All dimension vectors of the truncation domain, in graded order.
    pub fn domain(&self) -> Vec<DimVector> {
        DimVector::all_up_to(self.rank, self.bound, self.caps.as_ref())
    }

    pub fn get(&self, d: &DimVector) -> Option<&C> {
        self.terms.get(d)
    }

    pub fn coeff(&self, d: &DimVector) -> C {
        self.terms.get(d).cloned().unwrap_or_else(C::zero)
    }

    /// Sets a coefficient; keys outside the domain are ignored.
    pub fn set(&mut self, d: DimVector, c: C) {
        if !self.in_domain(&d) {
            return;
        }
        if c.is_zero() {
            self.terms.remove(&d);
        } else {
            self.terms.insert(d, c);
        }
    }

    pub fn add_at(&mut self, d: &DimVector, c: &C) {
        if c.is_zero() || !self.in_domain(d) {
            return;
        }
        let mut v = self.coeff(d);
        v.add_assign(c);
        self.set(d.clone(), v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DimVector, &C)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&DimVector::zero(self.rank))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank || self.bound != other.bound || self.caps != other.caps {
            return Err(Error::InvalidArgument(
                "series over different quivers, bounds or caps".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut s = self.clone();
        for (d, c) in &other.terms {
            s.add_at(d, c);
        }
        Ok(s)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut s = self.clone();
        for (d, c) in &other.terms {
            let mut v = s.coeff(d);
            v.sub_assign(c);
            s.set(d.clone(), v);
        }
        Ok(s)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let mut s = self.empty_like();
        for (d, c) in &self.terms {
            s.set(d.clone(), c.scale(r));
        }
        s
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut s = self.empty_like();
        for (d, c) in &self.terms {
            s.set(d.clone(), f(c));
        }
        s
    }

    /// Truncated product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut s = self.empty_like();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                if a.total() + b.total() > self.bound {
                    continue;
                }
                let d = a.add(b);
                if s.in_domain(&d) {
                    s.add_at(&d, &ca.mul(cb));
                }
            }
        }
        Ok(s)
    }

    /// Truncated multiplicative inverse; the constant term must be a unit.
    pub fn inv(&self) -> Result<Self> {
        let c0 = self.constant_term();
        let inv0 = c0
            .inverse()
            .ok_or_else(|| Error::Precondition("constant term is not a unit".into()))?;
        let zero = DimVector::zero(self.rank);
        let mut out = self.empty_like();
        for d in self.domain() {
            if d == zero {
                out.set(d, inv0.clone());
                continue;
            }
            // sum over e != 0 of f_e * out_{d-e}, then scale by -1/c0
            let mut acc = C::zero();
            for (e, fe) in &self.terms {
                if e.is_zero() {
                    continue;
                }
                if let Some(rest) = d.checked_sub(e) {
                    if let Some(o) = out.get(&rest) {
                        acc.add_assign(&fe.mul(o));
                    }
                }
            }
            let mut v = C::zero();
            v.sub_assign(&acc.mul(&inv0));
            out.set(d, v);
        }
        Ok(out)
    }

    /// Adams operation: `z^d -> z^{nd}`, and in [`Mode::QZ`] also `q -> q^n`.
    pub fn psi(&self, n: u32, mode: Mode) -> Self {
        let mut s = self.empty_like();
        for (d, c) in &self.terms {
            if d.total() * n > self.bound {
                continue;
            }
            let c = match mode {
                Mode::QZ => c.psi(n as i64),
                Mode::ZOnly => c.clone(),
            };
            s.set(d.scale(n), c);
        }
        s
    }

    fn require_zero_constant(&self) -> Result<()> {
        if !self.constant_term().is_zero() {
            return Err(Error::Precondition("series must have zero constant term".into()));
        }
        Ok(())
    }

    /// Ordinary `exp` of a series with zero constant term, via `|d| G_d = sum |e| L_e G_{d-e}`.
    fn exp_plain(&self) -> Self {
        let zero = DimVector::zero(self.rank);
        let mut g = self.empty_like();
        g.set(zero, C::one());
        for d in self.domain().into_iter().skip(1) {
            let mut acc = C::zero();
            for (e, le) in &self.terms {
                if let Some(rest) = d.checked_sub(e) {
                    if let Some(gr) = g.get(&rest) {
                        acc.add_assign(&le.mul(gr).scale(&rat(e.total() as i64)));
                    }
                }
            }
            let v = acc.scale(&BigRational::new(1.into(), (d.total() as i64).into()));
            g.set(d, v);
        }
        g
    }

    /// Ordinary `log` of a series with constant term 1.
    fn log_plain(&self) -> Self {
        let mut l = self.empty_like();
        for d in self.domain().into_iter().skip(1) {
            let n = d.total() as i64;
            let mut acc = self.coeff(&d).scale(&rat(n));
            for (e, le) in &l.terms {
                if let Some(rest) = d.checked_sub(e) {
                    if rest.is_zero() {
                        continue;
                    }
                    if let Some(gr) = self.get(&rest) {
                        acc.sub_assign(&le.mul(gr).scale(&rat(e.total() as i64)));
                    }
                }
            }
            let v = acc.scale(&BigRational::new(1.into(), n.into()));
            l.set(d, v);
        }
        l
    }

    /// Plethystic exponential `exp(sum_{n>=1} psi_n(f)/n)`.
    pub fn pleth_exp(&self, mode: Mode) -> Result<Self> {
        self.require_zero_constant()?;
        let mut l = self.empty_like();
        for n in 1..=self.bound.max(1) {
            let p = self.psi(n, mode);
            for (d, c) in &p.terms {
                l.add_at(d, &c.scale(&BigRational::new(1.into(), (n as i64).into())));
            }
        }
        Ok(l.exp_plain())
    }

    /// Inverse of [`Series::pleth_exp`]; requires constant term 1.
    pub fn pleth_log(&self, mode: Mode) -> Result<Self> {
        let mut c0 = self.constant_term();
        c0.sub_assign(&C::one());
        if !c0.is_zero() {
            return Err(Error::Precondition("series must have constant term 1".into()));
        }
        let l = self.log_plain();
        // f_d = L_d - sum_{n>=2, n | d} psi_n(f_{d/n}) / n, in graded order
        let mut f = self.empty_like();
        for d in self.domain().into_iter().skip(1) {
            let mut v = l.coeff(&d);
            for n in 2..=d.content() {
                let Some(fb) = d.div_exact(n).and_then(|b| f.get(&b)) else {
                    continue;
                };
                let c = match mode {
                    Mode::QZ => fb.psi(n as i64),
                    Mode::ZOnly => fb.clone(),
                };
                v.sub_assign(&c.scale(&BigRational::new(1.into(), (n as i64).into())));
            }
            f.set(d, v);
        }
        Ok(f)
    }

    /// Restricts to a smaller total-degree bound.
    pub fn truncate(&self, bound: u32) -> Self {
        let mut s = Series::with_caps(self.rank, bound.min(self.bound), self.caps.clone());
        for (d, c) in &self.terms {
            s.set(d.clone(), c.clone());
        }
        s
    }
}

/// Coefficient of `u^m` in `Exp_{t,u}(P u)`, i.e. the `m`-th symmetric power character.
pub fn sym_power_coeff(p: &QPoly, m: u32) -> QPoly {
    if m == 0 {
        return QPoly::one();
    }
    let mut s: Series<QPoly> = Series::new(1, m);
    s.set(DimVector::new(vec![1]), p.clone());
    let e = s.pleth_exp(Mode::QZ).expect("zero constant term");
    e.coeff(&DimVector::new(vec![m]))
}

impl Series<QPoly> {
    /// Applies `q -> q^n` to every coefficient.
    pub fn substitute_power(&self, n: i64) -> Self {
        self.map_coeffs(|c| c.substitute_power(n))
    }

    /// True if every coefficient has nonnegative integer coefficients.
    pub fn is_nonneg_integral(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.has_integer_coeffs() && c.has_nonnegative_coeffs())
    }

    /// Exact equality of all coefficients, ignoring shape.
    pub fn same_terms(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(v: &[u32]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    fn q(s: &str) -> QPoly {
        s.parse().unwrap()
    }

    fn single(rank: usize, bound: u32, d: &[u32], c: QPoly) -> GradedSeries {
        let mut s = Series::new(rank, bound);
        s.set(dv(d), c);
        s
    }

    #[test]
    fn geometric_series() {
        let z = single(1, 6, &[1], QPoly::one());
        let e = z.pleth_exp(Mode::ZOnly).unwrap();
        for n in 0..=6 {
            assert_eq!(e.coeff(&dv(&[n])), QPoly::one());
        }
        let qz = single(1, 6, &[1], q("q"));
        let e = qz.pleth_exp(Mode::QZ).unwrap();
        for n in 0..=6 {
            assert_eq!(e.coeff(&dv(&[n])), QPoly::q_pow(n as i64));
        }
    }

    #[test]
    fn mul_and_inverse() {
        let mut one_minus_z = Series::one(1, 5);
        one_minus_z.set(dv(&[1]), QPoly::from(-1));
        let inv = one_minus_z.inv().unwrap();
        for n in 0..=5 {
            assert_eq!(inv.coeff(&dv(&[n])), QPoly::one());
        }
        assert_eq!(one_minus_z.mul(&inv).unwrap(), Series::one(1, 5));
        assert_eq!(Series::<QPoly>::one(2, 3).inv().unwrap(), Series::one(2, 3));
        assert_eq!(inv.mul(&Series::one(1, 5)).unwrap(), inv);
        let mut bad = Series::one(1, 3);
        bad.set(dv(&[0]), q("1 + q"));
        assert!(bad.inv().is_err());
    }

    #[test]
    fn log_inverts_exp() {
        let mut f = Series::new(2, 4);
        f.set(dv(&[1, 0]), q("q + 2"));
        f.set(dv(&[1, 1]), q("q^(-1/2)"));
        f.set(dv(&[0, 2]), q("-3 + q^3"));
        for mode in [Mode::QZ, Mode::ZOnly] {
            let e = f.pleth_exp(mode).unwrap();
            assert_eq!(e.pleth_log(mode).unwrap(), f);
        }
    }

    #[test]
    fn sym_power() {
        assert_eq!(sym_power_coeff(&q("q^2 + 3"), 0), QPoly::one());
        assert_eq!(sym_power_coeff(&q("q^2 + 3"), 1), q("q^2 + 3"));
        assert_eq!(sym_power_coeff(&q("q"), 2), q("q^2"));
        // h_2 of two variables q^-2 and 1 is q^-4 + q^-2 + 1
        assert_eq!(sym_power_coeff(&q("q^-2 + 1"), 2), q("q^-4 + q^-2 + 1"));
    }

    #[test]
    fn tpoly_inverse() {
        // 1/(1-t) = 1 + t + t^2 + ... mod t^5
        let one_minus_t = TPoly::new(vec![rat(1), rat(-1)], 5);
        let inv = one_minus_t.inverse().unwrap();
        assert_eq!(inv.coeffs(), &[rat(1), rat(1), rat(1), rat(1), rat(1)]);
        assert_eq!(one_minus_t.mul(&inv), TPoly::new(vec![rat(1)], 5));
        assert!(TPoly::new(vec![rat(1), rat(1)], TPoly::EXACT).inverse().is_none());
    }

    #[test]
    fn caps_restrict_domain() {
        let s: GradedSeries = Series::with_caps(2, 4, Some(dv(&[4, 1])));
        assert!(s.in_domain(&dv(&[3, 1])));
        assert!(!s.in_domain(&dv(&[2, 2])));
        assert_eq!(s.domain().len(), 5 + 4);
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn poly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec((-2i64..=4, -3i64..=3), 0..3).prop_map(|terms| {
            let mut p = QPoly::zero();
            for (e, c) in terms {
                p.add_term(2 * e, &rat(c));
            }
            p
        })
    }

    fn series(rank: usize, bound: u32) -> impl Strategy<Value = GradedSeries> {
        let dims: Vec<DimVector> = DimVector::all_up_to(rank, bound, None).into_iter().skip(1).collect();
        prop::collection::vec(poly(), dims.len()).prop_map(move |ps| {
            let mut s = Series::new(rank, bound);
            for (d, p) in dims.iter().zip(ps) {
                s.set(d.clone(), p);
            }
            s
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn exp_log_are_inverse(s in series(2, 4), qz in any::<bool>()) {
            let mode = if qz { Mode::QZ } else { Mode::ZOnly };
            let e = s.pleth_exp(mode).unwrap();
            prop_assert_eq!(e.pleth_log(mode).unwrap(), s.clone());
            let shifted = s.add(&Series::one(2, 4)).unwrap();
            prop_assert_eq!(shifted.pleth_log(mode).unwrap().pleth_exp(mode).unwrap(), shifted);
        }

        #[test]
        fn exp_is_additive(a in series(2, 3), b in series(2, 3)) {
            let lhs = a.add(&b).unwrap().pleth_exp(Mode::QZ).unwrap();
            let rhs = a.pleth_exp(Mode::QZ).unwrap().mul(&b.pleth_exp(Mode::QZ).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn inverse_is_inverse(s in series(1, 5)) {
            let f = s.add(&Series::one(1, 5)).unwrap();
            prop_assert_eq!(f.mul(&f.inv().unwrap()).unwrap(), Series::one(1, 5));
        }
    }
}
