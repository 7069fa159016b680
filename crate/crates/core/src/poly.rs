//! Exact Laurent polynomials in `q^{1/2}`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// A Laurent polynomial in `q^{1/2}` with rational coefficients.
///
/// The key `k` of a term stands for `q^{k/2}`. Zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    terms: BTreeMap<i64, BigRational>,
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly::default()
    }

    pub fn one() -> Self {
        QPoly::constant(rat(1))
    }

    pub fn constant(c: BigRational) -> Self {
        QPoly::monomial(0, c)
    }

    /// `c * q^{half/2}`.
    pub fn monomial(half: i64, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(half, c);
        }
        QPoly { terms }
    }

    /// `q^e` for an integral exponent `e`.
    pub fn q_pow(e: i64) -> Self {
        QPoly::monomial(2 * e, rat(1))
    }

    /// Builds `sum c_k q^k` from integer coefficients indexed by integral exponent.
    pub fn from_q_coeffs(coeffs: &[(i64, i64)]) -> Self {
        let mut p = QPoly::zero();
        for &(e, c) in coeffs {
            p.add_term(2 * e, &rat(c));
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn coeff(&self, half: i64) -> BigRational {
        self.terms.get(&half).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest half-exponent, if nonzero.
    pub fn max_half(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Smallest half-exponent, if nonzero.
    pub fn min_half(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn leading_coeff(&self) -> Option<&BigRational> {
        self.terms.values().next_back()
    }

    pub fn add_term(&mut self, half: i64, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(half).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&half);
        }
    }

    pub fn add_assign(&mut self, other: &QPoly) {
        for (k, c) in &other.terms {
            self.add_term(*k, c);
        }
    }

    pub fn sub_assign(&mut self, other: &QPoly) {
        for (k, c) in &other.terms {
            self.add_term(*k, &-c);
        }
    }

    pub fn scale(&self, r: &BigRational) -> QPoly {
        if r.is_zero() {
            return QPoly::zero();
        }
        QPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, c * r)).collect(),
        }
    }

    /// Multiplies by `q^{half/2}`.
    pub fn shift(&self, half: i64) -> QPoly {
        QPoly {
            terms: self.terms.iter().map(|(k, c)| (k + half, c.clone())).collect(),
        }
    }

    /// `q -> q^n`: every half-exponent is multiplied by `n`.
    pub fn substitute_power(&self, n: i64) -> QPoly {
        if n == 0 {
            let mut total = BigRational::zero();
            for c in self.terms.values() {
                total += c;
            }
            return QPoly::constant(total);
        }
        QPoly {
            terms: self.terms.iter().map(|(k, c)| (k * n, c.clone())).collect(),
        }
    }

    /// True when every half-exponent is even, i.e. a Laurent polynomial in `q`.
    pub fn has_integral_exponents(&self) -> bool {
        self.terms.keys().all(|k| k % 2 == 0)
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// Sum of coefficients, i.e. the value at `q = 1`.
    pub fn coeff_sum(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, c| a + c)
    }

    /// Value at `q = v`. Odd half-exponents need an exact rational square root of `v`.
    pub fn eval_at_prime_power(&self, v: &BigRational) -> Result<BigRational> {
        if self.is_zero() {
            return Ok(BigRational::zero());
        }
        let base = if self.has_integral_exponents() {
            None
        } else {
            Some(exact_sqrt(v).ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "cannot evaluate a half-integral power at {v}: no rational square root"
                ))
            })?)
        };
        if v.is_zero() && self.min_half().unwrap_or(0) < 0 {
            return Err(Error::InvalidArgument("negative power evaluated at 0".into()));
        }
        let mut total = BigRational::zero();
        for (k, c) in &self.terms {
            let (b, e) = match &base {
                Some(r) => (r, *k),
                None => (v, k / 2),
            };
            total += c * pow_signed(b, e);
        }
        Ok(total)
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &QPoly) -> Option<QPoly> {
        let (dmin, dmax) = (divisor.min_half()?, divisor.max_half()?);
        let lead = divisor.terms[&dmax].clone();
        let mut rem = self.clone();
        let mut quot = QPoly::zero();
        while let Some(rmax) = rem.max_half() {
            // every remaining term must be reachable by a quotient term
            if rmax - dmax < rem.min_half()? - dmin {
                return None;
            }
            let c = &rem.terms[&rmax] / &lead;
            let shift = rmax - dmax;
            quot.add_term(shift, &c);
            for (k, dc) in &divisor.terms {
                rem.add_term(k + shift, &-(dc * &c));
            }
        }
        Some(quot)
    }

    /// Integer coefficients keyed by integral `q`-exponent, when exact.
    pub fn integral_coeffs(&self) -> Option<Vec<(i64, BigInt)>> {
        self.terms
            .iter()
            .map(|(k, c)| (k % 2 == 0 && c.is_integer()).then(|| (k / 2, c.to_integer())))
            .collect()
    }

    /// Renders with variable `q` in the crate's text grammar.
    pub fn render(&self) -> String {
        self.render_var("q")
    }

    /// Renders in the text grammar with the given variable name.
    ///
    /// Terms ascend by half-exponent; `q^(k/2)` collapses to `q^e` for even
    /// `k` and to nothing for `k = 0`.
    pub fn render_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (k, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let power = match k {
                0 => String::new(),
                2 => var.to_string(),
                k if k % 2 == 0 => format!("{var}^{}", k / 2),
                k => format!("{var}^({k}/2)"),
            };
            if power.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&power);
            } else {
                out.push_str(&format!("{abs}*{power}"));
            }
        }
        out
    }

    /// Parses the text grammar produced by [`QPoly::render_var`].
    pub fn parse_var(text: &str, var: &str) -> Result<QPoly> {
        let bad = || Error::InvalidArgument(format!("cannot parse polynomial {text:?}"));
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(bad());
        }
        // split into signed terms at '+'/'-' outside exponents
        let mut pieces = vec![];
        let mut cur = String::new();
        let mut depth = 0;
        let mut prev: Option<char> = None;
        for ch in s.chars() {
            match ch {
                '(' => depth += 1,
                ')' => depth -= 1,
                _ => {}
            }
            let is_split = (ch == '+' || ch == '-') && depth == 0 && !cur.is_empty() && prev != Some('^');
            if is_split {
                pieces.push(std::mem::take(&mut cur));
            }
            cur.push(ch);
            prev = Some(ch);
        }
        pieces.push(cur);

        let mut p = QPoly::zero();
        for piece in pieces {
            let (sign, body) = match piece.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, piece.strip_prefix('+').unwrap_or(&piece)),
            };
            let (coef, power) = match body.split_once('*') {
                Some((c, pw)) => (Some(c), Some(pw)),
                None if body.starts_with(var) => (None, Some(body)),
                None => (Some(body), None),
            };
            let mut c = match coef {
                Some(c) => c.parse::<BigRational>().map_err(|_| bad())?,
                None => rat(1),
            };
            if sign < 0 {
                c = -c;
            }
            let half = match power {
                None => 0,
                Some(pw) => {
                    let rest = pw.strip_prefix(var).ok_or_else(bad)?;
                    if rest.is_empty() {
                        2
                    } else {
                        let e = rest.strip_prefix('^').ok_or_else(bad)?;
                        if let Some(inner) = e.strip_prefix('(').and_then(|x| x.strip_suffix(')')) {
                            let num = inner.strip_suffix("/2").ok_or_else(bad)?;
                            num.parse::<i64>().map_err(|_| bad())?
                        } else {
                            2 * e.parse::<i64>().map_err(|_| bad())?
                        }
                    }
                }
            };
            p.add_term(half, &c);
        }
        Ok(p)
    }

    /// JSON object mapping the half-exponent (decimal string) to the coefficient string.
    pub fn to_json(&self) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .terms
            .iter()
            .map(|(k, c)| (k.to_string(), serde_json::Value::String(c.to_string())))
            .collect();
        serde_json::Value::Object(map)
    }

    pub fn from_json(value: &serde_json::Value) -> Result<QPoly> {
        let bad = || Error::InvalidArgument(format!("bad polynomial object {value}"));
        let obj = value.as_object().ok_or_else(bad)?;
        let mut p = QPoly::zero();
        for (k, c) in obj {
            let half: i64 = k.parse().map_err(|_| bad())?;
            let c: BigRational = c.as_str().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            p.add_term(half, &c);
        }
        Ok(p)
    }
}

fn pow_signed(b: &BigRational, e: i64) -> BigRational {
    let p = num_traits::pow(b.clone(), e.unsigned_abs() as usize);
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

fn exact_sqrt(v: &BigRational) -> Option<BigRational> {
    if v.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(BigRational::new(root(v.numer())?, root(v.denom())?))
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl std::str::FromStr for QPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        QPoly::parse_var(s, "q")
    }
}

impl Add for &QPoly {
    type Output = QPoly;

    fn add(self, other: &QPoly) -> QPoly {
        let mut p = self.clone();
        p.add_assign(other);
        p
    }
}

impl Sub for &QPoly {
    type Output = QPoly;

    fn sub(self, other: &QPoly) -> QPoly {
        let mut p = self.clone();
        p.sub_assign(other);
        p
    }
}

impl Neg for &QPoly {
    type Output = QPoly;

    fn neg(self) -> QPoly {
        QPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &QPoly {
    type Output = QPoly;

    fn mul(self, other: &QPoly) -> QPoly {
        let mut p = QPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                p.add_term(a + b, &(ca * cb));
            }
        }
        p
    }
}

impl From<i64> for QPoly {
    fn from(c: i64) -> Self {
        QPoly::constant(rat(c))
    }
}

/// Converts a small integer coefficient to `i64`, for diagnostics and tests.
pub fn coeff_to_i64(c: &BigRational) -> Option<i64> {
    c.is_integer().then(|| c.to_integer().to_i64()).flatten()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> QPoly {
        s.parse().unwrap()
    }

    #[test]
    fn render_grammar() {
        assert_eq!(p("q^-1 + 2 + q").render(), "q^-1 + 2 + q");
        assert_eq!(QPoly::monomial(3, rat(2)).render(), "2*q^(3/2)");
        assert_eq!(QPoly::monomial(-1, rat(-1)).render(), "-q^(-1/2)");
        assert_eq!(QPoly::zero().render(), "0");
        assert_eq!(QPoly::from_q_coeffs(&[(0, 1), (2, -3)]).render(), "1 - 3*q^2");
        assert_eq!(QPoly::monomial(0, BigRational::new(3.into(), 2.into())).render(), "3/2");
        assert_eq!(QPoly::q_pow(-2).render_var("v"), "v^-2");
    }

    #[test]
    fn parse_round_trip() {
        for s in [
            "q^-1 + 2 + q",
            "-q^(-1/2) + 2*q^(3/2)",
            "-3/4*q^5",
            "0",
            "1 - 3*q^2",
            "q",
        ] {
            let poly = p(s);
            assert_eq!(poly.render(), if s == "0" { "0" } else { s });
            assert_eq!(QPoly::from_json(&poly.to_json()).unwrap(), poly);
        }
        assert!("q^".parse::<QPoly>().is_err());
        assert!("x".parse::<QPoly>().is_err());
    }

    #[test]
    fn json_keys_are_half_exponents() {
        let j = p("q^-1 + 2*q^(1/2)").to_json();
        assert_eq!(j.to_string(), r#"{"-2":"1","1":"2"}"#);
    }

    #[test]
    fn substitute_power_examples() {
        assert_eq!(p("q + q^-1").substitute_power(2), p("q^2 + q^-2"));
        let x = p("3*q^(1/2) - q^4");
        assert_eq!(x.substitute_power(1), x);
        assert_eq!(x.substitute_power(-1), p("3*q^(-1/2) - q^-4"));
    }

    #[test]
    fn eval() {
        assert_eq!(p("q^2 + q").eval_at_prime_power(&rat(2)).unwrap(), rat(6));
        assert_eq!(p("q^(1/2)").eval_at_prime_power(&rat(9)).unwrap(), rat(3));
        assert!(p("q^(1/2)").eval_at_prime_power(&rat(2)).is_err());
        assert_eq!(
            p("q^-1").eval_at_prime_power(&rat(4)).unwrap(),
            BigRational::new(1.into(), 4.into())
        );
    }

    #[test]
    fn arithmetic_and_division() {
        let a = p("1 + q");
        let b = p("q^-1 - 1 + q^(1/2)");
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert_eq!(prod.div_exact(&b).unwrap(), a);
        assert!(p("1 + q^2").div_exact(&a).is_none());
        assert_eq!(&(&a + &b) - &b, a);
        assert!((&a - &a).is_zero());
        assert_eq!(p("q^3").div_exact(&p("q")).unwrap(), p("q^2"));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use proptest::prelude::*;

    fn poly() -> impl Strategy<Value = QPoly> {
        prop::collection::vec((-6i64..=6, -4i64..=4, 1i64..=3), 0..4).prop_map(|terms| {
            let mut p = QPoly::zero();
            for (h, n, d) in terms {
                p.add_term(h, &BigRational::new(n.into(), d.into()));
            }
            p
        })
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(p in poly()) {
            prop_assert_eq!(p.render().parse::<QPoly>().unwrap(), p.clone());
            prop_assert_eq!(QPoly::parse_var(&p.render_var("v"), "v").unwrap(), p.clone());
            prop_assert_eq!(QPoly::from_json(&p.to_json()).unwrap(), p);
        }

        #[test]
        fn substitutions_compose(p in poly(), a in -3i64..=3, b in -3i64..=3) {
            prop_assert_eq!(p.substitute_power(a).substitute_power(b), p.substitute_power(a * b));
        }

        #[test]
        fn exact_division_of_products(a in poly(), b in poly()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).div_exact(&b), Some(a));
        }
    }
}
