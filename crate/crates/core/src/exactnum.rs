//! Exact arithmetic over ℚ and the real biquadratic field ℚ(√2, √3).
//!
//! An element of the field is `a + b√2 + c√3 + d√6` with rational
//! coordinates. Internally the four coordinates share one positive
//! denominator, which keeps multiplication down to integer products and a
//! single gcd pass.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::scalar::{Scalar, Sign};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed rational {0:?}")]
    BadRational(String),
}

/// Formats a rational as `"p/q"`, or `"p"` when the denominator is 1.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Inverse of [`format_rational`]. Accepts an optional sign and any
/// non-zero denominator; the result is reduced.
pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let bad = || ArithError::BadRational(s.to_string());
    let s = s.trim();
    match s.split_once('/') {
        None => BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad()),
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| bad())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
    }
}

/// `serde(with = ...)` adapter writing a rational as its string form.
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// `serde(with = ...)` adapter for a vector of rationals.
pub mod rational_vec_str {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rational))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// An element `a + b√2 + c√3 + d√6` of ℚ(√2, √3).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Qf {
    // Coefficients of 1, √2, √3, √6 over a common denominator.
    num: [BigInt; 4],
    // Positive; gcd(num, den) = 1; zero is 0/1.
    den: BigInt,
}

impl Qf {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        let den = [&a, &b, &c, &d]
            .iter()
            .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
        let scale = |r: &Rational| r.numer() * (&den / r.denom());
        Self::from_parts([scale(&a), scale(&b), scale(&c), scale(&d)], den)
    }

    fn from_parts(num: [BigInt; 4], den: BigInt) -> Self {
        let mut q = Qf { num, den };
        q.normalize();
        q
    }

    fn normalize(&mut self) {
        if self.den.is_negative() {
            self.den = -std::mem::take(&mut self.den);
            for n in &mut self.num {
                *n = -std::mem::take(n);
            }
        }
        let g = self.num.iter().fold(self.den.clone(), |g, n| g.gcd(n));
        if g.is_zero() {
            return;
        }
        if !g.is_one() {
            for n in &mut self.num {
                *n /= &g;
            }
            self.den /= &g;
        }
        if self.num.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
        }
    }

    pub fn from_rational(r: Rational) -> Self {
        let (n, d) = r.into_raw();
        Self::from_parts([n, BigInt::zero(), BigInt::zero(), BigInt::zero()], d)
    }

    pub fn from_i64(n: i64) -> Self {
        Self::from_rational(Rational::from_integer(n.into()))
    }

    /// The basis element √n for n ∈ {1, 2, 3, 6}.
    pub fn sqrt_basis(n: u8) -> Option<Self> {
        let slot = match n {
            1 => 0,
            2 => 1,
            3 => 2,
            6 => 3,
            _ => return None,
        };
        let mut num: [BigInt; 4] = Default::default();
        num[slot] = BigInt::one();
        Some(Qf { num, den: BigInt::one() })
    }

    /// The non-negative square root of a rational that is a rational
    /// multiple of one of the basis radicals, e.g. `1/2 ↦ √2/2`.
    ///
    /// Returns `None` for negative input or when the root lies outside
    /// ℚ(√2, √3) (such as √5).
    pub fn surd(r: &Rational) -> Option<Self> {
        if r.is_negative() {
            return None;
        }
        if r.is_zero() {
            return Some(Qf::zero());
        }
        // √(p/q) = √(pq) / q
        let pq = r.numer() * r.denom();
        for n in [1u8, 2, 3, 6] {
            let nb = BigInt::from(n);
            if !pq.is_multiple_of(&nb) {
                continue;
            }
            let rest = &pq / &nb;
            let s = rest.sqrt();
            if &s * &s == rest {
                let mut num: [BigInt; 4] = Default::default();
                num[[1, 2, 3, 6].iter().position(|&b| b == n).unwrap()] = s;
                return Some(Qf::from_parts(num, r.denom().clone()));
            }
        }
        None
    }

    /// The four rational coordinates `(a, b, c, d)`.
    pub fn coords(&self) -> [Rational; 4] {
        self.num
            .clone()
            .map(|n| Rational::new(n, self.den.clone()))
    }

    /// `Some(q)` when the element is the rational `q`.
    pub fn to_rational(&self) -> Option<Rational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(Rational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let roots = [1.0, 2f64.sqrt(), 3f64.sqrt(), 6f64.sqrt()];
        let den = self.den.to_f64().unwrap_or(f64::INFINITY);
        self.num
            .iter()
            .zip(roots)
            .map(|(n, r)| n.to_f64().unwrap_or(f64::NAN) / den * r)
            .sum()
    }

    // √2 ↦ −√2 (and so √6 ↦ −√6)
    fn conj2(&self) -> Self {
        let [a, b, c, d] = self.num.clone();
        Qf { num: [a, -b, c, -d], den: self.den.clone() }
    }

    // √3 ↦ −√3
    fn conj3(&self) -> Self {
        let [a, b, c, d] = self.num.clone();
        Qf { num: [a, b, -c, -d], den: self.den.clone() }
    }

    pub fn checked_div(&self, rhs: &Qf) -> Result<Qf, ArithError> {
        rhs.inverse().map(|inv| self * &inv).ok_or(ArithError::DivisionByZero)
    }

    /// Exact sign.
    ///
    /// Encloses √2, √3 and √6 in dyadic intervals of width 2⁻ᵏ and doubles
    /// `k` until the enclosure of the element excludes zero. A nonzero
    /// element is bounded away from zero, so this terminates.
    pub fn sign(&self) -> Sign {
        if self.is_zero() {
            return Sign::Zero;
        }
        let [a, b, c, d] = &self.num;
        if b.is_zero() && c.is_zero() && d.is_zero() {
            return bigint_sign(a);
        }
        let mut bits = 32u64;
        loop {
            let scale = BigInt::one() << bits;
            let mut lo = a * &scale;
            let mut hi = lo.clone();
            for (coef, n) in [(b, 2u32), (c, 3), (d, 6)] {
                if coef.is_zero() {
                    continue;
                }
                // floor(√n · 2^bits) ≤ √n · 2^bits < that + 1
                let root_lo = (BigInt::from(n) << (2 * bits)).sqrt();
                let root_hi = &root_lo + 1u32;
                if coef.is_positive() {
                    lo += coef * &root_lo;
                    hi += coef * &root_hi;
                } else {
                    lo += coef * &root_hi;
                    hi += coef * &root_lo;
                }
            }
            if lo.is_positive() {
                return Sign::Positive;
            }
            if hi.is_negative() {
                return Sign::Negative;
            }
            bits *= 2;
        }
    }
}

fn bigint_sign(n: &BigInt) -> Sign {
    match n.sign() {
        BigSign::Minus => Sign::Negative,
        BigSign::NoSign => Sign::Zero,
        BigSign::Plus => Sign::Positive,
    }
}

impl Zero for Qf {
    fn zero() -> Self {
        Qf { num: Default::default(), den: BigInt::one() }
    }

    fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }
}

impl One for Qf {
    fn one() -> Self {
        Qf::from_i64(1)
    }
}

impl From<Rational> for Qf {
    fn from(r: Rational) -> Self {
        Qf::from_rational(r)
    }
}

impl From<i64> for Qf {
    fn from(n: i64) -> Self {
        Qf::from_i64(n)
    }
}

impl Neg for Qf {
    type Output = Qf;
    fn neg(self) -> Qf {
        Qf { num: self.num.map(|n| -n), den: self.den }
    }
}

impl Neg for &Qf {
    type Output = Qf;
    fn neg(self) -> Qf {
        -self.clone()
    }
}

fn add_sub(x: &Qf, y: &Qf, negate: bool) -> Qf {
    if x.den == y.den {
        let num = std::array::from_fn(|i| {
            if negate {
                &x.num[i] - &y.num[i]
            } else {
                &x.num[i] + &y.num[i]
            }
        });
        return Qf::from_parts(num, x.den.clone());
    }
    let num = std::array::from_fn(|i| {
        let l = &x.num[i] * &y.den;
        let r = &y.num[i] * &x.den;
        if negate {
            l - r
        } else {
            l + r
        }
    });
    Qf::from_parts(num, &x.den * &y.den)
}

fn mul(x: &Qf, y: &Qf) -> Qf {
    if let Some(q) = mul_small(x, y) {
        return q;
    }
    let [a, b, c, d] = &x.num;
    let [e, f, g, h] = &y.num;
    // √2√3 = √6, √2√6 = 2√3, √3√6 = 3√2
    let one = a * e + (b * f) * 2 + (c * g) * 3 + (d * h) * 6;
    let r2 = a * f + b * e + (c * h + d * g) * 3;
    let r3 = a * g + c * e + (b * h + d * f) * 2;
    let r6 = a * h + d * e + b * g + c * f;
    Qf::from_parts([one, r2, r3, r6], &x.den * &y.den)
}

// Machine-word path for the common case of small coordinates.
fn mul_small(x: &Qf, y: &Qf) -> Option<Qf> {
    use num_traits::ToPrimitive;
    let word = |n: &BigInt| n.to_i64().filter(|v| v.unsigned_abs() < 1 << 28).map(i128::from);
    let [a, b, c, d] = [word(&x.num[0])?, word(&x.num[1])?, word(&x.num[2])?, word(&x.num[3])?];
    let [e, f, g, h] = [word(&y.num[0])?, word(&y.num[1])?, word(&y.num[2])?, word(&y.num[3])?];
    let den = word(&x.den)? * word(&y.den)?;
    let num = [
        a * e + 2 * b * f + 3 * c * g + 6 * d * h,
        a * f + b * e + 3 * (c * h + d * g),
        a * g + c * e + 2 * (b * h + d * f),
        a * h + d * e + b * g + c * f,
    ];
    let mut g = num.iter().fold(den, |g, &n| g.gcd(&n));
    if num.iter().all(|&n| n == 0) {
        g = den;
    }
    Some(Qf { num: num.map(|n| BigInt::from(n / g)), den: BigInt::from(den / g) })
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&Qf> for &Qf {
            type Output = Qf;
            fn $method(self, rhs: &Qf) -> Qf {
                $body(self, rhs)
            }
        }
        impl $trait<Qf> for Qf {
            type Output = Qf;
            fn $method(self, rhs: Qf) -> Qf {
                $body(&self, &rhs)
            }
        }
        impl $trait<&Qf> for Qf {
            type Output = Qf;
            fn $method(self, rhs: &Qf) -> Qf {
                $body(&self, rhs)
            }
        }
        impl $trait<Qf> for &Qf {
            type Output = Qf;
            fn $method(self, rhs: Qf) -> Qf {
                $body(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |x, y| add_sub(x, y, false));
forward_binop!(Sub, sub, |x, y| add_sub(x, y, true));
forward_binop!(Mul, mul, mul);

/// Panics on division by zero, like integer division; use
/// [`Qf::checked_div`] for the fallible form.
impl Div<&Qf> for &Qf {
    type Output = Qf;
    fn div(self, rhs: &Qf) -> Qf {
        self.checked_div(rhs).expect("division by zero in Qf")
    }
}

impl Div for Qf {
    type Output = Qf;
    fn div(self, rhs: Qf) -> Qf {
        &self / &rhs
    }
}

impl Scalar for Qf {
    fn sign(&self) -> Sign {
        Qf::sign(self)
    }

    fn from_int(n: i64) -> Self {
        Qf::from_i64(n)
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        // x · conj2(x) lies in ℚ(√3); multiplying by its √3-conjugate lands in ℚ.
        let c2 = self.conj2();
        let n1 = self * &c2;
        let c3 = n1.conj3();
        let norm = (&n1 * &c3).to_rational().expect("field norm is rational");
        let inv_norm = Qf::from_rational(norm.recip());
        Some(c2 * c3 * inv_norm)
    }
}

impl fmt::Debug for Qf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Qf({self})")
    }
}

impl fmt::Display for Qf {
    /// Human form such as `1 + √2 - 1/2√6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (coef, radical) in self.coords().iter().zip(["", "√2", "√3", "√6"]) {
            if coef.is_zero() {
                continue;
            }
            let mag = coef.abs();
            if first {
                if coef.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if coef.is_negative() { " - " } else { " + " })?;
            }
            first = false;
            if radical.is_empty() || !mag.is_one() {
                f.write_str(&format_rational(&mag))?;
            }
            f.write_str(radical)?;
        }
        Ok(())
    }
}

impl Serialize for Qf {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.coords().iter().map(format_rational))
    }
}

impl<'de> Deserialize<'de> for Qf {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let parts = <[String; 4]>::deserialize(d)?;
        let mut it = parts
            .iter()
            .map(|p| parse_rational(p).map_err(serde::de::Error::custom));
        let mut next = || it.next().unwrap();
        Ok(Qf::new(next()?, next()?, next()?, next()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    fn qf(a: i64, b: i64, c: i64, d: i64) -> Qf {
        Qf::new(q(a, 1), q(b, 1), q(c, 1), q(d, 1))
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(qf(1, 1, 0, 0) * qf(1, -1, 0, 0), Qf::from_i64(-1));
    }

    #[test]
    fn basis_products() {
        let s2 = Qf::sqrt_basis(2).unwrap();
        let s3 = Qf::sqrt_basis(3).unwrap();
        let s6 = Qf::sqrt_basis(6).unwrap();
        assert_eq!(&s2 * &s3, s6);
        assert_eq!(&s2 * &s6, qf(0, 0, 2, 0));
        assert_eq!(&s3 * &s6, qf(0, 3, 0, 0));
        assert_eq!(&s6 * &s6, Qf::from_i64(6));
        let neg = -s2;
        assert_eq!(&neg * &neg, Qf::from_i64(2));
    }

    #[test]
    fn signs() {
        assert_eq!(Qf::zero().sign(), Sign::Zero);
        assert_eq!(qf(0, 0, 0, 0).sign(), Sign::Zero);
        assert_eq!(qf(1, 1, -1, 0).sign(), Sign::Positive);
        assert_eq!(qf(7, -5, 0, 0).sign(), Sign::Negative);
        assert_eq!(qf(-7, 5, 0, 0).sign(), Sign::Positive);
        // 5√2 - 2√6 - 2 ≈ 0.1724 needs only modest precision; 99 - 70√2 ≈ 0.00505
        assert_eq!(qf(99, -70, 0, 0).sign(), Sign::Positive);
        assert_eq!(qf(-2, 5, 0, -2).sign(), Sign::Positive);
    }

    #[test]
    fn division_and_inverse() {
        let x = qf(1, 2, -3, 4);
        let y = qf(-2, 1, 1, 1);
        let z = x.checked_div(&y).unwrap();
        assert_eq!(z * &y, x);
        assert_eq!(x.checked_div(&Qf::zero()), Err(ArithError::DivisionByZero));
    }

    #[test]
    fn surds() {
        let half = Qf::surd(&q(1, 2)).unwrap();
        assert_eq!(&half * &half, Qf::from_rational(q(1, 2)));
        assert_eq!(half, Qf::new(q(0, 1), q(1, 2), q(0, 1), q(0, 1)));
        assert_eq!(Qf::surd(&q(12, 1)).unwrap(), qf(0, 0, 2, 0));
        assert_eq!(Qf::surd(&q(2, 3)).unwrap(), Qf::new(q(0, 1), q(0, 1), q(0, 1), q(1, 3)));
        assert!(Qf::surd(&q(5, 1)).is_none());
        assert!(Qf::surd(&q(-1, 1)).is_none());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&q(-6, 4)), "-3/2");
        assert_eq!(format_rational(&q(4, 2)), "2");
        assert_eq!(parse_rational("6/-4").unwrap(), q(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), q(7, 1));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn serde_roundtrip() {
        let x = Qf::new(q(1, 2), q(-1, 1), q(0, 1), q(3, 7));
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"["1/2","-1","0","3/7"]"#);
        assert_eq!(serde_json::from_str::<Qf>(&json).unwrap(), x);
    }

    #[test]
    fn display() {
        assert_eq!(qf(1, 1, -1, 0).to_string(), "1 + √2 - √3");
        assert_eq!(Qf::new(q(0, 1), q(-1, 2), q(0, 1), q(0, 1)).to_string(), "-1/2√2");
    }
}
