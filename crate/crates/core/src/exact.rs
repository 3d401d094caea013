//! Exact rational helpers and arithmetic in the cubic extension `Q(s)`, `s^3 = r`.
//!
//! Expansion points of the branch series carry `t0^{1/3}` symbolically. Elements of
//! `Q(s)` are stored as `p0 + p1 s + p2 s^2`; when `r` is a perfect rational cube the
//! root is folded into `p0` so that the zero test stays exact.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"3"`, `"-1/3"`, `"0.001"`, `"1e-3"` or `"2.5E+2"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::precondition(format!("not a rational number: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = s.split_once('/') {
        let num: BigInt = n.trim().parse().map_err(|_| bad())?;
        let den: BigInt = d.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => {
            let e: i32 = s[i + 1..].parse().map_err(|_| bad())?;
            (&s[..i], e)
        }
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let joined = format!("{whole}{frac}");
    let mut num: BigInt = if joined.is_empty() {
        BigInt::zero()
    } else {
        joined.parse().map_err(|_| bad())?
    };
    if negative {
        num = -num;
    }
    let scale = exponent - frac.len() as i32;
    let ten = BigInt::from(10);
    let value = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Natural log of `|n|`, accurate for integers far beyond the `f64` range.
pub fn ln_abs_int(n: &BigInt) -> f64 {
    if n.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = n.bits();
    if bits <= 1000 {
        return n.abs().to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n.abs() >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_abs(x: &Rational) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    ln_abs_int(x.numer()) - ln_abs_int(x.denom())
}

/// Nearest `f64`, going through logarithms when numerator or denominator overflow.
pub fn to_f64(x: &Rational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    if let Some(v) = x.to_f64() {
        if v.is_finite() && v != 0.0 {
            return v;
        }
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    sign * ln_abs(x).exp()
}

/// Exact rational from a finite `f64` (every finite double is a dyadic rational).
pub fn from_f64(x: f64) -> Result<Rational> {
    Rational::from_float(x).ok_or_else(|| Error::precondition(format!("non-finite value {x}")))
}

/// `num/den` string used in every exact export.
pub fn rational_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

fn exact_cube_root(x: &Rational) -> Option<Rational> {
    let root = |n: &BigInt| {
        let r = n.cbrt();
        (&r * &r * &r == *n).then_some(r)
    };
    Some(Rational::new(root(x.numer())?, root(x.denom())?))
}

/// Element `p0 + p1 s + p2 s^2` of a [`CubicField`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Surd {
    pub parts: [Rational; 3],
}

impl Surd {
    pub fn zero() -> Self {
        Surd { parts: [Rational::zero(), Rational::zero(), Rational::zero()] }
    }

    pub fn rational(r: Rational) -> Self {
        Surd { parts: [r, Rational::zero(), Rational::zero()] }
    }

    pub fn is_rational(&self) -> bool {
        self.parts[1].is_zero() && self.parts[2].is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.parts[0])
    }

    pub fn scale(&self, k: &Rational) -> Surd {
        Surd { parts: [&self.parts[0] * k, &self.parts[1] * k, &self.parts[2] * k] }
    }

    pub fn add(&self, o: &Surd) -> Surd {
        Surd {
            parts: [
                &self.parts[0] + &o.parts[0],
                &self.parts[1] + &o.parts[1],
                &self.parts[2] + &o.parts[2],
            ],
        }
    }

    pub fn sub(&self, o: &Surd) -> Surd {
        Surd {
            parts: [
                &self.parts[0] - &o.parts[0],
                &self.parts[1] - &o.parts[1],
                &self.parts[2] - &o.parts[2],
            ],
        }
    }

    pub fn neg(&self) -> Surd {
        Surd { parts: [-&self.parts[0], -&self.parts[1], -&self.parts[2]] }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.iter().all(Zero::is_zero)
    }
}

/// `Q(s)` with `s^3 = radicand`, `radicand > 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CubicField {
    radicand: Rational,
    rational_root: Option<Rational>,
}

impl CubicField {
    pub fn new(radicand: Rational) -> Result<Self> {
        if !radicand.is_positive() {
            return Err(Error::precondition("cube-root radicand must be positive"));
        }
        let rational_root = exact_cube_root(&radicand);
        Ok(CubicField { radicand, rational_root })
    }

    /// The field `Q` itself (`s = 1`).
    pub fn trivial() -> Self {
        CubicField { radicand: Rational::one(), rational_root: Some(Rational::one()) }
    }

    pub fn radicand(&self) -> &Rational {
        &self.radicand
    }

    /// The generator `s = radicand^{1/3}`.
    pub fn generator(&self) -> Surd {
        match &self.rational_root {
            Some(r) => Surd::rational(r.clone()),
            None => Surd { parts: [Rational::zero(), Rational::one(), Rational::zero()] },
        }
    }

    pub fn mul(&self, a: &Surd, b: &Surd) -> Surd {
        let [a0, a1, a2] = &a.parts;
        let [b0, b1, b2] = &b.parts;
        let r = &self.radicand;
        // s^3 = r, s^4 = r s
        let c0 = a0 * b0 + r * (a1 * b2 + a2 * b1);
        let c1 = a0 * b1 + a1 * b0 + r * (a2 * b2);
        let c2 = a0 * b2 + a1 * b1 + a2 * b0;
        Surd { parts: [c0, c1, c2] }
    }

    pub fn to_f64(&self, x: &Surd) -> f64 {
        let s = to_f64(&self.radicand).cbrt();
        to_f64(&x.parts[0]) + s * (to_f64(&x.parts[1]) + s * to_f64(&x.parts[2]))
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names = ["", "s", "s^2"];
        let mut first = true;
        for (p, name) in self.parts.iter().zip(names) {
            if p.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{p}")?;
            if !name.is_empty() {
                write!(f, "*{name}")?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn sign_of(x: &Rational) -> Sign {
    x.numer().sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_decimal_forms() {
        assert_eq!(parse_rational("1e-3").unwrap(), rat(1, 1000));
        assert_eq!(parse_rational("-2.5E+2").unwrap(), int(-250));
        assert_eq!(parse_rational("0.125").unwrap(), rat(1, 8));
        assert_eq!(parse_rational(" 7/21 ").unwrap(), rat(1, 3));
        assert_eq!(parse_rational(".5").unwrap(), rat(1, 2));
        for bad in ["", "1/0", "abc", "1e", "--1", "1.2.3", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn ln_abs_handles_huge_integers() {
        let big = num_traits::pow(BigInt::from(6), 2000);
        let want = 2000.0 * 6f64.ln();
        assert!((ln_abs_int(&big) - want).abs() < 1e-9 * want);
        let x = Rational::new(BigInt::one(), big);
        assert!((ln_abs(&x) + want).abs() < 1e-9 * want);
        assert!((to_f64(&rat(-3, 4)) + 0.75).abs() == 0.0);
    }

    #[test]
    fn cubic_field_multiplication() {
        let k = CubicField::new(int(2)).unwrap();
        let s = k.generator();
        let s2 = k.mul(&s, &s);
        let s3 = k.mul(&s2, &s);
        assert_eq!(s3, Surd::rational(int(2)));
        assert!((k.to_f64(&s2) - 2f64.powf(2.0 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn perfect_cubes_fold_into_rationals() {
        let k = CubicField::new(rat(8, 27)).unwrap();
        assert_eq!(k.generator(), Surd::rational(rat(2, 3)));
        assert_eq!(CubicField::trivial().generator(), Surd::rational(int(1)));
        assert!(CubicField::new(int(0)).is_err());
    }
}
