//! Coefficient fields.
//!
//! Two modes are supported: [`Exact`], complex numbers with arbitrary-precision
//! rational parts, and [`Float`], double-precision complex numbers. Every
//! polynomial, jet and system is generic over one of them, so a computation can
//! never mix modes.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Exact = Complex<BigRational>;
pub type Float = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Float,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Exact => f.write_str("exact"),
            Mode::Float => f.write_str("float"),
        }
    }
}

pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const MODE: Mode;

    fn from_i64(v: i64) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    /// Exact modes convert the binary value exactly.
    fn from_c64(v: Complex64) -> Self;

    fn to_c64(&self) -> Complex64;

    /// Real and imaginary parts as text: `"p/q"` rationals in exact mode,
    /// shortest round-trip decimals in float mode.
    fn render_parts(&self) -> [String; 2];

    fn parse_parts(re: &str, im: &str) -> Result<Self>;

    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }

    fn try_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            Err(Error::NonUnitJet)
        } else {
            Ok(self.clone() / rhs.clone())
        }
    }

    fn pow_nat(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn pow_int(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow_nat(e as u32))
        } else {
            let inv = self.try_inv().ok_or(Error::NonUnitJet)?;
            Ok(inv.pow_nat((-e) as u32))
        }
    }
}

impl Scalar for Exact {
    const MODE: Mode = Mode::Exact;

    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex::new(
            BigRational::new(BigInt::from(num), BigInt::from(den)),
            BigRational::zero(),
        )
    }

    fn from_c64(v: Complex64) -> Self {
        let conv = |x: f64| BigRational::from_float(x).unwrap_or_else(BigRational::zero);
        Complex::new(conv(v.re), conv(v.im))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    fn render_parts(&self) -> [String; 2] {
        [self.re.to_string(), self.im.to_string()]
    }

    fn parse_parts(re: &str, im: &str) -> Result<Self> {
        Ok(Complex::new(parse_rational(re)?, parse_rational(im)?))
    }
}

impl Scalar for Float {
    const MODE: Mode = Mode::Float;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Complex64::new(num as f64 / den as f64, 0.0)
    }

    fn from_c64(v: Complex64) -> Self {
        v
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn render_parts(&self) -> [String; 2] {
        [format!("{:?}", self.re), format!("{:?}", self.im)]
    }

    fn parse_parts(re: &str, im: &str) -> Result<Self> {
        Ok(Complex64::new(parse_f64(re)?, parse_f64(im)?))
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

pub fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        if r.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Parses `"p/q"`, an integer, or a finite decimal such as `"-0.125"` or
/// `"3e-2"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if s.contains('/') {
        let r: BigRational = s
            .parse()
            .map_err(|e| Error::Parse(format!("bad rational `{s}`: {e:?}")))?;
        return Ok(r);
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = s[pos + 1..]
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{s}`")))?;
            (&s[..pos], exp)
        }
        None => (s, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    let digits = format!("{int_part}{frac_part}");
    let digits = if digits == "-" || digits == "+" || digits.is_empty() {
        return Err(Error::Parse(format!("bad number `{s}`")));
    } else {
        digits
    };
    let numer: BigInt = digits
        .parse()
        .map_err(|_| Error::Parse(format!("bad number `{s}`")))?;
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(r)
}

pub fn parse_f64(s: &str) -> Result<f64> {
    let s = s.trim();
    if s.contains('/') {
        let r = parse_rational(s)?;
        return Ok(ratio_to_f64(&r));
    }
    s.parse::<f64>()
        .map_err(|_| Error::Parse(format!("bad decimal `{s}`")))
}

/// Pairwise (cascade) summation in the given order.
pub fn pairwise_sum<F: Scalar>(values: &[F]) -> F {
    match values.len() {
        0 => F::zero(),
        1 => values[0].clone(),
        2 => values[0].clone() + values[1].clone(),
        len => {
            let (lo, hi) = values.split_at(len / 2);
            pairwise_sum(lo) + pairwise_sum(hi)
        }
    }
}

/// Decimal rendering with 17 significant digits.
pub fn decimal17(x: f64) -> String {
    format!("{x:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_arithmetic_is_closed() {
        let a = Exact::from_ratio(1, 3);
        let b = Exact::from_ratio(-2, 7);
        let c = (a.clone() * b.clone() + a.clone()) / b.clone();
        // (ab + a) / b = a + a/b = 1/3 - 7/6 = -5/6
        assert_eq!(c, Exact::from_ratio(-5, 6));
        assert!(a.try_div(&Exact::zero()).is_err());
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("17/4").unwrap(), BigRational::new(17.into(), 4.into()));
        assert_eq!(parse_rational("-3").unwrap(), BigRational::from_integer((-3).into()));
        assert_eq!(parse_rational("0.125").unwrap(), BigRational::new(1.into(), 8.into()));
        assert_eq!(parse_rational("-2.5e-1").unwrap(), BigRational::new((-1).into(), 4.into()));
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("").is_err());
    }

    #[test]
    fn powers() {
        let i = Exact::new(BigRational::zero(), BigRational::one());
        assert_eq!(i.pow_nat(2), Exact::from_i64(-1));
        assert_eq!(Exact::from_i64(2).pow_int(-3).unwrap(), Exact::from_ratio(1, 8));
        assert!(Exact::zero().pow_int(-1).is_err());
        assert_eq!(Float::from_i64(3).pow_nat(4), Float::new(81.0, 0.0));
    }

    #[test]
    fn decimal_rendering_has_17_digits() {
        assert_eq!(decimal17(4.25), "4.2500000000000000e0");
        assert_eq!(decimal17(Exact::from_ratio(17, 4).to_c64().re), "4.2500000000000000e0");
    }
}
