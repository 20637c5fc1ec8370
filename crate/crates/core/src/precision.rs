//! Arbitrary-precision scalars and precision contexts.
//!
//! Reals are MPFR floats (re-exported as [`BigReal`]); [`BigComplex`] is a
//! rectangular pair of them with its own field operations and principal-branch
//! elementary functions.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::{Constant, Special};
use rug::{Assign, Float};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use rug::Float as BigReal;

pub const MIN_BITS: u32 = 64;
pub const DEFAULT_BITS: u32 = 256;
pub const MIN_GUARD_BITS: u32 = 16;
pub const DEFAULT_GUARD_BITS: u32 = 32;

/// Working precision for a computation.
///
/// `bits` is the precision results are promised at; arithmetic is carried out
/// at `bits + guard_bits`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrecisionContext {
    bits: u32,
    guard_bits: u32,
}

impl PrecisionContext {
    pub fn new(bits: u32) -> Result<Self> {
        Self::with_guard(bits, DEFAULT_GUARD_BITS)
    }

    pub fn with_guard(bits: u32, guard_bits: u32) -> Result<Self> {
        if bits < MIN_BITS {
            return Err(Error::PrecisionTooLow { bits, min: MIN_BITS });
        }
        Ok(Self {
            bits,
            guard_bits: guard_bits.max(MIN_GUARD_BITS),
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn guard_bits(&self) -> u32 {
        self.guard_bits
    }

    /// Mantissa length used for intermediate values.
    pub fn working_bits(&self) -> u32 {
        self.bits + self.guard_bits
    }

    /// Same guard policy at a different target precision.
    pub fn with_bits(&self, bits: u32) -> Result<Self> {
        Self::with_guard(bits, self.guard_bits)
    }

    pub fn real<T>(&self, value: T) -> BigReal
    where
        Float: Assign<T>,
    {
        Float::with_val(self.working_bits(), value)
    }

    pub fn complex<R, I>(&self, re: R, im: I) -> BigComplex
    where
        Float: Assign<R> + Assign<I>,
    {
        BigComplex::with_val(self.working_bits(), re, im)
    }

    /// Rounds `z` to the working precision of this context.
    pub fn round(&self, z: &BigComplex) -> BigComplex {
        BigComplex::new(
            Float::with_val(self.working_bits(), &z.re),
            Float::with_val(self.working_bits(), &z.im),
        )
    }

    pub fn pi(&self) -> BigReal {
        Float::with_val(self.working_bits(), Constant::Pi)
    }

    /// `2^(-exp)` at working precision.
    pub fn pow2(&self, exp: i32) -> BigReal {
        let one = Float::with_val(self.working_bits(), 1);
        one << exp
    }

    /// Unit roundoff at the target precision, `2^(-bits)`.
    pub fn epsilon(&self) -> BigReal {
        self.pow2(-(self.bits as i32))
    }

    /// Radius inside which an argument counts as sitting on a pole: `2^(-bits/2)`.
    pub fn pole_tolerance(&self) -> BigReal {
        self.pow2(-((self.bits / 2) as i32))
    }

    /// Number of trustworthy decimal digits, `floor(bits*log10(2))`.
    pub fn decimal_digits(&self) -> usize {
        (self.bits as f64 * std::f64::consts::LOG10_2).floor() as usize
    }

    /// Digits shown in reports: ten fewer than [`Self::decimal_digits`].
    pub fn display_digits(&self) -> usize {
        self.decimal_digits().saturating_sub(10).max(1)
    }
}

impl Default for PrecisionContext {
    fn default() -> Self {
        Self {
            bits: DEFAULT_BITS,
            guard_bits: DEFAULT_GUARD_BITS,
        }
    }
}

pub fn create_context(bits: u32) -> Result<PrecisionContext> {
    PrecisionContext::new(bits)
}

/// Complex number with MPFR real and imaginary parts.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        Self { re, im }
    }

    pub fn with_val<R, I>(prec: u32, re: R, im: I) -> Self
    where
        Float: Assign<R> + Assign<I>,
    {
        Self {
            re: Float::with_val(prec, re),
            im: Float::with_val(prec, im),
        }
    }

    pub fn from_real(re: BigReal) -> Self {
        let im = Float::new(re.prec());
        Self { re, im }
    }

    pub fn zero(prec: u32) -> Self {
        Self::with_val(prec, 0, 0)
    }

    pub fn one(prec: u32) -> Self {
        Self::with_val(prec, 1, 0)
    }

    pub fn i(prec: u32) -> Self {
        Self::with_val(prec, 0, 1)
    }

    pub fn infinity(prec: u32) -> Self {
        Self::with_val(prec, Special::Infinity, Special::Infinity)
    }

    pub fn nan(prec: u32) -> Self {
        Self::with_val(prec, Special::Nan, Special::Nan)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_nan(&self) -> bool {
        self.re.is_nan() || self.im.is_nan()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn mul_i(&self) -> Self {
        Self::new(-self.im.clone(), self.re.clone())
    }

    pub fn abs(&self) -> BigReal {
        self.re.clone().hypot(&self.im)
    }

    pub fn norm_sqr(&self) -> BigReal {
        Float::with_val(self.prec(), &self.re * &self.re + &self.im * &self.im)
    }

    /// Principal argument in `(-pi, pi]`.
    pub fn arg(&self) -> BigReal {
        self.im.clone().atan2(&self.re)
    }

    pub fn scale(&self, k: &BigReal) -> Self {
        let p = self.prec().max(k.prec());
        Self::new(Float::with_val(p, &self.re * k), Float::with_val(p, &self.im * k))
    }

    pub fn add_real(&self, k: &BigReal) -> Self {
        let p = self.prec().max(k.prec());
        Self::new(Float::with_val(p, &self.re + k), Float::with_val(p, &self.im))
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Self::new(
            Float::with_val(self.prec(), &self.re * k),
            Float::with_val(self.prec(), &self.im * k),
        )
    }

    pub fn add_int(&self, k: i64) -> Self {
        Self::new(Float::with_val(self.prec(), &self.re + k), self.im.clone())
    }

    pub fn div_int(&self, k: i64) -> Self {
        Self::new(
            Float::with_val(self.prec(), &self.re / k),
            Float::with_val(self.prec(), &self.im / k),
        )
    }

    /// `k - self` for an integer `k`.
    pub fn int_sub(&self, k: i64) -> Self {
        Self::new(Float::with_val(self.prec(), k - &self.re), -self.im.clone())
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn recip(&self) -> Self {
        &BigComplex::one(self.prec()) / self
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let modulus = self.re.clone().exp();
        let (sin, cos) = self.im.clone().sin_cos(Float::new(p));
        Self::new(Float::with_val(p, &modulus * &cos), Float::with_val(p, &modulus * &sin))
    }

    /// Principal logarithm; rejects zero.
    pub fn ln(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Domain("log(0)".into()));
        }
        Ok(Self::new(self.abs().ln(), self.arg()))
    }

    /// Principal square root (branch cut on the negative real axis, `sqrt(-1) = i`).
    pub fn sqrt(&self) -> Self {
        let p = self.prec();
        if self.is_zero() {
            return Self::zero(p);
        }
        let r = self.abs();
        if !self.re.is_sign_negative() {
            let t = (Float::with_val(p, &r + &self.re) / 2u32).sqrt();
            let im = Float::with_val(p, &self.im / &t) / 2u32;
            Self::new(t, im)
        } else {
            let t = (Float::with_val(p, &r - &self.re) / 2u32).sqrt();
            let re = Float::with_val(p, self.im.clone().abs() / &t) / 2u32;
            let im = if self.im.is_sign_negative() { -t } else { t };
            Self::new(re, im)
        }
    }

    /// `self^w` on the principal branch; `0^w = 0` when `Re w > 0`.
    pub fn pow(&self, w: &BigComplex) -> Result<Self> {
        if self.is_zero() {
            if w.re.is_sign_positive() && !w.re.is_zero() {
                return Ok(Self::zero(self.prec()));
            }
            return Err(Error::Domain("0^w with Re(w) <= 0".into()));
        }
        Ok((&self.ln()? * w).exp())
    }

    pub fn powi(&self, n: i32) -> Self {
        let mut base = if n < 0 { self.recip() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Self::one(self.prec());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = base.square();
            }
        }
        acc
    }

    pub fn sin(&self) -> Self {
        let p = self.prec();
        let (s, c) = self.re.clone().sin_cos(Float::new(p));
        let (sh, ch) = self.im.clone().sinh_cosh(Float::new(p));
        Self::new(Float::with_val(p, &s * &ch), Float::with_val(p, &c * &sh))
    }

    pub fn cos(&self) -> Self {
        let p = self.prec();
        let (s, c) = self.re.clone().sin_cos(Float::new(p));
        let (sh, ch) = self.im.clone().sinh_cosh(Float::new(p));
        Self::new(Float::with_val(p, &c * &ch), -Float::with_val(p, &s * &sh))
    }

    /// `|self - other|`.
    pub fn dist(&self, other: &BigComplex) -> BigReal {
        (self - other).abs()
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_value(self, 20))
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        write!(f, "{}", format_value(self, digits))
    }
}

fn add_impl(a: &BigComplex, b: &BigComplex) -> BigComplex {
    let p = a.prec().max(b.prec());
    BigComplex::new(Float::with_val(p, &a.re + &b.re), Float::with_val(p, &a.im + &b.im))
}

fn sub_impl(a: &BigComplex, b: &BigComplex) -> BigComplex {
    let p = a.prec().max(b.prec());
    BigComplex::new(Float::with_val(p, &a.re - &b.re), Float::with_val(p, &a.im - &b.im))
}

// Both components are single-rounding fused expressions, so the product is
// exactly commutative.
fn mul_impl(a: &BigComplex, b: &BigComplex) -> BigComplex {
    let p = a.prec().max(b.prec());
    BigComplex::new(
        Float::with_val(p, &a.re * &b.re - &a.im * &b.im),
        Float::with_val(p, &a.re * &b.im + &a.im * &b.re),
    )
}

fn div_impl(a: &BigComplex, b: &BigComplex) -> BigComplex {
    let p = a.prec().max(b.prec()) + 8;
    let den = Float::with_val(p, &b.re * &b.re + &b.im * &b.im);
    let re = Float::with_val(p, &a.re * &b.re + &a.im * &b.im);
    let im = Float::with_val(p, &a.im * &b.re - &a.re * &b.im);
    let out = p - 8;
    BigComplex::new(Float::with_val(out, re / &den), Float::with_val(out, im / &den))
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $imp:ident) => {
        impl<'a, 'b> $tr<&'b BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: &'b BigComplex) -> BigComplex {
                $imp(self, rhs)
            }
        }
        impl<'b> $tr<&'b BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: &'b BigComplex) -> BigComplex {
                $imp(&self, rhs)
            }
        }
        impl<'a> $tr<BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: BigComplex) -> BigComplex {
                $imp(self, &rhs)
            }
        }
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $method(self, rhs: BigComplex) -> BigComplex {
                $imp(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_impl);
forward_binop!(Sub, sub, sub_impl);
forward_binop!(Mul, mul, mul_impl);
forward_binop!(Div, div, div_impl);

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-self.re, -self.im)
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-self.re.clone(), -self.im.clone())
    }
}

/// Elementary operations exposed through [`elementary`].
#[derive(Debug, Clone)]
pub enum Elementary {
    Exp,
    Log,
    Sqrt,
    Pow(BigComplex),
    Sin,
    Cos,
}

/// Applies `op` to `z` at the working precision of `ctx`.
pub fn elementary(op: &Elementary, z: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    let z = ctx.round(z);
    match op {
        Elementary::Exp => Ok(z.exp()),
        Elementary::Log => z.ln(),
        Elementary::Sqrt => Ok(z.sqrt()),
        Elementary::Pow(w) => z.pow(&ctx.round(w)),
        Elementary::Sin => Ok(z.sin()),
        Elementary::Cos => Ok(z.cos()),
    }
}

/// Decimal rendering of a real with `digits` significant digits, trailing
/// zeros removed. Uses positional notation for moderate exponents and
/// `d.ddde±k` otherwise.
pub fn format_real(x: &BigReal, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf" } else { "inf" }.into();
    }
    if x.is_zero() {
        return "0".into();
    }
    let digits = digits.max(1);
    let (negative, mantissa, exp) = x.to_sign_string_exp(10, Some(digits));
    let exp = exp.unwrap_or(0) as i64;
    let mantissa = mantissa.trim_end_matches('0');
    let mantissa = if mantissa.is_empty() { "0" } else { mantissa };
    let len = mantissa.len() as i64;
    let mut out = String::new();
    if negative {
        out.push('-');
    }
    if (-6..=30).contains(&exp) {
        if exp <= 0 {
            out.push_str("0.");
            for _ in 0..(-exp) {
                out.push('0');
            }
            out.push_str(mantissa);
        } else if exp >= len {
            out.push_str(mantissa);
            for _ in 0..(exp - len) {
                out.push('0');
            }
        } else {
            out.push_str(&mantissa[..exp as usize]);
            out.push('.');
            out.push_str(&mantissa[exp as usize..]);
        }
    } else {
        out.push_str(&mantissa[..1]);
        if len > 1 {
            out.push('.');
            out.push_str(&mantissa[1..]);
        }
        let e = exp - 1;
        out.push('e');
        out.push(if e < 0 { '-' } else { '+' });
        out.push_str(&e.abs().to_string());
    }
    out
}

/// Text form of a complex value: the real part alone when the imaginary part
/// is zero, otherwise `a+bi` / `a-bi`.
pub fn format_value(x: &BigComplex, digits: usize) -> String {
    if x.im.is_zero() {
        return format_real(&x.re, digits);
    }
    let re = format_real(&x.re, digits);
    let im = format_real(&x.im, digits);
    if let Some(mag) = im.strip_prefix('-') {
        format!("{re}-{mag}i")
    } else {
        format!("{re}+{im}i")
    }
}

pub fn parse_real(text: &str, prec: u32) -> Result<BigReal> {
    let t = text.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    match Float::parse(t) {
        Ok(parsed) => Ok(Float::with_val(prec, parsed)),
        Err(_) => Err(Error::Parse {
            what: "real number",
            input: text.to_string(),
        }),
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` (exponents allowed in either part).
pub fn parse_complex(text: &str, prec: u32) -> Result<BigComplex> {
    let err = || Error::Parse {
        what: "complex number",
        input: text.to_string(),
    };
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if t.is_empty() {
        return Err(err());
    }
    let Some(body) = t.strip_suffix('i') else {
        return Ok(BigComplex::from_real(parse_real(&t, prec)?));
    };
    let bytes = body.as_bytes();
    let mut split = None;
    for idx in (1..bytes.len()).rev() {
        let c = bytes[idx];
        if (c == b'+' || c == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
            split = Some(idx);
            break;
        }
    }
    let imag = |s: &str| -> Result<BigReal> {
        match s {
            "" | "+" => Ok(Float::with_val(prec, 1)),
            "-" => Ok(Float::with_val(prec, -1)),
            _ => parse_real(s, prec).map_err(|_| err()),
        }
    };
    match split {
        Some(idx) => {
            let re = parse_real(&body[..idx], prec).map_err(|_| err())?;
            Ok(BigComplex::new(re, imag(&body[idx..])?))
        }
        None => Ok(BigComplex::new(Float::with_val(prec, 0), imag(body)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256).unwrap()
    }

    #[test]
    fn create_context_bounds() {
        let c = create_context(256).unwrap();
        assert_eq!(c.bits(), 256);
        assert!(c.guard_bits() >= 16);
        assert_eq!(create_context(64).unwrap().bits(), 64);
        assert_eq!(create_context(32), Err(Error::PrecisionTooLow { bits: 32, min: 64 }));
        assert!(create_context(32)
            .unwrap_err()
            .to_string()
            .contains("precision too low"));
    }

    #[test]
    fn exp_log_sqrt_examples() {
        let c = ctx();
        let one = elementary(&Elementary::Exp, &c.complex(0, 0), &c).unwrap();
        assert_eq!(one, c.complex(1, 0));

        let e = elementary(&Elementary::Exp, &c.complex(1, 0), &c).unwrap();
        let back = elementary(&Elementary::Log, &e, &c).unwrap();
        let err = back.dist(&c.complex(1, 0));
        assert!(err < c.pow2(-(256 - 4)), "log(exp(1)) error {err}");

        let root = elementary(&Elementary::Sqrt, &c.complex(-1, 0), &c).unwrap();
        assert_eq!(root, c.complex(0, 1));
        let root = BigComplex::with_val(288, -1, -0.0).sqrt();
        assert_eq!(root.im, -1);
    }

    #[test]
    fn log_of_zero_is_domain_error() {
        let c = ctx();
        assert!(matches!(
            elementary(&Elementary::Log, &c.complex(0, 0), &c),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn overflow_flags_infinity() {
        let c = ctx();
        let huge = c.complex(Float::parse("1e100000000").unwrap(), 0);
        let v = elementary(&Elementary::Exp, &huge, &c).unwrap();
        assert!(v.re.is_infinite());
        assert!(!v.is_finite());
    }

    #[test]
    fn pow_and_trig_identities() {
        let c = ctx();
        let z = c.complex(0.3, -1.7);
        let w = c.complex(2, 0);
        let sq = elementary(&Elementary::Pow(w), &z, &c).unwrap();
        assert!(sq.dist(&z.square()) < c.pow2(-250));
        let s = z.sin();
        let co = z.cos();
        let one = &(&s * &s) + &(&co * &co);
        assert!(one.dist(&c.complex(1, 0)) < c.pow2(-250));
        assert!(z.powi(-2).dist(&z.square().recip()) < c.pow2(-250));
    }

    #[test]
    fn format_examples() {
        let c = ctx();
        let pi = BigComplex::from_real(Float::with_val(256, Constant::Pi));
        assert_eq!(format_value(&pi, 10), "3.141592654");
        assert_eq!(format_value(&c.complex(0, 0), 5), "0");
        let third = BigComplex::from_real(Float::with_val(128, 1) / 3u32);
        assert_eq!(format_value(&third, 20), "0.33333333333333333333");
        assert_eq!(format_value(&c.complex(-2.5, 0.125), 10), "-2.5+0.125i");
        assert_eq!(format_value(&c.complex(1, -3), 10), "1-3i");
        assert_eq!(format_real(&c.real(1.5e40), 5), "1.5e+40");
        assert_eq!(format_real(&c.real(-2.5e-9), 5), "-2.5e-9");
        assert_eq!(format_real(&c.real(1200), 5), "1200");
    }

    #[test]
    fn parse_forms() {
        let p = 288;
        let z = parse_complex("3+0i", p).unwrap();
        assert_eq!(z, BigComplex::with_val(p, 3, 0));
        let z = parse_complex("0.5-14.25i", p).unwrap();
        assert_eq!(z, BigComplex::with_val(p, 0.5, -14.25));
        let z = parse_complex("1e-3+2e+1i", p).unwrap();
        assert_eq!(z.im, 20);
        assert_eq!(z.re, Float::with_val(p, Float::parse("1e-3").unwrap()));
        assert_eq!(parse_complex("-i", p).unwrap(), BigComplex::with_val(p, 0, -1));
        assert_eq!(parse_complex("2.5", p).unwrap(), BigComplex::with_val(p, 2.5, 0));
        assert_eq!(parse_complex(" 7 i", p).unwrap(), BigComplex::with_val(p, 0, 7));
        assert!(parse_complex("abc", p).is_err());
        assert!(parse_complex("", p).is_err());
    }

    #[test]
    fn format_parse_round_trip_within_one_ulp() {
        let c = ctx();
        let x = c.pi() / 7u32;
        let digits = c.decimal_digits() + 2;
        let text = format_real(&x, digits);
        let back = parse_real(&text, c.working_bits()).unwrap();
        let rel = (Float::with_val(c.working_bits(), &back - &x) / &x).abs();
        assert!(rel <= c.pow2(-(c.bits() as i32) + 1), "rel {rel}");
    }

    #[test]
    fn display_digits_rule() {
        assert_eq!(ctx().decimal_digits(), 77);
        assert_eq!(ctx().display_digits(), 67);
    }
}
