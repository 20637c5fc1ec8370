//! Gamma, Riemann zeta, the completed zeta `xi(s) = pi^(-s/2) Gamma(s/2) zeta(s)`
//! and the entire function `chi(s) = s(s-1) xi(s)`.
//!
//! Gamma uses the Stirling series after an upward shift (reflection in the left
//! half-plane); zeta uses Euler–Maclaurin summation for `Re(s) >= 0` and the
//! functional equation below that.

use std::sync::Mutex;

use rug::float::Constant;
use rug::{Float, Integer, Rational};

use crate::error::{Error, Result};
use crate::precision::{BigComplex, BigReal, PrecisionContext};

/// Value of a meromorphic function together with a heuristic error bound.
#[derive(Debug, Clone)]
pub struct EvalResult {
    pub value: BigComplex,
    pub residual_estimate: BigReal,
    pub at_pole: bool,
}

impl EvalResult {
    pub fn regular(value: BigComplex, ctx: &PrecisionContext) -> Self {
        let residual_estimate = heuristic_error(&value, ctx);
        Self {
            value,
            residual_estimate,
            at_pole: false,
        }
    }

    pub fn pole(ctx: &PrecisionContext) -> Self {
        Self {
            value: BigComplex::infinity(ctx.working_bits()),
            residual_estimate: ctx.real(rug::float::Special::Infinity),
            at_pole: true,
        }
    }

    /// The value, or a pole error naming `function` and `s`.
    pub fn finite(self, function: &str, s: &BigComplex) -> Result<BigComplex> {
        if self.at_pole {
            Err(Error::Pole {
                function: function.into(),
                location: s.to_string(),
            })
        } else {
            Ok(self.value)
        }
    }
}

fn heuristic_error(value: &BigComplex, ctx: &PrecisionContext) -> BigReal {
    let scale = value.abs();
    let one = ctx.real(1);
    let scale = if scale > one { scale } else { one };
    scale * ctx.pow2(-(ctx.bits() as i32) + 8)
}

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// `B_{2k}` for `k = 1..=count` (index 0 holds `B_2`).
///
/// Built from tangent numbers, which only need small-integer multiply/add.
fn bernoulli_table(count: usize) -> Vec<Rational> {
    let mut cache = BERNOULLI.lock().expect("bernoulli cache poisoned");
    if cache.len() < count {
        let n = count.max(2 * cache.len()).max(64);
        let mut tangent: Vec<Integer> = vec![Integer::new(); n + 1];
        tangent[1] = Integer::from(1);
        for k in 2..=n {
            tangent[k] = Integer::from(&tangent[k - 1] * (k as u32 - 1));
        }
        for k in 2..=n {
            for j in k..=n {
                let a = Integer::from(&tangent[j - 1] * (j - k) as u32);
                let b = Integer::from(&tangent[j] * (j - k + 2) as u32);
                tangent[j] = a + b;
            }
        }
        let mut table = Vec::with_capacity(n);
        for (k, t) in tangent.iter().enumerate().skip(1) {
            // B_{2k} = (-1)^(k-1) 2k T_k / (4^k (4^k - 1))
            let four_k = Integer::from(1) << (2 * k as u32);
            let den = &four_k * (Integer::from(&four_k - 1u32));
            let num = Integer::from(t * (2 * k as u32));
            let mut b = Rational::from((num, den));
            if k % 2 == 0 {
                b = -b;
            }
            table.push(b);
        }
        *cache = table;
    }
    cache[..count].to_vec()
}

/// Exact Bernoulli number `B_m` (with `B_1 = -1/2`).
pub fn bernoulli(m: usize) -> Rational {
    match m {
        0 => Rational::from(1),
        1 => Rational::from((-1, 2)),
        _ if m % 2 == 1 => Rational::new(),
        _ => bernoulli_table(m / 2)[m / 2 - 1].clone(),
    }
}

fn is_nonpositive_integer(z: &BigComplex) -> bool {
    z.im.is_zero() && z.re.is_integer() && (z.re.is_zero() || z.re.is_sign_negative())
}

fn bit_length(x: f64) -> u32 {
    if x <= 1.0 {
        1
    } else {
        x.log2().ceil() as u32 + 1
    }
}

/// Some logarithm of `Gamma(z)` (the branch is not normalised, so only
/// `exp` of the result and differences of such values are meaningful).
pub(crate) fn log_gamma_unbranched(z: &BigComplex, wp: u32) -> Result<BigComplex> {
    if is_nonpositive_integer(z) {
        return Err(Error::Pole {
            function: "gamma".into(),
            location: z.to_string(),
        });
    }
    let mag = z.abs().to_f64().max(2.0);
    let p = wp + 16 + bit_length(mag * mag.ln());
    let z = BigComplex::with_val(p, &z.re, &z.im);
    let half = Float::with_val(p, 0.5);
    if z.re < half {
        // Gamma(z) = pi / (sin(pi z) Gamma(1 - z))
        let pi = Float::with_val(p, Constant::Pi);
        let sin = z.scale(&pi).sin();
        let reflected = log_gamma_unbranched(&z.int_sub(1), wp)?;
        let ln_pi = BigComplex::from_real(pi.ln());
        return Ok(&(&ln_pi - &sin.ln()?) - &reflected);
    }
    let threshold = (wp as f64 / 8.0).ceil();
    let shift = (threshold - z.re.to_f64()).ceil().max(0.0) as i64;
    let w = z.add_int(shift);
    let mut series = stirling(&w, p);
    if shift > 0 {
        let mut prod = z.clone();
        for k in 1..shift {
            prod = &prod * &z.add_int(k);
        }
        series = &series - &prod.ln()?;
    }
    Ok(series)
}

const SERIES_TERMS: usize = 300;

fn stirling(w: &BigComplex, p: u32) -> BigComplex {
    let two_pi = Float::with_val(p, Constant::Pi) * 2u32;
    let half_ln_2pi = two_pi.ln() / 2u32;
    let ln_w = w.ln().expect("stirling argument is nonzero");
    let mut acc = &(&w.add_real(&Float::with_val(p, -0.5)) * &ln_w) - w;
    acc = acc.add_real(&half_ln_2pi);
    let inv = w.recip();
    let inv_sq = inv.square();
    let mut power = inv;
    let tol = Float::with_val(p, 1) >> (p as i32);
    let mut prev: Option<BigReal> = None;
    for (idx, b) in bernoulli_table(SERIES_TERMS).iter().enumerate() {
        let k = idx as u64 + 1;
        let coeff = Float::with_val(p, b) / (2 * k * (2 * k - 1));
        let term = power.scale(&coeff);
        let size = term.abs();
        // asymptotic series: stop at the smallest term
        if prev.as_ref().is_some_and(|q| size > *q) {
            break;
        }
        acc = &acc + &term;
        if size < tol {
            break;
        }
        prev = Some(size);
        power = &power * &inv_sq;
    }
    acc
}

/// Complex Gamma function.
pub fn gamma(z: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let wp = ctx.working_bits();
    let lg = log_gamma_unbranched(&ctx.round(z), wp)?;
    Ok(ctx.round(&lg.exp()))
}

/// `n^(-s)` for `n = 1..count`, using complete multiplicativity so that only
/// prime bases need a complex exponential.
fn inverse_powers(s: &BigComplex, count: usize, p: u32) -> Vec<BigComplex> {
    let mut smallest = vec![0usize; count + 1];
    let mut out: Vec<BigComplex> = Vec::with_capacity(count + 1);
    out.push(BigComplex::zero(p));
    out.push(BigComplex::one(p));
    let neg_s = -s;
    for n in 2..=count {
        if smallest[n] == 0 {
            let mut m = n;
            while m <= count {
                if smallest[m] == 0 {
                    smallest[m] = n;
                }
                m += n;
            }
        }
        let q = smallest[n];
        if q == n {
            let ln_n = Float::with_val(p, n as u32).ln();
            out.push(neg_s.scale(&ln_n).exp());
        } else {
            let v = &out[q] * &out[n / q];
            out.push(v);
        }
    }
    out
}

fn zeta_euler_maclaurin(s: &BigComplex, ctx: &PrecisionContext) -> BigComplex {
    let t = s.im.to_f64().abs();
    let mag = s.abs().to_f64();
    let mut n_terms = (0.8 * t + ctx.working_bits() as f64 / 4.0).ceil().max(20.0);
    n_terms = n_terms.max(mag / (2.0 * std::f64::consts::PI) + 10.0);
    let n = n_terms as usize;
    let p = ctx.working_bits() + 16 + bit_length(n as f64) + bit_length(mag);
    let s = BigComplex::with_val(p, &s.re, &s.im);
    let powers = inverse_powers(&s, n, p);
    let mut sum = BigComplex::zero(p);
    for v in &powers[1..n] {
        sum = &sum + v;
    }
    let n_pow = powers[n].clone(); // N^(-s)
    let nf = Float::with_val(p, n as u32);
    let s_minus_1 = s.add_int(-1);
    sum = &sum + &(&n_pow.scale(&nf) / &s_minus_1);
    sum = &sum + &n_pow.div_int(2);

    let tol = Float::with_val(p, 1) >> (p as i32);
    let inv_n = Float::with_val(p, 1) / &nf;
    let inv_n_sq = Float::with_val(p, &inv_n * &inv_n);
    let mut poch = s.clone();
    let mut power = n_pow.scale(&inv_n);
    let mut factorial = Integer::from(2);
    let table = bernoulli_table(SERIES_TERMS);
    let mut prev = Float::with_val(p, rug::float::Special::Infinity);
    for k in 1..=SERIES_TERMS {
        let coeff = Float::with_val(p, &table[k - 1]) / &factorial;
        let term = (&poch * &power).scale(&coeff);
        let size = term.abs();
        sum = &sum + &term;
        let scale = sum.abs().max(&n_pow.abs());
        if size < Float::with_val(p, &tol * &scale) || size > prev {
            break;
        }
        prev = size;
        let a = s.add_int(2 * k as i64 - 1);
        let b = s.add_int(2 * k as i64);
        poch = &poch * &(&a * &b);
        power = power.scale(&inv_n_sq);
        factorial *= ((2 * k + 1) * (2 * k + 2)) as u32;
    }
    sum
}

/// Riemann zeta function; pole error at exactly `s = 1`.
pub fn zeta(s: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let s = ctx.round(s);
    if s.im.is_zero() && s.re == 1 {
        return Err(Error::Pole {
            function: "zeta".into(),
            location: s.to_string(),
        });
    }
    if s.re.is_sign_negative() && !s.re.is_zero() {
        // zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s) zeta(1 - s)
        let wp = ctx.working_bits();
        let one_minus = s.int_sub(1);
        let inner = ctx.with_bits(ctx.bits() + 16)?;
        let z1 = zeta_euler_maclaurin(&one_minus, &inner);
        let pi = ctx.pi();
        let ln2 = Float::with_val(wp, Constant::Log2);
        let log_factor = &s.scale(&ln2) + &s.add_int(-1).scale(&pi.clone().ln());
        let lg = log_gamma_unbranched(&one_minus, wp)?;
        let sin = s.scale(&pi).div_int(2).sin();
        let v = &(&(&log_factor + &lg).exp() * &sin) * &z1;
        return Ok(ctx.round(&v));
    }
    Ok(ctx.round(&zeta_euler_maclaurin(&s, ctx)))
}

fn near(s: &BigComplex, point: i64, tol: &BigReal) -> bool {
    s.add_int(-point).abs() < *tol
}

/// Completed zeta `pi^(-s/2) Gamma(s/2) zeta(s)`; poles at 0 and 1 are flagged.
pub fn xi(s: &BigComplex, ctx: &PrecisionContext) -> EvalResult {
    let s = ctx.round(s);
    let tol = ctx.pole_tolerance();
    if near(&s, 0, &tol) || near(&s, 1, &tol) {
        return EvalResult::pole(ctx);
    }
    match xi_value(&s, ctx) {
        Ok(v) => EvalResult::regular(v, ctx),
        Err(_) => EvalResult::pole(ctx),
    }
}

fn xi_value(s: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let half = s.div_int(2);
    if is_nonpositive_integer(&half) {
        // Gamma(s/2) has a pole cancelled by a trivial zero of zeta.
        return xi_value(&s.int_sub(1), ctx);
    }
    let wp = ctx.working_bits();
    let lg = log_gamma_unbranched(&half, wp)?;
    let ln_pi = ctx.pi().ln();
    let log_factor = &lg - &half.scale(&ln_pi);
    let z = zeta(s, ctx)?;
    Ok(ctx.round(&(&log_factor.exp() * &z)))
}

/// `chi(s) = s(s-1) xi(s)`, entire, with `chi(0) = chi(1) = 1`.
pub fn chi(s: &BigComplex, ctx: &PrecisionContext) -> BigComplex {
    let s = ctx.round(s);
    let tol = ctx.pole_tolerance();
    if near(&s, 0, &tol) || near(&s, 1, &tol) {
        return ctx.complex(1, 0);
    }
    let x = xi(&s, ctx);
    let poly = &s * &s.add_int(-1);
    ctx.round(&(&poly * &x.value))
}

/// Exact residue of `xi` at its poles: `-1` at 0, `+1` at 1.
pub fn xi_residue(pole: i64) -> Result<Rational> {
    match pole {
        0 => Ok(Rational::from(-1)),
        1 => Ok(Rational::from(1)),
        other => Err(Error::Precondition(format!(
            "xi has no pole at {other}; poles are 0 and 1"
        ))),
    }
}

/// `xi` at an exact rational argument away from the poles.
pub fn xi_rational(q: &Rational, ctx: &PrecisionContext) -> Result<BigComplex> {
    let s = BigComplex::from_real(Float::with_val(ctx.working_bits(), q));
    xi(&s, ctx).finite("xi", &s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(256).unwrap()
    }

    fn rel_err(a: &BigComplex, b: &BigComplex) -> f64 {
        let d = a.dist(b);
        let s = b.abs();
        (d / s).to_f64()
    }

    #[test]
    fn bernoulli_small_values() {
        assert_eq!(bernoulli(2), Rational::from((1, 6)));
        assert_eq!(bernoulli(4), Rational::from((-1, 30)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
        assert_eq!(bernoulli(3), Rational::new());
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
    }

    #[test]
    fn bernoulli_matches_recurrence() {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        for m in [6usize, 20, 41, 60] {
            let mut acc = Rational::new();
            for k in 0..=m {
                let c = Integer::from(Integer::binomial_u(m as u32 + 1, k as u32));
                acc += Rational::from(c) * bernoulli(k);
            }
            assert_eq!(acc, 0, "m = {m}");
        }
    }

    #[test]
    fn gamma_examples() {
        let c = ctx();
        let g1 = gamma(&c.complex(1, 0), &c).unwrap();
        assert!(g1.dist(&c.complex(1, 0)) < c.pow2(-248));
        let g4 = gamma(&c.complex(4, 0), &c).unwrap();
        assert!(rel_err(&g4, &c.complex(6, 0)) < 1e-74);
        let gh = gamma(&c.complex(0.5, 0), &c).unwrap();
        let sqrt_pi = BigComplex::from_real(c.pi().sqrt());
        assert!(rel_err(&gh, &sqrt_pi) < 1e-74);
        assert!(gh.to_string().starts_with("1.7724538509"));
    }

    #[test]
    fn gamma_poles_rejected() {
        let c = ctx();
        for k in [0, -1, -7] {
            assert!(matches!(gamma(&c.complex(k, 0), &c), Err(Error::Pole { .. })));
        }
    }

    #[test]
    fn gamma_matches_mpfr_on_reals() {
        let c = ctx();
        for x in [0.1, 2.75, 13.5, -3.25, 40.125, -0.5] {
            let ours = gamma(&c.complex(x, 0), &c).unwrap();
            let reference = BigComplex::from_real(c.real(x).gamma());
            assert!(rel_err(&ours, &reference) < 1e-72, "x = {x}");
            assert!(ours.im.is_zero() || ours.im.clone().abs() < 1e-70);
        }
    }

    #[test]
    fn gamma_recurrence_complex() {
        let c = ctx();
        for (a, b) in [(0.3, 7.0), (-2.4, 1.1), (5.5, -40.0), (0.5, 100.0)] {
            let z = c.complex(a, b);
            let lhs = gamma(&z.add_int(1), &c).unwrap();
            let rhs = &z * &gamma(&z, &c).unwrap();
            assert!(rel_err(&lhs, &rhs) < 1e-70, "z = {z}");
        }
    }

    #[test]
    fn zeta_known_values() {
        let c = ctx();
        let z2 = zeta(&c.complex(2, 0), &c).unwrap();
        let pi2_6 = BigComplex::from_real(c.pi().square() / 6u32);
        assert!(rel_err(&z2, &pi2_6) < 1e-74);
        assert!(z2.to_string().starts_with("1.6449340668"));
        let z0 = zeta(&c.complex(0, 0), &c).unwrap();
        assert!(rel_err(&z0, &c.complex(-0.5, 0)) < 1e-74);
        let zm1 = zeta(&c.complex(-1, 0), &c).unwrap();
        let expected = BigComplex::from_real(c.real(-1) / 12u32);
        assert!(rel_err(&zm1, &expected) < 1e-74);
    }

    #[test]
    fn zeta_pole() {
        let c = ctx();
        assert!(matches!(zeta(&c.complex(1, 0), &c), Err(Error::Pole { .. })));
    }

    #[test]
    fn zeta_matches_mpfr_on_reals() {
        let c = ctx();
        for x in [0.5, 3.0, 7.25, 31.0, -4.5, -13.0, 0.999] {
            let ours = zeta(&c.complex(x, 0), &c).unwrap();
            let reference = BigComplex::from_real(c.real(x).zeta());
            assert!(rel_err(&ours, &reference) < 1e-70, "x = {x}");
        }
    }

    #[test]
    fn xi_examples() {
        let c = ctx();
        let x2 = xi(&c.complex(2, 0), &c);
        assert!(!x2.at_pole);
        let pi6 = BigComplex::from_real(c.pi() / 6u32);
        assert!(rel_err(&x2.value, &pi6) < 1e-74);
        let x4 = xi(&c.complex(4, 0), &c).value;
        let pi2_90 = BigComplex::from_real(c.pi().square() / 90u32);
        assert!(rel_err(&x4, &pi2_90) < 1e-74);
        assert!(x4.to_string().starts_with("0.1096622711"));
        assert!(xi(&c.complex(0, 0), &c).at_pole);
        assert!(xi(&c.complex(1, 0), &c).at_pole);
    }

    #[test]
    fn xi_at_even_negative_integers() {
        let c = ctx();
        let a = xi(&c.complex(-4, 0), &c).value;
        let b = xi(&c.complex(5, 0), &c).value;
        assert!(rel_err(&a, &b) < 1e-74);
    }

    #[test]
    fn chi_limits_and_residues() {
        let c = ctx();
        assert_eq!(chi(&c.complex(0, 0), &c), c.complex(1, 0));
        assert_eq!(chi(&c.complex(1, 0), &c), c.complex(1, 0));
        let tiny = c.real(rug::Float::parse("1e-30").unwrap());
        let near0 = chi(&BigComplex::from_real(tiny.clone()), &c);
        assert!(near0.dist(&c.complex(1, 0)) < 1e-28);
        assert_eq!(xi_residue(0).unwrap(), -1);
        assert_eq!(xi_residue(1).unwrap(), 1);
        assert!(xi_residue(2).is_err());
    }
}
