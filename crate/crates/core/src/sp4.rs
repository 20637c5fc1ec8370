//! Closed-form evaluation of the Sp(4) zeta function over Q, the entire
//! function `Z(s)`, the auxiliary functions `f, g, U, V` and the remainder
//! ratios `R1, R2, R3`.

use std::fmt;
use std::str::FromStr;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::{BigComplex, BigReal, PrecisionContext};
use crate::special::{chi, log_gamma_unbranched, xi, zeta, EvalResult};

/// Named functions evaluable through [`evaluate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FunctionId {
    #[serde(rename = "xi")]
    Xi,
    #[serde(rename = "chi")]
    Chi,
    #[serde(rename = "xi-sp4")]
    XiSp4,
    #[serde(rename = "Z")]
    Z,
    #[serde(rename = "f")]
    F,
    #[serde(rename = "g")]
    G,
    #[serde(rename = "U")]
    U,
    #[serde(rename = "V")]
    V,
    #[serde(rename = "R1")]
    R1,
    #[serde(rename = "R2")]
    R2,
    #[serde(rename = "R3")]
    R3,
}

/// Behaviour under `s -> 1 - s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reflection {
    /// `F(1 - s) = F(s)`: real on the critical line.
    Symmetric,
    /// `F(1 - s) = -F(s)`: purely imaginary on the critical line.
    Antisymmetric,
}

impl FunctionId {
    pub const ALL: [FunctionId; 11] = [
        FunctionId::Xi,
        FunctionId::Chi,
        FunctionId::XiSp4,
        FunctionId::Z,
        FunctionId::F,
        FunctionId::G,
        FunctionId::U,
        FunctionId::V,
        FunctionId::R1,
        FunctionId::R2,
        FunctionId::R3,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            FunctionId::Xi => "xi",
            FunctionId::Chi => "chi",
            FunctionId::XiSp4 => "xi-sp4",
            FunctionId::Z => "Z",
            FunctionId::F => "f",
            FunctionId::G => "g",
            FunctionId::U => "U",
            FunctionId::V => "V",
            FunctionId::R1 => "R1",
            FunctionId::R2 => "R2",
            FunctionId::R3 => "R3",
        }
    }

    pub fn reflection(&self) -> Option<Reflection> {
        match self {
            FunctionId::Xi | FunctionId::Chi | FunctionId::XiSp4 => Some(Reflection::Symmetric),
            FunctionId::Z | FunctionId::U | FunctionId::V => Some(Reflection::Antisymmetric),
            _ => None,
        }
    }

    /// Real poles, all simple.
    pub fn poles(&self) -> &'static [i64] {
        match self {
            FunctionId::Xi => &[0, 1],
            FunctionId::XiSp4 => &[-1, 0, 1, 2],
            _ => &[],
        }
    }

    /// Real zeros known in closed form, as `(numerator, denominator)`.
    pub fn known_real_zeros(&self) -> &'static [(i64, i64)] {
        match self {
            FunctionId::Z => &[(0, 1), (1, 2), (1, 1)],
            FunctionId::U | FunctionId::V => &[(1, 2)],
            _ => &[],
        }
    }

    /// Whether the function is analytic away from its listed real poles, so
    /// the argument principle applies to rectangles avoiding them.
    pub fn is_contour_countable(&self) -> bool {
        !matches!(self, FunctionId::R1 | FunctionId::R2 | FunctionId::R3)
    }
}

impl fmt::Display for FunctionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FunctionId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Ok(match key.as_str() {
            "xi" => FunctionId::Xi,
            "chi" => FunctionId::Chi,
            "xi-sp4" | "xisp4" | "sp4" => FunctionId::XiSp4,
            "z" => FunctionId::Z,
            "f" => FunctionId::F,
            "g" => FunctionId::G,
            "u" => FunctionId::U,
            "v" => FunctionId::V,
            "r1" => FunctionId::R1,
            "r2" => FunctionId::R2,
            "r3" => FunctionId::R3,
            _ => return Err(Error::UnknownFunction(s.to_string())),
        })
    }
}

/// `A = pi/3 - 1`, taken from pi directly.
pub fn constant_a(ctx: &PrecisionContext) -> BigReal {
    ctx.pi() / 3u32 - 1u32
}

fn a_linear(s: &BigComplex, a: &BigReal, shift: i64) -> BigComplex {
    // A s + (shift terms): As - A + 1 for shift = 1, As - 1 for shift = -1
    let as_ = s.scale(a);
    match shift {
        1 => as_.add_real(&(Float::with_val(a.prec(), 1) - a)),
        -1 => as_.add_int(-1),
        _ => unreachable!("unsupported linear factor"),
    }
}

/// Dispatches `id` at `s`.
pub fn evaluate(id: FunctionId, s: &BigComplex, ctx: &PrecisionContext) -> Result<EvalResult> {
    let s = ctx.round(s);
    let regular = |v: BigComplex| Ok(EvalResult::regular(v, ctx));
    match id {
        FunctionId::Xi => Ok(xi(&s, ctx)),
        FunctionId::Chi => regular(chi(&s, ctx)),
        FunctionId::XiSp4 => Ok(xi_sp4(&s, ctx)),
        FunctionId::Z => regular(big_z(&s, ctx)),
        FunctionId::F => regular(f_aux(&s, ctx)),
        FunctionId::G => regular(g_aux(&s, ctx)),
        FunctionId::U => regular(u_v(&s, ctx).0),
        FunctionId::V => regular(u_v(&s, ctx).1),
        FunctionId::R1 => regular(remainders(&s, ctx)?.r1),
        FunctionId::R2 => regular(remainders(&s, ctx)?.r2),
        FunctionId::R3 => regular(remainders(&s, ctx)?.r3),
    }
}

/// Finite value of `id` at `s`; poles become errors.
pub fn evaluate_value(id: FunctionId, s: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    evaluate(id, s, ctx)?.finite(id.name(), s)
}

fn xi_finite(s: &BigComplex, ctx: &PrecisionContext) -> BigComplex {
    xi(s, ctx).value
}

/// The six-term expression, evaluated term by term.
fn xi_sp4_terms(s: &BigComplex, ctx: &PrecisionContext) -> BigComplex {
    let xi2 = xi_finite(&ctx.complex(2, 0), ctx);
    let xs1 = xi_finite(&s.add_int(1), ctx);
    let x2s = xi_finite(&s.mul_int(2), ctx);
    let xsm1 = xi_finite(&s.add_int(-1), ctx);
    let x2sm1 = xi_finite(&s.mul_int(2).add_int(-1), ctx);
    let xs = xi_finite(s, ctx);

    let a = &xs1 * &x2s;
    let b = &xsm1 * &x2sm1;
    let two_s = s.mul_int(2);
    let two_s_m2 = two_s.add_int(-2);

    let t1 = &(&xi2 * &a) / &s.add_int(-2);
    let t2 = &(&xi2 * &b) / &s.add_int(1);
    let t3 = &a / &two_s_m2;
    let t4 = &b / &two_s;
    let t5 = &(&xs * &x2s) / &(&two_s_m2 * &s.add_int(1));
    let t6 = &(&xs * &x2sm1) / &(&two_s * &s.add_int(-2));
    let v = &(&(&(&(&t1 - &t2) - &t3) + &t4) - &t5) - &t6;
    ctx.round(&v)
}

/// Cauchy-integral value of `f` at `s` from a circle of radius `radius`
/// around `center` (used across removable singularities of a formula).
pub(crate) fn cauchy_value<F>(
    f: F,
    center: &BigComplex,
    radius: &BigReal,
    nodes: usize,
    s: &BigComplex,
    ctx: &PrecisionContext,
) -> BigComplex
where
    F: Fn(&BigComplex) -> BigComplex,
{
    let p = ctx.working_bits();
    let two_pi = ctx.pi() * 2u32;
    let mut acc = BigComplex::zero(p);
    for k in 0..nodes {
        let theta = Float::with_val(p, &two_pi * k as u32) / nodes as u32;
        let (sin, cos) = theta.sin_cos(Float::new(p));
        let offset = BigComplex::new(cos, sin).scale(radius);
        let w = center + &offset;
        let value = f(&w);
        acc = &acc + &(&(&value * &offset) / &(&w - s));
    }
    ctx.round(&acc.div_int(nodes as i64))
}

/// Sp(4) zeta function; simple poles at -1, 0, 1, 2 are flagged.
pub fn xi_sp4(s: &BigComplex, ctx: &PrecisionContext) -> EvalResult {
    let s = ctx.round(s);
    let tol = ctx.pole_tolerance();
    if FunctionId::XiSp4.poles().iter().any(|&p| s.add_int(-p).abs() < tol) {
        return EvalResult::pole(ctx);
    }
    let half = ctx.complex(0.5, 0);
    // xi(2s) and xi(2s-1) both have poles at s = 1/2 that cancel between terms.
    let near_half = ctx.pow2(-((ctx.bits() / 8) as i32));
    if s.dist(&half) < near_half {
        let radius = ctx.real(0.125);
        let nodes = (ctx.working_bits() / 2 + 8) as usize;
        let v = cauchy_value(|w| xi_sp4_terms(w, ctx), &half, &radius, nodes, &s, ctx);
        return EvalResult::regular(v, ctx);
    }
    EvalResult::regular(xi_sp4_terms(&s, ctx), ctx)
}

struct ChiValues {
    plus1: BigComplex,
    zero: BigComplex,
    minus1: BigComplex,
    double: BigComplex,
    double_minus1: BigComplex,
}

impl ChiValues {
    fn new(s: &BigComplex, ctx: &PrecisionContext) -> Self {
        let two_s = s.mul_int(2);
        Self {
            plus1: chi(&s.add_int(1), ctx),
            zero: chi(s, ctx),
            minus1: chi(&s.add_int(-1), ctx),
            double_minus1: chi(&two_s.add_int(-1), ctx),
            double: chi(&two_s, ctx),
        }
    }
}

/// `Z(s)` from its entire four-term form.
pub fn big_z(s: &BigComplex, ctx: &PrecisionContext) -> BigComplex {
    let s = ctx.round(s);
    let a = constant_a(ctx);
    let c = ChiValues::new(&s, ctx);
    let t1 = &(&s.add_int(-1) * &a_linear(&s, &a, 1)) * &(&c.plus1 * &c.double);
    let t2 = &s.add_int(-2) * &(&c.zero * &c.double);
    let t3 = &(&s * &a_linear(&s, &a, -1)) * &(&c.minus1 * &c.double_minus1);
    let t4 = &s.add_int(1) * &(&c.zero * &c.double_minus1);
    ctx.round(&(&(&(&t1 - &t2) - &t3) - &t4))
}

/// `Z(s)` as `4 s^2 (s-1)^2 (s+1)(2s-1)(s-2) xi_sp4(s)`; kept as a cross-check.
pub fn big_z_from_xi_sp4(s: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let s = ctx.round(s);
    let x = xi_sp4(&s, ctx).finite("xi-sp4", &s)?;
    let poly = &(&(&s.square() * &s.add_int(-1).square()).mul_int(4) * &s.add_int(1))
        * &(&s.mul_int(2).add_int(-1) * &s.add_int(-2));
    Ok(ctx.round(&(&poly * &x)))
}

/// `f(s) = (s-1)(As-A+1) chi(s+1) - (s-2) chi(s)`.
pub fn f_aux(s: &BigComplex, ctx: &PrecisionContext) -> BigComplex {
    let s = ctx.round(s);
    let a = constant_a(ctx);
    let lead = &(&s.add_int(-1) * &a_linear(&s, &a, 1)) * &chi(&s.add_int(1), ctx);
    let tail = &s.add_int(-2) * &chi(&s, ctx);
    ctx.round(&(&lead - &tail))
}

/// `g(s) = f(s) chi(2s)`.
pub fn g_aux(s: &BigComplex, ctx: &PrecisionContext) -> BigComplex {
    let s = ctx.round(s);
    ctx.round(&(&f_aux(&s, ctx) * &chi(&s.mul_int(2), ctx)))
}

/// `(U(s), V(s))` with `s(s-1) xi(s) U(s) = V(s) - Z(s)`, where
/// `U(s) = (s+1) chi(2s-1) + (s-2) chi(2s)`.
pub fn u_v(s: &BigComplex, ctx: &PrecisionContext) -> (BigComplex, BigComplex) {
    let s = ctx.round(s);
    let a = constant_a(ctx);
    let c = ChiValues::new(&s, ctx);
    let u = &(&s.add_int(1) * &c.double_minus1) + &(&s.add_int(-2) * &c.double);
    let v1 = &(&s.add_int(-1) * &a_linear(&s, &a, 1)) * &(&c.plus1 * &c.double);
    let v2 = &(&s * &a_linear(&s, &a, -1)) * &(&c.minus1 * &c.double_minus1);
    (ctx.round(&u), ctx.round(&(&v1 - &v2)))
}

/// Remainder ratios of `Z(s) = (s-1)(As-A+1) chi(s+1) chi(2s) (1 - R1 - R2 - R3)`.
#[derive(Debug, Clone)]
pub struct Remainders {
    pub r1: BigComplex,
    pub r2: BigComplex,
    pub r3: BigComplex,
    /// `1 - R1 - R2 - R3`.
    pub identity: BigComplex,
}

/// How the `chi` quotients inside the remainders are formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioMethod {
    /// Direct quotient of `chi` values.
    Direct,
    /// Gamma quotients through log-Gamma differences (no overflow at large `|Im s|`).
    GammaQuotient,
    /// `GammaQuotient` above `|Im s| = 500`, `Direct` below.
    Auto,
}

pub fn remainders(s: &BigComplex, ctx: &PrecisionContext) -> Result<Remainders> {
    remainders_with(s, RatioMethod::Auto, ctx)
}

pub fn remainders_with(s: &BigComplex, method: RatioMethod, ctx: &PrecisionContext) -> Result<Remainders> {
    let s = ctx.round(s);
    if s.re <= 0.5 {
        return Err(Error::Precondition(format!("remainders need Re(s) > 1/2, got {s}")));
    }
    let a = constant_a(ctx);
    let lin = a_linear(&s, &a, 1);
    let lead = &s.add_int(-1) * &lin;
    let tol = ctx.pole_tolerance();
    if lead.abs() < tol {
        return Err(Error::DenominatorZero(s.to_string()));
    }
    let method = match method {
        RatioMethod::Auto if s.im.clone().abs() > 500 => RatioMethod::GammaQuotient,
        RatioMethod::Auto => RatioMethod::Direct,
        m => m,
    };
    let two_s = s.mul_int(2);
    let (q1, q2, q3) = match method {
        RatioMethod::Direct => {
            let c = ChiValues::new(&s, ctx);
            if c.plus1.is_zero() || c.double.is_zero() {
                return Err(Error::DenominatorZero(s.to_string()));
            }
            (&c.zero / &c.plus1, &c.minus1 / &c.plus1, &c.double_minus1 / &c.double)
        }
        _ => (
            chi_ratio(&s, &s.add_int(1), ctx)?,
            chi_ratio(&s.add_int(-1), &s.add_int(1), ctx)?,
            chi_ratio(&two_s.add_int(-1), &two_s, ctx)?,
        ),
    };
    let r1 = &(&s.add_int(-2) * &q1) / &lead;
    let r2 = &(&(&s * &a_linear(&s, &a, -1)) * &(&q2 * &q3)) / &lead;
    let r3 = &(&s.add_int(1) * &(&q1 * &q3)) / &lead;
    let one = ctx.complex(1, 0);
    let identity = &(&(&one - &r1) - &r2) - &r3;
    Ok(Remainders {
        r1: ctx.round(&r1),
        r2: ctx.round(&r2),
        r3: ctx.round(&r3),
        identity: ctx.round(&identity),
    })
}

/// `chi(a)/chi(b) = a(a-1)/(b(b-1)) pi^((b-a)/2) Gamma(a/2)/Gamma(b/2) zeta(a)/zeta(b)`.
fn chi_ratio(a: &BigComplex, b: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    let wp = ctx.working_bits();
    let poly = &(a * &a.add_int(-1)) / &(b * &b.add_int(-1));
    let ln_pi = ctx.pi().ln();
    let lg = &log_gamma_unbranched(&a.div_int(2), wp)? - &log_gamma_unbranched(&b.div_int(2), wp)?;
    let log_part = &lg + &(b - a).div_int(2).scale(&ln_pi);
    let zb = zeta(b, ctx)?;
    if zb.is_zero() {
        return Err(Error::DenominatorZero(b.to_string()));
    }
    let zr = &zeta(a, ctx)? / &zb;
    Ok(&(&poly * &log_part.exp()) * &zr)
}

/// `xi(2) xi(4) - xi(2)/4 - xi(2)/3 + 1/4`.
pub fn compact_domain_volume(ctx: &PrecisionContext) -> BigReal {
    let xi2 = xi_finite(&ctx.complex(2, 0), ctx).re;
    let xi4 = xi_finite(&ctx.complex(4, 0), ctx).re;
    let quarter = ctx.real(0.25);
    let third = ctx.real(1) / 3u32;

    Float::with_val(ctx.working_bits(), &xi2 * &xi4)
        - Float::with_val(ctx.working_bits(), &xi2 * &quarter)
        - Float::with_val(ctx.working_bits(), &xi2 * &third)
        + quarter
}

/// Two-sided limit estimate of `(s - p) F(s)` at `p`:
/// `[eps F(p + eps) - eps F(p - eps)] / 2`, accurate to `O(eps^2)`.
pub fn residue_by_symmetric_limit(
    id: FunctionId,
    pole: &BigComplex,
    eps: &BigReal,
    ctx: &PrecisionContext,
) -> Result<BigComplex> {
    let p = ctx.round(pole);
    let up = p.add_real(eps);
    let down = p.add_real(&Float::with_val(ctx.working_bits(), -eps));
    let fu = evaluate_value(id, &up, ctx)?;
    let fd = evaluate_value(id, &down, ctx)?;
    Ok(ctx.round(&(&fu - &fd).scale(eps).div_int(2)))
}

/// One-sided `(s - p) F(s)` at `s = p + eps`.
pub fn residue_by_one_sided_limit(
    id: FunctionId,
    pole: &BigComplex,
    eps: &BigReal,
    ctx: &PrecisionContext,
) -> Result<BigComplex> {
    let s = ctx.round(pole).add_real(eps);
    Ok(ctx.round(&evaluate_value(id, &s, ctx)?.scale(eps)))
}
