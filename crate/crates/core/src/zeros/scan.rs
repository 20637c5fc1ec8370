use rug::Float;

use super::eval;
use crate::error::{Error, Result};
use crate::precision::{BigComplex, BigReal, PrecisionContext};
use crate::sp4::{constant_a, FunctionId, Reflection};
use crate::special::chi;

/// Interval `[lo, hi]` in `t` on which the critical-line surrogate changes sign.
#[derive(Debug, Clone)]
pub struct Bracket {
    pub lo: BigReal,
    pub hi: BigReal,
}

#[derive(Debug, Clone, Default)]
pub struct LineScan {
    pub brackets: Vec<Bracket>,
    /// Ordinates of same-sign local dips in `|surrogate|` deep enough to hide
    /// a pair of close zeros.
    pub dips: Vec<f64>,
    pub samples: usize,
}

/// Real function of `t` whose sign changes mark zeros of `id` on `1/2 + it`:
/// `Re F` for reflection-symmetric functions, `Im F` for antisymmetric ones.
pub fn critical_line_surrogate(id: FunctionId, t: &BigReal, ctx: &PrecisionContext) -> Result<BigReal> {
    let s = BigComplex::new(ctx.real(0.5), ctx.real(t));
    // F(s) = h(s) - h(1-s) = 2i Im h(s) on the line, so only h is needed
    let half_form = |h: BigComplex| -> Result<BigReal> { Ok(Float::with_val(ctx.working_bits(), &h.im * 2u32)) };
    match id {
        FunctionId::Z => half_form(crate::sp4::g_aux(&s, ctx)),
        FunctionId::V => {
            let a = constant_a(ctx);
            let lin = s.scale(&a).add_real(&(Float::with_val(a.prec(), 1) - &a));
            let v = &(&s.add_int(-1) * &lin) * &chi(&s.add_int(1), ctx);
            half_form(&v * &chi(&s.mul_int(2), ctx))
        }
        FunctionId::U => half_form(&s.add_int(-2) * &chi(&s.mul_int(2), ctx)),
        _ => match id.reflection() {
            Some(Reflection::Symmetric) => Ok(eval(id, &s, ctx)?.re),
            Some(Reflection::Antisymmetric) => Ok(eval(id, &s, ctx)?.im),
            None => Err(Error::Precondition(format!(
                "{id} has no real-valued critical-line surrogate"
            ))),
        },
    }
}

/// Samples the surrogate at `t_min + k step` and returns the sign-change
/// brackets in increasing order.
pub fn scan_line_zeros(
    id: FunctionId,
    t_min: &BigReal,
    t_max: &BigReal,
    step: &BigReal,
    ctx: &PrecisionContext,
) -> Result<LineScan> {
    if *step <= 0 {
        return Err(Error::Domain(format!("scan step must be positive, got {step}")));
    }
    if t_max <= t_min {
        return Ok(LineScan::default());
    }
    let p = ctx.working_bits();
    let span = Float::with_val(p, t_max - t_min);
    let n = Float::with_val(p, &span / step).ceil().to_f64() as usize;
    let ts: Vec<BigReal> = (0..=n)
        .map(|k| {
            if k == n {
                ctx.real(t_max)
            } else {
                Float::with_val(p, t_min + Float::with_val(p, step * k as u32))
            }
        })
        .collect();
    let values = sample(id, &ts, ctx)?;

    let mut out = LineScan {
        samples: ts.len(),
        ..LineScan::default()
    };
    let mut k = 0;
    while k + 1 < ts.len() {
        let (a, b) = (&values[k], &values[k + 1]);
        if a.is_zero() {
            // a sample landed on the zero itself
            let lo = if k > 0 { ts[k - 1].clone() } else { ts[k].clone() };
            out.brackets.push(Bracket {
                lo,
                hi: ts[k + 1].clone(),
            });
            k += 1;
            continue;
        }
        if b.is_zero() {
            let hi = ts.get(k + 2).cloned().unwrap_or_else(|| ts[k + 1].clone());
            out.brackets.push(Bracket { lo: ts[k].clone(), hi });
            k += 2;
            continue;
        }
        if a.is_sign_negative() != b.is_sign_negative() {
            out.brackets.push(Bracket {
                lo: ts[k].clone(),
                hi: ts[k + 1].clone(),
            });
        }
        k += 1;
    }
    for k in 1..values.len().saturating_sub(1) {
        let (a, m, b) = (&values[k - 1], &values[k], &values[k + 1]);
        let same = a.is_sign_negative() == m.is_sign_negative() && m.is_sign_negative() == b.is_sign_negative();
        if !same || m.is_zero() {
            continue;
        }
        let (am, mm, bm) = (a.clone().abs(), m.clone().abs(), b.clone().abs());
        if mm < am && mm < bm {
            let geo = Float::with_val(p, &am * &bm).sqrt();
            if Float::with_val(p, &mm * 4u32) < geo {
                out.dips.push(ts[k].to_f64());
            }
        }
    }
    Ok(out)
}

fn sample(id: FunctionId, ts: &[BigReal], ctx: &PrecisionContext) -> Result<Vec<BigReal>> {
    use rayon::prelude::*;
    ts.par_iter().map(|t| critical_line_surrogate(id, t, ctx)).collect()
}
