use rug::Float;

use super::scan::{critical_line_surrogate, Bracket};
use super::{eval, ZeroMethod, ZeroRecord};
use crate::error::{Error, Result};
use crate::precision::{BigComplex, BigReal, PrecisionContext};
use crate::sp4::FunctionId;

pub const DEFAULT_MAX_ITER: usize = 400;

/// Starting data for [`refine_zero`].
#[derive(Debug, Clone)]
pub enum Seed {
    /// Ordinate bracket on the critical line.
    Bracket(Bracket),
    /// Complex starting point.
    Point(BigComplex),
}

pub fn refine_zero(id: FunctionId, seed: &Seed, tol: &BigReal, ctx: &PrecisionContext) -> Result<ZeroRecord> {
    match seed {
        Seed::Bracket(b) => refine_bracket(id, b, tol, ctx),
        Seed::Point(z) => refine_complex(id, z, tol, ctx),
    }
}

/// Zero of the critical-line surrogate inside `bracket`, located to width
/// `tol` by Illinois false position with bisection safeguards.
pub fn refine_bracket(id: FunctionId, bracket: &Bracket, tol: &BigReal, ctx: &PrecisionContext) -> Result<ZeroRecord> {
    let p = ctx.working_bits();
    let f = |t: &BigReal| critical_line_surrogate(id, t, ctx);
    let (mut a, mut b) = (ctx.real(&bracket.lo), ctx.real(&bracket.hi));
    let (mut fa, mut fb) = (f(&a)?, f(&b)?);
    if fa.is_zero() {
        return finish(id, a, ctx);
    }
    if fb.is_zero() {
        return finish(id, b, ctx);
    }
    if fa.is_sign_negative() == fb.is_sign_negative() {
        return Err(Error::Precondition(format!(
            "no sign change of {id} on [{}, {}]",
            bracket.lo, bracket.hi
        )));
    }
    let half_tol = Float::with_val(p, tol / 2u32);
    let mut side = 0i8;
    for iter in 0..DEFAULT_MAX_ITER {
        let width = Float::with_val(p, &b - &a);
        let settled = fa.clone().abs() <= *tol && fb.clone().abs() <= *tol;
        if width <= half_tol && settled {
            break;
        }
        // bisect every fourth step so the width shrinks even when false position stalls
        let c = if iter % 4 == 3 {
            Float::with_val(p, &a + &b) / 2u32
        } else {
            let denom = Float::with_val(p, &fb - &fa);
            let c = Float::with_val(p, &a - Float::with_val(p, &fa * &width) / &denom);
            if c <= a || c >= b {
                Float::with_val(p, &a + &b) / 2u32
            } else {
                c
            }
        };
        let fc = f(&c)?;
        if fc.is_zero() {
            return finish(id, c, ctx);
        }
        if fc.is_sign_negative() == fa.is_sign_negative() {
            a = c;
            fa = fc;
            if side == -1 {
                fb /= 2u32;
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa /= 2u32;
            }
            side = 1;
        }
    }
    let width = Float::with_val(p, &b - &a);
    if width > half_tol || fa.abs() > *tol || fb.abs() > *tol {
        return Err(Error::NoConvergence {
            iterations: DEFAULT_MAX_ITER,
            best: Float::with_val(p, &a + &b).to_string(),
            residual: width.to_string(),
        });
    }
    finish(id, Float::with_val(p, &a + &b) / 2u32, ctx)
}

fn finish(id: FunctionId, t: BigReal, ctx: &PrecisionContext) -> Result<ZeroRecord> {
    let location = BigComplex::new(ctx.real(0.5), t);
    let residual = eval(id, &location, ctx)?.abs();
    Ok(ZeroRecord {
        location,
        residual,
        method: ZeroMethod::LineScan,
        function: id,
    })
}

/// Secant iteration from a complex seed; stops once both the step and
/// `|F|` fall below `tol`.
pub fn refine_complex(id: FunctionId, seed: &BigComplex, tol: &BigReal, ctx: &PrecisionContext) -> Result<ZeroRecord> {
    let p = ctx.working_bits();
    let mut x0 = ctx.round(seed);
    let mut x1 = x0.add_real(&ctx.real(1e-6));
    let mut f0 = eval(id, &x0, ctx)?;
    let mut f1 = eval(id, &x1, ctx)?;
    let max_iter = 100;
    for _ in 0..max_iter {
        let df = &f1 - &f0;
        if df.is_zero() {
            break;
        }
        let step = &(&f1 * &(&x1 - &x0)) / &df;
        let x2 = &x1 - &step;
        let f2 = eval(id, &x2, ctx)?;
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        if step.abs() <= *tol && f1.abs() <= *tol {
            return Ok(ZeroRecord {
                residual: f1.abs(),
                location: x1,
                method: ZeroMethod::Refinement,
                function: id,
            });
        }
        if !x1.is_finite() {
            break;
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iter,
        best: x1.to_string(),
        residual: Float::with_val(p, f1.abs()).to_string(),
    })
}
