//! Zero analysis: argument-principle counts in rectangles, critical-line
//! scans and refinement, zero censuses, and the region checks behind the
//! no-zero propositions.

mod bounds;
mod census;
mod contour;
mod refine;
mod scan;

use std::fmt;

use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::precision::{format_real, BigComplex, BigReal, PrecisionContext};
use crate::sp4::{evaluate_value, FunctionId};

pub use bounds::{verify_region_bounds, BoundKind, BoundsReport, Grid, RegionInputs};
pub use census::{gap_check, zero_census, CensusOptions, CensusReport, GapCheck, PanelReport};
pub use contour::{count_zeros_detailed, count_zeros_rect, RectCount, INDENT_RADIUS};
pub use refine::{refine_bracket, refine_complex, refine_zero, Seed, DEFAULT_MAX_ITER};
pub use scan::{critical_line_surrogate, scan_line_zeros, Bracket, LineScan};

/// Closed axis-parallel rectangle `[re_min, re_max] x [im_min, im_max]`.
#[derive(Clone, PartialEq)]
pub struct Rectangle {
    pub re_min: BigReal,
    pub re_max: BigReal,
    pub im_min: BigReal,
    pub im_max: BigReal,
}

impl Rectangle {
    pub fn new(re_min: BigReal, re_max: BigReal, im_min: BigReal, im_max: BigReal) -> Result<Self> {
        if !(re_min < re_max && im_min < im_max) {
            return Err(Error::Domain(format!(
                "degenerate rectangle [{re_min}, {re_max}] x [{im_min}, {im_max}]"
            )));
        }
        Ok(Self {
            re_min,
            re_max,
            im_min,
            im_max,
        })
    }

    pub fn from_f64(re_min: f64, re_max: f64, im_min: f64, im_max: f64, ctx: &PrecisionContext) -> Result<Self> {
        Self::new(ctx.real(re_min), ctx.real(re_max), ctx.real(im_min), ctx.real(im_max))
    }

    /// Parses `a,b,c,d` as `re_min,re_max,im_min,im_max`.
    pub fn parse(text: &str, ctx: &PrecisionContext) -> Result<Self> {
        let parts: Vec<&str> = text.split(',').map(str::trim).collect();
        if parts.len() != 4 {
            return Err(Error::Parse {
                what: "rectangle",
                input: text.to_string(),
            });
        }
        let mut v = Vec::with_capacity(4);
        for p in parts {
            let x = Float::parse(p).map_err(|_| Error::Parse {
                what: "rectangle",
                input: text.to_string(),
            })?;
            v.push(ctx.real(x));
        }
        let d = v.pop().unwrap();
        let c = v.pop().unwrap();
        let b = v.pop().unwrap();
        let a = v.pop().unwrap();
        Self::new(a, b, c, d)
    }

    /// Strictly inside.
    pub fn contains(&self, z: &BigComplex) -> bool {
        z.re > self.re_min && z.re < self.re_max && z.im > self.im_min && z.im < self.im_max
    }

    /// Grown by `delta` on every side.
    pub fn expanded(&self, delta: &BigReal) -> Self {
        let p = self.re_min.prec();
        Self {
            re_min: Float::with_val(p, &self.re_min - delta),
            re_max: Float::with_val(p, &self.re_max + delta),
            im_min: Float::with_val(p, &self.im_min - delta),
            im_max: Float::with_val(p, &self.im_max + delta),
        }
    }

    pub fn with_im(&self, im_min: BigReal, im_max: BigReal) -> Result<Self> {
        Self::new(self.re_min.clone(), self.re_max.clone(), im_min, im_max)
    }

    pub fn to_f64(&self) -> [f64; 4] {
        [
            self.re_min.to_f64(),
            self.re_max.to_f64(),
            self.im_min.to_f64(),
            self.im_max.to_f64(),
        ]
    }
}

impl fmt::Display for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}] x [{}, {}]",
            format_real(&self.re_min, 12),
            format_real(&self.re_max, 12),
            format_real(&self.im_min, 12),
            format_real(&self.im_max, 12)
        )
    }
}

impl fmt::Debug for Rectangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rectangle{self}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ZeroMethod {
    RectCount,
    LineScan,
    Refinement,
}

impl ZeroMethod {
    pub fn name(&self) -> &'static str {
        match self {
            ZeroMethod::RectCount => "rect_count",
            ZeroMethod::LineScan => "line_scan",
            ZeroMethod::Refinement => "refinement",
        }
    }
}

/// A located zero.
#[derive(Debug, Clone)]
pub struct ZeroRecord {
    pub location: BigComplex,
    /// `|F(location)|`.
    pub residual: BigReal,
    pub method: ZeroMethod,
    pub function: FunctionId,
}

pub(crate) fn eval(id: FunctionId, s: &BigComplex, ctx: &PrecisionContext) -> Result<BigComplex> {
    evaluate_value(id, s, ctx)
}

/// Largest Newton step `|F(p)/F'(p)|` over `p` in `{rho, 1-rho, conj rho, 1-conj rho}`:
/// an estimate of how far each mapped point is from a zero of `F`.
pub fn reflection_residual(id: FunctionId, rho: &BigComplex, ctx: &PrecisionContext) -> Result<BigReal> {
    let p = ctx.working_bits();
    let h = ctx.pow2(-(ctx.bits() as i32) / 4);
    let hc = BigComplex::from_real(h.clone());
    let points = [rho.clone(), rho.int_sub(1), rho.conj(), rho.conj().int_sub(1)];
    let half_inv = Float::with_val(p, h.recip_ref()) / 2u32;
    let mut worst = ctx.real(0);
    for z in &points {
        let value = eval(id, z, ctx)?;
        let slope = (eval(id, &(z + &hc), ctx)? - eval(id, &(z - &hc), ctx)?).scale(&half_inv);
        let step = if slope.is_zero() {
            Float::with_val(p, rug::float::Special::Infinity)
        } else {
            Float::with_val(p, value.abs() / slope.abs())
        };
        if step > worst {
            worst = step;
        }
    }
    Ok(worst)
}
