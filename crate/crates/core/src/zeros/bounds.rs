use rayon::prelude::*;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::census::GAP_RADIUS;
use crate::error::{Error, Result};
use crate::precision::{BigComplex, BigReal, PrecisionContext};
use crate::sp4::g_aux;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `|g(1-s)/g(s)|`.
    Prop32Ratio,
    /// The squared-form product in the exceptional-zero inequality,
    /// taken at the second-best zero ordinate within 10.1 of `t`.
    Lemma39Inequality,
}

/// Sample points `sigma + i t` (all combinations).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub sigmas: Vec<f64>,
    pub ts: Vec<f64>,
}

impl Grid {
    /// `first` followed by integers from `ceil(first)` (or the next integer) to `last`.
    pub fn integer_steps(first: f64, last: f64) -> Vec<f64> {
        let mut v = vec![first];
        let mut x = first.floor() + 1.0;
        while x <= last {
            v.push(x);
            x += 1.0;
        }
        v
    }
}

/// Exceptional zero and the zero list needed by [`BoundKind::Lemma39Inequality`].
#[derive(Debug, Clone)]
pub struct RegionInputs {
    pub rho0: BigComplex,
    /// Positive ordinates of critical-line zeros of `xi`.
    pub xi_ordinates: Vec<BigReal>,
    /// Height up to which `xi_ordinates` is complete.
    pub coverage: BigReal,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoundsReport {
    pub kind: BoundKind,
    pub max_value: f64,
    pub argmax: (f64, f64),
    pub points: usize,
    pub all_below_one: bool,
    /// For the lemma: the same maximum computed from the unsquared complex
    /// moduli with `2s`, which differ from the squared form in the `t` shift.
    pub literal_max: Option<f64>,
    pub literal_argmax: Option<(f64, f64)>,
}

pub fn verify_region_bounds(
    kind: BoundKind,
    grid: &Grid,
    inputs: Option<&RegionInputs>,
    ctx: &PrecisionContext,
) -> Result<BoundsReport> {
    for &s in &grid.sigmas {
        if !(s > 0.5 && s <= 20.0) {
            return Err(Error::Precondition(format!("sigma {s} outside (1/2, 20]")));
        }
    }
    for &t in &grid.ts {
        if t.abs() < 22.0 {
            return Err(Error::Precondition(format!("|t| = {} below 22", t.abs())));
        }
    }
    let points: Vec<(f64, f64)> = grid
        .sigmas
        .iter()
        .flat_map(|&s| grid.ts.iter().map(move |&t| (s, t)))
        .collect();
    if points.is_empty() {
        return Err(Error::Precondition("empty grid".into()));
    }
    let values: Vec<(f64, Option<f64>)> = match kind {
        BoundKind::Prop32Ratio => points
            .par_iter()
            .map(|&(s, t)| {
                let z = ctx.complex(s, t);
                let num = g_aux(&z.int_sub(1), ctx).abs();
                let den = g_aux(&z, ctx).abs();
                (Float::with_val(ctx.working_bits(), num / den).to_f64(), None)
            })
            .collect(),
        BoundKind::Lemma39Inequality => {
            let inputs = inputs
                .ok_or_else(|| Error::Precondition("lemma check needs the exceptional zero and xi zeros".into()))?;
            let t_max = grid.ts.iter().fold(0.0f64, |m, t| m.max(t.abs()));
            if inputs.coverage.to_f64() < t_max + GAP_RADIUS {
                return Err(Error::Precondition(format!(
                    "xi zeros complete to {}, need {}",
                    inputs.coverage.to_f64(),
                    t_max + GAP_RADIUS
                )));
            }
            let gammas: Vec<f64> = inputs.xi_ordinates.iter().map(|g| g.to_f64()).collect();
            let (b0, g0) = inputs.rho0.to_f64_pair();
            points
                .par_iter()
                .map(|&(s, t)| {
                    let (sq, lit) = lemma_values(s, t.abs(), b0, g0, &gammas);
                    (sq, Some(lit))
                })
                .collect()
        }
    };
    let (mut best, mut at) = (f64::NEG_INFINITY, (0.0, 0.0));
    let (mut lit_best, mut lit_at) = (f64::NEG_INFINITY, (0.0, 0.0));
    for (p, (v, lit)) in points.iter().zip(&values) {
        if *v > best {
            best = *v;
            at = *p;
        }
        if let Some(l) = lit {
            if *l > lit_best {
                lit_best = *l;
                lit_at = *p;
            }
        }
    }
    let lemma = kind == BoundKind::Lemma39Inequality;
    Ok(BoundsReport {
        kind,
        max_value: best,
        argmax: at,
        points: points.len(),
        all_below_one: best < 1.0,
        literal_max: lemma.then_some(lit_best),
        literal_argmax: lemma.then_some(lit_at),
    })
}

/// Second-smallest (over zero ordinates within 10.1 of `t`) of the larger
/// of the two sign choices, for the squared form and the literal moduli.
fn lemma_values(sigma: f64, t: f64, b0: f64, g0: f64, gammas: &[f64]) -> (f64, f64) {
    let beta = 0.5;
    let s = (sigma, t);
    let modulus = |re: f64, im: f64| re.hypot(im);
    let mut squared = Vec::new();
    let mut literal = Vec::new();
    for &g in gammas.iter().filter(|g| (t - *g).abs() <= GAP_RADIUS) {
        let second =
            ((2.0 * sigma + beta - 2.0).powi(2) + (t - g).powi(2)) / ((2.0 * sigma - beta).powi(2) + (t - g).powi(2));
        let sq = [g0, -g0]
            .iter()
            .map(|pm| {
                let first = ((sigma + b0 - 1.0).powi(2) + (t + pm).powi(2)) / ((sigma - b0).powi(2) + (t + pm).powi(2));
                (first * second).sqrt()
            })
            .fold(f64::NEG_INFINITY, f64::max);
        squared.push(sq);

        // |2s - 1 - (1 - conj rho)| / |2s - rho|
        let ratio = modulus(2.0 * s.0 - 2.0 + beta, 2.0 * s.1 - g) / modulus(2.0 * s.0 - beta, 2.0 * s.1 - g);
        // |s - 1 + conj rho0| / |s - rho0| and |s - 1 + rho0| / |s - conj rho0|
        let a = modulus(s.0 - 1.0 + b0, s.1 - g0) / modulus(s.0 - b0, s.1 - g0);
        let b = modulus(s.0 - 1.0 + b0, s.1 + g0) / modulus(s.0 - b0, s.1 + g0);
        literal.push(a.max(b) * ratio);
    }
    let second_best = |mut v: Vec<f64>| {
        v.sort_by(|x, y| x.partial_cmp(y).unwrap());
        v.get(1).copied().unwrap_or(f64::INFINITY)
    };
    (second_best(squared), second_best(literal))
}
