use rayon::prelude::*;
use rug::Float;

use super::contour::{count_zeros_detailed, INDENT_RADIUS};
use super::refine::refine_bracket;
use super::scan::scan_line_zeros;
use super::{Rectangle, ZeroRecord};
use crate::error::{Error, Result};
use crate::precision::{BigReal, PrecisionContext};
use crate::sp4::FunctionId;

/// Half-width of the band around a panel cut that must be free of line zeros.
const CUT_CLEARANCE: f64 = 0.05;

/// Distance from a zero within which [`gap_check`] looks for witnesses.
pub const GAP_RADIUS: f64 = 10.1;

#[derive(Debug, Clone)]
pub struct CensusOptions {
    /// Line-scan step in `t`.
    pub step: BigReal,
    /// Nominal panel height before cuts are moved off zeros.
    pub panel_height: f64,
    /// Refinement tolerance for line zeros: `1e-30`, or `2^(-bits)` when coarser.
    pub tol: BigReal,
    /// Halved-step rescans of a disagreeing panel before it is flagged.
    pub max_rescans: u32,
}

impl CensusOptions {
    pub fn new(ctx: &PrecisionContext) -> Self {
        Self {
            step: ctx.real(0.02),
            panel_height: 10.0,
            tol: ctx
                .real(Float::parse("1e-30").unwrap())
                .max(&ctx.pow2(-(ctx.bits() as i32))),
            max_rescans: 3,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PanelReport {
    pub rect: Rectangle,
    pub rect_count: i64,
    pub line_count: i64,
    pub rescans: u32,
    pub evaluations: usize,
}

#[derive(Debug, Clone)]
pub struct CensusReport {
    pub function: FunctionId,
    pub height: BigReal,
    pub strip: Rectangle,
    pub rect_count: i64,
    pub line_count: i64,
    /// Refined zeros on the critical line, by increasing ordinate.
    pub zeros: Vec<ZeroRecord>,
    pub off_line_suspects: Vec<Rectangle>,
    pub panels: Vec<PanelReport>,
    /// Real points excluded from every count.
    pub excluded: Vec<f64>,
}

impl CensusReport {
    /// All zeros up to the height lie on the critical line.
    pub fn confirms_line(&self) -> bool {
        self.rect_count == self.line_count && self.off_line_suspects.is_empty()
    }

    pub fn ordinates(&self) -> Vec<BigReal> {
        self.zeros.iter().map(|z| z.location.im.clone()).collect()
    }
}

/// Compares a winding count of `strip x [0, height]` with the number of
/// refined critical-line zeros, panel by panel.
pub fn zero_census(
    id: FunctionId,
    height: &BigReal,
    strip: &Rectangle,
    ctx: &PrecisionContext,
) -> Result<CensusReport> {
    zero_census_with(id, height, strip, &CensusOptions::new(ctx), ctx)
}

pub fn zero_census_with(
    id: FunctionId,
    height: &BigReal,
    strip: &Rectangle,
    opts: &CensusOptions,
    ctx: &PrecisionContext,
) -> Result<CensusReport> {
    if !(strip.re_min < 0.5 && strip.re_max > 0.5) {
        return Err(Error::Precondition(format!(
            "census strip {strip} must straddle Re(s) = 1/2"
        )));
    }
    if *height <= 0 {
        return Err(Error::Domain(format!("census height must be positive, got {height}")));
    }
    let full = strip.with_im(ctx.real(0), ctx.real(height))?;
    // a known zero at s = 1/2 sits inside the bottom detour, so the scan starts above it
    let half_on_axis = id.known_real_zeros().iter().any(|&(n, d)| 2 * n == d);
    let t_start = if half_on_axis {
        ctx.real(INDENT_RADIUS)
    } else {
        ctx.real(0)
    };

    let mut zeros = line_zeros(id, &t_start, height, &opts.step, &opts.tol, ctx)?;
    let cuts = panel_cuts(&zeros, height.to_f64(), opts.panel_height);
    let mut edges = vec![ctx.real(0)];
    edges.extend(cuts.into_iter().map(|c| ctx.real(c)));
    edges.push(ctx.real(height));

    let panels: Vec<Rectangle> = edges
        .windows(2)
        .map(|w| strip.with_im(w[0].clone(), w[1].clone()))
        .collect::<Result<_>>()?;
    let counts: Vec<_> = panels
        .par_iter()
        .map(|rect| {
            count_zeros_detailed(id, rect, false, ctx).map_err(|e| match e {
                Error::BoundaryProximity { location } => Error::BoundaryProximity {
                    location: format!("{location} in panel {rect}"),
                },
                other => other,
            })
        })
        .collect();

    let mut reports = Vec::with_capacity(panels.len());
    let mut suspects = Vec::new();
    let mut excluded = Vec::new();
    for (rect, count) in panels.into_iter().zip(counts) {
        let count = count?;
        for p in &count.indented {
            if !excluded.contains(p) {
                excluded.push(*p);
            }
        }
        let in_panel = |z: &ZeroRecord| z.location.im > rect.im_min && z.location.im <= rect.im_max;
        let mut line_count = zeros.iter().filter(|z| in_panel(z)).count() as i64;
        let mut rescans = 0;
        let mut step = opts.step.clone();
        while line_count != count.count && rescans < opts.max_rescans {
            rescans += 1;
            step /= 2u32;
            let lo = if rect.im_min == 0 {
                t_start.clone()
            } else {
                rect.im_min.clone()
            };
            let fresh = line_zeros(id, &lo, &rect.im_max, &step, &opts.tol, ctx)?;
            zeros.retain(|z| !in_panel(z));
            zeros.extend(fresh.into_iter().filter(|z| in_panel(z)));
            line_count = zeros.iter().filter(|z| in_panel(z)).count() as i64;
        }
        if line_count != count.count {
            suspects.push(rect.clone());
        }
        reports.push(PanelReport {
            rect,
            rect_count: count.count,
            line_count,
            rescans,
            evaluations: count.evaluations,
        });
    }
    zeros.sort_by(|a, b| a.location.im.partial_cmp(&b.location.im).unwrap());
    Ok(CensusReport {
        function: id,
        height: ctx.real(height),
        strip: full,
        rect_count: reports.iter().map(|p| p.rect_count).sum(),
        line_count: zeros.len() as i64,
        zeros,
        off_line_suspects: suspects,
        panels: reports,
        excluded,
    })
}

fn line_zeros(
    id: FunctionId,
    lo: &BigReal,
    hi: &BigReal,
    step: &BigReal,
    tol: &BigReal,
    ctx: &PrecisionContext,
) -> Result<Vec<ZeroRecord>> {
    let scan = scan_line_zeros(id, lo, hi, step, ctx)?;
    scan.brackets
        .par_iter()
        .map(|b| refine_bracket(id, b, tol, ctx))
        .collect()
}

/// Panel boundaries at multiples of `panel`, each moved to the middle of the
/// widest nearby gap between line zeros when a zero is within the clearance.
fn panel_cuts(zeros: &[ZeroRecord], height: f64, panel: f64) -> Vec<f64> {
    let gammas: Vec<f64> = zeros.iter().map(|z| z.location.im.to_f64()).collect();
    let mut cuts = Vec::new();
    let mut k = 1.0;
    while k * panel < height - CUT_CLEARANCE {
        let mut cut = k * panel;
        if gammas.iter().any(|g| (g - cut).abs() < CUT_CLEARANCE) {
            let i = gammas.partition_point(|g| *g < cut);
            let lo = i.saturating_sub(2);
            let hi = (i + 2).min(gammas.len());
            let best = (lo..hi.saturating_sub(1))
                .map(|j| (gammas[j], gammas[j + 1]))
                .max_by(|a, b| (a.1 - a.0).partial_cmp(&(b.1 - b.0)).unwrap());
            if let Some((a, b)) = best {
                cut = (a + b) / 2.0;
            }
        }
        if cuts.last().is_none_or(|last| cut > *last) && cut < height {
            cuts.push(cut);
        }
        k += 1.0;
    }
    cuts
}

#[derive(Debug, Clone)]
pub struct GapCheck {
    pub holds: bool,
    /// Two distinct ordinates within [`GAP_RADIUS`] of `|t|`, in increasing order.
    pub witnesses: Option<(BigReal, BigReal)>,
}

/// Checks that at least two distinct zero ordinates lie within 10.1 of `t`.
/// `coverage` is the height up to which `ordinates` is known to be complete.
pub fn gap_check(ordinates: &[BigReal], coverage: &BigReal, t: &BigReal) -> Result<GapCheck> {
    let p = t.prec();
    let t_abs = Float::with_val(p, t.abs_ref());
    if t_abs < 12 {
        return Err(Error::Precondition(format!("gap check needs |t| >= 12, got {t}")));
    }
    if Float::with_val(p, &t_abs + GAP_RADIUS) > *coverage {
        return Err(Error::Precondition(format!(
            "zero list not high enough: complete to {coverage}, need {}",
            Float::with_val(p, &t_abs + GAP_RADIUS)
        )));
    }
    let mut near: Vec<(BigReal, &BigReal)> = ordinates
        .iter()
        .map(|g| (Float::with_val(p, g - &t_abs).abs(), g))
        .filter(|(d, _)| *d <= GAP_RADIUS)
        .collect();
    near.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    near.dedup_by(|a, b| a.1 == b.1);
    if near.len() < 2 {
        return Ok(GapCheck {
            holds: false,
            witnesses: None,
        });
    }
    let (a, b) = (near[0].1.clone(), near[1].1.clone());
    let witnesses = if a < b { (a, b) } else { (b, a) };
    Ok(GapCheck {
        holds: true,
        witnesses: Some(witnesses),
    })
}
