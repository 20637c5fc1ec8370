use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use rug::Float;

use super::{eval, Rectangle};
use crate::error::{Error, Result};
use crate::precision::{BigComplex, BigReal, PrecisionContext};
use crate::sp4::FunctionId;

/// Radius of the semicircular detours around known real zeros and poles
/// lying on a rectangle edge.
pub const INDENT_RADIUS: f64 = 1e-2;

const MAX_BISECTIONS: u32 = 40;
const NUDGE: f64 = 1e-3;
const MAX_NUDGES: u32 = 3;
const MAX_PHASE_STEP: f64 = FRAC_PI_2;

#[derive(Debug, Clone)]
pub struct RectCount {
    pub count: i64,
    /// Total phase change over `2 pi` before rounding.
    pub raw_winding: f64,
    /// Number of `1e-3` outward nudges applied.
    pub nudges: u32,
    pub evaluations: usize,
    /// Real points skirted by indentations.
    pub indented: Vec<f64>,
    pub rect: Rectangle,
}

#[derive(Debug, Clone)]
enum Segment {
    Line {
        a: BigComplex,
        b: BigComplex,
    },
    Arc {
        center: BigComplex,
        radius: BigReal,
        from: BigReal,
        to: BigReal,
    },
}

impl Segment {
    fn point(&self, u: &BigReal) -> BigComplex {
        match self {
            Segment::Line { a, b } => a + &(b - a).scale(u),
            Segment::Arc {
                center,
                radius,
                from,
                to,
            } => {
                let p = u.prec();
                let theta = Float::with_val(p, from + Float::with_val(p, to - from) * u);
                let (sin, cos) = theta.sin_cos(Float::new(p));
                center + &BigComplex::new(cos, sin).scale(radius)
            }
        }
    }

    fn initial_pieces(&self) -> usize {
        match self {
            Segment::Line { a, b } => ((a.dist(b).to_f64() / 0.25).ceil() as usize).max(4),
            Segment::Arc { .. } => 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Edge {
    Bottom,
    Right,
    Top,
    Left,
}

/// Counterclockwise boundary of `rect` with detours around `points`.
fn boundary_path(rect: &Rectangle, points: &[(BigReal, Edge)], ctx: &PrecisionContext) -> Vec<Segment> {
    let c = |re: &BigReal, im: &BigReal| BigComplex::new(ctx.real(re), ctx.real(im));
    let corners = [
        c(&rect.re_min, &rect.im_min),
        c(&rect.re_max, &rect.im_min),
        c(&rect.re_max, &rect.im_max),
        c(&rect.re_min, &rect.im_max),
    ];
    let r = ctx.real(INDENT_RADIUS);
    let pi = ctx.pi();
    let half_pi = Float::with_val(ctx.working_bits(), &pi / 2u32);
    let mut path = Vec::new();
    for (k, edge) in [Edge::Bottom, Edge::Right, Edge::Top, Edge::Left]
        .into_iter()
        .enumerate()
    {
        let start = corners[k].clone();
        let end = corners[(k + 1) % 4].clone();
        let mut on_edge: Vec<&BigReal> = points.iter().filter(|(_, e)| *e == edge).map(|(p, _)| p).collect();
        // order along the direction of travel
        on_edge.sort_by(|x, y| x.partial_cmp(y).unwrap());
        if matches!(edge, Edge::Top | Edge::Left) {
            on_edge.reverse();
        }
        let mut cursor = start;
        for p in on_edge {
            let center = ctx.complex(p, 0);
            let (enter, leave, from, to) = match edge {
                // detours bend into the rectangle, excluding the point
                Edge::Bottom => (
                    center.add_real(&Float::with_val(r.prec(), -&r)),
                    center.add_real(&r),
                    pi.clone(),
                    ctx.real(0),
                ),
                Edge::Top => (
                    center.add_real(&r),
                    center.add_real(&Float::with_val(r.prec(), -&r)),
                    ctx.real(0),
                    Float::with_val(ctx.working_bits(), -&pi),
                ),
                Edge::Right => (
                    &center - &BigComplex::new(ctx.real(0), r.clone()),
                    &center + &BigComplex::new(ctx.real(0), r.clone()),
                    Float::with_val(ctx.working_bits(), -&half_pi),
                    Float::with_val(ctx.working_bits(), -&half_pi) - &pi,
                ),
                Edge::Left => (
                    &center + &BigComplex::new(ctx.real(0), r.clone()),
                    &center - &BigComplex::new(ctx.real(0), r.clone()),
                    half_pi.clone(),
                    Float::with_val(ctx.working_bits(), -&half_pi),
                ),
            };
            path.push(Segment::Line { a: cursor, b: enter });
            path.push(Segment::Arc {
                center,
                radius: r.clone(),
                from,
                to,
            });
            cursor = leave;
        }
        path.push(Segment::Line { a: cursor, b: end });
    }
    path
}

struct Tracker<'a> {
    id: FunctionId,
    ctx: &'a PrecisionContext,
    floor: BigReal,
    evaluations: usize,
}

impl Tracker<'_> {
    fn value(&mut self, z: &BigComplex) -> Result<BigComplex> {
        self.evaluations += 1;
        match eval(self.id, z, self.ctx) {
            Ok(v) if v.is_zero() => Err(proximity(z)),
            Ok(v) => Ok(v),
            Err(Error::Pole { .. }) => Err(proximity(z)),
            Err(e) => Err(e),
        }
    }

    /// Phase change of `F` along `seg` between parameters `u0` and `u1`.
    fn phase(
        &mut self,
        seg: &Segment,
        u0: &BigReal,
        f0: &BigComplex,
        u1: &BigReal,
        f1: &BigComplex,
        depth: u32,
    ) -> Result<f64> {
        let um = Float::with_val(u0.prec(), u0 + u1) / 2u32;
        let zm = seg.point(&um);
        let fm = self.value(&zm)?;
        let scale = Float::with_val(self.floor.prec(), f0.abs().max(&f1.abs()));
        if fm.abs() < Float::with_val(self.floor.prec(), &scale * &self.floor) {
            return Err(proximity(&zm));
        }
        let d = phase_step(f0, f1);
        let d1 = phase_step(f0, &fm);
        let d2 = phase_step(&fm, f1);
        let consistent = (d1 + d2 - d).abs() < 1e-9;
        if consistent && d.abs() <= MAX_PHASE_STEP && d1.abs() <= MAX_PHASE_STEP && d2.abs() <= MAX_PHASE_STEP {
            return Ok(d1 + d2);
        }
        if depth >= MAX_BISECTIONS {
            return Err(proximity(&zm));
        }
        Ok(self.phase(seg, u0, f0, &um, &fm, depth + 1)? + self.phase(seg, &um, &fm, u1, f1, depth + 1)?)
    }

    fn segment_phase(&mut self, seg: &Segment) -> Result<f64> {
        let p = self.ctx.working_bits();
        let n = seg.initial_pieces();
        let us: Vec<BigReal> = (0..=n).map(|k| Float::with_val(p, k) / n as u32).collect();
        let mut prev = self.value(&seg.point(&us[0]))?;
        let mut total = 0.0;
        for w in us.windows(2) {
            let next = self.value(&seg.point(&w[1]))?;
            total += self.phase(seg, &w[0], &prev, &w[1], &next, 0)?;
            prev = next;
        }
        Ok(total)
    }
}

fn phase_step(from: &BigComplex, to: &BigComplex) -> f64 {
    let ratio = to * &from.conj();
    let p = ratio.prec();
    Float::with_val(p, ratio.im.atan2_ref(&ratio.re)).to_f64()
}

fn proximity(z: &BigComplex) -> Error {
    Error::BoundaryProximity {
        location: z.to_string(),
    }
}

/// Winding-number count of zeros of `id` inside `rect`; known real zeros
/// or poles lying on an edge are skirted by detours of radius
/// [`INDENT_RADIUS`] and excluded. Nudges the rectangle outward by `1e-3`
/// (up to three times) when a zero sits on the boundary.
pub fn count_zeros_rect(id: FunctionId, rect: &Rectangle, ctx: &PrecisionContext) -> Result<i64> {
    count_zeros_detailed(id, rect, true, ctx).map(|r| r.count)
}

pub fn count_zeros_detailed(
    id: FunctionId,
    rect: &Rectangle,
    allow_nudge: bool,
    ctx: &PrecisionContext,
) -> Result<RectCount> {
    if !id.is_contour_countable() {
        return Err(Error::Precondition(format!(
            "{id} has poles off the real axis; contour counts are not supported"
        )));
    }
    let mut attempt = 0;
    let mut current = rect.clone();
    loop {
        match count_once(id, &current, ctx) {
            Ok(mut r) => {
                r.nudges = attempt;
                return Ok(r);
            }
            Err(Error::BoundaryProximity { .. }) if allow_nudge && attempt < MAX_NUDGES => {
                attempt += 1;
                current = nudge(rect, attempt, id, ctx);
            }
            Err(e) => return Err(e),
        }
    }
}

fn nudge(rect: &Rectangle, k: u32, id: FunctionId, ctx: &PrecisionContext) -> Rectangle {
    let delta = ctx.real(NUDGE * k as f64);
    let mut out = rect.expanded(&delta);
    // edges carrying detours stay put so the detoured points stay excluded
    for (_, edge) in special_points(id, rect, ctx).unwrap_or_default() {
        match edge {
            Edge::Bottom => out.im_min = rect.im_min.clone(),
            Edge::Top => out.im_max = rect.im_max.clone(),
            Edge::Left => out.re_min = rect.re_min.clone(),
            Edge::Right => out.re_max = rect.re_max.clone(),
        }
    }
    out
}

/// Known real points of `id` on the boundary, with their edges.
fn special_points(id: FunctionId, rect: &Rectangle, ctx: &PrecisionContext) -> Result<Vec<(BigReal, Edge)>> {
    let mut points: Vec<(BigReal, bool)> = id.poles().iter().map(|&p| (ctx.real(p), true)).collect();
    points.extend(
        id.known_real_zeros()
            .iter()
            .map(|&(n, d)| (Float::with_val(ctx.working_bits(), n) / d as i32, false)),
    );
    let r = ctx.real(INDENT_RADIUS);
    let mut out = Vec::new();
    for (p, is_pole) in points {
        let z = ctx.complex(&p, 0);
        if rect.contains(&z) {
            if is_pole {
                return Err(Error::PoleInRegion {
                    location: z.to_string(),
                });
            }
            continue;
        }
        let inside_re = p > rect.re_min && p < rect.re_max;
        let inside_im = rect.im_min < 0 && rect.im_max > 0;
        let edge = if rect.im_min == 0 && inside_re {
            Some(Edge::Bottom)
        } else if rect.im_max == 0 && inside_re {
            Some(Edge::Top)
        } else if p == rect.re_min && inside_im {
            Some(Edge::Left)
        } else if p == rect.re_max && inside_im {
            Some(Edge::Right)
        } else if (p == rect.re_min || p == rect.re_max) && (rect.im_min == 0 || rect.im_max == 0) {
            return Err(proximity(&z));
        } else {
            None
        };
        if let Some(edge) = edge {
            let room = match edge {
                Edge::Bottom | Edge::Top => {
                    Float::with_val(p.prec(), &p - &rect.re_min).min(&Float::with_val(p.prec(), &rect.re_max - &p))
                }
                Edge::Left | Edge::Right => Float::with_val(p.prec(), -&rect.im_min).min(&rect.im_max),
            };
            if room <= r {
                return Err(proximity(&z));
            }
            out.push((p, edge));
        }
    }
    Ok(out)
}

fn count_once(id: FunctionId, rect: &Rectangle, ctx: &PrecisionContext) -> Result<RectCount> {
    let points = special_points(id, rect, ctx)?;
    let path = boundary_path(rect, &points, ctx);
    let floor = ctx.pow2(-((ctx.bits() / 4) as i32));
    let pieces: Vec<Result<(f64, usize)>> = path
        .par_iter()
        .map(|seg| {
            let mut tr = Tracker {
                id,
                ctx,
                floor: floor.clone(),
                evaluations: 0,
            };
            tr.segment_phase(seg).map(|d| (d, tr.evaluations))
        })
        .collect();
    let mut total = 0.0;
    let mut evaluations = 0;
    for piece in pieces {
        let (d, n) = piece?;
        total += d;
        evaluations += n;
    }
    let raw = total / (2.0 * PI);
    let count = raw.round();
    if (raw - count).abs() > 1e-6 {
        return Err(Error::NoConvergence {
            iterations: evaluations,
            best: format!("{raw}"),
            residual: format!("{}", (raw - count).abs()),
        });
    }
    Ok(RectCount {
        count: count as i64,
        raw_winding: raw,
        nudges: 0,
        evaluations,
        indented: points.iter().map(|(p, _)| p.to_f64()).collect(),
        rect: rect.clone(),
    })
}
