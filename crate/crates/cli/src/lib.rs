//! Job runner behind the `spzeta` binary: every run is described by a
//! [`JobSpec`] and produces one JSON or CSV document.

pub mod job;

use rug::{Float, Rational};
use serde_json::{json, Map, Value};
use symplectic_zeta::precision::{format_real, parse_complex, parse_real};
use symplectic_zeta::sp4::{evaluate, remainders};
use symplectic_zeta::weyl::{
    assemble_period, enumerate_weyl, normalize_to_zeta, reference_rank_two, search_functional_equation,
    symbolic_reflection_holds, weyl_sum, CandidateRange, SymbolicSum,
};
use symplectic_zeta::zeros::{
    count_zeros_detailed, refine_bracket, refine_zero, scan_line_zeros, verify_region_bounds, zero_census, BoundKind,
    CensusOptions, Grid, Rectangle, RegionInputs, Seed, ZeroRecord,
};
use symplectic_zeta::{BigComplex, BigReal, Error, FunctionId, PrecisionContext};

pub use job::{Axis, BoundsKind, Command, JobSpec, OutputFormat, DEFAULT_BITS};

/// Version of the JSON documents described by `docs/schema.json`.
pub const SCHEMA_VERSION: u32 = 1;

pub const ZERO_CSV_HEADER: [&str; 6] = ["index", "function", "re", "im", "residual", "method"];
pub const PLOT_CSV_HEADER: [&str; 4] = ["param", "re", "im", "abs"];

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Numeric(#[from] Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

type Result<T> = std::result::Result<T, CliError>;

/// Rendered output and whether the checked claim held.
#[derive(Debug, Clone)]
pub struct Report {
    pub body: String,
    pub verified: bool,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.verified {
            0
        } else {
            2
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn function(job: &JobSpec) -> Result<FunctionId> {
    let name = job.function.as_deref().ok_or_else(|| usage("--fn is required"))?;
    Ok(name.parse()?)
}

fn pair(text: &str, what: &str) -> Result<(f64, f64)> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    match parts.as_slice() {
        [a, b] => match (a.parse::<f64>(), b.parse::<f64>()) {
            (Ok(a), Ok(b)) if a.is_finite() && b.is_finite() && a <= b => Ok((a, b)),
            _ => Err(usage(format!("malformed {what} {text:?}"))),
        },
        _ => Err(usage(format!("{what} needs two comma-separated numbers, got {text:?}"))),
    }
}

fn real_arg(text: Option<&str>, default: &str, ctx: &PrecisionContext) -> Result<BigReal> {
    Ok(parse_real(text.unwrap_or(default), ctx.working_bits())?)
}

struct Doc {
    digits: usize,
    fields: Map<String, Value>,
}

impl Doc {
    fn new(job: &JobSpec, ctx: &PrecisionContext) -> Self {
        let mut fields = Map::new();
        fields.insert("schema_version".into(), json!(SCHEMA_VERSION));
        fields.insert("command".into(), json!(job.command.name()));
        fields.insert("bits".into(), json!(ctx.bits()));
        fields.insert("digits".into(), json!(ctx.display_digits()));
        Self {
            digits: ctx.display_digits(),
            fields,
        }
    }

    fn set(&mut self, key: &str, value: Value) {
        self.fields.insert(key.into(), value);
    }

    fn real(&self, x: &BigReal) -> String {
        format_real(x, self.digits)
    }

    fn complex(&self, z: &BigComplex) -> Value {
        json!({"re": self.real(&z.re), "im": self.real(&z.im)})
    }

    fn render(self) -> String {
        let mut text = serde_json::to_string_pretty(&Value::Object(self.fields)).expect("json");
        text.push('\n');
        text
    }
}

fn csv_text(header: &[&str], rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w.into_inner().map_err(|e| usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("utf-8 csv"))
}

fn zero_rows(doc: &Doc, zeros: &[ZeroRecord]) -> Vec<Vec<String>> {
    zeros
        .iter()
        .enumerate()
        .map(|(i, z)| {
            vec![
                i.to_string(),
                z.function.name().to_string(),
                doc.real(&z.location.re),
                doc.real(&z.location.im),
                format_real(&z.residual, 6),
                z.method.name().to_string(),
            ]
        })
        .collect()
}

fn zero_values(doc: &Doc, zeros: &[ZeroRecord]) -> Value {
    Value::Array(
        zero_rows(doc, zeros)
            .into_iter()
            .map(|r| {
                json!({
                    "index": r[0].parse::<usize>().unwrap(),
                    "function": r[1],
                    "re": r[2],
                    "im": r[3],
                    "residual": r[4],
                    "method": r[5],
                })
            })
            .collect(),
    )
}

fn rect_value(r: &Rectangle) -> Value {
    json!(r.to_f64())
}

fn sum_lines(sum: &SymbolicSum) -> Value {
    json!(sum.canonical_text().lines().collect::<Vec<_>>())
}

fn refine_tol(ctx: &PrecisionContext) -> BigReal {
    CensusOptions::new(ctx).tol
}

fn default_strip(id: FunctionId) -> &'static str {
    match id {
        FunctionId::Xi => "-1,2",
        _ => "-5,6",
    }
}

/// Runs one job; usage and numeric errors map to exit code 1.
pub fn run(job: &JobSpec) -> Result<Report> {
    let ctx = PrecisionContext::new(job.bits)?;
    let mut doc = Doc::new(job, &ctx);
    let csv = job.output == OutputFormat::Csv;
    let csv_capable = matches!(
        job.command,
        Command::Eval | Command::Zeros | Command::Census | Command::PlotData
    );
    if csv && !csv_capable {
        return Err(usage(format!("{} has no CSV form", job.command.name())));
    }
    let mut verified = true;
    let body = match job.command {
        Command::Eval => {
            let id = function(job)?;
            let text = job.s.as_deref().ok_or_else(|| usage("--s is required"))?;
            let s = parse_complex(text, ctx.working_bits())?;
            let r = evaluate(id, &s, &ctx)?;
            if csv {
                csv_text(
                    &PLOT_CSV_HEADER,
                    vec![vec![
                        text.to_string(),
                        doc.real(&r.value.re),
                        doc.real(&r.value.im),
                        doc.real(&r.value.abs()),
                    ]],
                )?
            } else {
                doc.set("function", json!(id.name()));
                doc.set("s", doc.complex(&s));
                doc.set("value", doc.complex(&r.value));
                doc.set("abs", json!(doc.real(&r.value.abs())));
                doc.set("at_pole", json!(r.at_pole));
                doc.set("residual_estimate", json!(format_real(&r.residual_estimate, 6)));
                doc.render()
            }
        }
        Command::Zeros => {
            let id = function(job)?;
            let (t0, t1) = pair(
                job.range.as_deref().ok_or_else(|| usage("--range is required"))?,
                "range",
            )?;
            let step = real_arg(job.step.as_deref(), "0.02", &ctx)?;
            let scan = scan_line_zeros(id, &ctx.real(t0), &ctx.real(t1), &step, &ctx)?;
            let tol = refine_tol(&ctx);
            let zeros = scan
                .brackets
                .iter()
                .map(|b| refine_bracket(id, b, &tol, &ctx))
                .collect::<symplectic_zeta::Result<Vec<_>>>()?;
            if csv {
                csv_text(&ZERO_CSV_HEADER, zero_rows(&doc, &zeros))?
            } else {
                doc.set("function", json!(id.name()));
                doc.set("range", json!([t0, t1]));
                doc.set("samples", json!(scan.samples));
                doc.set("zeros", zero_values(&doc, &zeros));
                doc.set("dips", json!(scan.dips));
                doc.render()
            }
        }
        Command::Census => {
            let id = function(job)?;
            let height = real_arg(job.height.as_deref(), "50", &ctx)?;
            let (a, b) = match job.rect.as_deref() {
                Some(r) => pair(r, "strip")?,
                None => pair(default_strip(id), "strip")?,
            };
            let strip = Rectangle::new(ctx.real(a), ctx.real(b), ctx.real(0), height.clone())?;
            let r = zero_census(id, &height, &strip, &ctx)?;
            verified = r.confirms_line();
            if csv {
                csv_text(&ZERO_CSV_HEADER, zero_rows(&doc, &r.zeros))?
            } else {
                doc.set("function", json!(id.name()));
                doc.set("height", json!(doc.real(&height)));
                doc.set("strip", json!([a, b]));
                doc.set("rect_count", json!(r.rect_count));
                doc.set("line_count", json!(r.line_count));
                doc.set(
                    "suspects",
                    Value::Array(r.off_line_suspects.iter().map(rect_value).collect()),
                );
                doc.set("confirms_line", json!(verified));
                doc.set("excluded", json!(r.excluded));
                doc.set(
                    "panels",
                    Value::Array(
                        r.panels
                            .iter()
                            .map(|p| {
                                json!({
                                    "rect": rect_value(&p.rect),
                                    "rect_count": p.rect_count,
                                    "line_count": p.line_count,
                                    "rescans": p.rescans,
                                })
                            })
                            .collect(),
                    ),
                );
                doc.set("zeros", zero_values(&doc, &r.zeros));
                doc.render()
            }
        }
        Command::RectCount => {
            let id = function(job)?;
            let rect = Rectangle::parse(job.rect.as_deref().ok_or_else(|| usage("--rect is required"))?, &ctx)?;
            let r = count_zeros_detailed(id, &rect, true, &ctx)?;
            doc.set("function", json!(id.name()));
            doc.set("rect", rect_value(&r.rect));
            doc.set("count", json!(r.count));
            doc.set("raw_winding", json!(r.raw_winding));
            doc.set("nudges", json!(r.nudges));
            doc.set("evaluations", json!(r.evaluations));
            doc.set("indented", json!(r.indented));
            doc.render()
        }
        Command::Derive => {
            let n = job.n.ok_or_else(|| usage("--n is required"))?;
            let group = enumerate_weyl(n)?;
            let raw = weyl_sum(n)?;
            let period = assemble_period(n)?;
            let norm = normalize_to_zeta(&period, n)?;
            let reflection = CandidateRange {
                min: Rational::from(-2 * n as i64),
                max: Rational::from(2 * n as i64),
                step: Rational::from((1, 2)),
            }
            .values()?
            .into_iter()
            .find(|c| symbolic_reflection_holds(&norm.xi_o, c).unwrap_or(false));
            doc.set("n", json!(n));
            doc.set("weyl_order", json!(group.len()));
            doc.set("weyl_sum_terms", json!(raw.len()));
            doc.set("period", sum_lines(&period));
            doc.set("clearing", json!(norm.clearing.to_string()));
            doc.set("normalized", sum_lines(&norm.xi_o));
            doc.set("reflection_constant", json!(reflection.as_ref().map(|c| c.to_string())));
            if let Some(c) = &reflection {
                let zeta = norm.centred(c)?;
                doc.set("zeta", sum_lines(&zeta));
                if n == 2 {
                    let diff = zeta.diff(&reference_rank_two());
                    verified = diff.is_empty();
                    doc.set("closed_form_diff", json!(diff));
                }
            } else if n == 2 {
                verified = false;
            }
            doc.render()
        }
        Command::FeSearch => {
            let n = job.n.ok_or_else(|| usage("--n is required"))?;
            let mut range = CandidateRange::default();
            if let Some(r) = job.range.as_deref() {
                let (a, b) = pair(r, "candidate range")?;
                range.min = Rational::from_f64(a).ok_or_else(|| usage("bad range"))?;
                range.max = Rational::from_f64(b).ok_or_else(|| usage("bad range"))?;
            }
            if let Some(s) = job.step.as_deref() {
                let step: f64 = s.parse().map_err(|_| usage(format!("malformed step {s:?}")))?;
                range.step = Rational::from_f64(step)
                    .filter(|q| *q > 0)
                    .ok_or_else(|| usage("step must be positive"))?;
            }
            let norm = normalize_to_zeta(&assemble_period(n)?, n)?;
            let r = search_functional_equation(
                &norm.xi_o,
                n,
                &range,
                job.samples.unwrap_or(8),
                job.seed.unwrap_or(1),
                &ctx,
            )?;
            doc.set("n", json!(n));
            doc.set("best_c", json!(r.best_c));
            doc.set("residual", json!(r.residual));
            doc.set("samples", json!(r.samples));
            doc.set(
                "candidates",
                json!(r
                    .candidates
                    .iter()
                    .map(|(c, v)| json!({"c": c, "residual": v}))
                    .collect::<Vec<_>>()),
            );
            doc.render()
        }
        Command::VerifyBounds => verify_bounds(job, &ctx, &mut doc, &mut verified)?,
        Command::PlotData => plot_data(job, &ctx, &mut doc, csv)?,
    };
    Ok(Report { body, verified })
}

fn verify_bounds(job: &JobSpec, ctx: &PrecisionContext, doc: &mut Doc, verified: &mut bool) -> Result<String> {
    let kind = job.kind.ok_or_else(|| usage("--kind is required"))?;
    let (sigma_default, t_default) = match kind {
        BoundsKind::Remainders => ("10,40", "0,40"),
        _ => ("0.6,20", "22,100"),
    };
    let (s0, s1) = pair(job.sigma.as_deref().unwrap_or(sigma_default), "sigma range")?;
    let (t0, t1) = pair(job.range.as_deref().unwrap_or(t_default), "t range")?;
    let grid = Grid {
        sigmas: Grid::integer_steps(s0, s1),
        ts: Grid::integer_steps(t0, t1),
    };
    doc.set("kind", json!(kind));
    doc.set("sigma", json!([s0, s1]));
    doc.set("t", json!([t0, t1]));
    if kind == BoundsKind::Remainders {
        let limits = [0.5, 0.1, 0.3];
        let mut max = [(0.0f64, (0.0, 0.0)); 3];
        for &s in &grid.sigmas {
            for &t in &grid.ts {
                let r = remainders(&ctx.complex(s, t), ctx)?;
                for (m, v) in max.iter_mut().zip([&r.r1, &r.r2, &r.r3]) {
                    let a = v.abs().to_f64();
                    if a > m.0 {
                        *m = (a, (s, t));
                    }
                }
            }
        }
        *verified = max.iter().zip(limits).all(|(m, l)| m.0 <= l);
        doc.set("points", json!(grid.sigmas.len() * grid.ts.len()));
        doc.set(
            "maxima",
            json!(max
                .iter()
                .zip(limits)
                .zip(["R1", "R2", "R3"])
                .map(|((m, l), name)| json!({"name": name, "max": m.0, "argmax": [m.1 .0, m.1 .1], "limit": l}))
                .collect::<Vec<_>>()),
        );
        doc.set("all_within", json!(*verified));
        return Ok(std::mem::replace(doc, Doc::new(job, ctx)).render());
    }
    let (bound, inputs) = match kind {
        BoundsKind::Prop32 => (BoundKind::Prop32Ratio, None),
        _ => {
            let seed = Seed::Point(ctx.complex(0.927, 3.2));
            let rho0 = refine_zero(FunctionId::F, &seed, &refine_tol(ctx), ctx)?.location;
            let coverage = (t1.abs().max(t0.abs()) + 11.0).ceil();
            let strip = Rectangle::from_f64(-1.0, 2.0, 0.0, coverage, ctx)?;
            let census = zero_census(FunctionId::Xi, &ctx.real(coverage), &strip, ctx)?;
            if !census.confirms_line() {
                return Err(usage("xi census up to the needed height did not close"));
            }
            let inputs = RegionInputs {
                rho0,
                xi_ordinates: census.ordinates(),
                coverage: ctx.real(coverage),
            };
            doc.set("rho0", doc.complex(&inputs.rho0));
            doc.set("xi_zero_count", json!(inputs.xi_ordinates.len()));
            (BoundKind::Lemma39Inequality, Some(inputs))
        }
    };
    let r = verify_region_bounds(bound, &grid, inputs.as_ref(), ctx)?;
    *verified = r.all_below_one;
    doc.set("points", json!(r.points));
    doc.set("max_value", json!(r.max_value));
    doc.set("argmax", json!([r.argmax.0, r.argmax.1]));
    doc.set("all_below_one", json!(r.all_below_one));
    doc.set("literal_max", json!(r.literal_max));
    doc.set("literal_argmax", json!(r.literal_argmax.map(|(a, b)| [a, b])));
    Ok(std::mem::replace(doc, Doc::new(job, ctx)).render())
}

fn plot_data(job: &JobSpec, ctx: &PrecisionContext, doc: &mut Doc, csv: bool) -> Result<String> {
    let id = function(job)?;
    let axis = job.axis.unwrap_or(Axis::CriticalLine);
    let samples = job.samples.unwrap_or(101);
    if samples < 2 {
        return Err(usage("samples must be at least 2"));
    }
    let points: Vec<(String, BigComplex)> = match axis {
        Axis::CriticalLine | Axis::RealAxis => {
            let (a, b) = pair(
                job.range.as_deref().ok_or_else(|| usage("--range is required"))?,
                "range",
            )?;
            (0..samples)
                .map(|k| {
                    let x = a + (b - a) * k as f64 / (samples - 1) as f64;
                    let s = if axis == Axis::CriticalLine {
                        ctx.complex(0.5, x)
                    } else {
                        ctx.complex(x, 0.0)
                    };
                    (format_real(&Float::with_val(64, x), 12), s)
                })
                .collect()
        }
        Axis::RectGrid => {
            let rect = Rectangle::parse(job.rect.as_deref().ok_or_else(|| usage("--rect is required"))?, ctx)?;
            let [x0, x1, y0, y1] = rect.to_f64();
            let mut out = Vec::with_capacity(samples * samples);
            for j in 0..samples {
                let y = y0 + (y1 - y0) * j as f64 / (samples - 1) as f64;
                for k in 0..samples {
                    let x = x0 + (x1 - x0) * k as f64 / (samples - 1) as f64;
                    out.push((format!("{x}{y:+}i"), ctx.complex(x, y)));
                }
            }
            out
        }
    };
    let mut rows = Vec::with_capacity(points.len());
    for (param, s) in &points {
        let r = evaluate(id, s, ctx)?;
        let v = if r.at_pole {
            BigComplex::infinity(ctx.working_bits())
        } else {
            r.value
        };
        rows.push(vec![
            param.clone(),
            doc.real(&v.re),
            doc.real(&v.im),
            doc.real(&v.abs()),
        ]);
    }
    if csv {
        return csv_text(&PLOT_CSV_HEADER, rows);
    }
    doc.set("function", json!(id.name()));
    doc.set("axis", json!(axis));
    doc.set("samples", json!(rows.len()));
    doc.set(
        "points",
        Value::Array(
            rows.into_iter()
                .map(|r| json!({"param": r[0], "re": r[1], "im": r[2], "abs": r[3]}))
                .collect(),
        ),
    );
    Ok(std::mem::replace(doc, Doc::new(job, ctx)).render())
}
