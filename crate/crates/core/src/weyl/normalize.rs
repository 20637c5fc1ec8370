use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Float, Rational};
use serde::Serialize;

use super::form::LinearForm;
use super::term::{eval_symbolic, SymbolicSum, SymbolicTerm};
use crate::error::{Error, Result};
use crate::precision::{BigComplex, PrecisionContext};

/// A period multiplied by its clearing factor.
#[derive(Debug, Clone)]
pub struct Normalized {
    pub n: usize,
    /// Factor the period was multiplied by.
    pub clearing: SymbolicTerm,
    /// `xi°(b)`, in the single variable `b`.
    pub xi_o: SymbolicSum,
}

impl Normalized {
    /// `xi(s) = xi°(s + (c-1)/2)`, centring the reflection `b -> c - b` at `s -> 1 - s`.
    pub fn centred(&self, c: &Rational) -> Result<SymbolicSum> {
        shift_variable(&self.xi_o, &((c - Rational::from(1)) / 2))
    }
}

/// Smallest product of `xi(L)` and `xi(q)` factors making every `xi`
/// exponent of every term nonnegative.
pub fn clearing_factor(sum: &SymbolicSum) -> Result<SymbolicTerm> {
    if sum.is_empty() {
        return Err(Error::ClearingFactor("empty sum".into()));
    }
    let mut forms: BTreeMap<LinearForm, i32> = BTreeMap::new();
    let mut consts: BTreeMap<Rational, i32> = BTreeMap::new();
    for t in sum.terms() {
        for (f, e) in &t.key.xi {
            let need = forms.entry(f.clone()).or_insert(0);
            *need = (*need).max(-e);
        }
        for (q, e) in &t.key.xi_const {
            let need = consts.entry(q.clone()).or_insert(0);
            *need = (*need).max(-e);
        }
    }
    let mut out = SymbolicTerm::one(sum.n);
    for (f, e) in forms.iter().filter(|(_, e)| **e > 0) {
        out.mul_xi(f, *e)?;
    }
    for (q, e) in consts.iter().filter(|(_, e)| **e > 0) {
        out.mul_xi_const(q, *e)?;
    }
    Ok(out)
}

/// The factor `xi(2) xi(b+2) xi(2b+2)` used for rank two.
pub fn rank_two_clearing() -> SymbolicTerm {
    let mut t = SymbolicTerm::one(1);
    t.mul_xi_const(&Rational::from(2), 1).expect("regular constant");
    t.mul_xi(&LinearForm::new(vec![1], 2), 1).expect("dimension");
    t.mul_xi(&LinearForm::new(vec![2], 2), 1).expect("dimension");
    t
}

/// Multiplies a one-variable period by its clearing factor.
pub fn normalize_to_zeta(period: &SymbolicSum, n: usize) -> Result<Normalized> {
    if period.n != 1 {
        return Err(Error::Dimension {
            expected: 1,
            found: period.n,
        });
    }
    let clearing = if n == 2 {
        rank_two_clearing()
    } else {
        clearing_factor(period)?
    };
    let xi_o = period.mul_term(&clearing)?;
    if xi_o.is_empty() {
        return Err(Error::ClearingFactor("normalized sum vanishes".into()));
    }
    if let Some(t) = xi_o
        .terms()
        .find(|t| t.key.xi.values().chain(t.key.xi_const.values()).any(|e| *e < 0))
    {
        return Err(Error::ClearingFactor(format!("xi factor left in a denominator: {t}")));
    }
    Ok(Normalized { n, clearing, xi_o })
}

/// `b -> b + shift`.
pub fn shift_variable(sum: &SymbolicSum, shift: &Rational) -> Result<SymbolicSum> {
    sum.map_forms(1, |f| f.affine_substitute(0, 1, shift))
}

/// `b -> c - b`.
pub fn reflect_variable(sum: &SymbolicSum, c: &Rational) -> Result<SymbolicSum> {
    sum.map_forms(1, |f| f.affine_substitute(0, -1, c))
}

/// Whether `sum(c - b) = sum(b)` holds after normal-form merging.
pub fn symbolic_reflection_holds(sum: &SymbolicSum, c: &Rational) -> Result<bool> {
    Ok(reflect_variable(sum, c)? == *sum)
}

/// The printed six-term closed form of the rank-two zeta in `s`.
pub fn reference_rank_two() -> SymbolicSum {
    let lin = |a: i64, b: i64| LinearForm::new(vec![a], b);
    let xi2 = Rational::from(2);
    let term = |coeff: i64, poly: &[(i64, i64)], xis: &[(i64, i64)], with_xi2: bool| {
        let mut t = SymbolicTerm::one(1);
        t.coeff = Rational::from(coeff);
        for (a, b) in poly {
            t.mul_poly(&lin(*a, *b), -1).expect("dimension");
        }
        for (a, b) in xis {
            t.mul_xi(&lin(*a, *b), 1).expect("dimension");
        }
        if with_xi2 {
            t.mul_xi_const(&xi2, 1).expect("regular constant");
        }
        t
    };
    let terms = [
        term(1, &[(1, -2)], &[(1, 1), (2, 0)], true),
        term(-1, &[(1, 1)], &[(1, -1), (2, -1)], true),
        term(-1, &[(2, -2)], &[(1, 1), (2, 0)], false),
        term(1, &[(2, 0)], &[(1, -1), (2, -1)], false),
        term(-1, &[(2, -2), (1, 1)], &[(1, 0), (2, 0)], false),
        term(-1, &[(2, 0), (1, -2)], &[(1, 0), (2, -1)], false),
    ];
    SymbolicSum::from_terms(1, terms).expect("dimension")
}

/// Candidate reflection constants `c = min, min + step, ..., max`.
#[derive(Debug, Clone)]
pub struct CandidateRange {
    pub min: Rational,
    pub max: Rational,
    pub step: Rational,
}

impl Default for CandidateRange {
    fn default() -> Self {
        Self {
            min: Rational::from(-6),
            max: Rational::from(6),
            step: Rational::from((1, 2)),
        }
    }
}

impl CandidateRange {
    pub fn values(&self) -> Result<Vec<Rational>> {
        if self.step <= 0 || self.max < self.min {
            return Err(Error::Domain("empty candidate range".into()));
        }
        let mut out = Vec::new();
        let mut c = self.min.clone();
        while c <= self.max {
            out.push(c.clone());
            c += &self.step;
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FeSearchReport {
    pub n: usize,
    pub best_c: String,
    pub residual: f64,
    /// `(c, max relative residual)` for each candidate.
    pub candidates: Vec<(String, f64)>,
    pub samples: usize,
}

/// Sample points `x + iy`, `x` in `[-3, 3]`, `y` in `[1, 5]`.
pub fn sample_points(count: usize, seed: u64, ctx: &PrecisionContext) -> Vec<BigComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| ctx.complex(rng.gen_range(-3.0..3.0), rng.gen_range(1.0..5.0)))
        .collect()
}

/// Scans reflection constants `c` for `sum(c - b) = sum(b)` at random samples.
pub fn search_functional_equation(
    sum: &SymbolicSum,
    n: usize,
    range: &CandidateRange,
    samples: usize,
    seed: u64,
    ctx: &PrecisionContext,
) -> Result<FeSearchReport> {
    if sum.n != 1 {
        return Err(Error::Dimension {
            expected: 1,
            found: sum.n,
        });
    }
    let points = sample_points(samples.max(1), seed, ctx);
    let base: Vec<BigComplex> = points
        .par_iter()
        .map(|p| eval_symbolic(sum, std::slice::from_ref(p), ctx))
        .collect::<Result<_>>()?;
    let p = ctx.working_bits();
    let candidates: Vec<(Rational, f64)> = range
        .values()?
        .into_par_iter()
        .map(|c| {
            let cf = Float::with_val(p, &c);
            let mut worst = 0.0f64;
            for (z, v) in points.iter().zip(&base) {
                let reflected = BigComplex::from_real(cf.clone()) - z;
                let r = match eval_symbolic(sum, &[reflected], ctx) {
                    Ok(w) => {
                        let scale = Float::with_val(p, v.abs().max(&w.abs()));
                        let d = v.dist(&w);
                        if scale.is_zero() {
                            d.to_f64()
                        } else {
                            Float::with_val(p, d / scale).to_f64()
                        }
                    }
                    Err(_) => f64::INFINITY,
                };
                worst = worst.max(r);
                if worst > 1e-3 {
                    break;
                }
            }
            (c, worst)
        })
        .collect();
    let (best, residual) = candidates
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(c, r)| (c.clone(), *r))
        .expect("nonempty range");
    Ok(FeSearchReport {
        n,
        best_c: best.to_string(),
        residual,
        candidates: candidates.into_iter().map(|(c, r)| (c.to_string(), r)).collect(),
        samples: points.len(),
    })
}

/// Comparison of one symbolic residue step with a trapezoid contour integral.
#[derive(Debug, Clone, Serialize)]
pub struct ResidueCheck {
    pub point: Vec<(f64, f64)>,
    pub symbolic: (f64, f64),
    pub contour: (f64, f64),
    pub abs_error: f64,
}

/// Evaluates `take_residue(before, index)` (given as `after`) at `point` and
/// compares with `(1/2 pi i) \oint before dz_{index}` on the circle of
/// radius `radius` around `z_{index+1} + 1`, using `nodes` trapezoid nodes.
pub fn contour_residue_check(
    before: &SymbolicSum,
    after: &SymbolicSum,
    index: usize,
    point: &[BigComplex],
    radius: f64,
    nodes: usize,
    ctx: &PrecisionContext,
) -> Result<ResidueCheck> {
    if point.len() != before.n || index + 1 >= before.n {
        return Err(Error::Dimension {
            expected: before.n,
            found: point.len(),
        });
    }
    let p = ctx.working_bits();
    let centre = point[index + 1].add_int(1);
    let two_pi = ctx.pi() * 2u32;
    let r = ctx.real(radius);
    let values: Vec<BigComplex> = (0..nodes)
        .into_par_iter()
        .map(|k| {
            let theta = Float::with_val(p, &two_pi * k as u32) / nodes as u32;
            let eps = BigComplex::new(
                Float::with_val(p, theta.cos_ref()) * &r,
                Float::with_val(p, theta.sin_ref()) * &r,
            );
            let mut z = point.to_vec();
            z[index] = &centre + &eps;
            eval_symbolic(before, &z, ctx).map(|v| &v * &eps)
        })
        .collect::<Result<_>>()?;
    let mut acc = BigComplex::zero(p);
    for v in &values {
        acc = &acc + v;
    }
    let contour = acc.div_int(nodes as i64);
    let symbolic = eval_symbolic(after, point, ctx)?;
    Ok(ResidueCheck {
        point: point.iter().map(|z| z.to_f64_pair()).collect(),
        symbolic: symbolic.to_f64_pair(),
        contour: contour.to_f64_pair(),
        abs_error: contour.dist(&symbolic).to_f64(),
    })
}
