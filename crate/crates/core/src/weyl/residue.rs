use rayon::prelude::*;
use rug::Rational;

use super::form::LinearForm;
use super::group::{coroot, enumerate_weyl, is_positive, root_system_c, RootSystem, WeylElement};
use super::term::{SymbolicSum, SymbolicTerm};
use crate::error::{Error, Result};
use crate::special::xi_residue;

/// Largest rank accepted by [`assemble_period`].
pub const MAX_PERIOD_RANK: usize = 5;

fn pairing(v: &[i64]) -> LinearForm {
    LinearForm::new(v.to_vec(), 0)
}

/// Summand of the period for `w`:
/// `prod_{simple a} 1/<w lambda - rho, a^v>` times
/// `prod_{a > 0, w a < 0} xi(<lambda, a^v>) / xi(<lambda, a^v> + 1)`.
pub fn build_period_term(w: &WeylElement, rs: &RootSystem) -> Result<SymbolicTerm> {
    let n = rs.n;
    if w.n() != n {
        return Err(Error::Dimension {
            expected: n,
            found: w.n(),
        });
    }
    let inv = w.inverse();
    let mut term = SymbolicTerm::one(n);
    for alpha in &rs.simple_roots {
        // <w lambda, a^v> = <lambda, w^-1 a^v>, and <rho, a^v> = 1 for simple a
        let form = pairing(&inv.apply(&coroot(alpha))).add_constant(-1);
        term.mul_poly(&form, -1)?;
    }
    for (alpha, co) in rs.positive_roots.iter().zip(&rs.coroots) {
        if !is_positive(&w.apply(alpha)) {
            let form = pairing(co);
            term.mul_xi(&form, 1)?;
            term.mul_xi(&form.add_constant(1), -1)?;
        }
    }
    Ok(term)
}

/// Number of positive roots sent to negative roots by `w`.
pub fn inversion_count(w: &WeylElement, rs: &RootSystem) -> usize {
    rs.positive_roots.iter().filter(|a| !is_positive(&w.apply(a))).count()
}

/// The sum over the Weyl group, before any residue is taken.
pub fn weyl_sum(n: usize) -> Result<SymbolicSum> {
    let rs = root_system_c(n)?;
    let group = enumerate_weyl(n)?;
    let terms: Vec<SymbolicTerm> = group
        .par_iter()
        .map(|w| build_period_term(w, &rs))
        .collect::<Result<_>>()?;
    SymbolicSum::from_terms(n, terms)
}

/// Residue of one term along `z_{index} - z_{index+1} = 1` in the variable
/// `z_{index}`; `None` when the term is regular there.
pub fn term_residue(term: &SymbolicTerm, index: usize) -> Result<Option<SymbolicTerm>> {
    let n = term.n;
    if index + 1 >= n {
        return Err(Error::Domain(format!(
            "no hyperplane z{}-z{}=1 in {n} variables",
            index + 1,
            index + 2
        )));
    }
    let one = Rational::from(1);
    let mut order = 0i32;
    let mut out = SymbolicTerm::one(n);
    out.coeff = term.coeff.clone();
    for (f, e) in &term.key.poly {
        let (k, r) = f.substitute(index, index + 1, &one);
        if r.is_constant() && r.constant == 0 {
            order -= e;
            out.mul_rational(&rational_pow(&Rational::from(k), *e));
        } else {
            out.mul_poly(&r, *e)?;
        }
    }
    for (f, e) in &term.key.xi {
        let (k, r) = f.substitute(index, index + 1, &one);
        if r.is_constant() && (r.constant == 0 || r.constant == 1) {
            let pole = if r.constant == 0 { 0 } else { 1 };
            order += e;
            let lead = xi_residue(pole)? / Rational::from(k);
            out.mul_rational(&rational_pow(&lead, *e));
        } else {
            out.mul_xi(&r, *e)?;
        }
    }
    for (q, e) in &term.key.xi_const {
        out.mul_xi_const(q, *e)?;
    }
    match order {
        o if o <= 0 => Ok(None),
        1 => Ok(Some(out)),
        o => Err(Error::HigherOrderPole {
            order: o,
            index: index + 1,
            next: index + 2,
            term: term.to_string(),
        }),
    }
}

fn rational_pow(x: &Rational, e: i32) -> Rational {
    let mut out = Rational::from(1);
    let base = if e < 0 {
        Rational::from(x.recip_ref())
    } else {
        x.clone()
    };
    for _ in 0..e.unsigned_abs() {
        out *= &base;
    }
    out
}

/// Residue of `sum` along `z_{index} - z_{index+1} = 1` (0-based `index`),
/// with `z_{index}` eliminated.
pub fn take_residue(sum: &SymbolicSum, index: usize) -> Result<SymbolicSum> {
    let mut out = SymbolicSum::zero(sum.n);
    for t in sum.terms() {
        if let Some(r) = term_residue(&t, index)? {
            out.add_term(r)?;
        }
    }
    Ok(out)
}

/// Iterated residues of the Weyl sum, as a sum in the last variable.
pub fn assemble_period(n: usize) -> Result<SymbolicSum> {
    if n > MAX_PERIOD_RANK {
        return Err(Error::SizeOverflow(format!("period rank {n} above {MAX_PERIOD_RANK}")));
    }
    let mut sum = weyl_sum(n)?;
    for i in 0..n - 1 {
        sum = take_residue(&sum, i)?;
    }
    sum.restrict_to(n - 1)
}
