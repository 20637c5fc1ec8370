use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rug::Rational;

use super::form::{variable_names, LinearForm};
use crate::error::{Error, Result};
use crate::precision::{BigComplex, PrecisionContext};
use crate::special::{xi, xi_rational};

/// Factor part of a term; two terms merge exactly when their keys agree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct TermKey {
    /// Primitive integer forms, positive leading coefficient.
    pub poly: BTreeMap<LinearForm, i32>,
    /// `xi(L)` with `L` chosen among `{L, 1-L}` to have positive leading coefficient.
    pub xi: BTreeMap<LinearForm, i32>,
    /// `xi(q)` with `q >= 1/2`.
    pub xi_const: BTreeMap<Rational, i32>,
}

/// `coeff * prod (L)^e * prod xi(L)^e * prod xi(q)^e`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicTerm {
    pub n: usize,
    pub coeff: Rational,
    pub key: TermKey,
}

fn bump<K: Ord>(map: &mut BTreeMap<K, i32>, k: K, e: i32) {
    let entry = map.entry(k).or_insert(0);
    *entry += e;
    map.retain(|_, v| *v != 0);
}

impl SymbolicTerm {
    pub fn one(n: usize) -> Self {
        Self {
            n,
            coeff: Rational::from(1),
            key: TermKey::default(),
        }
    }

    pub fn scaled(mut self, c: &Rational) -> Self {
        self.coeff *= c;
        self
    }

    pub fn mul_rational(&mut self, c: &Rational) {
        self.coeff *= c;
    }

    /// Multiplies by `form^exp`; constant forms fold into the coefficient.
    pub fn mul_poly(&mut self, form: &LinearForm, exp: i32) -> Result<()> {
        form.check_dim(self.n)?;
        if exp == 0 {
            return Ok(());
        }
        let (scale, prim) = form.primitive();
        if form.is_constant() {
            if form.constant == 0 {
                if exp < 0 {
                    return Err(Error::Domain("division by a vanishing factor".into()));
                }
                self.coeff = Rational::new();
                return Ok(());
            }
            self.coeff *= pow(&form.constant, exp);
            return Ok(());
        }
        self.coeff *= pow(&scale, exp);
        bump(&mut self.key.poly, prim, exp);
        Ok(())
    }

    /// Multiplies by `xi(form)^exp`.
    pub fn mul_xi(&mut self, form: &LinearForm, exp: i32) -> Result<()> {
        form.check_dim(self.n)?;
        if exp == 0 {
            return Ok(());
        }
        if form.is_constant() {
            return self.mul_xi_const(&form.constant, exp);
        }
        let canon = if form.leading().unwrap() < 0 {
            form.reflect()
        } else {
            form.clone()
        };
        bump(&mut self.key.xi, canon, exp);
        Ok(())
    }

    pub fn mul_xi_const(&mut self, q: &Rational, exp: i32) -> Result<()> {
        if *q == 0 || *q == 1 {
            return Err(Error::Pole {
                function: "xi".into(),
                location: q.to_string(),
            });
        }
        let half = Rational::from((1, 2));
        let canon = if *q < half { 1 - q.clone() } else { q.clone() };
        bump(&mut self.key.xi_const, canon, exp);
        Ok(())
    }

    pub fn mul(&self, other: &SymbolicTerm) -> Result<SymbolicTerm> {
        let mut out = self.clone();
        out.coeff *= &other.coeff;
        for (f, e) in &other.key.poly {
            out.mul_poly(f, *e)?;
        }
        for (f, e) in &other.key.xi {
            out.mul_xi(f, *e)?;
        }
        for (q, e) in &other.key.xi_const {
            out.mul_xi_const(q, *e)?;
        }
        Ok(out)
    }

    /// Number of `xi(L)` factors counted with multiplicity.
    pub fn xi_factor_count(&self) -> u32 {
        self.key.xi.values().map(|e| e.unsigned_abs()).sum()
    }

    /// Canonical text: `coeff * prod[...] * prod[xi(...)^e] * prod[xi(q)^e]`.
    pub fn render(&self, names: &[String]) -> String {
        let poly: Vec<String> = self
            .key
            .poly
            .iter()
            .map(|(f, e)| format!("({})^{e}", f.render(names)))
            .collect();
        let xis: Vec<String> = self
            .key
            .xi
            .iter()
            .map(|(f, e)| format!("xi({})^{e}", f.render(names)))
            .collect();
        let consts: Vec<String> = self.key.xi_const.iter().map(|(q, e)| format!("xi({q})^{e}")).collect();
        format!(
            "{} * prod[{}] * prod[{}] * prod[{}]",
            self.coeff,
            poly.join(" "),
            xis.join(" "),
            consts.join(" ")
        )
    }

    /// Applies `f` to every linear form, re-normalizing.
    pub fn map_forms<F>(&self, n: usize, f: F) -> Result<SymbolicTerm>
    where
        F: Fn(&LinearForm) -> LinearForm,
    {
        let mut out = SymbolicTerm::one(n);
        out.coeff = self.coeff.clone();
        for (form, e) in &self.key.poly {
            out.mul_poly(&f(form), *e)?;
        }
        for (form, e) in &self.key.xi {
            out.mul_xi(&f(form), *e)?;
        }
        for (q, e) in &self.key.xi_const {
            out.mul_xi_const(q, *e)?;
        }
        Ok(out)
    }
}

fn pow(x: &Rational, e: i32) -> Rational {
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

impl fmt::Display for SymbolicTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&variable_names(self.n)))
    }
}

/// Sum of terms with pairwise distinct keys and nonzero coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolicSum {
    pub n: usize,
    terms: BTreeMap<TermKey, Rational>,
}

impl SymbolicSum {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = SymbolicTerm>) -> Result<Self> {
        let mut s = Self::zero(n);
        for t in terms {
            s.add_term(t)?;
        }
        Ok(s)
    }

    pub fn add_term(&mut self, t: SymbolicTerm) -> Result<()> {
        if t.n != self.n {
            return Err(Error::Dimension {
                expected: self.n,
                found: t.n,
            });
        }
        if t.coeff == 0 {
            return Ok(());
        }
        let entry = self.terms.entry(t.key).or_default();
        *entry += t.coeff;
        self.terms.retain(|_, c| *c != 0);
        Ok(())
    }

    pub fn add(&self, other: &SymbolicSum) -> Result<SymbolicSum> {
        let mut out = self.clone();
        for t in other.terms() {
            out.add_term(t)?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> SymbolicSum {
        let mut out = SymbolicSum::zero(self.n);
        if *c != 0 {
            for (k, v) in &self.terms {
                out.terms.insert(k.clone(), Rational::from(v * c));
            }
        }
        out
    }

    pub fn negate(&self) -> SymbolicSum {
        self.scale(&Rational::from(-1))
    }

    /// Every term multiplied by `factor`.
    pub fn mul_term(&self, factor: &SymbolicTerm) -> Result<SymbolicSum> {
        let mut out = SymbolicSum::zero(self.n);
        for t in self.terms() {
            out.add_term(t.mul(factor)?)?;
        }
        Ok(out)
    }

    pub fn terms(&self) -> impl Iterator<Item = SymbolicTerm> + '_ {
        self.terms.iter().map(|(k, c)| SymbolicTerm {
            n: self.n,
            coeff: c.clone(),
            key: k.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn map_forms<F>(&self, n: usize, f: F) -> Result<SymbolicSum>
    where
        F: Fn(&LinearForm) -> LinearForm,
    {
        let mut out = SymbolicSum::zero(n);
        for t in self.terms() {
            out.add_term(t.map_forms(n, &f)?)?;
        }
        Ok(out)
    }

    /// Keeps only the variable `z_{index}`, which must be the only one used.
    pub fn restrict_to(&self, index: usize) -> Result<SymbolicSum> {
        let used_elsewhere = self.terms.keys().any(|k| {
            k.poly
                .keys()
                .chain(k.xi.keys())
                .any(|f| f.coeffs.iter().enumerate().any(|(i, c)| i != index && *c != 0))
        });
        if used_elsewhere {
            return Err(Error::Precondition(format!(
                "sum depends on variables other than z{}",
                index + 1
            )));
        }
        self.map_forms(1, |f| LinearForm::new(vec![f.coeffs[index]], f.constant.clone()))
    }

    /// One term per line, sorted.
    pub fn canonical_text(&self) -> String {
        let names = variable_names(self.n);
        let mut lines: Vec<String> = self.terms().map(|t| t.render(&names)).collect();
        lines.sort();
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }

    /// Terms present in exactly one of the two sums, as `-`/`+` lines.
    pub fn diff(&self, other: &SymbolicSum) -> Vec<String> {
        let a = self.canonical_text();
        let b = other.canonical_text();
        let left: Vec<&str> = a.lines().collect();
        let right: Vec<&str> = b.lines().collect();
        let mut out: Vec<String> = left
            .iter()
            .filter(|l| !right.contains(l))
            .map(|l| format!("- {l}"))
            .collect();
        out.extend(right.iter().filter(|l| !left.contains(l)).map(|l| format!("+ {l}")));
        out
    }
}

impl fmt::Display for SymbolicSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

/// Numeric value of `sum` at `assignment`.
pub fn eval_symbolic(sum: &SymbolicSum, assignment: &[BigComplex], ctx: &PrecisionContext) -> Result<BigComplex> {
    if assignment.len() != sum.n {
        return Err(Error::Dimension {
            expected: sum.n,
            found: assignment.len(),
        });
    }
    let p = ctx.working_bits();
    let mut xi_cache: HashMap<LinearForm, BigComplex> = HashMap::new();
    let mut const_cache: HashMap<Rational, BigComplex> = HashMap::new();
    let mut total = BigComplex::zero(p);
    for t in sum.terms() {
        let mut v = BigComplex::with_val(p, &t.coeff, 0);
        for (f, e) in &t.key.poly {
            v = &v * &f.evaluate(assignment, ctx)?.powi(*e);
        }
        for (f, e) in &t.key.xi {
            if !xi_cache.contains_key(f) {
                let arg = f.evaluate(assignment, ctx)?;
                let r = xi(&arg, ctx).finite("xi", &arg)?;
                xi_cache.insert(f.clone(), r);
            }
            v = &v * &xi_cache[f].powi(*e);
        }
        for (q, e) in &t.key.xi_const {
            if !const_cache.contains_key(q) {
                const_cache.insert(q.clone(), xi_rational(q, ctx)?);
            }
            v = &v * &const_cache[q].powi(*e);
        }
        total = &total + &v;
    }
    Ok(ctx.round(&total))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_merges_and_cancels() {
        let mut a = SymbolicTerm::one(2);
        a.mul_poly(&LinearForm::new(vec![-1, 1], -1), -1).unwrap();
        a.mul_xi(&LinearForm::new(vec![1, -1], 0), 1).unwrap();
        a.mul_xi(&LinearForm::new(vec![-1, 1], 1), -1).unwrap();
        // xi(z1-z2) and xi(1-(z1-z2)) coincide, so they cancel
        assert!(a.key.xi.is_empty());
        assert_eq!(a.coeff, -1);
        assert_eq!(a.to_string(), "-1 * prod[(z1-z2+1)^-1] * prod[] * prod[]");

        let mut b = SymbolicTerm::one(2);
        b.mul_poly(&LinearForm::new(vec![2, -2], 2), -1).unwrap();
        let s = SymbolicSum::from_terms(2, [a, b.scaled(&Rational::from(2))]).unwrap();
        assert!(s.is_empty());
    }

    #[test]
    fn xi_constants_use_the_upper_representative() {
        let mut t = SymbolicTerm::one(1);
        t.mul_xi_const(&Rational::from(-1), -1).unwrap();
        assert_eq!(t.key.xi_const.get(&Rational::from(2)), Some(&-1));
        assert!(t.mul_xi_const(&Rational::from(1), 1).is_err());
    }

    #[test]
    fn evaluation_of_simple_sums() {
        let c = PrecisionContext::new(128).unwrap();
        let empty = SymbolicSum::zero(1);
        assert!(eval_symbolic(&empty, &[c.complex(2, 1)], &c).unwrap().is_zero());
        let mut t = SymbolicTerm::one(1);
        t.mul_xi_const(&Rational::from(2), 1).unwrap();
        let s = SymbolicSum::from_terms(1, [t]).unwrap();
        let v = eval_symbolic(&s, &[c.complex(0, 0)], &c).unwrap();
        let sixth = c.pi() / 6u32;
        assert!(v.dist(&BigComplex::from_real(sixth)) < c.pow2(-120));
        assert!(eval_symbolic(&s, &[], &c).is_err());
    }
}
