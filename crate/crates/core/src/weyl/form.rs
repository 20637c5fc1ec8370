use std::fmt;

use rug::{Integer, Rational};

use crate::error::{Error, Result};
use crate::precision::{BigComplex, PrecisionContext};

/// Affine form `sum_i coeffs[i] z_i + constant` in the variables `z_1..z_n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LinearForm {
    pub coeffs: Vec<i64>,
    pub constant: Rational,
}

impl LinearForm {
    pub fn new(coeffs: Vec<i64>, constant: impl Into<Rational>) -> Self {
        Self {
            coeffs,
            constant: constant.into(),
        }
    }

    pub fn constant(n: usize, c: impl Into<Rational>) -> Self {
        Self::new(vec![0; n], c)
    }

    /// `z_{index}` (0-based).
    pub fn variable(n: usize, index: usize) -> Self {
        let mut coeffs = vec![0; n];
        coeffs[index] = 1;
        Self::new(coeffs, 0)
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// First nonzero coefficient.
    pub fn leading(&self) -> Option<i64> {
        self.coeffs.iter().copied().find(|&c| c != 0)
    }

    pub fn add_constant(&self, c: impl Into<Rational>) -> Self {
        Self::new(self.coeffs.clone(), &self.constant + c.into())
    }

    pub fn neg(&self) -> Self {
        Self::new(
            self.coeffs.iter().map(|c| -c).collect(),
            Rational::from(-&self.constant),
        )
    }

    /// `1 - self`.
    pub fn reflect(&self) -> Self {
        self.neg().add_constant(1)
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::Dimension {
                expected: n,
                found: self.dim(),
            });
        }
        Ok(())
    }

    /// Primitive integer multiple with positive leading coefficient:
    /// `self = scale * form`.
    pub fn primitive(&self) -> (Rational, LinearForm) {
        let den = self.constant.denom().clone();
        let mut ints: Vec<Integer> = self.coeffs.iter().map(|&c| Integer::from(c) * &den).collect();
        ints.push(self.constant.numer().clone());
        let mut g = Integer::new();
        for v in &ints {
            g.gcd_mut(v);
        }
        if g == 0 {
            return (Rational::from(1), self.clone());
        }
        if self.leading().map_or(self.constant < 0, |l| l < 0) {
            g = -g;
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| (Integer::from(c) * &den / &g).to_i64().expect("coefficient overflow"))
            .collect();
        let constant = Rational::from((Integer::from(self.constant.numer() / &g), Integer::from(1)));
        let scale = Rational::from((g, den));
        (scale, LinearForm::new(coeffs, constant))
    }

    /// Substitutes `z_{from} = z_{to} + shift` (0-based), returning the
    /// coefficient of `z_{from}` that moved and the restricted form.
    pub fn substitute(&self, from: usize, to: usize, shift: &Rational) -> (i64, LinearForm) {
        let k = self.coeffs[from];
        let mut coeffs = self.coeffs.clone();
        coeffs[from] = 0;
        coeffs[to] += k;
        let constant = &self.constant + Rational::from(shift * k);
        (k, LinearForm::new(coeffs, constant))
    }

    /// Replaces `z_{index}` by `scale * z_{index} + offset`.
    pub fn affine_substitute(&self, index: usize, scale: i64, offset: &Rational) -> LinearForm {
        let k = self.coeffs[index];
        let mut coeffs = self.coeffs.clone();
        coeffs[index] = k * scale;
        LinearForm::new(coeffs, &self.constant + Rational::from(offset * k))
    }

    pub fn evaluate(&self, z: &[BigComplex], ctx: &PrecisionContext) -> Result<BigComplex> {
        if z.len() != self.dim() {
            return Err(Error::Dimension {
                expected: self.dim(),
                found: z.len(),
            });
        }
        let p = ctx.working_bits();
        let mut acc = BigComplex::with_val(p, &self.constant, 0);
        for (c, zi) in self.coeffs.iter().zip(z) {
            if *c != 0 {
                acc = &acc + &zi.mul_int(*c);
            }
        }
        Ok(acc)
    }

    /// Text form using `names` for the variables.
    pub fn render(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (c, name) in self.coeffs.iter().zip(names) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 {
                "-"
            } else if out.is_empty() {
                ""
            } else {
                "+"
            };
            let mag = c.unsigned_abs();
            if mag == 1 {
                out.push_str(&format!("{sign}{name}"));
            } else {
                out.push_str(&format!("{sign}{mag}*{name}"));
            }
        }
        if self.constant != 0 || out.is_empty() {
            if self.constant > 0 && !out.is_empty() {
                out.push('+');
            }
            out.push_str(&self.constant.to_string());
        }
        out
    }
}

/// Variable names `z` (one variable) or `z1..zn`.
pub fn variable_names(n: usize) -> Vec<String> {
    if n == 1 {
        vec!["z".to_string()]
    } else {
        (1..=n).map(|i| format!("z{i}")).collect()
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&variable_names(self.dim())))
    }
}

impl fmt::Debug for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LinearForm({self})")
    }
}
