use std::fmt;

use super::form::LinearForm;
use crate::error::{Error, Result};

/// Largest rank accepted by [`enumerate_weyl`].
pub const MAX_RANK: usize = 8;

/// Root datum of type `C_n` in the basis `e_1..e_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    pub n: usize,
    /// `e_i - e_j`, `e_i + e_j` (`i < j`) and `2 e_i`.
    pub positive_roots: Vec<Vec<i64>>,
    /// `e_i - e_{i+1}` and `2 e_n`.
    pub simple_roots: Vec<Vec<i64>>,
    /// Coroots of `positive_roots`, in the same order.
    pub coroots: Vec<Vec<i64>>,
    /// Half the sum of positive roots.
    pub rho: Vec<i64>,
}

pub fn root_system_c(n: usize) -> Result<RootSystem> {
    if n == 0 {
        return Err(Error::Domain("rank must be at least 1".into()));
    }
    let unit = |i: usize, k: i64| {
        let mut v = vec![0; n];
        v[i] = k;
        v
    };
    let mut positive = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut minus = unit(i, 1);
            minus[j] = -1;
            let mut plus = unit(i, 1);
            plus[j] = 1;
            positive.push(minus);
            positive.push(plus);
        }
        positive.push(unit(i, 2));
    }
    let mut simple: Vec<Vec<i64>> = (0..n - 1)
        .map(|i| {
            let mut v = unit(i, 1);
            v[i + 1] = -1;
            v
        })
        .collect();
    simple.push(unit(n - 1, 2));
    let coroots = positive.iter().map(|r| coroot(r)).collect();
    let mut rho = vec![0; n];
    for r in &positive {
        for (x, y) in rho.iter_mut().zip(r) {
            *x += y;
        }
    }
    rho.iter_mut().for_each(|x| *x /= 2);
    Ok(RootSystem {
        n,
        positive_roots: positive,
        simple_roots: simple,
        coroots,
        rho,
    })
}

/// `2 alpha / (alpha, alpha)`: long roots `2 e_i` map to `e_i`, short roots to themselves.
pub fn coroot(alpha: &[i64]) -> Vec<i64> {
    let norm: i64 = alpha.iter().map(|x| x * x).sum();
    alpha.iter().map(|x| 2 * x / norm).collect()
}

/// First nonzero coordinate positive.
pub fn is_positive(v: &[i64]) -> bool {
    v.iter().find(|&&x| x != 0).is_some_and(|&x| x > 0)
}

/// Signed permutation: `w(e_j) = signs[j] e_{perm[j]}` (0-based).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeylElement {
    pub perm: Vec<usize>,
    pub signs: Vec<i8>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        Self {
            perm: (0..n).collect(),
            signs: vec![1; n],
        }
    }

    /// Swap of `e_i` and `e_j`.
    pub fn transposition(n: usize, i: usize, j: usize) -> Self {
        let mut w = Self::identity(n);
        w.perm.swap(i, j);
        w
    }

    /// Sign change of `e_i`.
    pub fn sign_change(n: usize, i: usize) -> Self {
        let mut w = Self::identity(n);
        w.signs[i] = -1;
        w
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    /// `self o other` (apply `other` first).
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        let n = self.n();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for j in 0..n {
            let k = other.perm[j];
            perm[j] = self.perm[k];
            signs[j] = other.signs[j] * self.signs[k];
        }
        WeylElement { perm, signs }
    }

    pub fn inverse(&self) -> WeylElement {
        let n = self.n();
        let mut perm = vec![0; n];
        let mut signs = vec![1; n];
        for j in 0..n {
            perm[self.perm[j]] = j;
            signs[self.perm[j]] = self.signs[j];
        }
        WeylElement { perm, signs }
    }

    /// Action on a vector of `e`-coordinates.
    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        let mut out = vec![0; v.len()];
        for (j, x) in v.iter().enumerate() {
            out[self.perm[j]] += self.signs[j] as i64 * x;
        }
        out
    }

    /// Name as a product of a permutation (cycle notation) and sign changes
    /// applied first, e.g. `(12)c1c2`; the identity is `1`.
    pub fn name(&self) -> String {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.perm[start] == start {
                continue;
            }
            out.push('(');
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                out.push_str(&(j + 1).to_string());
                j = self.perm[j];
            }
            out.push(')');
        }
        for (i, s) in self.signs.iter().enumerate() {
            if *s < 0 {
                out.push_str(&format!("c{}", i + 1));
            }
        }
        if out.is_empty() {
            out.push('1');
        }
        out
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WeylElement({})", self.name())
    }
}

/// All `2^n n!` signed permutations: permutations in lexicographic order,
/// sign patterns by bitmask within each.
pub fn enumerate_weyl(n: usize) -> Result<Vec<WeylElement>> {
    if n == 0 {
        return Err(Error::Domain("rank must be at least 1".into()));
    }
    if n > MAX_RANK {
        return Err(Error::SizeOverflow(format!(
            "Weyl group of C_{n} has more than 2^{MAX_RANK} {MAX_RANK}! elements"
        )));
    }
    let mut perms = Vec::new();
    permutations(&mut (0..n).collect(), 0, &mut perms);
    perms.sort();
    let mut out = Vec::with_capacity(perms.len() << n);
    for perm in perms {
        for mask in 0..(1u32 << n) {
            let signs = (0..n).map(|i| if mask >> i & 1 == 1 { -1 } else { 1 }).collect();
            out.push(WeylElement {
                perm: perm.clone(),
                signs,
            });
        }
    }
    Ok(out)
}

fn permutations(v: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == v.len() {
        out.push(v.clone());
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, out);
        v.swap(k, i);
    }
}

/// Acts on the coefficient vector of `form` as on a vector in the `e`-basis.
pub fn weyl_action(w: &WeylElement, form: &LinearForm) -> Result<LinearForm> {
    form.check_dim(w.n())?;
    Ok(LinearForm::new(w.apply(&form.coeffs), form.constant.clone()))
}
