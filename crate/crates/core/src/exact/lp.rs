//! Exact feasibility for linear systems with sign constraints.
//!
//! An [`LpProblem`] asks for `x` with `A x = b`, where every variable is
//! free, nonnegative, or strictly positive. [`lp_feasible`] answers with a
//! [`FeasibilityCertificate`] that can be re-checked with exact arithmetic:
//!
//! * `Solution(x)`: a point satisfying every constraint, strict ones included.
//! * `Separator(w)`: a vector with `(wᵀA)_j = 0` on free variables,
//!   `(wᵀA)_j <= 0` on sign-constrained ones, `wᵀb >= 0`, and either
//!   `wᵀb > 0` or `(wᵀA)_j < 0` for some strictly positive variable.
//!   Substituting any feasible `x` into `wᵀA x = wᵀb` yields a contradiction.
//!
//! Strict positivity is handled by a lift: a common slack `t` with
//! `x_j - t >= 0` on every strict variable and `t <= 1`; the system is
//! strictly feasible iff the optimum of `max t` is positive. Separators
//! come from solving the alternative system directly, which is feasible
//! exactly when the primal is not.
//!
//! The simplex is a dense two-phase tableau with Bland's rule.

use num_traits::{One, Signed, Zero};

use super::{Rat, RatMat, RatVec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    Free,
    NonNeg,
    /// Nonnegative and additionally required to be `> 0`.
    Positive,
}

impl VarKind {
    fn sign_constrained(self) -> bool {
        !matches!(self, VarKind::Free)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("empty input")]
    EmptyInput,
    /// The engine failed to produce a verifiable certificate. Indicates a bug.
    #[error("internal LP failure: {0}")]
    Internal(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpProblem {
    a: RatMat,
    b: RatVec,
    kinds: Vec<VarKind>,
}

impl LpProblem {
    pub fn new(a: RatMat, b: RatVec, kinds: Vec<VarKind>) -> Result<Self, LpError> {
        if a.rows() != b.dim() {
            return Err(LpError::DimensionMismatch(format!(
                "{} constraint rows but right-hand side of length {}",
                a.rows(),
                b.dim()
            )));
        }
        if a.cols() != kinds.len() {
            return Err(LpError::DimensionMismatch(format!(
                "{} columns but {} variable kinds",
                a.cols(),
                kinds.len()
            )));
        }
        Ok(LpProblem { a, b, kinds })
    }

    /// All variables nonnegative, none strict.
    pub fn nonneg(a: RatMat, b: RatVec) -> Result<Self, LpError> {
        let n = a.cols();
        Self::new(a, b, vec![VarKind::NonNeg; n])
    }

    pub fn matrix(&self) -> &RatMat {
        &self.a
    }

    pub fn rhs(&self) -> &RatVec {
        &self.b
    }

    pub fn kinds(&self) -> &[VarKind] {
        &self.kinds
    }

    pub fn num_vars(&self) -> usize {
        self.kinds.len()
    }

    pub fn num_rows(&self) -> usize {
        self.b.dim()
    }

    pub fn strict_set(&self) -> Vec<usize> {
        self.indices(|k| k == VarKind::Positive)
    }

    pub fn nonneg_set(&self) -> Vec<usize> {
        self.indices(VarKind::sign_constrained)
    }

    pub fn free_set(&self) -> Vec<usize> {
        self.indices(|k| k == VarKind::Free)
    }

    fn indices(&self, pred: impl Fn(VarKind) -> bool) -> Vec<usize> {
        (0..self.kinds.len())
            .filter(|&j| pred(self.kinds[j]))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FeasibilityCertificate {
    Solution(RatVec),
    Separator(RatVec),
}

impl FeasibilityCertificate {
    pub fn is_solution(&self) -> bool {
        matches!(self, FeasibilityCertificate::Solution(_))
    }

    pub fn solution(&self) -> Option<&RatVec> {
        match self {
            FeasibilityCertificate::Solution(x) => Some(x),
            FeasibilityCertificate::Separator(_) => None,
        }
    }

    pub fn separator(&self) -> Option<&RatVec> {
        match self {
            FeasibilityCertificate::Separator(w) => Some(w),
            FeasibilityCertificate::Solution(_) => None,
        }
    }

    /// Re-checks the certificate against `p` with exact arithmetic.
    pub fn verify(&self, p: &LpProblem) -> bool {
        match self {
            FeasibilityCertificate::Solution(x) => verify_solution(p, x),
            FeasibilityCertificate::Separator(w) => verify_separator(p, w),
        }
    }
}

fn verify_solution(p: &LpProblem, x: &RatVec) -> bool {
    if x.dim() != p.num_vars() {
        return false;
    }
    let signs_ok = p.kinds.iter().zip(x.iter()).all(|(k, v)| match k {
        VarKind::Free => true,
        VarKind::NonNeg => !v.is_negative(),
        VarKind::Positive => v.is_positive(),
    });
    signs_ok && p.a.mul_vec(x) == p.b
}

fn verify_separator(p: &LpProblem, w: &RatVec) -> bool {
    if w.dim() != p.num_rows() {
        return false;
    }
    let y = p.a.left_mul_vec(w);
    let beta = w.dot(&p.b);
    if beta.is_negative() {
        return false;
    }
    let mut strict_hit = beta.is_positive();
    for (k, v) in p.kinds.iter().zip(y.iter()) {
        match k {
            VarKind::Free if !v.is_zero() => return false,
            VarKind::NonNeg | VarKind::Positive if v.is_positive() => return false,
            VarKind::Positive if v.is_negative() => strict_hit = true,
            _ => {}
        }
    }
    strict_hit
}

/// Decides `p` and returns a verified certificate.
pub fn lp_feasible(p: &LpProblem) -> Result<FeasibilityCertificate, LpError> {
    let cert = match solve_primal(p)? {
        Some(x) => FeasibilityCertificate::Solution(x),
        None => FeasibilityCertificate::Separator(find_separator(p)?),
    };
    if !cert.verify(p) {
        return Err(LpError::Internal("certificate failed exact verification"));
    }
    Ok(cert)
}

/// The Stiemke system for `vectors`: `Σ λ_i v_i = 0` with every `λ_i > 0`.
pub fn stiemke_problem(vectors: &[RatVec]) -> Result<LpProblem, LpError> {
    let first = vectors.first().ok_or(LpError::EmptyInput)?;
    let n = first.dim();
    if let Some(v) = vectors.iter().find(|v| v.dim() != n) {
        return Err(LpError::DimensionMismatch(format!(
            "vector of dimension {} among vectors of dimension {n}",
            v.dim()
        )));
    }
    LpProblem::new(
        RatMat::from_columns(n, vectors),
        RatVec::zeros(n),
        vec![VarKind::Positive; vectors.len()],
    )
}

/// Exactly one of: positive `λ` with `Σ λ_i v_i = 0` (Solution), or `w` with
/// `w·v_i <= 0` for all `i` and `w·v_j < 0` for some `j` (Separator).
pub fn stiemke_alternative(vectors: &[RatVec]) -> Result<FeasibilityCertificate, LpError> {
    lp_feasible(&stiemke_problem(vectors)?)
}

/// Feasible point of `p`, or `None` when no point satisfies all constraints.
fn solve_primal(p: &LpProblem) -> Result<Option<RatVec>, LpError> {
    let m = p.num_rows();
    // Column layout: one column per sign-constrained variable, two per free
    // variable (x = x⁺ - x⁻), then for the lift: t, one slack per strict
    // variable, and the cap slack u.
    let mut col_of = Vec::with_capacity(p.num_vars());
    let mut ncols = 0;
    for k in &p.kinds {
        col_of.push(ncols);
        ncols += if k.sign_constrained() { 1 } else { 2 };
    }
    let base_cols = ncols;
    let strict = p.strict_set();
    let lifted = !strict.is_empty();
    let t_col = base_cols;
    if lifted {
        ncols += strict.len() + 2;
    }
    let extra_rows = if lifted { strict.len() + 1 } else { 0 };

    let mut rows = vec![vec![Rat::zero(); ncols]; m + extra_rows];
    let mut rhs = vec![Rat::zero(); m + extra_rows];
    for i in 0..m {
        for (j, k) in p.kinds.iter().enumerate() {
            let a = p.a.get(i, j);
            if a.is_zero() {
                continue;
            }
            rows[i][col_of[j]] = a.clone();
            if !k.sign_constrained() {
                rows[i][col_of[j] + 1] = -a.clone();
            }
        }
        rhs[i] = p.b[i].clone();
    }
    if lifted {
        for (s, &j) in strict.iter().enumerate() {
            let r = m + s;
            rows[r][col_of[j]] = Rat::one();
            rows[r][t_col] = -Rat::one();
            rows[r][t_col + 1 + s] = -Rat::one();
        }
        let r = m + strict.len();
        rows[r][t_col] = Rat::one();
        rows[r][ncols - 1] = Rat::one();
        rhs[r] = Rat::one();
    }
    let mut cost = vec![Rat::zero(); ncols];
    if lifted {
        cost[t_col] = -Rat::one();
    }

    let z = match solve_standard(rows, rhs, &cost)? {
        None => return Ok(None),
        Some(z) => z,
    };
    if lifted && !z[t_col].is_positive() {
        return Ok(None);
    }
    let x = p
        .kinds
        .iter()
        .enumerate()
        .map(|(j, k)| {
            let c = col_of[j];
            if k.sign_constrained() {
                z[c].clone()
            } else {
                &z[c] - &z[c + 1]
            }
        })
        .collect();
    Ok(Some(x))
}

/// Solves the alternative system, normalised so the certifying sum equals one.
fn find_separator(p: &LpProblem) -> Result<RatVec, LpError> {
    let m = p.num_rows();
    let n = p.num_vars();
    let constrained = p.nonneg_set();
    // variables: w (m, free), σ (one per sign-constrained column), ρ
    let nvars = m + constrained.len() + 1;
    let rho = nvars - 1;
    let mut sep = RatMat::zeros(n + 2, nvars);
    for j in 0..n {
        for i in 0..m {
            sep.set(j, i, p.a.get(i, j).clone());
        }
    }
    for (s, &j) in constrained.iter().enumerate() {
        sep.set(j, m + s, Rat::one());
    }
    for i in 0..m {
        sep.set(n, i, p.b[i].clone());
    }
    sep.set(n, rho, -Rat::one());
    for i in 0..m {
        let mut coef = p.b[i].clone();
        for &j in &p.strict_set() {
            coef -= p.a.get(i, j);
        }
        sep.set(n + 1, i, coef);
    }
    let mut rhs = RatVec::zeros(n + 2);
    let mut entries = rhs.clone().into_inner();
    entries[n + 1] = Rat::one();
    rhs = RatVec::new(entries);
    let mut kinds = vec![VarKind::Free; m];
    kinds.extend(std::iter::repeat_n(VarKind::NonNeg, constrained.len() + 1));
    let alt = LpProblem::new(sep, rhs, kinds)?;
    let sol = solve_primal(&alt)?.ok_or(LpError::Internal("alternative system infeasible"))?;
    Ok(sol.iter().take(m).cloned().collect())
}

/// `min cᵀz` subject to `rows · z = rhs`, `z >= 0`. Returns an optimal
/// vertex, or `None` if infeasible. Unbounded problems are not expected
/// from callers in this module.
fn solve_standard(
    mut rows: Vec<Vec<Rat>>,
    mut rhs: Vec<Rat>,
    cost: &[Rat],
) -> Result<Option<Vec<Rat>>, LpError> {
    let m = rows.len();
    let n = cost.len();
    for i in 0..m {
        if rhs[i].is_negative() {
            for x in rows[i].iter_mut() {
                *x = -x.clone();
            }
            rhs[i] = -rhs[i].clone();
        }
    }

    // Phase I: one artificial per row, minimise their sum.
    let width = n + m + 1;
    let mut tab = Tableau {
        rows: Vec::with_capacity(m),
        cost: vec![Rat::zero(); width],
        basis: (n..n + m).collect(),
    };
    for (i, (row, b)) in rows.into_iter().zip(rhs).enumerate() {
        let mut full = row;
        full.resize(width, Rat::zero());
        full[n + i] = Rat::one();
        full[width - 1] = b;
        tab.rows.push(full);
    }
    for row in &tab.rows {
        for j in 0..n {
            tab.cost[j] -= &row[j];
        }
        tab.cost[width - 1] -= &row[width - 1];
    }
    if !tab.run(n + m) {
        return Err(LpError::Internal("phase one unbounded"));
    }
    if !tab.cost[width - 1].is_zero() {
        return Ok(None);
    }

    // Pivot remaining artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < tab.rows.len() {
        if tab.basis[i] >= n {
            match (0..n).find(|&j| !tab.rows[i][j].is_zero()) {
                Some(j) => tab.pivot(i, j),
                None => {
                    tab.rows.remove(i);
                    tab.basis.remove(i);
                    continue;
                }
            }
        }
        i += 1;
    }

    // Phase II on the original columns.
    for row in tab.rows.iter_mut() {
        let b = row[width - 1].clone();
        row.truncate(n);
        row.push(b);
    }
    tab.cost = cost.to_vec();
    tab.cost.push(Rat::zero());
    for (i, &bi) in tab.basis.iter().enumerate() {
        let c = tab.cost[bi].clone();
        if c.is_zero() {
            continue;
        }
        for (x, r) in tab.cost.iter_mut().zip(&tab.rows[i]) {
            *x -= &c * r;
        }
    }
    if !tab.run(n) {
        return Err(LpError::Internal("phase two unbounded"));
    }
    let mut z = vec![Rat::zero(); n];
    for (i, &bi) in tab.basis.iter().enumerate() {
        z[bi] = tab.rows[i][n].clone();
    }
    Ok(Some(z))
}

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<Rat>>,
    /// Reduced costs; the last entry is minus the objective value.
    cost: Vec<Rat>,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = Rat::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let prow = self.rows[r].clone();
        let eliminate = |row: &mut Vec<Rat>| {
            let f = row[c].clone();
            if f.is_zero() {
                return;
            }
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.basis[r] = c;
    }

    /// Bland's rule iterations over columns `< allowed`. Returns false when unbounded.
    fn run(&mut self, allowed: usize) -> bool {
        let rhs = self.cost.len() - 1;
        loop {
            let Some(enter) = (0..allowed).find(|&j| self.cost[j].is_negative()) else {
                return true;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, enter),
            }
        }
    }
}
