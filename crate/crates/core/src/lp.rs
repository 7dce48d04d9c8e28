//! Exact rational linear programming: dense two-phase simplex with Bland's rule.

use crate::error::{Error, Result};
use crate::rational::Rational;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub sense: Sense,
    pub rhs: Rational,
}

/// Maximize `objective · x` subject to the constraints and `x >= 0`.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { value: Rational, x: Vec<Rational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn optimal(self) -> Result<(Rational, Vec<Rational>)> {
        match self {
            LpOutcome::Optimal { value, x } => Ok((value, x)),
            LpOutcome::Infeasible => Err(Error::Lp("infeasible".into())),
            LpOutcome::Unbounded => Err(Error::Lp("unbounded".into())),
        }
    }
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram { num_vars, objective: vec![Rational::zero(); num_vars], constraints: Vec::new() }
    }

    pub fn add(&mut self, coeffs: Vec<(usize, Rational)>, sense: Sense, rhs: Rational) {
        self.constraints.push(Constraint { coeffs, sense, rhs });
    }

    /// Exact substitution check of a candidate point.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars || x.iter().any(|v| v.is_negative()) {
            return false;
        }
        self.constraints.iter().all(|c| {
            let lhs: Rational = c.coeffs.iter().map(|(j, a)| a * x[*j]).sum();
            match c.sense {
                Sense::Le => lhs <= c.rhs,
                Sense::Ge => lhs >= c.rhs,
                Sense::Eq => lhs == c.rhs,
            }
        })
    }

    pub fn value_at(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        if self.objective.len() != self.num_vars {
            return Err(Error::Lp("objective length differs from variable count".into()));
        }
        for c in &self.constraints {
            if c.coeffs.iter().any(|(j, _)| *j >= self.num_vars) {
                return Err(Error::Lp("constraint refers to an unknown variable".into()));
            }
        }
        Ok(Tableau::build(self).run(self))
    }
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Columns at or beyond this index are artificial.
    first_artificial: usize,
    cols: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Tableau {
        let n = lp.num_vars;
        let m = lp.constraints.len();
        // normalise to non-negative right-hand sides
        let mut norm: Vec<(Vec<Rational>, Sense, Rational)> = Vec::with_capacity(m);
        for c in &lp.constraints {
            let mut row = vec![Rational::zero(); n];
            for (j, a) in &c.coeffs {
                row[*j] += a;
            }
            let (mut sense, mut rhs) = (c.sense, c.rhs);
            if rhs.is_negative() {
                for v in row.iter_mut() {
                    *v = -*v;
                }
                rhs = -rhs;
                sense = match sense {
                    Sense::Le => Sense::Ge,
                    Sense::Ge => Sense::Le,
                    Sense::Eq => Sense::Eq,
                };
            }
            norm.push((row, sense, rhs));
        }
        let slacks = norm.iter().filter(|(_, s, _)| *s != Sense::Eq).count();
        let artificials = norm.iter().filter(|(_, s, _)| *s != Sense::Le).count();
        let first_artificial = n + slacks;
        let cols = first_artificial + artificials;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let (mut s_ix, mut a_ix) = (n, first_artificial);
        for (coeffs, sense, b) in norm {
            let mut row = coeffs;
            row.resize(cols, Rational::zero());
            match sense {
                Sense::Le => {
                    row[s_ix] = Rational::one();
                    basis.push(s_ix);
                    s_ix += 1;
                }
                Sense::Ge => {
                    row[s_ix] = -Rational::one();
                    s_ix += 1;
                    row[a_ix] = Rational::one();
                    basis.push(a_ix);
                    a_ix += 1;
                }
                Sense::Eq => {
                    row[a_ix] = Rational::one();
                    basis.push(a_ix);
                    a_ix += 1;
                }
            }
            rows.push(row);
            rhs.push(b);
        }
        Tableau { rows, rhs, basis, first_artificial, cols }
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c];
        if !p.is_one() {
            let inv = p.recip();
            for v in self.rows[r].iter_mut() {
                if !v.is_zero() {
                    *v *= inv;
                }
            }
            self.rhs[r] *= inv;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r];
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let factor = self.rows[i][c];
            if factor.is_zero() {
                continue;
            }
            for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= factor * pv;
                }
            }
            self.rhs[i] -= factor * prhs;
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost` over the current basis using Bland's rule on columns
    /// below `limit`. Returns false if unbounded.
    fn optimize(&mut self, cost: &[Rational], limit: usize) -> bool {
        loop {
            // reduced cost d_j = c_j - c_B B^-1 A_j
            let mut entering = None;
            for j in 0..limit {
                if self.basis.contains(&j) {
                    continue;
                }
                let mut d = cost[j];
                for (i, &b) in self.basis.iter().enumerate() {
                    let a = self.rows[i][j];
                    if !a.is_zero() && !cost[b].is_zero() {
                        d -= cost[b] * a;
                    }
                }
                if d.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else { return true };
            let mut leave: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][c];
                if a.is_positive() {
                    let ratio = self.rhs[i] / a;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, c),
                None => return false,
            }
        }
    }

    fn run(mut self, lp: &LinearProgram) -> LpOutcome {
        let n = lp.num_vars;
        if self.first_artificial < self.cols {
            let mut phase1 = vec![Rational::zero(); self.cols];
            for v in phase1.iter_mut().skip(self.first_artificial) {
                *v = -Rational::one();
            }
            self.optimize(&phase1, self.cols);
            let infeasibility: Rational = self
                .basis
                .iter()
                .zip(&self.rhs)
                .filter(|(b, _)| **b >= self.first_artificial)
                .map(|(_, v)| *v)
                .sum();
            if infeasibility.is_positive() {
                return LpOutcome::Infeasible;
            }
            // drive remaining artificials out of the basis, dropping redundant rows
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.first_artificial {
                    match (0..self.first_artificial).find(|&j| !self.rows[i][j].is_zero()) {
                        Some(j) => {
                            self.pivot(i, j);
                            i += 1;
                        }
                        None => {
                            self.rows.remove(i);
                            self.rhs.remove(i);
                            self.basis.remove(i);
                        }
                    }
                } else {
                    i += 1;
                }
            }
        }
        let mut cost = vec![Rational::zero(); self.cols];
        cost[..n].copy_from_slice(&lp.objective);
        if !self.optimize(&cost, self.first_artificial) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.rhs[i];
            }
        }
        let value = lp.value_at(&x);
        LpOutcome::Optimal { value, x }
    }
}
