//! Exact two-phase simplex over rationals with Bland's rule. Sized for the
//! small programs of the pipeline (a few hundred columns at most).

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ratio::Q;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cmp {
    Le,
    Eq,
    Ge,
}

/// One constraint: sparse coefficients, relation, right-hand side.
pub type Row = (Vec<(usize, Q)>, Cmp, Q);

#[derive(Debug, Clone, Default)]
pub struct Lp {
    pub vars: usize,
    pub rows: Vec<Row>,
    /// Minimized; empty means any feasible point.
    pub objective: Vec<(usize, Q)>,
}

impl Lp {
    pub fn new(vars: usize) -> Self {
        Lp {
            vars,
            ..Default::default()
        }
    }

    pub fn row(&mut self, coeffs: Vec<(usize, Q)>, cmp: Cmp, rhs: Q) {
        self.rows.push((coeffs, cmp, rhs));
    }

    /// Does `x` satisfy every row exactly?
    pub fn satisfied_by(&self, x: &[Q]) -> bool {
        x.len() == self.vars
            && x.iter().all(|v| !v.is_negative())
            && self.rows.iter().all(|(c, cmp, b)| {
                let lhs: Q = c.iter().map(|(j, a)| a * &x[*j]).sum();
                match cmp {
                    Cmp::Le => lhs <= *b,
                    Cmp::Eq => lhs == *b,
                    Cmp::Ge => lhs >= *b,
                }
            })
    }
}

struct Tableau {
    // m rows of width cols + 1 (last entry is the right-hand side)
    a: Vec<Vec<Q>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.a[r][c].clone();
        for v in self.a[r].iter_mut() {
            *v /= &p;
        }
        let pivot_row = self.a[r].clone();
        for (k, row) in self.a.iter_mut().enumerate() {
            if k == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Minimize `cost` over the current basis; columns with `allowed[j] ==
    /// false` never enter.
    fn optimize(&mut self, cost: &[Q], allowed: &[bool]) -> Result<()> {
        loop {
            // reduced cost c_j - c_B B^-1 A_j
            let mut entering = None;
            for j in 0..self.cols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j].clone();
                for (r, &b) in self.basis.iter().enumerate() {
                    if !cost[b].is_zero() && !self.a[r][j].is_zero() {
                        rc -= &cost[b] * &self.a[r][j];
                    }
                }
                if rc.is_negative() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return Ok(());
            };
            let mut best: Option<(usize, Q)> = None;
            for r in 0..self.a.len() {
                let v = &self.a[r][c];
                if v.is_positive() {
                    let ratio = &self.a[r][self.cols] / v;
                    let better = match &best {
                        None => true,
                        Some((br, bv)) => ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br]),
                    };
                    if better {
                        best = Some((r, ratio));
                    }
                }
            }
            let Some((r, _)) = best else {
                return Err(Error::invariant("linear program is unbounded"));
            };
            self.pivot(r, c);
        }
    }
}

/// Basic optimal solution, or [`Error::LpInfeasible`].
pub fn solve(lp: &Lp) -> Result<Vec<Q>> {
    let n = lp.vars;
    let m = lp.rows.len();
    if m == 0 {
        return Ok(vec![Q::zero(); n]);
    }
    // column layout: originals, one slack/surplus per inequality, artificials
    let ineq = lp.rows.iter().filter(|r| r.1 != Cmp::Eq).count();
    let cols = n + ineq + m;
    let mut a = vec![vec![Q::zero(); cols + 1]; m];
    let mut basis = vec![0; m];
    let mut slack = n;
    for (r, (coeffs, cmp, rhs)) in lp.rows.iter().enumerate() {
        let flip = rhs.is_negative();
        let sign = if flip { -Q::one() } else { Q::one() };
        for (j, v) in coeffs {
            a[r][*j] += &sign * v;
        }
        a[r][cols] = &sign * rhs;
        match cmp {
            Cmp::Le => {
                a[r][slack] = sign.clone();
                slack += 1;
            }
            Cmp::Ge => {
                a[r][slack] = -sign.clone();
                slack += 1;
            }
            Cmp::Eq => {}
        }
        a[r][n + ineq + r] = Q::one();
        basis[r] = n + ineq + r;
    }
    let mut t = Tableau { a, basis, cols };
    let mut phase1 = vec![Q::zero(); cols];
    for v in phase1.iter_mut().skip(n + ineq) {
        *v = Q::one();
    }
    t.optimize(&phase1, &vec![true; cols])?;
    let infeas: Q = t
        .basis
        .iter()
        .enumerate()
        .filter(|&(_, &b)| b >= n + ineq)
        .map(|(r, _)| t.a[r][cols].clone())
        .sum();
    if infeas.is_positive() {
        return Err(Error::LpInfeasible);
    }
    // drive remaining artificials out of the basis, dropping redundant rows
    let mut r = 0;
    while r < t.a.len() {
        if t.basis[r] >= n + ineq {
            if let Some(c) = (0..n + ineq).find(|&c| !t.a[r][c].is_zero()) {
                t.pivot(r, c);
                r += 1;
            } else {
                t.a.remove(r);
                t.basis.remove(r);
            }
        } else {
            r += 1;
        }
    }
    let mut cost = vec![Q::zero(); cols];
    for (j, v) in &lp.objective {
        cost[*j] += v;
    }
    let allowed: Vec<bool> = (0..cols).map(|j| j < n + ineq).collect();
    t.optimize(&cost, &allowed)?;
    let mut x = vec![Q::zero(); n];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.a[r][cols].clone();
        }
    }
    if !lp.satisfied_by(&x) {
        return Err(Error::invariant("simplex returned a point violating its constraints"));
    }
    Ok(x)
}
