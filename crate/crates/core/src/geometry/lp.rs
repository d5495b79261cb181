//! Dense two-phase simplex over an exact field, with Bland's rule.
//!
//! Solves `maximize c·x subject to A x <= b` with `x` free. Problem sizes in
//! this crate are tiny (a handful of variables, a few dozen rows), so the
//! tableau is dense and reduced costs are recomputed at every pivot.

use crate::geometry::affine::Halfspace;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome<S> {
    Optimal { value: S, point: Vec<S> },
    Unbounded,
    Infeasible,
}

impl<S> LpOutcome<S> {
    pub fn value(&self) -> Option<&S> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

struct Tableau<S> {
    rows: Vec<Vec<S>>,
    rhs: Vec<S>,
    basis: Vec<usize>,
    columns: usize,
}

impl<S: Scalar> Tableau<S> {
    fn pivot(&mut self, row: usize, col: usize) {
        let lead = self.rows[row][col].clone();
        for v in self.rows[row].iter_mut() {
            *v = v.clone() / lead.clone();
        }
        self.rhs[row] = self.rhs[row].clone() / lead;
        for i in 0..self.rows.len() {
            if i == row || self.rows[i][col].is_zero() {
                continue;
            }
            let factor = self.rows[i][col].clone();
            for j in 0..self.columns {
                if self.rows[row][j].is_zero() {
                    continue;
                }
                let delta = factor.clone() * self.rows[row][j].clone();
                self.rows[i][j] = self.rows[i][j].clone() - delta;
            }
            let delta = factor * self.rhs[row].clone();
            self.rhs[i] = self.rhs[i].clone() - delta;
        }
        self.basis[row] = col;
    }

    /// Maximizes `cost · y` over the current basis. Columns with
    /// `allowed[j] == false` never enter. Returns `false` if unbounded.
    fn optimize(&mut self, cost: &[S], allowed: &[bool]) -> bool {
        loop {
            let entering = (0..self.columns).find(|&j| {
                if !allowed[j] || self.basis.contains(&j) {
                    return false;
                }
                let mut reduced = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    if !self.rows[i][j].is_zero() {
                        reduced = reduced - cost[b].clone() * self.rows[i][j].clone();
                    }
                }
                reduced.is_positive()
            });
            let Some(col) = entering else {
                return true;
            };
            let mut best: Option<(usize, S)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs[i].clone() / a.clone();
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return false,
            }
        }
    }

    fn objective(&self, cost: &[S]) -> S {
        self.basis
            .iter()
            .zip(&self.rhs)
            .fold(S::zero(), |acc, (&b, r)| acc + cost[b].clone() * r.clone())
    }
}

/// Maximizes `objective · x` over `{x : h.normal · x <= h.bound for all h}`.
pub fn maximize<S: Scalar>(objective: &[S], constraints: &[Halfspace<S>]) -> LpOutcome<S> {
    let n = objective.len();
    let m = constraints.len();
    let artificial_rows: Vec<usize> = (0..m)
        .filter(|&i| constraints[i].bound.is_negative())
        .collect();
    let k = artificial_rows.len();
    // columns: x+ (n), x- (n), slack (m), artificial (k)
    let columns = 2 * n + m + k;
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_artificial = 2 * n + m;
    for (i, h) in constraints.iter().enumerate() {
        let flip = h.bound.is_negative();
        let sgn = if flip { -S::one() } else { S::one() };
        let mut row = vec![S::zero(); columns];
        for j in 0..n {
            row[j] = sgn.clone() * h.normal[j].clone();
            row[n + j] = -(sgn.clone() * h.normal[j].clone());
        }
        row[2 * n + i] = sgn.clone();
        if flip {
            row[next_artificial] = S::one();
            basis.push(next_artificial);
            next_artificial += 1;
        } else {
            basis.push(2 * n + i);
        }
        rows.push(row);
        rhs.push(sgn * h.bound.clone());
    }
    let mut t = Tableau {
        rows,
        rhs,
        basis,
        columns,
    };

    if k > 0 {
        let mut phase1 = vec![S::zero(); columns];
        for c in phase1.iter_mut().skip(2 * n + m) {
            *c = -S::one();
        }
        let all = vec![true; columns];
        t.optimize(&phase1, &all);
        if t.objective(&phase1).is_negative() {
            return LpOutcome::Infeasible;
        }
        // drive zero-valued artificials out of the basis
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= 2 * n + m {
                match (0..2 * n + m).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.rhs.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut cost = vec![S::zero(); columns];
    for j in 0..n {
        cost[j] = objective[j].clone();
        cost[n + j] = -objective[j].clone();
    }
    let allowed: Vec<bool> = (0..columns).map(|j| j < 2 * n + m).collect();
    if !t.optimize(&cost, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut point = vec![S::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            point[b] = point[b].clone() + t.rhs[i].clone();
        } else if b < 2 * n {
            point[b - n] = point[b - n].clone() - t.rhs[i].clone();
        }
    }
    LpOutcome::Optimal {
        value: t.objective(&cost),
        point,
    }
}

pub fn minimize<S: Scalar>(objective: &[S], constraints: &[Halfspace<S>]) -> LpOutcome<S> {
    let negated: Vec<S> = objective.iter().map(|c| -c.clone()).collect();
    match maximize(&negated, constraints) {
        LpOutcome::Optimal { value, point } => LpOutcome::Optimal {
            value: -value,
            point,
        },
        other => other,
    }
}
