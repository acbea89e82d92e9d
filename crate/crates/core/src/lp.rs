//! Exact rational linear programming.
//!
//! A dense bounded-variable primal simplex over [`Q`] with a two-phase start
//! and Bland's smallest-index rule, so it terminates on degenerate problems.
//! Problems here are tiny (a few equality rows, a few dozen columns).

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::Q;

const MAX_ITERATIONS: usize = 50_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Q, x: Vec<Q> },
    Infeasible,
    Unbounded,
}

/// `maximize c.x  subject to  A x = b,  lower <= x <= upper`.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    lower: Vec<Option<Q>>,
    upper: Vec<Option<Q>>,
    rows: Vec<(Vec<Q>, Q)>,
    objective: Vec<Q>,
}

impl LinearProgram {
    /// `n` variables, all initially nonnegative with no upper bound.
    pub fn new(n: usize) -> Self {
        LinearProgram {
            lower: vec![Some(Q::zero()); n],
            upper: vec![None; n],
            rows: Vec::new(),
            objective: vec![Q::zero(); n],
        }
    }

    pub fn num_vars(&self) -> usize {
        self.lower.len()
    }

    pub fn add_var(&mut self, lower: Option<Q>, upper: Option<Q>) -> usize {
        self.lower.push(lower);
        self.upper.push(upper);
        self.objective.push(Q::zero());
        for (row, _) in &mut self.rows {
            row.push(Q::zero());
        }
        self.lower.len() - 1
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Q>, upper: Option<Q>) {
        self.lower[var] = lower;
        self.upper[var] = upper;
    }

    pub fn add_equality(&mut self, coeffs: Vec<Q>, rhs: Q) {
        assert_eq!(coeffs.len(), self.num_vars());
        self.rows.push((coeffs, rhs));
    }

    pub fn set_objective(&mut self, coeffs: Vec<Q>) {
        assert_eq!(coeffs.len(), self.num_vars());
        self.objective = coeffs;
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        for (lo, hi) in self.lower.iter().zip(&self.upper) {
            if let (Some(lo), Some(hi)) = (lo, hi) {
                if lo > hi {
                    return Ok(LpOutcome::Infeasible);
                }
            }
        }

        // Internal columns are nonnegative with an optional upper bound;
        // original x_j = offset_j + sum(sign * y).
        let mut cols: Vec<(usize, i8)> = Vec::new();
        let mut col_upper: Vec<Option<Q>> = Vec::new();
        let mut offset = vec![Q::zero(); self.num_vars()];
        for j in 0..self.num_vars() {
            match (&self.lower[j], &self.upper[j]) {
                (Some(lo), hi) => {
                    offset[j] = lo.clone();
                    cols.push((j, 1));
                    col_upper.push(hi.as_ref().map(|h| h - lo));
                }
                (None, Some(hi)) => {
                    offset[j] = hi.clone();
                    cols.push((j, -1));
                    col_upper.push(None);
                }
                (None, None) => {
                    cols.push((j, 1));
                    col_upper.push(None);
                    cols.push((j, -1));
                    col_upper.push(None);
                }
            }
        }

        let m = self.rows.len();
        let n = cols.len();
        let mut a = vec![vec![Q::zero(); n]; m];
        let mut b = vec![Q::zero(); m];
        for (i, (row, rhs)) in self.rows.iter().enumerate() {
            let shift: Q = row.iter().zip(&offset).map(|(r, o)| r * o).sum();
            b[i] = rhs - shift;
            for (k, &(j, sign)) in cols.iter().enumerate() {
                a[i][k] = if sign > 0 { row[j].clone() } else { -&row[j] };
            }
        }
        let cost: Vec<Q> = cols
            .iter()
            .map(|&(j, sign)| {
                if sign > 0 {
                    self.objective[j].clone()
                } else {
                    -&self.objective[j]
                }
            })
            .collect();

        let mut tableau = Tableau::new(a, b, col_upper);
        let phase_one: Vec<Q> = (0..n + m)
            .map(|k| {
                if k < n {
                    Q::zero()
                } else {
                    Q::from_integer((-1).into())
                }
            })
            .collect();
        match tableau.optimize(&phase_one)? {
            Phase::Optimal => {}
            Phase::Unbounded => unreachable!("phase one objective is bounded"),
        }
        let infeasibility: Q = (0..m)
            .filter(|&i| tableau.basis[i] >= n)
            .map(|i| tableau.values[i].clone())
            .sum();
        if infeasibility.is_positive() {
            return Ok(LpOutcome::Infeasible);
        }
        for k in n..n + m {
            tableau.upper[k] = Some(Q::zero());
        }

        let mut phase_two = cost;
        phase_two.extend(std::iter::repeat_n(Q::zero(), m));
        if let Phase::Unbounded = tableau.optimize(&phase_two)? {
            return Ok(LpOutcome::Unbounded);
        }

        let internal = tableau.solution();
        let mut x = offset;
        for (k, &(j, sign)) in cols.iter().enumerate() {
            if sign > 0 {
                x[j] += &internal[k];
            } else {
                x[j] -= &internal[k];
            }
        }
        let value = x.iter().zip(&self.objective).map(|(x, c)| x * c).sum();
        Ok(LpOutcome::Optimal { value, x })
    }
}

enum Phase {
    Optimal,
    Unbounded,
}

struct Tableau {
    /// `B^{-1} [A | I]`
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    values: Vec<Q>,
    upper: Vec<Option<Q>>,
    at_upper: Vec<bool>,
    is_basic: Vec<bool>,
}

impl Tableau {
    fn new(a: Vec<Vec<Q>>, b: Vec<Q>, mut upper: Vec<Option<Q>>) -> Self {
        let m = a.len();
        let n = upper.len();
        let mut rows = Vec::with_capacity(m);
        let mut values = Vec::with_capacity(m);
        for (i, (mut row, rhs)) in a.into_iter().zip(b).enumerate() {
            let flip = rhs.is_negative();
            if flip {
                row.iter_mut().for_each(|v| *v = -&*v);
            }
            row.extend((0..m).map(|k| {
                if k == i {
                    Q::from_integer(1.into())
                } else {
                    Q::zero()
                }
            }));
            rows.push(row);
            values.push(if flip { -rhs } else { rhs });
        }
        upper.extend(std::iter::repeat_n(None, m));
        let mut is_basic = vec![false; n + m];
        is_basic[n..].iter_mut().for_each(|b| *b = true);
        Tableau {
            rows,
            basis: (n..n + m).collect(),
            values,
            at_upper: vec![false; n + m],
            upper,
            is_basic,
        }
    }

    fn width(&self) -> usize {
        self.upper.len()
    }

    fn optimize(&mut self, cost: &[Q]) -> Result<Phase> {
        for _ in 0..MAX_ITERATIONS {
            let Some((enter, increasing)) = self.entering(cost) else {
                return Ok(Phase::Optimal);
            };
            if !self.step(enter, increasing) {
                return Ok(Phase::Unbounded);
            }
        }
        Err(Error::IterationLimit)
    }

    fn entering(&self, cost: &[Q]) -> Option<(usize, bool)> {
        for j in 0..self.width() {
            if self.is_basic[j] || self.upper[j].as_ref().is_some_and(|u| u.is_zero()) {
                continue;
            }
            let mut reduced = cost[j].clone();
            for (i, row) in self.rows.iter().enumerate() {
                let cb = &cost[self.basis[i]];
                if !cb.is_zero() && !row[j].is_zero() {
                    reduced -= cb * &row[j];
                }
            }
            if !self.at_upper[j] && reduced.is_positive() {
                return Some((j, true));
            }
            if self.at_upper[j] && reduced.is_negative() {
                return Some((j, false));
            }
        }
        None
    }

    /// Moves `enter` away from its bound; returns false if the move is unbounded.
    fn step(&mut self, enter: usize, increasing: bool) -> bool {
        let dir = if increasing {
            Q::from_integer(1.into())
        } else {
            Q::from_integer((-1).into())
        };
        // Each basic value changes by -dir * T[i][enter] per unit step.
        let mut best: Option<(Q, Option<usize>)> = self.upper[enter].clone().map(|u| (u, None));
        for i in 0..self.rows.len() {
            let a = &self.rows[i][enter];
            if a.is_zero() {
                continue;
            }
            let rate = -(&dir * a);
            let limit = if rate.is_negative() {
                Some(&self.values[i] / -&rate)
            } else {
                self.upper[self.basis[i]]
                    .as_ref()
                    .map(|u| (u - &self.values[i]) / &rate)
            };
            let Some(limit) = limit else { continue };
            let better = match &best {
                None => true,
                Some((theta, row)) => {
                    limit < *theta
                        || (limit == *theta && row.is_some_and(|r| self.basis[i] < self.basis[r]))
                }
            };
            if better {
                best = Some((limit, Some(i)));
            }
        }
        let Some((theta, leaving)) = best else {
            return false;
        };

        for i in 0..self.rows.len() {
            let a = &self.rows[i][enter];
            if !a.is_zero() {
                let delta = &dir * a * &theta;
                self.values[i] -= delta;
            }
        }

        match leaving {
            None => {
                self.at_upper[enter] = !self.at_upper[enter];
            }
            Some(r) => {
                let leave = self.basis[r];
                let hit_upper = self.upper[leave]
                    .as_ref()
                    .is_some_and(|u| *u == self.values[r] && !u.is_zero());
                self.at_upper[leave] = hit_upper;
                self.is_basic[leave] = false;
                let entering_value = if increasing {
                    theta
                } else {
                    self.upper[enter]
                        .clone()
                        .expect("decreasing from a finite upper bound")
                        - theta
                };
                self.pivot(r, enter);
                self.basis[r] = enter;
                self.is_basic[enter] = true;
                self.at_upper[enter] = false;
                self.values[r] = entering_value;
            }
        }
        true
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        self.rows[r].iter_mut().for_each(|v| *v /= &p);
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (v, pv) in row.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &factor * pv;
                }
            }
        }
    }

    fn solution(&self) -> Vec<Q> {
        let mut x: Vec<Q> = (0..self.width())
            .map(|j| {
                if self.at_upper[j] {
                    self.upper[j].clone().unwrap_or_else(Q::zero)
                } else {
                    Q::zero()
                }
            })
            .collect();
        for (i, &j) in self.basis.iter().enumerate() {
            x[j] = self.values[i].clone();
        }
        x
    }
}
