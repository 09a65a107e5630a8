//! Dense-tableau simplex over exact rationals.
//!
//! Solves `maximize c.x subject to A.x <= b, x >= 0` with a two-phase
//! method and Bland's rule for both the entering and leaving choice, so the
//! returned vertex is deterministic. Right-hand sides may be negative; such
//! rows get an artificial variable in phase one.

use num_traits::{Signed, Zero};

use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LpError {
    #[error("objective has {objective} coefficients but constraint row {row} has {found}")]
    Dimension {
        objective: usize,
        row: usize,
        found: usize,
    },
    #[error("{rows} constraint rows but {bounds} bounds")]
    BoundCount { rows: usize, bounds: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearProgram {
    objective: Vec<Rational>,
    constraints: Vec<Vec<Rational>>,
    bounds: Vec<Rational>,
}

impl LinearProgram {
    pub fn new(
        objective: Vec<Rational>,
        constraints: Vec<Vec<Rational>>,
        bounds: Vec<Rational>,
    ) -> Result<Self, LpError> {
        if constraints.len() != bounds.len() {
            return Err(LpError::BoundCount {
                rows: constraints.len(),
                bounds: bounds.len(),
            });
        }
        if let Some((row, r)) = constraints
            .iter()
            .enumerate()
            .find(|(_, r)| r.len() != objective.len())
        {
            return Err(LpError::Dimension {
                objective: objective.len(),
                row,
                found: r.len(),
            });
        }
        Ok(Self {
            objective,
            constraints,
            bounds,
        })
    }

    pub fn variables(&self) -> usize {
        self.objective.len()
    }

    pub fn rows(&self) -> usize {
        self.constraints.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Vec<Rational>] {
        &self.constraints
    }

    pub fn bounds(&self) -> &[Rational] {
        &self.bounds
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        dot(&self.objective, x)
    }

    /// Checks `x >= 0` and `A.x <= b` by substitution.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        x.len() == self.variables()
            && x.iter().all(|v| !v.is_negative())
            && self
                .constraints
                .iter()
                .zip(&self.bounds)
                .all(|(row, b)| dot(row, x) <= *b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpSolution {
    pub value: Rational,
    pub primal: Vec<Rational>,
    /// One multiplier per constraint row.
    pub dual: Vec<Rational>,
}

impl LpSolution {
    /// Verifies primal feasibility, dual feasibility (`y >= 0`, `A^T y >= c`)
    /// and equality of both objective values.
    pub fn certifies(&self, lp: &LinearProgram) -> bool {
        if !lp.is_feasible(&self.primal) || lp.objective_value(&self.primal) != self.value {
            return false;
        }
        if self.dual.len() != lp.rows() || self.dual.iter().any(|y| y.is_negative()) {
            return false;
        }
        let dual_feasible = (0..lp.variables()).all(|j| {
            let col = lp
                .constraints
                .iter()
                .zip(&self.dual)
                .fold(Rational::zero(), |acc, (row, y)| acc + &row[j] * y);
            col >= lp.objective[j]
        });
        dual_feasible && dot(&lp.bounds, &self.dual) == self.value
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal(LpSolution),
    Unbounded,
    Infeasible,
}

impl LpOutcome {
    pub fn optimal(self) -> Option<LpSolution> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

struct Tableau {
    // rows of [A' | b'], one per constraint
    rows: Vec<Vec<Rational>>,
    // reduced costs z_j - c_j, last entry holds the objective value
    cost: Vec<Rational>,
    basis: Vec<usize>,
    // columns allowed to enter the basis
    width: usize,
}

enum Pivoting {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn rhs(&self, i: usize) -> &Rational {
        self.rows[i].last().expect("tableau row has rhs")
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.rows[row][col].clone();
        if !p.is_zero() {
            for v in self.rows[row].iter_mut() {
                *v /= &p;
            }
        }
        let pivot_row = self.rows[row].clone();
        for (i, r) in self.rows.iter_mut().enumerate() {
            if i == row || r[col].is_zero() {
                continue;
            }
            let f = r[col].clone();
            for (v, pv) in r.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        if !self.cost[col].is_zero() {
            let f = self.cost[col].clone();
            for (v, pv) in self.cost.iter_mut().zip(&pivot_row) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
        }
        self.basis[row] = col;
    }

    /// Sets the cost row for objective `c` (maximize) over the current basis.
    fn price(&mut self, c: &[Rational]) {
        let total = self.cost.len();
        let mut cost: Vec<Rational> = (0..total)
            .map(|j| if j < c.len() { -c[j].clone() } else { Rational::zero() })
            .collect();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = c.get(b).cloned().unwrap_or_else(Rational::zero);
            if cb.is_zero() {
                continue;
            }
            for (v, a) in cost.iter_mut().zip(&self.rows[i]) {
                *v += &cb * a;
            }
        }
        self.cost = cost;
    }

    fn iterate(&mut self) -> Pivoting {
        loop {
            // Bland: smallest improving column
            let Some(col) = (0..self.width).find(|&j| self.cost[j].is_negative()) else {
                return Pivoting::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = self.rhs(i) / a;
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
                None => return Pivoting::Unbounded,
            }
        }
    }
}

/// Maximizes `lp`, returning an exact optimal vertex with its dual
/// multipliers, or reporting unboundedness or infeasibility.
pub fn solve_max(lp: &LinearProgram) -> LpOutcome {
    let n = lp.variables();
    let m = lp.rows();
    let flipped: Vec<bool> = lp.bounds.iter().map(|b| b.is_negative()).collect();
    let artificials: Vec<usize> = (0..m).filter(|&i| flipped[i]).collect();
    let total = n + m + artificials.len();

    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut next_art = n + m;
    for i in 0..m {
        let sign = if flipped[i] { -Rational::from_integer(1.into()) } else { Rational::from_integer(1.into()) };
        let mut row = vec![Rational::zero(); total + 1];
        for (cell, a) in row.iter_mut().zip(&lp.constraints[i]) {
            *cell = a * &sign;
        }
        row[n + i] = sign.clone();
        row[total] = &lp.bounds[i] * &sign;
        if flipped[i] {
            row[next_art] = Rational::from_integer(1.into());
            basis.push(next_art);
            next_art += 1;
        } else {
            basis.push(n + i);
        }
        rows.push(row);
    }

    let mut tab = Tableau {
        rows,
        cost: vec![Rational::zero(); total + 1],
        basis,
        width: total,
    };

    if !artificials.is_empty() {
        let mut phase_one = vec![Rational::zero(); total];
        for cost in &mut phase_one[n + m..] {
            *cost = -Rational::from_integer(1.into());
        }
        tab.price(&phase_one);
        // phase one is bounded above by zero
        let _ = tab.iterate();
        if tab.cost[total].is_negative() {
            return LpOutcome::Infeasible;
        }
        // Drive zero-level artificials out. Slack columns keep [A | I] at
        // full row rank, so a nonzero entry always exists.
        for i in 0..m {
            if tab.basis[i] >= n + m {
                if let Some(col) = (0..n + m).find(|&j| !tab.rows[i][j].is_zero()) {
                    tab.pivot(i, col);
                }
            }
        }
        tab.width = n + m;
    }

    tab.price(&lp.objective);
    if let Pivoting::Unbounded = tab.iterate() {
        return LpOutcome::Unbounded;
    }

    let mut primal = vec![Rational::zero(); n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < n {
            primal[b] = tab.rhs(i).clone();
        }
    }
    let dual = (0..m).map(|i| tab.cost[n + i].clone()).collect();
    LpOutcome::Optimal(LpSolution {
        value: tab.cost[total].clone(),
        primal,
        dual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn lp(c: &[Rational], a: &[&[Rational]], b: &[Rational]) -> LinearProgram {
        LinearProgram::new(c.to_vec(), a.iter().map(|r| r.to_vec()).collect(), b.to_vec()).unwrap()
    }

    #[test]
    fn single_variable_upper_bound() {
        let p = lp(&[int(1)], &[&[int(1)]], &[int(1)]);
        let s = solve_max(&p).optimal().unwrap();
        assert_eq!(s.value, int(1));
        assert_eq!(s.primal, vec![int(1)]);
        assert!(s.certifies(&p));
    }

    #[test]
    fn maxsum_worked_instance() {
        // maximize x1+x2+x3 s.t. x1 + x2/10 + x3 <= 1, x1/10 + x2 + x3 <= 1
        let p = lp(
            &[int(1), int(1), int(1)],
            &[&[int(1), ratio(1, 10), int(1)], &[ratio(1, 10), int(1), int(1)]],
            &[int(1), int(1)],
        );
        let s = solve_max(&p).optimal().unwrap();
        assert_eq!(s.value, ratio(20, 11));
        assert_eq!(s.primal, vec![ratio(10, 11), ratio(10, 11), int(0)]);
        assert_eq!(s.dual, vec![ratio(10, 11), ratio(10, 11)]);
        assert!(s.certifies(&p));
    }

    #[test]
    fn unbounded_and_infeasible() {
        let p = lp(&[int(1), int(0)], &[&[int(0), int(1)]], &[int(3)]);
        assert_eq!(solve_max(&p), LpOutcome::Unbounded);
        // x >= 2 and x <= 1
        let q = lp(&[int(1)], &[&[int(-1)], &[int(1)]], &[int(-2), int(1)]);
        assert_eq!(solve_max(&q), LpOutcome::Infeasible);
    }

    #[test]
    fn negative_bounds_go_through_phase_one() {
        // maximize -x - y s.t. x + y >= 3, x <= 2
        let p = lp(
            &[int(-1), int(-1)],
            &[&[int(-1), int(-1)], &[int(1), int(0)]],
            &[int(-3), int(2)],
        );
        let s = solve_max(&p).optimal().unwrap();
        assert_eq!(s.value, int(-3));
        assert!(s.certifies(&p));
    }

    #[test]
    fn degenerate_cycling_example_terminates() {
        // Beale's classic cycling instance under the textbook pivot rule.
        let p = lp(
            &[ratio(3, 4), int(-150), ratio(1, 50), int(-6)],
            &[
                &[ratio(1, 4), int(-60), ratio(-1, 25), int(9)],
                &[ratio(1, 2), int(-90), ratio(-1, 50), int(3)],
                &[int(0), int(0), int(1), int(0)],
            ],
            &[int(0), int(0), int(1)],
        );
        let s = solve_max(&p).optimal().unwrap();
        assert_eq!(s.value, ratio(1, 20));
        assert!(s.certifies(&p));
    }

    #[test]
    fn empty_constraint_set() {
        let p = lp(&[int(0), int(-1)], &[], &[]);
        let s = solve_max(&p).optimal().unwrap();
        assert_eq!(s.value, int(0));
        let q = lp(&[int(1)], &[], &[]);
        assert_eq!(solve_max(&q), LpOutcome::Unbounded);
    }

    #[test]
    fn dimension_errors() {
        assert!(matches!(
            LinearProgram::new(vec![int(1)], vec![vec![int(1), int(2)]], vec![int(0)]),
            Err(LpError::Dimension { row: 0, .. })
        ));
        assert!(matches!(
            LinearProgram::new(vec![int(1)], vec![vec![int(1)]], vec![]),
            Err(LpError::BoundCount { .. })
        ));
    }
}
