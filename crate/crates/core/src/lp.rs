//! Dense two-phase tableau simplex for the small linear programs behind the
//! optimal-vertex filter (at most a few dozen variables).
//!
//! Bland's rule is used for both the entering and leaving variable, so the
//! method terminates on degenerate problems.

const PIVOT_TOL: f64 = 1e-9;
const FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<f64> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(*value),
            _ => None,
        }
    }
}

/// maximize cᵀx subject to A_le x ≤ b_le, A_eq x = b_eq, x ≥ 0.
#[derive(Debug, Clone, Default)]
pub struct LinearProgram {
    pub objective: Vec<f64>,
    pub le: Vec<(Vec<f64>, f64)>,
    pub eq: Vec<(Vec<f64>, f64)>,
}

impl LinearProgram {
    pub fn new(objective: Vec<f64>) -> Self {
        Self {
            objective,
            ..Self::default()
        }
    }

    pub fn le(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.le.push((row, rhs));
        self
    }

    pub fn ge(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.le.push((row.into_iter().map(|a| -a).collect(), -rhs));
        self
    }

    pub fn eq(mut self, row: Vec<f64>, rhs: f64) -> Self {
        self.eq.push((row, rhs));
        self
    }

    pub fn solve(&self) -> LpOutcome {
        Tableau::build(self).solve(&self.objective)
    }
}

struct Tableau {
    /// Rows of [coefficients | rhs].
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    vars: usize,
    /// First artificial column; every column from here on is artificial.
    art: usize,
}

impl Tableau {
    fn build(lp: &LinearProgram) -> Self {
        let vars = lp.objective.len();
        let m1 = lp.le.len();
        let m = m1 + lp.eq.len();
        let art = vars + m1;
        let width = art + m + 1;
        let mut rows = Vec::with_capacity(m);
        for (i, (a, b)) in lp.le.iter().chain(&lp.eq).enumerate() {
            assert_eq!(a.len(), vars, "constraint width must match objective");
            let mut row = vec![0.0; width];
            row[..vars].copy_from_slice(a);
            if i < m1 {
                row[vars + i] = 1.0;
            }
            row[width - 1] = *b;
            if *b < 0.0 {
                row.iter_mut().for_each(|x| *x = -*x);
            }
            row[art + i] = 1.0;
            rows.push(row);
        }
        Tableau {
            rows,
            basis: (art..art + m).collect(),
            vars,
            art,
        }
    }

    fn width(&self) -> usize {
        self.art + self.rows.len()
    }

    fn rhs(&self, i: usize) -> f64 {
        *self.rows[i].last().expect("non-empty row")
    }

    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col];
        self.rows[r].iter_mut().for_each(|x| *x /= p);
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                let f = row[col];
                if f != 0.0 {
                    row.iter_mut().zip(&pivot_row).for_each(|(x, p)| *x -= f * p);
                }
            }
        }
        self.basis[r] = col;
    }

    /// Maximizes `cost · x` over columns `< limit`. Returns false if unbounded.
    fn optimize(&mut self, cost: &[f64], limit: usize) -> bool {
        loop {
            let entering = (0..limit).find(|&j| {
                let reduced = cost[j]
                    - self
                        .basis
                        .iter()
                        .zip(&self.rows)
                        .map(|(&b, row)| cost[b] * row[j])
                        .sum::<f64>();
                reduced > PIVOT_TOL
            });
            let Some(j) = entering else { return true };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][j];
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((k, best)) => {
                            if ratio < best - 1e-12
                                || (ratio <= best + 1e-12 && self.basis[i] < self.basis[k])
                            {
                                Some((i, ratio))
                            } else {
                                Some((k, best))
                            }
                        }
                    };
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, j);
        }
    }

    fn solve(mut self, objective: &[f64]) -> LpOutcome {
        let width = self.width();
        let mut phase1 = vec![0.0; width];
        phase1[self.art..].iter_mut().for_each(|c| *c = -1.0);
        self.optimize(&phase1, width);
        let infeasibility: f64 = self
            .basis
            .iter()
            .enumerate()
            .filter(|(_, &b)| b >= self.art)
            .map(|(i, _)| self.rhs(i))
            .sum();
        if infeasibility > FEASIBILITY_TOL {
            return LpOutcome::Infeasible;
        }
        for i in 0..self.rows.len() {
            if self.basis[i] >= self.art {
                if let Some(j) = (0..self.art).find(|&j| self.rows[i][j].abs() > PIVOT_TOL) {
                    self.pivot(i, j);
                }
            }
        }
        let mut cost = vec![0.0; width];
        cost[..self.vars].copy_from_slice(objective);
        if !self.optimize(&cost, self.art) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![0.0; self.vars];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < self.vars {
                x[b] = self.rhs(i);
            }
        }
        let value = x.iter().zip(objective).map(|(a, b)| a * b).sum();
        LpOutcome::Optimal { x, value }
    }
}
