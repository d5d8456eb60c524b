//! Small dense linear programs: two-phase tableau simplex with Bland's rule.
//!
//! Generic over [`Field`], so the same code pivots exactly over `Q` or
//! approximately over `f64`. Problems here have at most a few hundred
//! columns, so no factorization tricks.

use super::linalg::Field;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    fn flipped(self) -> Relation {
        match self {
            Relation::Le => Relation::Ge,
            Relation::Ge => Relation::Le,
            Relation::Eq => Relation::Eq,
        }
    }
}

#[derive(Clone, Debug)]
struct Row<T> {
    coeffs: Vec<T>,
    rel: Relation,
    rhs: T,
}

/// `minimize objective · x` subject to linear rows; variables are `≥ 0`
/// unless marked free.
#[derive(Clone, Debug)]
pub struct LinearProgram<T> {
    objective: Vec<T>,
    free: Vec<bool>,
    rows: Vec<Row<T>>,
}

#[derive(Clone, Debug)]
pub struct LpSolution<T> {
    pub x: Vec<T>,
    pub objective: T,
    /// One multiplier per row, in the orientation the row was given.
    pub duals: Vec<T>,
}

#[derive(Clone, Debug)]
pub enum LpOutcome<T> {
    Optimal(LpSolution<T>),
    Infeasible,
    Unbounded,
}

impl<T> LpOutcome<T> {
    pub fn optimal(self) -> Option<LpSolution<T>> {
        match self {
            LpOutcome::Optimal(s) => Some(s),
            _ => None,
        }
    }
}

struct Tableau<T> {
    /// m rows, each `ncols + 1` wide (last entry is the right-hand side).
    t: Vec<Vec<T>>,
    basis: Vec<usize>,
    /// Reduced costs, `ncols` wide, plus current objective value in `z`.
    d: Vec<T>,
    z: T,
    ncols: usize,
}

impl<T: Field> Tableau<T> {
    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.ncols + 1;
        let inv = T::one() / self.t[r][c].clone();
        for k in 0..w {
            if !self.t[r][k].is_zero() {
                self.t[r][k] = self.t[r][k].clone() * inv.clone();
            }
        }
        let pivot_row = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for k in 0..w {
                if !pivot_row[k].is_zero() {
                    row[k] = row[k].clone() - pivot_row[k].clone() * f.clone();
                }
            }
            row[c] = T::zero();
        }
        if !self.d[c].is_zero() {
            let f = self.d[c].clone();
            for k in 0..self.ncols {
                if !pivot_row[k].is_zero() {
                    self.d[k] = self.d[k].clone() - pivot_row[k].clone() * f.clone();
                }
            }
            self.z = self.z.clone() - pivot_row[self.ncols].clone() * f;
            self.d[c] = T::zero();
        }
        self.basis[r] = c;
    }

    fn set_costs(&mut self, costs: &[T]) {
        self.d = costs.to_vec();
        self.z = T::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = costs[b].clone();
            if cb.is_zero() {
                continue;
            }
            for k in 0..self.ncols {
                self.d[k] = self.d[k].clone() - cb.clone() * self.t[i][k].clone();
            }
            self.z = self.z.clone() - cb * self.t[i][self.ncols].clone();
        }
    }

    /// Runs Bland's rule until optimal; `false` if unbounded.
    fn optimize(&mut self, allowed: &[bool]) -> bool {
        loop {
            let Some(c) = (0..self.ncols).find(|&j| allowed[j] && self.d[j].is_neg()) else {
                return true;
            };
            let mut leave: Option<(usize, T)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][c];
                if !a.is_pos() {
                    continue;
                }
                let ratio = self.t[i][self.ncols].clone() / a.clone();
                let better = match &leave {
                    None => true,
                    Some((bi, br)) => {
                        let diff = ratio.clone() - br.clone();
                        diff.is_neg() || (diff.is_negligible() && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                None => return false,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

impl<T: Field> LinearProgram<T> {
    pub fn minimize(objective: Vec<T>) -> Self {
        let n = objective.len();
        LinearProgram {
            objective,
            free: vec![false; n],
            rows: Vec::new(),
        }
    }

    /// Feasibility problem over `n` variables.
    pub fn feasibility(n: usize) -> Self {
        Self::minimize(vec![T::zero(); n])
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn set_free(&mut self, var: usize) -> &mut Self {
        self.free[var] = true;
        self
    }

    pub fn add(&mut self, coeffs: Vec<T>, rel: Relation, rhs: T) -> &mut Self {
        assert_eq!(coeffs.len(), self.num_vars(), "row width");
        self.rows.push(Row { coeffs, rel, rhs });
        self
    }

    pub fn solve(&self) -> LpOutcome<T> {
        let n = self.num_vars();
        let m = self.rows.len();

        // Column layout: structural (free vars split), slacks, artificials.
        let mut col_of_var = Vec::with_capacity(n);
        let mut ncols = 0;
        for j in 0..n {
            col_of_var.push(ncols);
            ncols += if self.free[j] { 2 } else { 1 };
        }
        let structural = ncols;

        let mut negated = vec![false; m];
        let mut rels = Vec::with_capacity(m);
        for (i, row) in self.rows.iter().enumerate() {
            if row.rhs.is_neg() {
                negated[i] = true;
                rels.push(row.rel.flipped());
            } else {
                rels.push(row.rel);
            }
        }
        let mut slack_col = vec![None; m];
        for i in 0..m {
            if rels[i] != Relation::Eq {
                slack_col[i] = Some(ncols);
                ncols += 1;
            }
        }
        let mut art_col = vec![None; m];
        for i in 0..m {
            if rels[i] != Relation::Le {
                art_col[i] = Some(ncols);
                ncols += 1;
            }
        }

        let mut t = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        for (i, row) in self.rows.iter().enumerate() {
            let sign = if negated[i] { -T::one() } else { T::one() };
            let mut r = vec![T::zero(); ncols + 1];
            for j in 0..n {
                let a = row.coeffs[j].clone() * sign.clone();
                r[col_of_var[j]] = a.clone();
                if self.free[j] {
                    r[col_of_var[j] + 1] = -a;
                }
            }
            if let Some(s) = slack_col[i] {
                r[s] = if rels[i] == Relation::Le {
                    T::one()
                } else {
                    -T::one()
                };
            }
            if let Some(a) = art_col[i] {
                r[a] = T::one();
            }
            r[ncols] = row.rhs.clone() * sign;
            basis.push(
                art_col[i]
                    .or(slack_col[i])
                    .expect("every row has a basic column"),
            );
            t.push(r);
        }

        let is_art: Vec<bool> = (0..ncols).map(|c| art_col.contains(&Some(c))).collect();
        let mut tab = Tableau {
            t,
            basis,
            d: Vec::new(),
            z: T::zero(),
            ncols,
        };

        // Phase 1.
        let phase1: Vec<T> = (0..ncols)
            .map(|c| if is_art[c] { T::one() } else { T::zero() })
            .collect();
        tab.set_costs(&phase1);
        let all = vec![true; ncols];
        tab.optimize(&all);
        // z holds -objective.
        if (-tab.z.clone()).is_pos() {
            return LpOutcome::Infeasible;
        }
        for i in 0..m {
            if !is_art[tab.basis[i]] {
                continue;
            }
            if let Some(c) = (0..ncols).find(|&c| !is_art[c] && !tab.t[i][c].is_negligible()) {
                tab.pivot(i, c);
            }
        }

        // Phase 2.
        let mut costs = vec![T::zero(); ncols];
        for j in 0..n {
            costs[col_of_var[j]] = self.objective[j].clone();
            if self.free[j] {
                costs[col_of_var[j] + 1] = -self.objective[j].clone();
            }
        }
        tab.set_costs(&costs);
        let allowed: Vec<bool> = (0..ncols).map(|c| !is_art[c]).collect();
        if !tab.optimize(&allowed) {
            return LpOutcome::Unbounded;
        }

        let mut col_val = vec![T::zero(); structural];
        for (i, &b) in tab.basis.iter().enumerate() {
            if b < structural {
                col_val[b] = tab.t[i][ncols].clone();
            }
        }
        let x: Vec<T> = (0..n)
            .map(|j| {
                let c = col_of_var[j];
                if self.free[j] {
                    col_val[c].clone() - col_val[c + 1].clone()
                } else {
                    col_val[c].clone()
                }
            })
            .collect();
        let objective = x
            .iter()
            .zip(&self.objective)
            .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
        // The unit column of each oriented row has zero phase-2 cost, so its
        // reduced cost is minus that row's multiplier.
        let duals = (0..m)
            .map(|i| {
                let unit = if rels[i] == Relation::Le {
                    slack_col[i].unwrap()
                } else {
                    art_col[i].unwrap()
                };
                let y = -tab.d[unit].clone();
                if negated[i] {
                    -y
                } else {
                    y
                }
            })
            .collect();
        LpOutcome::Optimal(LpSolution {
            x,
            objective,
            duals,
        })
    }
}

impl<T: Field> LpSolution<T> {
    /// Checks primal feasibility, dual feasibility and a zero duality gap.
    /// Exact over `Q`; within [`super::linalg::F64_EPS`] over `f64`.
    pub fn certify(&self, lp: &LinearProgram<T>) -> bool {
        let n = lp.num_vars();
        if self.x.len() != n || self.duals.len() != lp.rows.len() {
            return false;
        }
        for j in 0..n {
            if !lp.free[j] && self.x[j].is_neg() {
                return false;
            }
        }
        let mut dual_obj = T::zero();
        for (row, y) in lp.rows.iter().zip(&self.duals) {
            let lhs = row
                .coeffs
                .iter()
                .zip(&self.x)
                .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone());
            let slack = lhs - row.rhs.clone();
            let ok = match row.rel {
                Relation::Le => !slack.is_pos() && !y.is_pos(),
                Relation::Ge => !slack.is_neg() && !y.is_neg(),
                Relation::Eq => slack.is_negligible(),
            };
            if !ok {
                return false;
            }
            dual_obj = dual_obj + row.rhs.clone() * y.clone();
        }
        for j in 0..n {
            let mut reduced = lp.objective[j].clone();
            for (row, y) in lp.rows.iter().zip(&self.duals) {
                reduced = reduced - row.coeffs[j].clone() * y.clone();
            }
            let ok = if lp.free[j] {
                reduced.is_negligible()
            } else {
                !reduced.is_neg()
            };
            if !ok {
                return false;
            }
        }
        (dual_obj - self.objective.clone()).is_negligible()
    }
}
