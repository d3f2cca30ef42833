//! Exact rational linear programming.
//!
//! Problems are in standard equality form: `A x = b`, `x >= 0`, with an
//! optional linear objective. [`solve`] runs a two-phase revised simplex
//! over exact rationals with Dantzig pricing, a lexicographic ratio test
//! and a Bland fallback on long degenerate runs, so it always terminates
//! and never needs a tolerance. [`solve_with`] selects the rule. Infeasibility comes with a
//! Farkas certificate and unboundedness with a recession ray; both can be
//! re-checked by plain arithmetic through [`FarkasCertificate::verify`]
//! and [`LinearProgram::is_ray`].

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// Sparse `row · x = rhs`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equality {
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Objective {
    pub sense: Sense,
    pub coeffs: Vec<(usize, Rational)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearProgram {
    num_vars: usize,
    equalities: Vec<Equality>,
    objective: Option<Objective>,
}

impl LinearProgram {
    pub fn new(num_vars: usize) -> Self {
        LinearProgram { num_vars, equalities: Vec::new(), objective: None }
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn equalities(&self) -> &[Equality] {
        &self.equalities
    }

    pub fn objective(&self) -> Option<&Objective> {
        self.objective.as_ref()
    }

    fn collect_sparse(&self, coeffs: impl IntoIterator<Item = (usize, Rational)>) -> Result<Vec<(usize, Rational)>> {
        let mut merged: Vec<(usize, Rational)> = Vec::new();
        for (var, value) in coeffs {
            if var >= self.num_vars {
                return Err(Error::MalformedLp(format!(
                    "coefficient for variable {var} but the program has {} variables",
                    self.num_vars
                )));
            }
            merged.push((var, value));
        }
        merged.sort_by_key(|(v, _)| *v);
        let mut out: Vec<(usize, Rational)> = Vec::with_capacity(merged.len());
        for (var, value) in merged {
            match out.last_mut() {
                Some((last, acc)) if *last == var => *acc += value,
                _ => out.push((var, value)),
            }
        }
        out.retain(|(_, v)| !v.is_zero());
        Ok(out)
    }

    /// Adds `Σ coeff·x[var] = rhs`; repeated variables are summed.
    pub fn add_equality(&mut self, coeffs: impl IntoIterator<Item = (usize, Rational)>, rhs: Rational) -> Result<()> {
        let coeffs = self.collect_sparse(coeffs)?;
        self.equalities.push(Equality { coeffs, rhs });
        Ok(())
    }

    /// Adds a dense row, which must have one entry per variable.
    pub fn add_dense_equality(&mut self, row: Vec<Rational>, rhs: Rational) -> Result<()> {
        if row.len() != self.num_vars {
            return Err(Error::MalformedLp(format!("row has {} coefficients, expected {}", row.len(), self.num_vars)));
        }
        self.add_equality(row.into_iter().enumerate(), rhs)
    }

    pub fn set_objective(&mut self, sense: Sense, coeffs: impl IntoIterator<Item = (usize, Rational)>) -> Result<()> {
        let coeffs = self.collect_sparse(coeffs)?;
        self.objective = Some(Objective { sense, coeffs });
        Ok(())
    }

    pub fn set_dense_objective(&mut self, sense: Sense, row: Vec<Rational>) -> Result<()> {
        if row.len() != self.num_vars {
            return Err(Error::MalformedLp(format!(
                "objective has {} coefficients, expected {}",
                row.len(),
                self.num_vars
            )));
        }
        self.set_objective(sense, row.into_iter().enumerate())
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.as_ref().map(|o| o.coeffs.iter().map(|(v, c)| c * &x[*v]).sum()).unwrap_or_else(Rational::zero)
    }

    /// `x` has the right length, is nonnegative and satisfies every equality.
    pub fn is_feasible_point(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars
            && x.iter().all(|v| !v.is_negative())
            && self.equalities.iter().all(|eq| eq.coeffs.iter().map(|(v, c)| c * &x[*v]).sum::<Rational>() == eq.rhs)
    }

    /// `ray` is a nonnegative direction with `A·ray = 0` along which the
    /// objective strictly improves.
    pub fn is_ray(&self, ray: &[Rational]) -> bool {
        let Some(objective) = &self.objective else {
            return false;
        };
        let gain: Rational = objective.coeffs.iter().map(|(v, c)| c * &ray[*v]).sum();
        let improving = match objective.sense {
            Sense::Maximize => gain.is_positive(),
            Sense::Minimize => gain.is_negative(),
        };
        ray.len() == self.num_vars
            && improving
            && ray.iter().all(|v| !v.is_negative())
            && self.equalities.iter().all(|eq| eq.coeffs.iter().map(|(v, c)| c * &ray[*v]).sum::<Rational>().is_zero())
    }
}

/// Multipliers `y`, one per equality, such that `yᵀA >= 0` componentwise
/// while `yᵀb < 0`; no `x >= 0` can then satisfy `Ax = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FarkasCertificate {
    pub multipliers: Vec<Rational>,
}

impl FarkasCertificate {
    /// The combined row `(yᵀA, yᵀb)`.
    pub fn combination(&self, lp: &LinearProgram) -> (Vec<Rational>, Rational) {
        let mut row = vec![Rational::zero(); lp.num_vars];
        let mut rhs = Rational::zero();
        for (y, eq) in self.multipliers.iter().zip(&lp.equalities) {
            if y.is_zero() {
                continue;
            }
            for (v, c) in &eq.coeffs {
                row[*v] += y * c;
            }
            rhs += y * &eq.rhs;
        }
        (row, rhs)
    }

    pub fn verify(&self, lp: &LinearProgram) -> bool {
        if self.multipliers.len() != lp.equalities.len() {
            return false;
        }
        let (row, rhs) = self.combination(lp);
        rhs.is_negative() && row.iter().all(|c| !c.is_negative())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    /// Feasible; for a program without objective `value` is zero.
    Optimal {
        primal: Vec<Rational>,
        value: Rational,
    },
    Infeasible(FarkasCertificate),
    /// Feasible point plus an improving recession direction.
    Unbounded {
        primal: Vec<Rational>,
        ray: Vec<Rational>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Infeasible(_) => LpStatus::Infeasible,
            LpOutcome::Unbounded { .. } => LpStatus::Unbounded,
        }
    }

    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible(_))
    }
}

type IntColumn = Vec<(usize, BigInt)>;

fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

fn scaled(value: &Rational, scale: &BigInt) -> BigInt {
    value.numer() * (scale / value.denom())
}

/// Entering-variable rule of the simplex method.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PivotRule {
    /// Most negative reduced cost, lexicographic ratio test, with a switch
    /// to Bland's rule after a long degenerate stretch.
    #[default]
    Dantzig,
    /// Lowest-index improving column and lowest-index leaving variable.
    Bland,
}

/// Solves `lp` exactly with the default pivot rule.
pub fn solve(lp: &LinearProgram) -> Result<LpOutcome> {
    solve_with(lp, PivotRule::default())
}

pub fn solve_with(lp: &LinearProgram, rule: PivotRule) -> Result<LpOutcome> {
    let m = lp.equalities.len();

    // Each row is scaled to integers and sign-flipped to a nonnegative rhs.
    let mut columns: Vec<IntColumn> = vec![Vec::new(); lp.num_vars];
    let mut row_factor = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (row, eq) in lp.equalities.iter().enumerate() {
        let mut scale = lcm_of_denominators(eq.coeffs.iter().map(|(_, c)| c).chain([&eq.rhs]));
        if eq.rhs.is_negative() {
            scale = -scale;
        }
        rhs.push(scaled(&eq.rhs, &scale));
        for (var, c) in &eq.coeffs {
            if *var >= lp.num_vars {
                return Err(Error::MalformedLp(format!("variable {var} out of range")));
            }
            columns[*var].push((row, scaled(c, &scale)));
        }
        row_factor.push(scale);
    }

    // Integer minimization costs for phase 2.
    let mut cost = vec![BigInt::zero(); lp.num_vars];
    if let Some(objective) = &lp.objective {
        let mut scale = lcm_of_denominators(objective.coeffs.iter().map(|(_, c)| c));
        if objective.sense == Sense::Maximize {
            scale = -scale;
        }
        for (var, c) in &objective.coeffs {
            cost[*var] = scaled(c, &scale);
        }
    }

    // Identical (column, cost) pairs are interchangeable: keep the first.
    let mut representative = Vec::with_capacity(lp.num_vars);
    let mut reduced_columns: Vec<IntColumn> = Vec::new();
    let mut reduced_cost: Vec<BigInt> = Vec::new();
    let mut seen: HashMap<(BigInt, IntColumn), usize> = HashMap::new();
    for (column, c) in columns.into_iter().zip(cost) {
        let next = reduced_columns.len();
        let key = (c, column);
        let idx = *seen.entry(key.clone()).or_insert(next);
        if idx == next {
            reduced_cost.push(key.0);
            reduced_columns.push(key.1);
        }
        representative.push(idx);
    }

    let mut tableau = FractionFreeSimplex::new(reduced_columns, rhs);
    let expand = |reduced: Vec<Rational>| -> Vec<Rational> {
        let mut full = vec![Rational::zero(); lp.num_vars];
        let mut used = vec![false; reduced.len()];
        for (var, &rep) in representative.iter().enumerate() {
            if !used[rep] {
                used[rep] = true;
                full[var] = reduced[rep].clone();
            }
        }
        full
    };

    let n = tableau.n;
    let mut phase_one_cost = vec![BigInt::zero(); n + m];
    for c in &mut phase_one_cost[n..] {
        *c = BigInt::one();
    }
    if let PhaseEnd::Unbounded(_) = tableau.run(&phase_one_cost, rule) {
        return Err(Error::Internal("phase one cannot be unbounded".into()));
    }
    let infeasible = (0..m).any(|i| tableau.basis[i] >= n && !tableau.xb[i].is_zero());
    if infeasible {
        // Phase-one duals y satisfy yᵀA <= 0 and yᵀb > 0 on the scaled rows.
        let y = tableau.scaled_duals(&phase_one_cost);
        let multipliers = y
            .into_iter()
            .zip(&row_factor)
            .map(|(yi, factor)| -Rational::new(yi * factor, tableau.det.clone()))
            .collect();
        return Ok(LpOutcome::Infeasible(FarkasCertificate { multipliers }));
    }
    tableau.drive_out_artificials();

    let mut phase_two_cost = reduced_cost;
    phase_two_cost.extend(std::iter::repeat_with(BigInt::zero).take(m));
    match tableau.run(&phase_two_cost, rule) {
        PhaseEnd::Optimal => {
            let primal = expand(tableau.primal());
            let value = lp.objective_value(&primal);
            Ok(LpOutcome::Optimal { primal, value })
        }
        PhaseEnd::Unbounded(entering) => {
            let primal = expand(tableau.primal());
            let u = tableau.column_in_basis(entering);
            let mut direction = vec![Rational::zero(); n];
            direction[entering] = Rational::one();
            for (i, ui) in u.into_iter().enumerate() {
                let var = tableau.basis[i];
                if var < n {
                    direction[var] = -Rational::new(ui, tableau.det.clone());
                }
            }
            Ok(LpOutcome::Unbounded { primal, ray: expand(direction) })
        }
    }
}

enum PhaseEnd {
    Optimal,
    Unbounded(usize),
}

/// Revised simplex over integer data, kept fraction-free: `adj = det·B⁻¹`
/// and `xb = det·x_B` are integer, and every pivot divides exactly by the
/// previous determinant. Variable `n + i` is the artificial unit column
/// `e_i`.
struct FractionFreeSimplex {
    m: usize,
    n: usize,
    columns: Vec<IntColumn>,
    small_columns: Vec<Option<Vec<(usize, i64)>>>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    adj: Vec<Vec<BigInt>>,
    det: BigInt,
    xb: Vec<BigInt>,
}

impl FractionFreeSimplex {
    fn new(columns: Vec<IntColumn>, rhs: Vec<BigInt>) -> Self {
        let m = rhs.len();
        let n = columns.len();
        let adj =
            (0..m).map(|i| (0..m).map(|k| if i == k { BigInt::one() } else { BigInt::zero() }).collect()).collect();
        let small_columns =
            columns.iter().map(|col| col.iter().map(|(r, a)| a.to_i64().map(|v| (*r, v))).collect()).collect();
        let mut is_basic = vec![false; n + m];
        for flag in &mut is_basic[n..] {
            *flag = true;
        }
        FractionFreeSimplex {
            m,
            n,
            columns,
            small_columns,
            basis: (n..n + m).collect(),
            is_basic,
            adj,
            det: BigInt::one(),
            xb: rhs,
        }
    }

    /// `det · c_Bᵀ B⁻¹`.
    fn scaled_duals(&self, cost: &[BigInt]) -> Vec<BigInt> {
        let mut y = vec![BigInt::zero(); self.m];
        for i in 0..self.m {
            let cb = &cost[self.basis[i]];
            if cb.is_zero() {
                continue;
            }
            for (k, yk) in y.iter_mut().enumerate() {
                let b = &self.adj[i][k];
                if !b.is_zero() {
                    *yk += cb * b;
                }
            }
        }
        y
    }

    /// `det · B⁻¹ a_var`.
    fn column_in_basis(&self, var: usize) -> Vec<BigInt> {
        if var >= self.n {
            return self.adj.iter().map(|row| row[var - self.n].clone()).collect();
        }
        let col = &self.columns[var];
        self.adj
            .iter()
            .map(|row| {
                let mut acc = BigInt::zero();
                for (r, a) in col {
                    let b = &row[*r];
                    if !b.is_zero() {
                        acc += b * a;
                    }
                }
                acc
            })
            .collect()
    }

    /// `det · (c_j - yᵀa_j)`, exact.
    fn scaled_reduced_cost(&self, var: usize, cost: &BigInt, y: &[BigInt]) -> BigInt {
        let mut d = cost * &self.det;
        for (r, a) in &self.columns[var] {
            if !y[*r].is_zero() {
                d -= &y[*r] * a;
            }
        }
        d
    }

    /// Improving column: the lowest index under Bland's rule, otherwise the
    /// most negative reduced cost (ties to the lowest index).
    #[allow(clippy::needless_range_loop)]
    fn entering(&self, cost: &[BigInt], bland: bool) -> Option<usize> {
        let y = self.scaled_duals(cost);
        let det_negative = self.det.is_negative();
        // Scaled reduced costs share the factor `det`; orient them so that
        // "improving" always means negative.
        let oriented = |d: BigInt| if det_negative { -d } else { d };

        let small_y: Option<Vec<i128>> = y.iter().map(|v| v.to_i128()).collect();
        let small_det = self.det.to_i128();
        let quick = |j: usize| -> Option<i128> {
            let (sy, sdet) = (small_y.as_ref()?, small_det?);
            let col = self.small_columns[j].as_ref()?;
            let c = cost[j].to_i128()?;
            let d = col
                .iter()
                .try_fold(c.checked_mul(sdet)?, |acc, &(r, a)| acc.checked_sub(sy[r].checked_mul(a as i128)?))?;
            if det_negative {
                d.checked_neg()
            } else {
                Some(d)
            }
        };

        let mut best: Option<(usize, BigInt)> = None;
        for j in 0..self.n {
            if self.is_basic[j] {
                continue;
            }
            let d = match quick(j) {
                Some(d) if d >= 0 => continue,
                Some(d) => BigInt::from(d),
                None => {
                    let d = oriented(self.scaled_reduced_cost(j, &cost[j], &y));
                    if !d.is_negative() {
                        continue;
                    }
                    d
                }
            };
            if bland {
                return Some(j);
            }
            if best.as_ref().is_none_or(|(_, b)| d < *b) {
                best = Some((j, d));
            }
        }
        best.map(|(j, _)| j)
    }

    /// Compares rows `i` and `l` of `[x_B | B⁻¹]`, each divided by its
    /// entry of the entering column.
    fn lex_less(&self, i: usize, l: usize, u: &[BigInt]) -> std::cmp::Ordering {
        let entries = std::iter::once((&self.xb[i], &self.xb[l])).chain(self.adj[i].iter().zip(&self.adj[l]));
        for (a, b) in entries {
            let ord = (a * &u[l]).cmp(&(b * &u[i]));
            if ord != std::cmp::Ordering::Equal {
                return ord;
            }
        }
        std::cmp::Ordering::Equal
    }

    /// Minimizes `cost`; artificials never re-enter.
    ///
    /// The default rule prices by the most negative reduced cost and breaks
    /// ratio ties lexicographically. A long run of degenerate pivots (or
    /// `PivotRule::Bland`) switches to Bland's rule for the rest of the
    /// phase, which cannot cycle.
    fn run(&mut self, cost: &[BigInt], rule: PivotRule) -> PhaseEnd {
        let mut bland = rule == PivotRule::Bland;
        let mut degenerate_streak = 0usize;
        let stall_limit = 50 * (self.m + 1);
        loop {
            let Some(entering) = self.entering(cost, bland) else {
                return PhaseEnd::Optimal;
            };
            let u = self.column_in_basis(entering);
            let det_positive = self.det.is_positive();
            // u_i > 0 in unscaled terms
            let positive = |v: &BigInt| {
                if det_positive {
                    v.is_positive()
                } else {
                    v.is_negative()
                }
            };
            let mut leaving: Option<usize> = None;
            for i in 0..self.m {
                if !positive(&u[i]) {
                    continue;
                }
                let better = match leaving {
                    None => true,
                    Some(l) => {
                        // u_i and u_l share a sign, so cross-multiplying keeps the order
                        match (&self.xb[i] * &u[l]).cmp(&(&self.xb[l] * &u[i])) {
                            std::cmp::Ordering::Less => true,
                            std::cmp::Ordering::Greater => false,
                            std::cmp::Ordering::Equal if bland => self.basis[i] < self.basis[l],
                            std::cmp::Ordering::Equal => match self.lex_less(i, l, &u) {
                                std::cmp::Ordering::Less => true,
                                std::cmp::Ordering::Greater => false,
                                std::cmp::Ordering::Equal => self.basis[i] < self.basis[l],
                            },
                        }
                    }
                };
                if better {
                    leaving = Some(i);
                }
            }
            let Some(row) = leaving else {
                return PhaseEnd::Unbounded(entering);
            };
            if self.xb[row].is_zero() {
                degenerate_streak += 1;
                if degenerate_streak > stall_limit {
                    bland = true;
                }
            } else {
                degenerate_streak = 0;
            }
            self.pivot(row, entering, &u);
        }
    }

    #[allow(clippy::needless_range_loop)]
    fn pivot(&mut self, row: usize, entering: usize, u: &[BigInt]) {
        let pivot = u[row].clone();
        let pivot_row = std::mem::take(&mut self.adj[row]);
        let pivot_x = self.xb[row].clone();
        let pivot_is_det = pivot == self.det;
        for i in 0..self.m {
            if i == row {
                continue;
            }
            let ui = &u[i];
            if ui.is_zero() {
                if pivot_is_det {
                    continue;
                }
                for v in self.adj[i].iter_mut().filter(|v| !v.is_zero()) {
                    *v = &*v * &pivot / &self.det;
                }
                self.xb[i] = &self.xb[i] * &pivot / &self.det;
                continue;
            }
            for (v, p) in self.adj[i].iter_mut().zip(&pivot_row) {
                if v.is_zero() && p.is_zero() {
                    continue;
                }
                *v = (&pivot * &*v - ui * p) / &self.det;
            }
            self.xb[i] = (&pivot * &self.xb[i] - ui * &pivot_x) / &self.det;
        }
        self.adj[row] = pivot_row;
        self.det = pivot;
        self.is_basic[self.basis[row]] = false;
        self.is_basic[entering] = true;
        self.basis[row] = entering;
    }

    /// After a feasible phase one, swaps zero-level artificials for
    /// structural columns where possible. Any artificial left behind sits
    /// on a redundant row and stays at zero.
    fn drive_out_artificials(&mut self) {
        for row in 0..self.m {
            if self.basis[row] < self.n {
                continue;
            }
            let candidate = (0..self.n).find(|&j| {
                !self.is_basic[j]
                    && !self.columns[j].iter().map(|(r, a)| &self.adj[row][*r] * a).sum::<BigInt>().is_zero()
            });
            if let Some(j) = candidate {
                let u = self.column_in_basis(j);
                self.pivot(row, j, &u);
            }
        }
    }

    fn primal(&self) -> Vec<Rational> {
        let mut x = vec![Rational::zero(); self.n];
        for (i, &var) in self.basis.iter().enumerate() {
            if var < self.n {
                x[var] = Rational::new(self.xb[i].clone(), self.det.clone());
            }
        }
        x
    }
}
