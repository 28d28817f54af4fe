//! Small dense linear programming over systems `A x ≤ b` with free `x`.
//!
//! The solver is a two-phase tableau simplex. Pricing is Dantzig's rule until
//! a run of degenerate pivots suggests cycling, after which it switches to
//! Bland's rule for the rest of the phase. If the iteration cap is still hit,
//! the right-hand side is perturbed slightly and the solve restarted once.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// Optimize `c·x` subject to `A x ≤ b`, `x ∈ R^k` unrestricted.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub a: Matrix,
    pub b: Vector,
    pub c: Vector,
    pub sense: Sense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone)]
pub struct LpOutcome {
    pub status: LpStatus,
    /// Optimal point, present when `status == Optimal`.
    pub x: Option<Vector>,
    /// Objective value at `x`; `±∞`/NaN conventions are not used, this is
    /// `0.0` unless optimal.
    pub objective: f64,
    /// For infeasible systems: `y ≥ 0` with `yᵀA ≈ 0` and `yᵀb < 0`,
    /// normalized so the entries sum to one.
    pub farkas: Option<Vector>,
}

impl LinearProgram {
    pub fn new(a: Matrix, b: Vector, c: Vector, sense: Sense) -> Result<LinearProgram> {
        let lp = LinearProgram { a, b, c, sense };
        lp.validate()?;
        Ok(lp)
    }

    fn validate(&self) -> Result<()> {
        if self.a.nrows() != self.b.len() {
            return Err(Error::DimensionMismatch {
                expected: self.a.nrows(),
                got: self.b.len(),
            });
        }
        if self.a.ncols() != self.c.len() {
            return Err(Error::DimensionMismatch {
                expected: self.a.ncols(),
                got: self.c.len(),
            });
        }
        if self.a.nrows() == 0 || self.a.ncols() == 0 {
            return Err(Error::BadParameter("empty linear program".into()));
        }
        let finite = self.a.iter().chain(self.b.iter()).chain(self.c.iter());
        if finite.into_iter().any(|v| !v.is_finite()) {
            return Err(Error::BadParameter("non-finite LP data".into()));
        }
        Ok(())
    }
}

/// Solves the program. See [`LpOutcome`] for what each status carries.
pub fn solve(p: &LinearProgram) -> Result<LpOutcome> {
    p.validate()?;
    match solve_once(p, None) {
        Err(Error::NumericalFailure(_)) => {
            let bscale = 1.0 + p.b.amax();
            let m = p.b.len() as f64;
            let bump = Vector::from_fn(p.b.len(), |i, _| 1e-11 * bscale * (i as f64 + 1.0) / m);
            solve_once(p, Some(&bump))
        }
        other => other,
    }
}

fn solve_once(p: &LinearProgram, bump: Option<&Vector>) -> Result<LpOutcome> {
    let m = p.a.nrows();
    let k = p.a.ncols();
    let feas = tol::get().feasibility;

    // Row normalization; zero rows are checked directly.
    let mut rows: Vec<usize> = Vec::with_capacity(m);
    let mut norms = vec![0.0; m];
    for i in 0..m {
        let nrm = p.a.row(i).norm();
        norms[i] = nrm;
        let bi = p.b[i] + bump.map_or(0.0, |d| d[i]);
        if nrm <= 1e-14 {
            if bi < -feas * (1.0 + bi.abs()) {
                let mut y = Vector::zeros(m);
                y[i] = 1.0;
                return Ok(LpOutcome {
                    status: LpStatus::Infeasible,
                    x: None,
                    objective: 0.0,
                    farkas: Some(y),
                });
            }
            continue;
        }
        rows.push(i);
    }

    if rows.is_empty() {
        // Every constraint is trivially satisfied.
        if p.c.amax() > 0.0 {
            return Ok(LpOutcome {
                status: LpStatus::Unbounded,
                x: None,
                objective: 0.0,
                farkas: None,
            });
        }
        return Ok(LpOutcome {
            status: LpStatus::Optimal,
            x: Some(Vector::zeros(k)),
            objective: 0.0,
            farkas: None,
        });
    }

    let mr = rows.len();
    let flipped: Vec<bool> = rows
        .iter()
        .map(|&i| p.b[i] + bump.map_or(0.0, |d| d[i]) < 0.0)
        .collect();
    let n_art = flipped.iter().filter(|f| **f).count();
    let n_struct = 2 * k + mr;
    let ncols = n_struct + n_art;

    let mut t = Tableau::new(mr, ncols);
    let mut art_col = vec![usize::MAX; mr];
    let mut next_art = n_struct;
    for (r, &i) in rows.iter().enumerate() {
        let sign = if flipped[r] { -1.0 } else { 1.0 };
        let s = sign / norms[i];
        for j in 0..k {
            let v = p.a[(i, j)] * s;
            t.set(r, j, v);
            t.set(r, k + j, -v);
        }
        t.set(r, 2 * k + r, sign);
        t.set_rhs(r, (p.b[i] + bump.map_or(0.0, |d| d[i])) * s);
        if flipped[r] {
            t.set(r, next_art, 1.0);
            art_col[r] = next_art;
            t.basis[r] = next_art;
            next_art += 1;
        } else {
            t.basis[r] = 2 * k + r;
        }
    }

    let limit = 50 * (mr + ncols) + 1000;
    let degenerate_limit = 5 * (m + k);

    if n_art > 0 {
        let mut cost = vec![0.0; ncols];
        for c in cost.iter_mut().skip(n_struct) {
            *c = 1.0;
        }
        let blocked = vec![false; ncols];
        match t.run(&cost, &blocked, limit, degenerate_limit)? {
            PhaseEnd::Optimal => {}
            PhaseEnd::Unbounded => {
                return Err(Error::NumericalFailure("phase 1 reported unbounded".into()))
            }
        }
        let infeas = t.objective(&cost);
        let bscale = 1.0 + rows.iter().map(|&i| (p.b[i] / norms[i]).abs()).fold(0.0, f64::max);
        if infeas > feas * bscale {
            // y = c_Bᵀ B⁻¹ read off the columns that started as the identity.
            let mut y = Vector::zeros(m);
            for (r, &i) in rows.iter().enumerate() {
                let id_col = if flipped[r] { art_col[r] } else { 2 * k + r };
                let mut yr = 0.0;
                for rr in 0..mr {
                    yr += cost[t.basis[rr]] * t.get(rr, id_col);
                }
                let sigma = if flipped[r] { -1.0 } else { 1.0 };
                y[i] = (-sigma * yr).max(0.0) / norms[i];
            }
            let total = y.sum();
            if total > 0.0 {
                y /= total;
            }
            return Ok(LpOutcome {
                status: LpStatus::Infeasible,
                x: None,
                objective: 0.0,
                farkas: Some(y),
            });
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..mr {
            if t.basis[r] >= n_struct {
                if let Some(j) = (0..n_struct)
                    .filter(|&j| t.get(r, j).abs() > 1e-9)
                    .max_by(|&a, &b| t.get(r, a).abs().total_cmp(&t.get(r, b).abs()))
                {
                    t.pivot(r, j);
                }
            }
        }
    }

    let sign = match p.sense {
        Sense::Minimize => 1.0,
        Sense::Maximize => -1.0,
    };
    let mut cost = vec![0.0; ncols];
    for j in 0..k {
        cost[j] = sign * p.c[j];
        cost[k + j] = -sign * p.c[j];
    }
    let mut blocked = vec![false; ncols];
    for b in blocked.iter_mut().skip(n_struct) {
        *b = true;
    }
    match t.run(&cost, &blocked, limit, degenerate_limit)? {
        PhaseEnd::Unbounded => Ok(LpOutcome {
            status: LpStatus::Unbounded,
            x: None,
            objective: 0.0,
            farkas: None,
        }),
        PhaseEnd::Optimal => {
            let mut x = Vector::zeros(k);
            for r in 0..mr {
                let j = t.basis[r];
                if j < k {
                    x[j] += t.rhs(r);
                } else if j < 2 * k {
                    x[j - k] -= t.rhs(r);
                }
            }
            let objective = p.c.dot(&x);
            Ok(LpOutcome {
                status: LpStatus::Optimal,
                x: Some(x),
                objective,
                farkas: None,
            })
        }
    }
}

enum PhaseEnd {
    Optimal,
    Unbounded,
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// Row-major, `cols + 1` entries per row, right-hand side last.
    data: Vec<f64>,
    basis: Vec<usize>,
}

const PIVOT_TOL: f64 = 1e-9;
const PRICE_TOL: f64 = 1e-10;

impl Tableau {
    fn new(rows: usize, cols: usize) -> Tableau {
        Tableau {
            rows,
            cols,
            data: vec![0.0; rows * (cols + 1)],
            basis: vec![0; rows],
        }
    }

    #[inline]
    fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * (self.cols + 1) + c]
    }

    #[inline]
    fn set(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * (self.cols + 1) + c] = v;
    }

    #[inline]
    fn rhs(&self, r: usize) -> f64 {
        self.get(r, self.cols)
    }

    fn set_rhs(&mut self, r: usize, v: f64) {
        let c = self.cols;
        self.set(r, c, v);
    }

    fn objective(&self, cost: &[f64]) -> f64 {
        (0..self.rows).map(|r| cost[self.basis[r]] * self.rhs(r)).sum()
    }

    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut d = cost.to_vec();
        for r in 0..self.rows {
            let cb = cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.data[r * (self.cols + 1)..r * (self.cols + 1) + self.cols];
                for (dj, a) in d.iter_mut().zip(row) {
                    *dj -= cb * a;
                }
            }
        }
        d
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let pv = self.get(pr, pc);
        for c in 0..w {
            self.data[pr * w + c] /= pv;
        }
        let prow: Vec<f64> = self.data[pr * w..(pr + 1) * w].to_vec();
        for r in 0..self.rows {
            if r == pr {
                continue;
            }
            let f = self.data[r * w + pc];
            if f != 0.0 {
                let row = &mut self.data[r * w..(r + 1) * w];
                for (x, p) in row.iter_mut().zip(&prow) {
                    *x -= f * p;
                }
                row[pc] = 0.0;
            }
        }
        self.basis[pr] = pc;
    }

    /// Minimizes `cost` from the current basic feasible solution.
    fn run(
        &mut self,
        cost: &[f64],
        blocked: &[bool],
        limit: usize,
        degenerate_limit: usize,
    ) -> Result<PhaseEnd> {
        let mut bland = false;
        let mut degenerate_run = 0usize;
        let mut d = self.reduced_costs(cost);
        for _ in 0..limit {
            let cscale = 1.0 + cost.iter().fold(0.0f64, |a, c| a.max(c.abs()));
            let entering = if bland {
                (0..self.cols).find(|&j| !blocked[j] && d[j] < -PRICE_TOL * cscale)
            } else {
                (0..self.cols)
                    .filter(|&j| !blocked[j] && d[j] < -PRICE_TOL * cscale)
                    .min_by(|&a, &b| d[a].total_cmp(&d[b]))
            };
            let Some(jc) = entering else {
                return Ok(PhaseEnd::Optimal);
            };

            let mut best: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.get(r, jc);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r).max(0.0) / a;
                    best = match best {
                        None => Some((r, ratio)),
                        Some((br, bratio)) => {
                            if ratio < bratio - 1e-12 {
                                Some((r, ratio))
                            } else if ratio <= bratio + 1e-12 {
                                let take = if bland {
                                    self.basis[r] < self.basis[br]
                                } else {
                                    a > self.get(br, jc)
                                };
                                if take {
                                    Some((r, ratio))
                                } else {
                                    Some((br, bratio))
                                }
                            } else {
                                Some((br, bratio))
                            }
                        }
                    };
                }
            }
            let Some((pr, ratio)) = best else {
                return Ok(PhaseEnd::Unbounded);
            };
            if ratio <= 1e-12 {
                degenerate_run += 1;
                if degenerate_run > degenerate_limit {
                    bland = true;
                }
            } else {
                degenerate_run = 0;
            }
            self.pivot(pr, jc);
            // Update reduced costs from the normalized pivot row.
            let dj = d[jc];
            if dj != 0.0 {
                let w = self.cols + 1;
                for (c, dc) in d.iter_mut().enumerate() {
                    *dc -= dj * self.data[pr * w + c];
                }
                d[jc] = 0.0;
            }
            for r in 0..self.rows {
                let v = self.rhs(r);
                if v < 0.0 && v > -1e-11 {
                    self.set_rhs(r, 0.0);
                }
            }
        }
        Err(Error::NumericalFailure(format!(
            "no convergence after {limit} pivots"
        )))
    }
}

/// Chebyshev-style slack maximization.
///
/// Maximizes `s` subject to `a_i·x + s·|a_i| ≤ b_i`, with `s` capped at
/// `max(1, |b|_∞)`. Returns the maximizer and the attained margin `s*`,
/// which is negative exactly when the system is infeasible. Rows with
/// `a_i = 0` contribute the constant slack `b_i`.
pub fn max_min_slack(a: &Matrix, b: &Vector) -> Result<(Vector, f64)> {
    let m = a.nrows();
    let k = a.ncols();
    if b.len() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            got: b.len(),
        });
    }
    let cap = 1.0f64.max(b.amax());
    let mut big = Matrix::zeros(m + 1, k + 1);
    let mut rhs = Vector::zeros(m + 1);
    for i in 0..m {
        let nrm = a.row(i).norm();
        for j in 0..k {
            big[(i, j)] = a[(i, j)];
        }
        big[(i, k)] = if nrm > 1e-14 { nrm } else { 1.0 };
        rhs[i] = b[i];
    }
    big[(m, k)] = 1.0;
    rhs[m] = cap;
    let mut c = Vector::zeros(k + 1);
    c[k] = 1.0;
    let lp = LinearProgram::new(big, rhs, c, Sense::Maximize)?;
    let out = solve(&lp)?;
    match out.status {
        LpStatus::Optimal => {
            let z = out.x.expect("optimal carries x");
            let x = z.rows(0, k).into_owned();
            Ok((x, z[k]))
        }
        other => Err(Error::NumericalFailure(format!(
            "slack maximization ended {other:?}"
        ))),
    }
}

/// Interior-leaning witness for `A x ≤ b`, or `None` if the system is empty
/// at the feasibility tolerance.
pub fn feasible(a: &Matrix, b: &Vector) -> Result<Option<Vector>> {
    let (x, margin) = max_min_slack(a, b)?;
    if margin >= -tol::get().feasibility {
        Ok(Some(x))
    } else {
        Ok(None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: usize, cols: usize, v: &[f64]) -> Matrix {
        Matrix::from_row_slice(rows, cols, v)
    }

    fn vecf(v: &[f64]) -> Vector {
        Vector::from_column_slice(v)
    }

    fn unit_square() -> (Matrix, Vector) {
        (
            mat(4, 2, &[1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, -1.0]),
            vecf(&[1.0, 0.0, 1.0, 0.0]),
        )
    }

    #[test]
    fn one_dimensional_max() {
        let lp = LinearProgram::new(mat(2, 1, &[1.0, -1.0]), vecf(&[3.0, 0.0]), vecf(&[1.0]), Sense::Maximize)
            .unwrap();
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert!((out.x.unwrap()[0] - 3.0).abs() < 1e-12);
        assert!((out.objective - 3.0).abs() < 1e-12);
    }

    #[test]
    fn infeasible_interval_has_farkas_certificate() {
        let a = mat(2, 1, &[1.0, -1.0]);
        let b = vecf(&[0.0, -1.0]);
        let lp = LinearProgram::new(a.clone(), b.clone(), vecf(&[0.0]), Sense::Minimize).unwrap();
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Infeasible);
        let y = out.farkas.unwrap();
        assert!(y.iter().all(|v| *v >= 0.0));
        assert!((a.transpose() * &y).amax() < 1e-9);
        assert!(y.dot(&b) < 0.0);
    }

    #[test]
    fn square_corner() {
        let (a, b) = unit_square();
        let lp = LinearProgram::new(a, b, vecf(&[1.0, 1.0]), Sense::Maximize).unwrap();
        let out = solve(&lp).unwrap();
        assert!((out.objective - 2.0).abs() < 1e-12);
        assert!((out.x.unwrap() - vecf(&[1.0, 1.0])).norm() < 1e-12);
    }

    #[test]
    fn unbounded_detected() {
        let lp = LinearProgram::new(mat(1, 2, &[1.0, 0.0]), vecf(&[1.0]), vecf(&[0.0, 1.0]), Sense::Maximize)
            .unwrap();
        assert_eq!(solve(&lp).unwrap().status, LpStatus::Unbounded);
    }

    #[test]
    fn chebyshev_witness() {
        let (a, b) = unit_square();
        let (x, margin) = max_min_slack(&a, &b).unwrap();
        assert!((margin - 0.5).abs() < 1e-12);
        assert!((x - vecf(&[0.5, 0.5])).norm() < 1e-12);
        assert!(feasible(&a, &b).unwrap().is_some());

        assert!(feasible(&mat(2, 1, &[1.0, -1.0]), &vecf(&[1.0, -2.0])).unwrap().is_none());
    }

    #[test]
    fn translation_system_for_boxes() {
        // K = [0,1]^2 into L = [0,2]^2: x_i + 1 ≤ 2, -x_i + 0 ≤ 0.
        let (a, _) = unit_square();
        let b = vecf(&[1.0, 0.0, 1.0, 0.0]);
        let x = feasible(&a, &b).unwrap().unwrap();
        assert!(x.iter().all(|v| (-1e-12..=1.0 + 1e-12).contains(v)));
    }

    #[test]
    fn degenerate_vertex_terminates() {
        // Many constraints through the same optimal vertex.
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..12 {
            let th = i as f64 * std::f64::consts::TAU / 12.0;
            rows.extend_from_slice(&[th.cos(), th.sin(), 1.0]);
            rhs.push(0.0);
        }
        rows.extend_from_slice(&[0.0, 0.0, -1.0]);
        rhs.push(5.0);
        let lp = LinearProgram::new(mat(13, 3, &rows), vecf(&rhs), vecf(&[0.0, 0.0, 1.0]), Sense::Maximize)
            .unwrap();
        let out = solve(&lp).unwrap();
        assert_eq!(out.status, LpStatus::Optimal);
        assert!(out.objective.abs() < 1e-9);
    }

    fn random_instance(seed: u64, m: usize, k: usize) -> (Matrix, Vector, Vector) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        // Bounded: include the box |x_j| ≤ 10; feasible: b chosen at a point.
        let x0 = Vector::from_fn(k, |_, _| rng.random_range(-1.0..1.0));
        let mut a = Matrix::zeros(m + 2 * k, k);
        let mut b = Vector::zeros(m + 2 * k);
        for i in 0..m {
            for j in 0..k {
                a[(i, j)] = rng.random_range(-1.0..1.0);
            }
            b[i] = a.row(i).dot(&x0.transpose()) + rng.random_range(0.0..2.0);
        }
        for j in 0..k {
            a[(m + 2 * j, j)] = 1.0;
            a[(m + 2 * j + 1, j)] = -1.0;
            b[m + 2 * j] = 10.0;
            b[m + 2 * j + 1] = 10.0;
        }
        let c = Vector::from_fn(k, |_, _| rng.random_range(-1.0..1.0));
        (a, b, c)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn strong_duality(seed in 0u64..10_000, m in 1usize..28, k in 1usize..8) {
            let (a, b, c) = random_instance(seed, m, k);
            let primal = solve(&LinearProgram::new(a.clone(), b.clone(), c.clone(), Sense::Maximize).unwrap()).unwrap();
            prop_assert_eq!(primal.status, LpStatus::Optimal);
            let x = primal.x.clone().unwrap();
            let resid = &a * &x - &b;
            prop_assert!(resid.max() <= 1e-8 * (1.0 + b.amax()));

            // Dual: min bᵀy  s.t.  Aᵀy = c, y ≥ 0.
            let rows = a.nrows();
            let mut da = Matrix::zeros(2 * k + rows, rows);
            let mut db = Vector::zeros(2 * k + rows);
            for j in 0..k {
                for i in 0..rows {
                    da[(j, i)] = a[(i, j)];
                    da[(k + j, i)] = -a[(i, j)];
                }
                db[j] = c[j];
                db[k + j] = -c[j];
            }
            for i in 0..rows {
                da[(2 * k + i, i)] = -1.0;
            }
            let dual = solve(&LinearProgram::new(da, db, b.clone(), Sense::Minimize).unwrap()).unwrap();
            prop_assert_eq!(dual.status, LpStatus::Optimal);
            let gap = (primal.objective - dual.objective).abs();
            prop_assert!(gap <= 1e-6 * (1.0 + primal.objective.abs()), "gap {}", gap);
        }

        #[test]
        fn row_permutation_invariance(seed in 0u64..10_000, m in 1usize..20, k in 1usize..6) {
            let (a, b, c) = random_instance(seed, m, k);
            let rows = a.nrows();
            let perm: Vec<usize> = (0..rows).rev().collect();
            let pa = Matrix::from_fn(rows, k, |i, j| a[(perm[i], j)]);
            let pb = Vector::from_fn(rows, |i, _| b[perm[i]]);
            let o1 = solve(&LinearProgram::new(a, b, c.clone(), Sense::Maximize).unwrap()).unwrap();
            let o2 = solve(&LinearProgram::new(pa, pb, c, Sense::Maximize).unwrap()).unwrap();
            prop_assert_eq!(o1.status, o2.status);
            prop_assert!((o1.objective - o2.objective).abs() <= 1e-8 * (1.0 + o1.objective.abs()));
        }
    }
}
