//! Dense two-phase primal simplex.
//!
//! Intended for small models (the brute-force oracle and the native engine).
//! Integrality flags are ignored. Columns are shifted to a zero lower bound
//! (or flipped/split when the lower bound is infinite), finite upper bounds
//! become explicit rows, and the final basis is re-solved with an LU
//! factorisation of the original columns to wash out pivoting error.

use nalgebra::{DMatrix, DVector};

use super::{EngineError, EngineSolution, EngineStatus, LpModel};

const PIVOT_TOL: f64 = 1e-9;
const COST_TOL: f64 = 1e-9;
const DEGENERATE_SWITCH: usize = 50;

#[derive(Clone, Copy, Debug)]
enum ColMap {
    /// x = offset + y
    Shift { offset: f64, y: usize },
    /// x = offset - y
    Flip { offset: f64, y: usize },
    /// x = y_pos - y_neg
    Split { pos: usize, neg: usize },
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Kind {
    Le,
    Ge,
    Eq,
}

struct StdRow {
    coeffs: Vec<(usize, f64)>,
    kind: Kind,
    rhs: f64,
}

struct Tableau {
    /// Live constraint rows followed by the reduced-cost row, row-major.
    data: Vec<f64>,
    width: usize,
    rows: usize,
    basis: Vec<usize>,
    dead: Vec<bool>,
    n_cols: usize,
}

impl Tableau {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.width + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.data[i * self.width + self.n_cols]
    }

    fn obj_row(&self) -> usize {
        self.rows
    }

    fn pivot(&mut self, r: usize, e: usize) {
        let w = self.width;
        let p = self.data[r * w + e];
        for k in 0..w {
            self.data[r * w + k] /= p;
        }
        let pivot_row: Vec<f64> = self.data[r * w..(r + 1) * w].to_vec();
        for i in 0..=self.rows {
            if i == r {
                continue;
            }
            let f = self.data[i * w + e];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.data[i * w..(i + 1) * w];
            for (x, pv) in row.iter_mut().zip(&pivot_row) {
                *x -= f * pv;
            }
            row[e] = 0.0;
        }
        self.basis[r] = e;
    }

    /// Rebuilds the reduced-cost row for `cost` (length `n_cols`).
    fn set_objective(&mut self, cost: &[f64]) {
        let w = self.width;
        let o = self.obj_row();
        for j in 0..self.n_cols {
            self.data[o * w + j] = cost[j];
        }
        self.data[o * w + self.n_cols] = 0.0;
        for i in 0..self.rows {
            if self.dead[i] {
                continue;
            }
            let cb = cost[self.basis[i]];
            if cb == 0.0 {
                continue;
            }
            for k in 0..w {
                self.data[o * w + k] -= cb * self.data[i * w + k];
            }
        }
    }

    /// Runs primal simplex on the current objective row. `allowed[j]` marks
    /// columns that may enter. Returns false when unbounded.
    fn optimise(&mut self, allowed: &[bool], max_iter: usize) -> Result<bool, EngineError> {
        let o = self.obj_row();
        let mut degenerate = 0usize;
        for _ in 0..max_iter {
            let bland = degenerate > DEGENERATE_SWITCH;
            let mut entering = None;
            let mut best = -COST_TOL;
            for j in 0..self.n_cols {
                if !allowed[j] {
                    continue;
                }
                let d = self.at(o, j);
                if d < best {
                    entering = Some(j);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(e) = entering else {
                return Ok(true);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows {
                if self.dead[i] {
                    continue;
                }
                let a = self.at(i, e);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i).max(0.0) / a;
                    match leave {
                        None => leave = Some((i, ratio)),
                        Some((li, lr)) => {
                            let tie = (ratio - lr).abs() <= 1e-12 * (1.0 + lr.abs());
                            if ratio < lr && !tie || tie && self.basis[i] < self.basis[li] {
                                leave = Some((i, ratio));
                            }
                        }
                    }
                }
            }
            let Some((r, ratio)) = leave else {
                return Ok(false);
            };
            if ratio <= 1e-12 {
                degenerate += 1;
            } else {
                degenerate = 0;
            }
            self.pivot(r, e);
        }
        Err(EngineError::Failed {
            engine: "native",
            reason: format!("simplex iteration limit ({max_iter}) reached"),
        })
    }
}

/// Solves the continuous relaxation of `model`.
pub fn solve_lp(model: &LpModel) -> Result<EngineSolution, EngineError> {
    // Column substitution.
    let mut maps = Vec::with_capacity(model.num_cols());
    let mut n_y = 0usize;
    let mut std_rows: Vec<StdRow> = Vec::new();
    for j in 0..model.num_cols() {
        let (l, u) = (model.col_lower[j], model.col_upper[j]);
        if l > u {
            return Ok(EngineSolution::without_point(EngineStatus::Infeasible));
        }
        if l.is_finite() {
            maps.push(ColMap::Shift { offset: l, y: n_y });
            if u.is_finite() {
                std_rows.push(StdRow {
                    coeffs: vec![(n_y, 1.0)],
                    kind: Kind::Le,
                    rhs: u - l,
                });
            }
            n_y += 1;
        } else if u.is_finite() {
            maps.push(ColMap::Flip { offset: u, y: n_y });
            n_y += 1;
        } else {
            maps.push(ColMap::Split { pos: n_y, neg: n_y + 1 });
            n_y += 2;
        }
    }

    let mut cost_y = vec![0.0; n_y];
    for (j, m) in maps.iter().enumerate() {
        let c = model.col_cost[j];
        match *m {
            ColMap::Shift { y, .. } => cost_y[y] += c,
            ColMap::Flip { y, .. } => cost_y[y] -= c,
            ColMap::Split { pos, neg } => {
                cost_y[pos] += c;
                cost_y[neg] -= c;
            }
        }
    }

    for row in &model.rows {
        let mut constant = 0.0;
        let mut coeffs = Vec::with_capacity(row.coeffs.len());
        for &(j, a) in &row.coeffs {
            match maps[j] {
                ColMap::Shift { offset: o, y } => {
                    constant += a * o;
                    coeffs.push((y, a));
                }
                ColMap::Flip { offset: o, y } => {
                    constant += a * o;
                    coeffs.push((y, -a));
                }
                ColMap::Split { pos, neg } => {
                    coeffs.push((pos, a));
                    coeffs.push((neg, -a));
                }
            }
        }
        let (lo, hi) = (row.lower - constant, row.upper - constant);
        if row.lower == row.upper {
            std_rows.push(StdRow { coeffs, kind: Kind::Eq, rhs: hi });
            continue;
        }
        if row.lower > row.upper {
            return Ok(EngineSolution::without_point(EngineStatus::Infeasible));
        }
        if hi.is_finite() {
            std_rows.push(StdRow { coeffs: coeffs.clone(), kind: Kind::Le, rhs: hi });
        }
        if lo.is_finite() {
            std_rows.push(StdRow { coeffs, kind: Kind::Ge, rhs: lo });
        }
    }

    // Column layout: y | slacks | artificials.
    let m = std_rows.len();
    let n_slack = std_rows.iter().filter(|r| r.kind != Kind::Eq).count();
    let mut needs_art = Vec::with_capacity(m);
    for r in &std_rows {
        let need = match r.kind {
            Kind::Le => r.rhs < 0.0,
            Kind::Ge => r.rhs > 0.0,
            Kind::Eq => true,
        };
        needs_art.push(need);
    }
    let n_art = needs_art.iter().filter(|&&b| b).count();
    let n_cols = n_y + n_slack + n_art;
    let width = n_cols + 1;

    let mut tab = Tableau {
        data: vec![0.0; (m + 1) * width],
        width,
        rows: m,
        basis: vec![0; m],
        dead: vec![false; m],
        n_cols,
    };
    let mut slack = n_y;
    let mut art = n_y + n_slack;
    for (i, r) in std_rows.iter().enumerate() {
        let row = &mut tab.data[i * width..(i + 1) * width];
        for &(y, a) in &r.coeffs {
            row[y] += a;
        }
        let mut slack_col = None;
        match r.kind {
            Kind::Le => {
                row[slack] = 1.0;
                slack_col = Some(slack);
                slack += 1;
            }
            Kind::Ge => {
                row[slack] = -1.0;
                slack_col = Some(slack);
                slack += 1;
            }
            Kind::Eq => {}
        }
        row[n_cols] = r.rhs;
        // A `>=` row without an artificial has rhs <= 0; negating it puts a
        // +1 slack in the starting basis.
        if row[n_cols] < 0.0 || (r.kind == Kind::Ge && !needs_art[i]) {
            for x in row.iter_mut() {
                *x = -*x;
            }
        }
        if needs_art[i] {
            row[art] = 1.0;
            tab.basis[i] = art;
            art += 1;
        } else {
            tab.basis[i] = slack_col.expect("rows without artificial have a slack");
        }
    }
    let original = tab.data[..m * width].to_vec();
    let max_iter = 50 * (m + n_cols) + 1000;
    let is_art = |j: usize| j >= n_y + n_slack;

    // Phase 1.
    if n_art > 0 {
        let mut c1 = vec![0.0; n_cols];
        for c in c1.iter_mut().skip(n_y + n_slack) {
            *c = 1.0;
        }
        tab.set_objective(&c1);
        let allowed = vec![true; n_cols];
        tab.optimise(&allowed, max_iter)?;
        let infeas = -tab.rhs(tab.obj_row());
        let scale = 1.0 + std_rows.iter().map(|r| r.rhs.abs()).fold(0.0, f64::max);
        if infeas > 1e-7 * scale {
            return Ok(EngineSolution::without_point(EngineStatus::Infeasible));
        }
        for i in 0..m {
            if !is_art(tab.basis[i]) {
                continue;
            }
            let mut best: Option<(usize, f64)> = None;
            for j in 0..n_y + n_slack {
                let a = tab.at(i, j).abs();
                if a > PIVOT_TOL && best.is_none_or(|(_, b)| a > b) {
                    best = Some((j, a));
                }
            }
            match best {
                Some((j, _)) => tab.pivot(i, j),
                None => tab.dead[i] = true,
            }
        }
    }

    // Phase 2.
    let mut c2 = vec![0.0; n_cols];
    c2[..n_y].copy_from_slice(&cost_y);
    tab.set_objective(&c2);
    let allowed: Vec<bool> = (0..n_cols).map(|j| !is_art(j)).collect();
    if !tab.optimise(&allowed, max_iter)? {
        return Ok(EngineSolution::without_point(EngineStatus::Unbounded));
    }

    let mut z = vec![0.0; n_cols];
    for i in 0..m {
        if !tab.dead[i] {
            z[tab.basis[i]] = tab.rhs(i).max(0.0);
        }
    }
    polish(&original, width, &tab, &mut z);

    let mut x = vec![0.0; model.num_cols()];
    for (j, map) in maps.iter().enumerate() {
        let v = match *map {
            ColMap::Shift { offset, y } => offset + z[y],
            ColMap::Flip { offset, y } => offset - z[y],
            ColMap::Split { pos, neg } => z[pos] - z[neg],
        };
        x[j] = v.clamp(model.col_lower[j], model.col_upper[j]);
    }
    Ok(EngineSolution {
        status: EngineStatus::Optimal,
        objective: model.objective(&x),
        values: x,
    })
}

/// Replaces basic values by a direct solve of `B z_B = b` on the original
/// rows. Keeps the tableau values if the factorisation is unusable.
fn polish(original: &[f64], width: usize, tab: &Tableau, z: &mut [f64]) {
    let live: Vec<usize> = (0..tab.rows).filter(|&i| !tab.dead[i]).collect();
    let k = live.len();
    if k == 0 {
        return;
    }
    let n_cols = tab.n_cols;
    let b_mat = DMatrix::from_fn(k, k, |r, c| original[live[r] * width + tab.basis[live[c]]]);
    let rhs = DVector::from_fn(k, |r, _| original[live[r] * width + n_cols]);
    let Some(sol) = b_mat.lu().solve(&rhs) else {
        return;
    };
    if sol.iter().any(|v| !v.is_finite() || *v < -1e-7) {
        return;
    }
    for (c, &i) in live.iter().enumerate() {
        z[tab.basis[i]] = sol[c].max(0.0);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::LpRow;

    fn row(coeffs: &[(usize, f64)], lower: f64, upper: f64) -> LpRow {
        LpRow { coeffs: coeffs.to_vec(), lower, upper }
    }

    #[test]
    fn zero_rhs_lower_bound_row() {
        // min y - x, y - x >= 0, x <= 4 ; y is pushed up to x
        let lp = LpModel {
            col_lower: vec![0.0, 0.0],
            col_upper: vec![4.0, f64::INFINITY],
            col_cost: vec![-2.0, 1.0],
            integer: vec![false; 2],
            rows: vec![row(&[(1, 1.0), (0, -1.0)], 0.0, f64::INFINITY)],
            offset: 0.0,
        };
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, EngineStatus::Optimal);
        assert!((sol.values[0] - 4.0).abs() < 1e-12 && (sol.values[1] - 4.0).abs() < 1e-12, "{:?}", sol.values);
        assert!((sol.objective + 4.0).abs() < 1e-12);
    }

    #[test]
    fn equality_and_range_rows() {
        // min x + 2y, x + y = 3, 1 <= x - y <= 2, y in [0, 5]
        let lp = LpModel {
            col_lower: vec![f64::NEG_INFINITY, 0.0],
            col_upper: vec![f64::INFINITY, 5.0],
            col_cost: vec![1.0, 2.0],
            integer: vec![false; 2],
            rows: vec![row(&[(0, 1.0), (1, 1.0)], 3.0, 3.0), row(&[(0, 1.0), (1, -1.0)], 1.0, 2.0)],
            offset: 10.0,
        };
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, EngineStatus::Optimal);
        // Smallest y: x - y <= 2 with x = 3 - y gives y >= 0.5.
        assert!((sol.values[1] - 0.5).abs() < 1e-12);
        assert!((sol.objective - (10.0 + 2.5 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn flipped_column() {
        // max x (min -x), x <= 4 with no lower bound, x + 0 >= -10
        let lp = LpModel {
            col_lower: vec![f64::NEG_INFINITY],
            col_upper: vec![4.0],
            col_cost: vec![-1.0],
            integer: vec![false],
            rows: vec![row(&[(0, 1.0)], -10.0, f64::INFINITY)],
            offset: 0.0,
        };
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.values, vec![4.0]);
    }

    #[test]
    fn redundant_equalities_are_tolerated() {
        let lp = LpModel {
            col_lower: vec![0.0, 0.0],
            col_upper: vec![f64::INFINITY; 2],
            col_cost: vec![1.0, 1.0],
            integer: vec![false; 2],
            rows: vec![
                row(&[(0, 1.0), (1, 1.0)], 2.0, 2.0),
                row(&[(0, 2.0), (1, 2.0)], 4.0, 4.0),
            ],
            offset: 0.0,
        };
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, EngineStatus::Optimal);
        assert!((sol.objective - 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_cycling_example() {
        // Beale's example, which cycles under naive Dantzig pricing.
        let lp = LpModel {
            col_lower: vec![0.0; 4],
            col_upper: vec![f64::INFINITY; 4],
            col_cost: vec![-0.75, 150.0, -0.02, 6.0],
            integer: vec![false; 4],
            rows: vec![
                row(&[(0, 0.25), (1, -60.0), (2, -0.04), (3, 9.0)], f64::NEG_INFINITY, 0.0),
                row(&[(0, 0.5), (1, -90.0), (2, -0.02), (3, 3.0)], f64::NEG_INFINITY, 0.0),
                row(&[(2, 1.0)], f64::NEG_INFINITY, 1.0),
            ],
            offset: 0.0,
        };
        let sol = solve_lp(&lp).unwrap();
        assert_eq!(sol.status, EngineStatus::Optimal);
        assert!((sol.objective + 0.05).abs() < 1e-9, "{}", sol.objective);
    }
}
