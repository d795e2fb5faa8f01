//! Assembles the plant-wide scheduling model for a flexibility mode, solves it
//! through a [`MilpEngine`], and checks the answer before handing it back.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plant::{
    ae_constraints, grid_constraints, heater_and_thermal_constraints, hydrogen_storage_constraints,
    power_balance, Block, CostTerm, LinearConstraint, Relation, VarDecl, VarFamily, VarRef,
};
use crate::scenario::{FlexMode, ScenarioConfig, ScenarioError};
use crate::solver::{simplex, EngineError, EngineStatus, LpModel, LpRow, MilpEngine};

/// Residual allowed on any row or bound of a returned solution.
pub const FEASIBILITY_TOL: f64 = 1e-6;
/// Penalty on purchases and sales that picks one optimum among equals, $/MWh.
pub const TIE_BREAK: f64 = 1e-9;
/// Largest horizon the enumeration oracle accepts.
pub const ORACLE_MAX_HORIZON: usize = 4;

pub const DISPATCH_HEADER: [&str; 13] = [
    "hour", "P_AE", "P_buy", "P_sell", "P_Eh", "P_Leh", "P_comp", "P_exp", "M_DRI_dis",
    "M_DRI_QSS", "HT", "Lts", "b_grid",
];

const DISPATCH_FAMILIES: [VarFamily; 12] = [
    VarFamily::PAe,
    VarFamily::PBuy,
    VarFamily::PSell,
    VarFamily::PEh,
    VarFamily::PLeh,
    VarFamily::PComp,
    VarFamily::PExp,
    VarFamily::MDriDis,
    VarFamily::MDriQss,
    VarFamily::Ht,
    VarFamily::Lts,
    VarFamily::BGrid,
];

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error("variable {0} declared twice")]
    DuplicateVar(VarRef),
    #[error("constraint `{constraint}` references undeclared variable {var}")]
    UndeclaredVar { var: VarRef, constraint: String },
}

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Build(#[from] BuildError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("engine `{engine}` returned a point violating `{constraint}` by {residual:e}")]
    Inconsistent {
        engine: String,
        constraint: String,
        residual: f64,
    },
    #[error("the enumeration oracle handles at most {ORACLE_MAX_HORIZON} hours, got {0}")]
    HorizonTooLarge(usize),
    #[error("cannot read solution files: {0}")]
    Io(String),
}

/// The complete model for one scenario and mode.
#[derive(Clone, Debug)]
pub struct ScheduleProblem {
    pub mode: FlexMode,
    pub horizon: usize,
    pub dri_order: f64,
    pub scenario_id: String,
    pub variables: Vec<VarDecl>,
    pub constraints: Vec<LinearConstraint>,
    pub costs: Vec<CostTerm>,
    /// Objective terms outside the reported cost (tie-breaking only).
    pub tie_break: Vec<(VarRef, f64)>,
    index: HashMap<VarRef, usize>,
}

impl ScheduleProblem {
    pub fn index_of(&self, var: VarRef) -> Option<usize> {
        self.index.get(&var).copied()
    }

    pub fn objective_constant(&self) -> f64 {
        self.costs.iter().map(|c| c.constant).sum()
    }

    /// Dense objective coefficients including the tie-break penalty.
    fn objective_coefficients(&self) -> Vec<f64> {
        let mut cost = vec![0.0; self.variables.len()];
        for term in &self.costs {
            for &(r, c) in &term.terms {
                cost[self.index[&r]] += c;
            }
        }
        for &(r, c) in &self.tie_break {
            cost[self.index[&r]] += c;
        }
        cost
    }

    pub fn to_lp_model(&self) -> LpModel {
        let rows = self
            .constraints
            .iter()
            .map(|c| {
                let (lower, upper) = match c.relation {
                    Relation::Le => (f64::NEG_INFINITY, c.rhs),
                    Relation::Ge => (c.rhs, f64::INFINITY),
                    Relation::Eq => (c.rhs, c.rhs),
                };
                LpRow {
                    coeffs: c.terms.iter().map(|&(r, a)| (self.index[&r], a)).collect(),
                    lower,
                    upper,
                }
            })
            .collect();
        LpModel {
            col_lower: self.variables.iter().map(|d| d.lower).collect(),
            col_upper: self.variables.iter().map(|d| d.upper).collect(),
            col_cost: self.objective_coefficients(),
            integer: self.variables.iter().map(|d| d.binary).collect(),
            rows,
            offset: self.objective_constant(),
        }
    }

    /// CPLEX-style LP text; variables are named `FAMILY_t`.
    pub fn to_lp_string(&self) -> String {
        let cost = self.objective_coefficients();
        let mut out = String::new();
        let _ = writeln!(out, "\\ mode {} scenario {}", self.mode, self.scenario_id);
        let _ = writeln!(out, "\\ objective constant {}", self.objective_constant());
        out.push_str("Minimize\n obj:");
        let mut any = false;
        for (d, c) in self.variables.iter().zip(&cost) {
            if *c != 0.0 {
                write_term(&mut out, *c, d.var, !any);
                any = true;
            }
        }
        if !any {
            out.push_str(" 0");
        }
        out.push_str("\nSubject To\n");
        for c in &self.constraints {
            let _ = write!(out, " {}:", c.name);
            for (i, &(r, a)) in c.terms.iter().enumerate() {
                write_term(&mut out, a, r, i == 0);
            }
            let _ = writeln!(out, " {} {}", c.relation.symbol(), c.rhs);
        }
        out.push_str("Bounds\n");
        for d in self.variables.iter().filter(|d| !d.binary) {
            match (d.lower.is_finite(), d.upper.is_finite()) {
                (true, true) => {
                    let _ = writeln!(out, " {} <= {} <= {}", d.lower, d.var, d.upper);
                }
                (true, false) => {
                    let _ = writeln!(out, " {} >= {}", d.var, d.lower);
                }
                (false, true) => {
                    let _ = writeln!(out, " -inf <= {} <= {}", d.var, d.upper);
                }
                (false, false) => {
                    let _ = writeln!(out, " {} free", d.var);
                }
            }
        }
        out.push_str("Binaries\n");
        for d in self.variables.iter().filter(|d| d.binary) {
            let _ = writeln!(out, " {}", d.var);
        }
        out.push_str("End\n");
        out
    }
}

fn write_term(out: &mut String, coeff: f64, var: VarRef, first: bool) {
    let sign = if coeff < 0.0 { "-" } else { "+" };
    let mag = coeff.abs();
    if first && coeff >= 0.0 {
        let _ = write!(out, " {mag} {var}");
    } else {
        let _ = write!(out, " {sign} {mag} {var}");
    }
}

fn v(family: VarFamily, t: usize) -> VarRef {
    VarRef::new(family, t)
}

/// Furnace setpoints, realised discharge, transition/ramp rows, the order
/// constraint and the ore + furnace operating cost. Owns `M_DRI_QSS` and
/// `M_DRI_dis`.
///
/// In the fixed-rate modes the setpoints are pinned to `order / T` and the
/// furnace starts there, so the realised discharge is that constant.
pub fn furnace_constraints(cfg: &ScenarioConfig) -> Block {
    let sf = &cfg.sf;
    let horizon = cfg.horizon;
    let rate = cfg.baseline_rate();
    let flexible = cfg.mode == FlexMode::AeSfFlex;
    let (q_lo, q_hi) = if flexible { (sf.m_min, sf.m_max) } else { (rate, rate) };
    let q0 = if flexible { sf.q_init.unwrap_or(rate) } else { rate };
    let beta = sf.lag_factor();

    let mut b = Block::default();
    for t in 1..=horizon {
        b.vars.push(VarDecl {
            var: v(VarFamily::MDriQss, t),
            lower: q_lo,
            upper: q_hi,
            binary: false,
        });
        b.vars.push(VarDecl {
            var: v(VarFamily::MDriDis, t),
            lower: 0.0,
            upper: sf.m_max,
            binary: false,
        });
    }
    let mut push = |name: String, terms: Vec<(VarRef, f64)>, rel, rhs| {
        b.constraints.push(LinearConstraint::new(name, terms, rel, rhs));
    };
    push(
        "sf_transition_1".into(),
        vec![(v(VarFamily::MDriDis, 1), 1.0), (v(VarFamily::MDriQss, 1), -(1.0 - beta))],
        Relation::Eq,
        beta * q0,
    );
    push(
        "sf_ramp_up_1".into(),
        vec![(v(VarFamily::MDriQss, 1), 1.0)],
        Relation::Le,
        q0 + sf.ramp_up,
    );
    push(
        "sf_ramp_dn_1".into(),
        vec![(v(VarFamily::MDriQss, 1), 1.0)],
        Relation::Ge,
        q0 + sf.ramp_dn,
    );
    for t in 1..horizon {
        push(
            format!("sf_transition_{}", t + 1),
            vec![
                (v(VarFamily::MDriDis, t + 1), 1.0),
                (v(VarFamily::MDriQss, t), -beta),
                (v(VarFamily::MDriQss, t + 1), -(1.0 - beta)),
            ],
            Relation::Eq,
            0.0,
        );
        let step = vec![(v(VarFamily::MDriQss, t + 1), 1.0), (v(VarFamily::MDriQss, t), -1.0)];
        push(format!("sf_ramp_up_{}", t + 1), step.clone(), Relation::Le, sf.ramp_up);
        push(format!("sf_ramp_dn_{}", t + 1), step, Relation::Ge, sf.ramp_dn);
    }
    push(
        "dri_order".into(),
        (1..=horizon).map(|t| (v(VarFamily::MDriDis, t), sf.dt)).collect(),
        Relation::Eq,
        cfg.dri_order,
    );
    b.costs.push(CostTerm {
        label: "dri_ore_and_furnace",
        terms: (1..=horizon)
            .map(|t| (v(VarFamily::MDriDis, t), (cfg.plant.c_ore + cfg.plant.c_sf) * sf.dt))
            .collect(),
        constant: 0.0,
    });
    b
}

/// Builds the full model for `cfg.mode`.
pub fn build_problem(cfg: &ScenarioConfig) -> Result<ScheduleProblem, BuildError> {
    cfg.validate()?;
    let horizon = cfg.horizon;
    let mut block = Block::default();
    block.extend(furnace_constraints(cfg));
    block.extend(ae_constraints(cfg));
    block.extend(hydrogen_storage_constraints(cfg));
    block.extend(heater_and_thermal_constraints(cfg));
    block.extend(grid_constraints(cfg));
    block.extend(power_balance(cfg));

    if cfg.mode == FlexMode::Baseline {
        for t in 2..=horizon {
            block.constraints.push(LinearConstraint::new(
                format!("ae_fixed_{t}"),
                vec![(v(VarFamily::PAe, t), 1.0), (v(VarFamily::PAe, 1), -1.0)],
                Relation::Eq,
                0.0,
            ));
        }
    }

    let mut index = HashMap::with_capacity(block.vars.len());
    for (i, d) in block.vars.iter().enumerate() {
        if index.insert(d.var, i).is_some() {
            return Err(BuildError::DuplicateVar(d.var));
        }
    }
    for c in &block.constraints {
        for (r, _) in &c.terms {
            if !index.contains_key(r) {
                return Err(BuildError::UndeclaredVar {
                    var: *r,
                    constraint: c.name.clone(),
                });
            }
        }
    }
    for term in &block.costs {
        for (r, _) in &term.terms {
            if !index.contains_key(r) {
                return Err(BuildError::UndeclaredVar {
                    var: *r,
                    constraint: format!("cost:{}", term.label),
                });
            }
        }
    }

    let tie_break = (1..=horizon)
        .flat_map(|t| [(v(VarFamily::PBuy, t), TIE_BREAK), (v(VarFamily::PSell, t), TIE_BREAK)])
        .collect();

    Ok(ScheduleProblem {
        mode: cfg.mode,
        horizon,
        dri_order: cfg.dri_order,
        scenario_id: cfg.fingerprint(),
        variables: block.vars,
        constraints: block.constraints,
        costs: block.costs,
        tie_break,
        index,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl From<EngineStatus> for SolveStatus {
    fn from(s: EngineStatus) -> Self {
        match s {
            EngineStatus::Optimal => SolveStatus::Optimal,
            EngineStatus::Infeasible => SolveStatus::Infeasible,
            EngineStatus::Unbounded => SolveStatus::Unbounded,
        }
    }
}

/// Hourly values per variable family.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Dispatch {
    pub series: BTreeMap<VarFamily, Vec<f64>>,
}

impl Dispatch {
    /// Values of a family; empty when the family is not present.
    pub fn get(&self, family: VarFamily) -> &[f64] {
        self.series.get(&family).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn value(&self, var: VarRef) -> f64 {
        self.get(var.family).get(var.t - 1).copied().unwrap_or(0.0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostItem {
    pub term: String,
    pub usd: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScheduleSolution {
    pub status: SolveStatus,
    pub mode: FlexMode,
    pub engine: String,
    pub scenario_id: String,
    pub horizon: usize,
    pub dri_order: f64,
    pub dispatch: Dispatch,
    /// $; NaN unless optimal.
    pub objective_value: f64,
    pub cost_breakdown: Vec<CostItem>,
    /// $/t of DRI; NaN unless optimal.
    pub cost_per_ton: f64,
}

impl ScheduleSolution {
    fn without_point(problem: &ScheduleProblem, status: SolveStatus, engine: &str) -> Self {
        Self {
            status,
            mode: problem.mode,
            engine: engine.to_string(),
            scenario_id: problem.scenario_id.clone(),
            horizon: problem.horizon,
            dri_order: problem.dri_order,
            dispatch: Dispatch::default(),
            objective_value: f64::NAN,
            cost_breakdown: Vec::new(),
            cost_per_ton: f64::NAN,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SolveStatus::Optimal
    }
}

/// Checks a candidate point against every bound and row, then packages it.
fn finalize(problem: &ScheduleProblem, mut values: Vec<f64>, engine: &str) -> Result<ScheduleSolution, SolveError> {
    for (d, x) in problem.variables.iter().zip(values.iter_mut()) {
        let residual = (d.lower - *x).max(*x - d.upper).max(0.0);
        if residual > FEASIBILITY_TOL || !x.is_finite() {
            return Err(SolveError::Inconsistent {
                engine: engine.to_string(),
                constraint: format!("bounds of {}", d.var),
                residual,
            });
        }
        *x = x.clamp(d.lower, d.upper);
        if d.binary {
            *x = x.round();
        }
        if *x == 0.0 {
            *x = 0.0;
        }
    }
    let value_of = |r: VarRef| values[problem.index[&r]];
    for c in &problem.constraints {
        let residual = c.violation(value_of);
        if residual > FEASIBILITY_TOL {
            return Err(SolveError::Inconsistent {
                engine: engine.to_string(),
                constraint: c.name.clone(),
                residual,
            });
        }
    }
    let mut dispatch = Dispatch::default();
    for family in VarFamily::ALL {
        let series = (1..=family.len(problem.horizon))
            .map(|t| value_of(v(family, t)))
            .collect();
        dispatch.series.insert(family, series);
    }
    let cost_breakdown: Vec<CostItem> = problem
        .costs
        .iter()
        .map(|c| CostItem {
            term: c.label.to_string(),
            usd: c.evaluate(value_of),
        })
        .collect();
    let objective_value: f64 = cost_breakdown.iter().map(|c| c.usd).sum();
    Ok(ScheduleSolution {
        status: SolveStatus::Optimal,
        mode: problem.mode,
        engine: engine.to_string(),
        scenario_id: problem.scenario_id.clone(),
        horizon: problem.horizon,
        dri_order: problem.dri_order,
        dispatch,
        objective_value,
        cost_breakdown,
        cost_per_ton: objective_value / problem.dri_order,
    })
}

/// Solves `problem` and verifies the result.
///
/// After the mixed-integer solve the grid switches are rounded and the
/// remaining LP is solved again, so the returned point is exactly
/// complementary in purchases and sales.
pub fn solve(problem: &ScheduleProblem, engine: &dyn MilpEngine) -> Result<ScheduleSolution, SolveError> {
    let lp = problem.to_lp_model();
    let first = engine.solve(&lp)?;
    if first.status != EngineStatus::Optimal {
        return Ok(ScheduleSolution::without_point(problem, first.status.into(), engine.name()));
    }
    let fixed = engine.solve(&lp.with_integers_fixed(&first.values))?;
    if fixed.status != EngineStatus::Optimal {
        return Err(SolveError::Inconsistent {
            engine: engine.name().to_string(),
            constraint: "re-solve with switches fixed".into(),
            residual: f64::NAN,
        });
    }
    finalize(problem, fixed.values, engine.name())
}

/// Enumerates every assignment of the grid switches and solves each
/// remaining LP with the native simplex. Only for horizons up to four hours.
pub fn brute_force_oracle(cfg: &ScenarioConfig) -> Result<ScheduleSolution, SolveError> {
    if cfg.horizon > ORACLE_MAX_HORIZON {
        return Err(SolveError::HorizonTooLarge(cfg.horizon));
    }
    let problem = build_problem(cfg)?;
    let lp = problem.to_lp_model();
    let switches: Vec<usize> = (0..lp.num_cols()).filter(|&j| lp.integer[j]).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut unbounded = false;
    for mask in 0u32..(1 << switches.len()) {
        let mut sub = lp.clone();
        for (bit, &j) in switches.iter().enumerate() {
            let b = f64::from((mask >> bit) & 1);
            sub.col_lower[j] = b;
            sub.col_upper[j] = b;
            sub.integer[j] = false;
        }
        let sol = simplex::solve_lp(&sub)?;
        match sol.status {
            EngineStatus::Optimal => {
                if best.as_ref().is_none_or(|(obj, _)| sol.objective < *obj) {
                    best = Some((sol.objective, sol.values));
                }
            }
            EngineStatus::Unbounded => unbounded = true,
            EngineStatus::Infeasible => {}
        }
    }
    if unbounded {
        return Ok(ScheduleSolution::without_point(&problem, SolveStatus::Unbounded, "oracle"));
    }
    match best {
        Some((_, values)) => finalize(&problem, values, "oracle"),
        None => Ok(ScheduleSolution::without_point(&problem, SolveStatus::Infeasible, "oracle")),
    }
}

/// First aggregate condition that rules the scenario out, if any.
pub fn infeasibility_hint(cfg: &ScenarioConfig) -> Option<String> {
    let t = cfg.horizon as f64;
    let sf = &cfg.sf;
    let p = &cfg.plant;
    if cfg.dri_order > t * sf.m_max * sf.dt {
        return Some(format!(
            "dri_order: {} t exceeds horizon x m_max = {} t",
            cfg.dri_order,
            t * sf.m_max * sf.dt
        ));
    }
    if cfg.dri_order < t * sf.m_min * sf.dt {
        return Some(format!(
            "dri_order: {} t is below horizon x m_min = {} t",
            cfg.dri_order,
            t * sf.m_min * sf.dt
        ));
    }
    let (ae_lo, ae_hi) = p.ae_bounds();
    let demand: f64 = cfg.h2_request.values.iter().sum::<f64>() + sf.phi_h2 * cfg.dri_order;
    if demand * p.kappa_h2 > ae_hi * t {
        return Some(format!(
            "ht_terminal: hydrogen demand {demand:.3} t needs more than the electrolyzer maximum {ae_hi} MW"
        ));
    }
    if demand * p.kappa_h2 < ae_lo * t {
        return Some(format!(
            "ht_terminal: hydrogen demand {demand:.3} t is below what the electrolyzer minimum {ae_lo} MW produces"
        ));
    }
    if cfg.mode == FlexMode::Baseline {
        let rate = cfg.pinned_baseline_ae_power() / p.kappa_h2;
        let mut level = 0.5 * p.ht_cap;
        for (i, req) in cfg.h2_request.values.iter().enumerate() {
            level += (rate - req - sf.phi_h2 * cfg.baseline_rate()) * sf.dt;
            if level < p.ht_min - 1e-9 || level > p.ht_max + 1e-9 {
                return Some(format!(
                    "ht_balance_{}: constant electrolyzer output drives the tank to {level:.3} t",
                    i + 1
                ));
            }
        }
    }
    None
}

/// JSON summary written next to the dispatch CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionSummary {
    pub status: SolveStatus,
    pub mode: FlexMode,
    pub engine: String,
    pub scenario_id: String,
    pub horizon: usize,
    pub dri_order_t: f64,
    pub objective: Option<f64>,
    pub cost_per_ton: Option<f64>,
    pub breakdown: Vec<CostItem>,
    pub ht_terminal: Option<f64>,
    pub lts_terminal: Option<f64>,
}

impl ScheduleSolution {
    pub fn summary(&self) -> SolutionSummary {
        let finite = |x: f64| x.is_finite().then_some(x);
        SolutionSummary {
            status: self.status,
            mode: self.mode,
            engine: self.engine.clone(),
            scenario_id: self.scenario_id.clone(),
            horizon: self.horizon,
            dri_order_t: self.dri_order,
            objective: finite(self.objective_value),
            cost_per_ton: finite(self.cost_per_ton),
            breakdown: self.cost_breakdown.clone(),
            ht_terminal: self.dispatch.get(VarFamily::Ht).last().copied(),
            lts_terminal: self.dispatch.get(VarFamily::Lts).last().copied(),
        }
    }

    /// Dispatch table with one row per hour. States are reported at the
    /// start of the hour.
    pub fn dispatch_csv(&self) -> String {
        let mut out = DISPATCH_HEADER.join(",");
        out.push('\n');
        for t in 1..=self.dispatch.get(VarFamily::PAe).len() {
            let mut fields = vec![t.to_string()];
            for family in DISPATCH_FAMILIES {
                let x = self.dispatch.value(v(family, t));
                fields.push(if family.is_binary() {
                    format!("{}", x.round() as i64)
                } else {
                    format!("{x}")
                });
            }
            out.push_str(&fields.join(","));
            out.push('\n');
        }
        out
    }

    pub fn summary_json(&self) -> String {
        serde_json::to_string_pretty(&self.summary()).expect("summary serializes") + "\n"
    }

    /// Rebuilds a solution from a dispatch CSV and its JSON summary. Only the
    /// exported families are present in the dispatch; storage states lose
    /// their terminal entry unless the summary carries it.
    pub fn from_files(dispatch_csv: &Path, summary_json: &Path) -> Result<Self, SolveError> {
        let io = |p: &Path, e: &dyn std::fmt::Display| SolveError::Io(format!("{}: {e}", p.display()));
        let summary: SolutionSummary = serde_json::from_str(
            &fs::read_to_string(summary_json).map_err(|e| io(summary_json, &e))?,
        )
        .map_err(|e| io(summary_json, &e))?;
        let text = fs::read_to_string(dispatch_csv).map_err(|e| io(dispatch_csv, &e))?;
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let header = reader.headers().map_err(|e| io(dispatch_csv, &e))?.clone();
        if header.iter().ne(DISPATCH_HEADER.iter().copied()) {
            return Err(io(dispatch_csv, &"unexpected header"));
        }
        let mut dispatch = Dispatch::default();
        for record in reader.records() {
            let record = record.map_err(|e| io(dispatch_csv, &e))?;
            for (k, family) in DISPATCH_FAMILIES.iter().enumerate() {
                let x: f64 = record[k + 1].parse().map_err(|e| io(dispatch_csv, &e))?;
                dispatch.series.entry(*family).or_default().push(x);
            }
        }
        if let Some(h) = summary.ht_terminal {
            dispatch.series.entry(VarFamily::Ht).or_default().push(h);
        }
        if let Some(l) = summary.lts_terminal {
            dispatch.series.entry(VarFamily::Lts).or_default().push(l);
        }
        Ok(Self {
            status: summary.status,
            mode: summary.mode,
            engine: summary.engine,
            scenario_id: summary.scenario_id,
            horizon: summary.horizon,
            dri_order: summary.dri_order_t,
            dispatch,
            objective_value: summary.objective.unwrap_or(f64::NAN),
            cost_breakdown: summary.breakdown,
            cost_per_ton: summary.cost_per_ton.unwrap_or(f64::NAN),
        })
    }
}
