//! Shaft furnace limited-flexibility model.
//!
//! Between two hourly quasi-steady setpoints the discharge follows a
//! first-order lag, so the realised discharge at the end of a step is a convex
//! blend of the two setpoints with weight `beta = exp(-dt / t_trans)` on the
//! old one. This module also hosts a surrogate dynamic plant that plays the
//! role of a detailed reference model, a least-squares fit of `beta`, and the
//! metallization band check used to accept a regulation run.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Clamp applied to the fitted lag factor so that `ln(beta)` stays finite.
pub const BETA_CLAMP: f64 = 1e-6;

#[derive(Debug, Error)]
pub enum SfFlexError {
    #[error("invalid furnace parameters: {0}")]
    InvalidParams(String),
    #[error("setpoint {value} t/h at step {index} is outside [{min}, {max}]")]
    SetpointOutOfBounds {
        index: usize,
        value: f64,
        min: f64,
        max: f64,
    },
    #[error("setpoint change {delta} t/h into step {index} violates ramp limits [{dn}, {up}]")]
    RampViolation {
        index: usize,
        delta: f64,
        dn: f64,
        up: f64,
    },
    #[error("discharge rate must be non-negative, got {0}")]
    NegativeInput(f64),
    #[error("trajectory has no setpoint change; the transition constant is unidentifiable")]
    Unidentifiable,
    #[error("trajectory needs at least {0} steps")]
    TooShort(usize),
    #[error("qss and dis lengths differ ({qss} vs {dis})")]
    LengthMismatch { qss: usize, dis: usize },
    #[error("trajectory carries no metallization series")]
    MissingMetallization,
    #[error("surrogate produced a non-finite value at t = {0} h")]
    Unstable(f64),
    #[error("invalid surrogate: {0}")]
    InvalidSurrogate(String),
    #[error("trajectory file {path}: {reason}")]
    File { path: String, reason: String },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SfFlexParams {
    /// Transition time constant, h.
    pub t_trans: f64,
    /// Scheduling step, h.
    pub dt: f64,
    /// Discharge envelope, t/h.
    pub m_min: f64,
    pub m_max: f64,
    /// Signed per-step setpoint change limits, t/h.
    pub ramp_dn: f64,
    pub ramp_up: f64,
    /// Rated discharge, t/h. Reference for relative errors.
    pub m_rated: f64,
    /// Net hydrogen consumed per tonne of DRI discharged, t/t.
    pub phi_h2: f64,
    /// Setpoint in force before the first scheduled hour. Defaults to the
    /// order's constant rate.
    pub q_init: Option<f64>,
}

impl Default for SfFlexParams {
    fn default() -> Self {
        Self {
            t_trans: 1.27,
            dt: 1.0,
            m_min: 30.0,
            m_max: 150.0,
            ramp_dn: -60.0,
            ramp_up: 60.0,
            m_rated: 125.0,
            phi_h2: 0.06,
            q_init: None,
        }
    }
}

impl SfFlexParams {
    pub fn validate(&self) -> Result<(), SfFlexError> {
        let bad = |m: &str| Err(SfFlexError::InvalidParams(m.to_string()));
        if !(self.t_trans > 0.0) || self.t_trans.is_nan() {
            return bad("t_trans must be > 0");
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return bad("dt must be a positive finite step");
        }
        if !(self.m_min > 0.0 && self.m_min <= self.m_max && self.m_max.is_finite()) {
            return bad("discharge bounds must satisfy 0 < m_min <= m_max");
        }
        if !(self.ramp_dn <= self.ramp_up) || !self.ramp_dn.is_finite() || !self.ramp_up.is_finite() {
            return bad("ramp limits must be finite with ramp_dn <= ramp_up");
        }
        if !(self.m_rated > 0.0 && self.m_rated.is_finite()) {
            return bad("m_rated must be > 0");
        }
        if !(self.phi_h2 >= 0.0 && self.phi_h2.is_finite()) {
            return bad("phi_h2 must be >= 0");
        }
        let beta = self.lag_factor();
        if !(beta > 0.0 && beta < 1.0) {
            return bad("lag factor exp(-dt/t_trans) must lie strictly inside (0, 1)");
        }
        Ok(())
    }

    /// Copy whose ramp limits span the whole discharge envelope, for open-loop
    /// step experiments.
    pub fn with_open_ramps(&self) -> Self {
        let span = self.m_max - self.m_min;
        Self {
            ramp_dn: -span,
            ramp_up: span,
            ..self.clone()
        }
    }

    /// `beta = exp(-dt / t_trans)`, the weight left on the previous setpoint.
    pub fn lag_factor(&self) -> f64 {
        (-self.dt / self.t_trans).exp()
    }

    fn check_setpoint(&self, index: usize, value: f64) -> Result<(), SfFlexError> {
        if value < self.m_min || value > self.m_max || !value.is_finite() {
            return Err(SfFlexError::SetpointOutOfBounds {
                index,
                value,
                min: self.m_min,
                max: self.m_max,
            });
        }
        Ok(())
    }

    /// Rejects plans that leave the discharge envelope or break a ramp limit.
    pub fn validate_plan(&self, plan: &[f64]) -> Result<(), SfFlexError> {
        for (i, &q) in plan.iter().enumerate() {
            self.check_setpoint(i, q)?;
        }
        for (i, w) in plan.windows(2).enumerate() {
            let delta = w[1] - w[0];
            if delta < self.ramp_dn || delta > self.ramp_up {
                return Err(SfFlexError::RampViolation {
                    index: i + 1,
                    delta,
                    dn: self.ramp_dn,
                    up: self.ramp_up,
                });
            }
        }
        Ok(())
    }
}

/// Realised discharge at the end of a step that moves the setpoint from
/// `q_prev` to `q_next`.
pub fn transition_step(q_prev: f64, q_next: f64, params: &SfFlexParams) -> Result<f64, SfFlexError> {
    params.check_setpoint(0, q_prev)?;
    params.check_setpoint(1, q_next)?;
    Ok(blend(q_prev, q_next, params.lag_factor()))
}

fn blend(q_prev: f64, q_next: f64, beta: f64) -> f64 {
    q_next + (q_prev - q_next) * beta
}

/// Hydrogen drawn by the furnace at discharge rate `m_dri`, t/h.
pub fn h2_consumption(m_dri: f64, params: &SfFlexParams) -> Result<f64, SfFlexError> {
    if m_dri < 0.0 || m_dri.is_nan() {
        return Err(SfFlexError::NegativeInput(m_dri));
    }
    Ok(params.phi_h2 * m_dri)
}

/// Setpoints, realised discharge and (optionally) metallization per step.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub qss: Vec<f64>,
    pub dis: Vec<f64>,
    pub met_rate: Option<Vec<f64>>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.qss.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qss.is_empty()
    }

    /// True when every `dis[k+1]` lies between `qss[k]` and `qss[k+1]`.
    pub fn betweenness_holds(&self) -> bool {
        (0..self.qss.len().saturating_sub(1)).all(|k| {
            let lo = self.qss[k].min(self.qss[k + 1]);
            let hi = self.qss[k].max(self.qss[k + 1]);
            (lo..=hi).contains(&self.dis[k + 1])
        })
    }
}

/// Applies the transition model to a whole plan. The furnace starts settled
/// at `plan[0]`.
pub fn model_trajectory(plan: &[f64], params: &SfFlexParams) -> Result<Trajectory, SfFlexError> {
    params.validate()?;
    params.validate_plan(plan)?;
    let beta = params.lag_factor();
    let mut dis = Vec::with_capacity(plan.len());
    if let Some(&first) = plan.first() {
        dis.push(first);
    }
    dis.extend(plan.windows(2).map(|w| blend(w[0], w[1], beta)));
    Ok(Trajectory {
        qss: plan.to_vec(),
        dis,
        met_rate: None,
    })
}

/// A step plan: settled at `from`, then `to` held for `1 + hold` steps.
pub fn step_plan(from: f64, to: f64, hold: usize) -> Vec<f64> {
    let mut plan = vec![from];
    plan.extend(std::iter::repeat_n(to, hold + 1));
    plan
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurrogateKind {
    /// Unit-gain first-order lag with time constant `t_true`.
    FirstOrder,
    /// Two cascaded lags of `t_true / 2` each.
    SecondOrder,
}

impl std::str::FromStr for SurrogateKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "first-order" => Ok(SurrogateKind::FirstOrder),
            "second-order" => Ok(SurrogateKind::SecondOrder),
            other => Err(format!(
                "unknown surrogate `{other}` (expected first-order or second-order)"
            )),
        }
    }
}

/// Stand-in for the detailed dynamic furnace model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurrogatePlant {
    pub kind: SurrogateKind,
    /// Plant time constant, h.
    pub t_true: f64,
    /// Sub-hourly integration step, h.
    pub substep: f64,
    /// Metallization held by the controller at steady state.
    pub met_setpoint: f64,
    /// Metallization change per unit of normalised tracking error.
    pub met_coupling: f64,
}

impl SurrogatePlant {
    pub fn new(kind: SurrogateKind, t_true: f64) -> Self {
        Self {
            kind,
            t_true,
            substep: 0.01,
            met_setpoint: 0.93,
            met_coupling: 0.005,
        }
    }

    fn validate(&self, dt: f64) -> Result<usize, SfFlexError> {
        let bad = |m: &str| Err(SfFlexError::InvalidSurrogate(m.to_string()));
        if !(self.t_true > 0.0 && self.t_true.is_finite()) {
            return bad("t_true must be > 0");
        }
        if !(self.substep > 0.0 && self.substep <= dt) {
            return bad("substep must lie in (0, dt]");
        }
        let n = (dt / self.substep).round();
        if (n * self.substep - dt).abs() > 1e-9 * dt {
            return bad("dt must be an integer multiple of substep");
        }
        if !(0.0..=1.0).contains(&self.met_setpoint) || !self.met_coupling.is_finite() {
            return bad("metallization setpoint must be a fraction and coupling finite");
        }
        Ok(n as usize)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FineSample {
    pub time_h: f64,
    pub setpoint: f64,
    pub dis: f64,
    pub met: f64,
}

/// Output of a reference run: the sub-hourly record and its hourly samples.
#[derive(Clone, Debug, PartialEq)]
pub struct ReferenceRun {
    pub fine: Vec<FineSample>,
    pub sampled: Trajectory,
}

impl ReferenceRun {
    /// The sub-hourly record viewed as a trajectory, for band checks.
    pub fn fine_trajectory(&self) -> Trajectory {
        Trajectory {
            qss: self.fine.iter().map(|s| s.setpoint).collect(),
            dis: self.fine.iter().map(|s| s.dis).collect(),
            met_rate: Some(self.fine.iter().map(|s| s.met).collect()),
        }
    }
}

/// Drives the surrogate plant through `plan`, holding `plan[k+1]` over step
/// `k`. The plant starts settled at `plan[0]` and keeps its state across step
/// boundaries. Linear dynamics are advanced with their exact zero-order-hold
/// update, so results do not depend on `substep` except for sampling density.
pub fn simulate_reference(
    plan: &[f64],
    plant: &SurrogatePlant,
    params: &SfFlexParams,
) -> Result<ReferenceRun, SfFlexError> {
    params.validate()?;
    if plan.len() < 2 {
        return Err(SfFlexError::TooShort(2));
    }
    params.validate_plan(plan)?;
    let per_step = plant.validate(params.dt)?;
    let h = params.dt / per_step as f64;

    let met_of = |dis: f64, setpoint: f64| {
        plant.met_setpoint - plant.met_coupling * (dis - setpoint) / params.m_rated
    };

    // Deviation states from the active setpoint; `x2` is the discharge for
    // the second-order plant and unused for the first-order one.
    let mut x1 = plan[0];
    let mut x2 = plan[0];
    let (decay, tau) = match plant.kind {
        SurrogateKind::FirstOrder => ((-h / plant.t_true).exp(), plant.t_true),
        SurrogateKind::SecondOrder => {
            let tau = plant.t_true / 2.0;
            ((-h / tau).exp(), tau)
        }
    };
    let output = |x1: f64, x2: f64| match plant.kind {
        SurrogateKind::FirstOrder => x1,
        SurrogateKind::SecondOrder => x2,
    };

    let mut fine = Vec::with_capacity(per_step * (plan.len() - 1) + 1);
    let mut sampled_dis = vec![plan[0]];
    let mut sampled_met = vec![met_of(plan[0], plan[0])];
    for k in 0..plan.len() - 1 {
        let u = plan[k + 1];
        for j in 0..per_step {
            let t = (k * per_step + j) as f64 * h;
            let y = output(x1, x2);
            fine.push(FineSample {
                time_h: t,
                setpoint: u,
                dis: y,
                met: met_of(y, u),
            });
            let z1 = x1 - u;
            let z2 = x2 - u;
            match plant.kind {
                SurrogateKind::FirstOrder => x1 = u + z1 * decay,
                SurrogateKind::SecondOrder => {
                    x1 = u + z1 * decay;
                    x2 = u + (z2 + z1 * h / tau) * decay;
                }
            }
            if !x1.is_finite() || !x2.is_finite() {
                return Err(SfFlexError::Unstable(t + h));
            }
        }
        let y = output(x1, x2);
        sampled_dis.push(y);
        sampled_met.push(met_of(y, u));
    }
    let last = *plan.last().expect("plan has >= 2 entries");
    let y = output(x1, x2);
    fine.push(FineSample {
        time_h: (plan.len() - 1) as f64 * params.dt,
        setpoint: last,
        dis: y,
        met: met_of(y, last),
    });

    Ok(ReferenceRun {
        fine,
        sampled: Trajectory {
            qss: plan.to_vec(),
            dis: sampled_dis,
            met_rate: Some(sampled_met),
        },
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Identification {
    pub beta: f64,
    /// h
    pub t_trans: f64,
    /// t/h
    pub rmse: f64,
    /// RMSE as a percentage of the rated discharge.
    pub rmse_pct_rated: f64,
}

/// Least-squares fit of the lag factor to observed step responses.
///
/// Minimises `sum_k (dis[k+1] - qss[k+1] - (qss[k] - qss[k+1]) * beta)^2`,
/// which has the closed form `beta = sum r_k d_k / sum d_k^2`.
pub fn identify_ttrans(traj: &Trajectory, template: &SfFlexParams) -> Result<Identification, SfFlexError> {
    if traj.qss.len() != traj.dis.len() {
        return Err(SfFlexError::LengthMismatch {
            qss: traj.qss.len(),
            dis: traj.dis.len(),
        });
    }
    if traj.len() < 2 {
        return Err(SfFlexError::TooShort(2));
    }
    let pairs: Vec<(f64, f64)> = (0..traj.len() - 1)
        .map(|k| {
            let d = traj.qss[k] - traj.qss[k + 1];
            let r = traj.dis[k + 1] - traj.qss[k + 1];
            (d, r)
        })
        .collect();
    let sdd: f64 = pairs.iter().map(|(d, _)| d * d).sum();
    if sdd == 0.0 {
        return Err(SfFlexError::Unidentifiable);
    }
    let srd: f64 = pairs.iter().map(|(d, r)| d * r).sum();
    let beta = (srd / sdd).clamp(BETA_CLAMP, 1.0 - BETA_CLAMP);
    let sse: f64 = pairs.iter().map(|(d, r)| (r - d * beta).powi(2)).sum();
    let rmse = (sse / pairs.len() as f64).sqrt();
    Ok(Identification {
        beta,
        t_trans: -template.dt / beta.ln(),
        rmse,
        rmse_pct_rated: 100.0 * rmse / template.m_rated,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MetCheck {
    pub passed: bool,
    pub first_violation: Option<usize>,
    pub max_deviation: f64,
}

/// Passes iff every metallization sample lies within `setpoint ± band`.
pub fn check_metallization(traj: &Trajectory, setpoint: f64, band: f64) -> Result<MetCheck, SfFlexError> {
    let met = traj.met_rate.as_ref().ok_or(SfFlexError::MissingMetallization)?;
    let mut first_violation = None;
    let mut max_deviation: f64 = 0.0;
    for (i, m) in met.iter().enumerate() {
        let dev = (m - setpoint).abs();
        max_deviation = max_deviation.max(dev);
        // Half a part per trillion of slack so that a sample sitting exactly
        // on the band edge is not lost to rounding.
        if !(dev <= band + 5e-13) && first_violation.is_none() {
            first_violation = Some(i);
        }
    }
    Ok(MetCheck {
        passed: first_violation.is_none(),
        first_violation,
        max_deviation,
    })
}

#[derive(Debug, Serialize, Deserialize)]
struct TrajectoryRow {
    step: usize,
    qss_tph: f64,
    dis_tph: f64,
    met_rate: Option<f64>,
}

pub fn write_trajectory_csv(traj: &Trajectory, path: &Path) -> Result<(), SfFlexError> {
    let file_err = |e: &dyn std::fmt::Display| SfFlexError::File {
        path: path.display().to_string(),
        reason: e.to_string(),
    };
    let mut w = csv::Writer::from_path(path).map_err(|e| file_err(&e))?;
    for k in 0..traj.len() {
        w.serialize(TrajectoryRow {
            step: k,
            qss_tph: traj.qss[k],
            dis_tph: traj.dis[k],
            met_rate: traj.met_rate.as_ref().map(|m| m[k]),
        })
        .map_err(|e| file_err(&e))?;
    }
    w.flush().map_err(|e| file_err(&e))
}

/// Reads `step,qss_tph,dis_tph,met_rate`. The metallization column may be
/// left empty; it is kept only when every row has a value.
pub fn read_trajectory_csv(path: &Path) -> Result<Trajectory, SfFlexError> {
    let file_err = |reason: String| SfFlexError::File {
        path: path.display().to_string(),
        reason,
    };
    let text = fs::read_to_string(path).map_err(|e| file_err(e.to_string()))?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<TrajectoryRow> = reader
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(|e| file_err(e.to_string()))?;
    for (i, row) in rows.iter().enumerate() {
        if row.step != i {
            return Err(file_err(format!("expected step {i}, found {}", row.step)));
        }
    }
    let met: Option<Vec<f64>> = rows.iter().map(|r| r.met_rate).collect();
    Ok(Trajectory {
        qss: rows.iter().map(|r| r.qss_tph).collect(),
        dis: rows.iter().map(|r| r.dis_tph).collect(),
        met_rate: met,
    })
}
