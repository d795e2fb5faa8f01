//! Narrow contract between the scheduler and a mixed-integer LP engine.
//!
//! The scheduler lowers its named model into an [`LpModel`] (dense column
//! indices, row ranges) and hands it to any [`MilpEngine`]. Two engines ship:
//! HiGHS, and a small native dense simplex with depth-first branch and bound.

mod branch_bound;
mod highs_engine;
pub mod simplex;

use thiserror::Error;

pub use branch_bound::NativeEngine;
pub use highs_engine::HighsEngine;

/// Environment variable naming the engine (`highs` or `native`).
pub const ENGINE_ENV: &str = "ZCHMS_ENGINE";

#[derive(Clone, Debug, PartialEq)]
pub struct LpRow {
    pub coeffs: Vec<(usize, f64)>,
    pub lower: f64,
    pub upper: f64,
}

/// `min cost·x + offset` subject to row ranges, column bounds and
/// integrality flags.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LpModel {
    pub col_lower: Vec<f64>,
    pub col_upper: Vec<f64>,
    pub col_cost: Vec<f64>,
    pub integer: Vec<bool>,
    pub rows: Vec<LpRow>,
    pub offset: f64,
}

impl LpModel {
    pub fn num_cols(&self) -> usize {
        self.col_cost.len()
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        self.offset + self.col_cost.iter().zip(x).map(|(c, v)| c * v).sum::<f64>()
    }

    /// Copy with every integer column fixed to the rounded value in `x` and
    /// integrality dropped.
    pub fn with_integers_fixed(&self, x: &[f64]) -> LpModel {
        let mut lp = self.clone();
        for j in 0..lp.num_cols() {
            if lp.integer[j] {
                let r = x[j].round();
                lp.col_lower[j] = r;
                lp.col_upper[j] = r;
                lp.integer[j] = false;
            }
        }
        lp
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EngineStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EngineSolution {
    pub status: EngineStatus,
    /// Column values; empty unless optimal.
    pub values: Vec<f64>,
    pub objective: f64,
}

impl EngineSolution {
    pub fn without_point(status: EngineStatus) -> Self {
        Self {
            status,
            values: Vec::new(),
            objective: f64::NAN,
        }
    }
}

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("{engine} failed: {reason}")]
    Failed { engine: &'static str, reason: String },
    #[error("unknown engine `{0}` (expected highs or native)")]
    Unknown(String),
}

/// Any engine that proves optimality within an absolute/relative gap of 1e-6
/// and is deterministic for a fixed input.
pub trait MilpEngine: Send + Sync {
    fn name(&self) -> &'static str;
    fn solve(&self, model: &LpModel) -> Result<EngineSolution, EngineError>;
}

pub fn engine_by_name(name: &str) -> Result<Box<dyn MilpEngine>, EngineError> {
    match name {
        "highs" => Ok(Box::new(HighsEngine)),
        "native" => Ok(Box::new(NativeEngine::default())),
        other => Err(EngineError::Unknown(other.to_string())),
    }
}

/// Engine named by [`ENGINE_ENV`], HiGHS when unset.
pub fn engine_from_env() -> Result<Box<dyn MilpEngine>, EngineError> {
    match std::env::var(ENGINE_ENV) {
        Ok(name) if !name.is_empty() => engine_by_name(&name),
        _ => Ok(Box::new(HighsEngine)),
    }
}
