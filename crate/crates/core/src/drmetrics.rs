//! Demand-response potential and cross-mode comparison.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::plant::VarFamily;
use crate::scenario::FlexMode;
use crate::scheduler::ScheduleSolution;

#[derive(Debug, Error, PartialEq)]
pub enum DrError {
    #[error("horizon mismatch: {left} vs {right} hours")]
    HorizonMismatch { left: usize, right: usize },
    #[error("{mode} solution is not optimal")]
    NotOptimal { mode: FlexMode },
    #[error("solutions come from different scenarios ({0} vs {1})")]
    MixedScenarios(String, String),
    #[error("comparison needs a baseline solution")]
    MissingBaseline,
}

/// What counts as the plant's electrical power in the DR metric.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NetPowerBasis {
    /// `P_buy - P_sell`.
    #[default]
    GridExchange,
    /// `P_AE + P_comp + P_Eh + P_Leh`.
    GrossConsumption,
}

impl NetPowerBasis {
    pub fn as_str(self) -> &'static str {
        match self {
            NetPowerBasis::GridExchange => "grid-exchange",
            NetPowerBasis::GrossConsumption => "gross-consumption",
        }
    }
}

impl fmt::Display for NetPowerBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for NetPowerBasis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "grid-exchange" => Ok(NetPowerBasis::GridExchange),
            "gross-consumption" => Ok(NetPowerBasis::GrossConsumption),
            other => Err(format!(
                "unknown power basis `{other}` (expected grid-exchange or gross-consumption)"
            )),
        }
    }
}

/// Hourly plant power of `sol` in MW.
pub fn net_power(sol: &ScheduleSolution, basis: NetPowerBasis) -> Vec<f64> {
    let d = &sol.dispatch;
    let at = |f: VarFamily, t: usize| d.get(f).get(t).copied().unwrap_or(0.0);
    (0..sol.horizon)
        .map(|t| match basis {
            NetPowerBasis::GridExchange => at(VarFamily::PBuy, t) - at(VarFamily::PSell, t),
            NetPowerBasis::GrossConsumption => {
                at(VarFamily::PAe, t) + at(VarFamily::PComp, t) + at(VarFamily::PEh, t) + at(VarFamily::PLeh, t)
            }
        })
        .collect()
}

/// Elementwise `|a - b|`.
pub fn delta_p(a: &[f64], b: &[f64]) -> Result<Vec<f64>, DrError> {
    if a.len() != b.len() {
        return Err(DrError::HorizonMismatch { left: a.len(), right: b.len() });
    }
    Ok(a.iter().zip(b).map(|(x, y)| (x - y).abs()).collect())
}

/// Arithmetic mean; zero for an empty series.
pub fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        0.0
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrReport {
    pub baseline_mode: FlexMode,
    pub dr_mode: FlexMode,
    pub basis: NetPowerBasis,
    /// MW per hour.
    pub delta_p: Vec<f64>,
    /// MW.
    pub avg_delta_p: f64,
    /// $/t by mode.
    pub cost_per_ton: BTreeMap<FlexMode, f64>,
    /// Percent of the baseline cost per ton.
    pub reduction_pct: f64,
}

pub fn dr_potential(baseline: &ScheduleSolution, dr: &ScheduleSolution) -> Result<DrReport, DrError> {
    dr_potential_with(baseline, dr, NetPowerBasis::default())
}

pub fn dr_potential_with(
    baseline: &ScheduleSolution,
    dr: &ScheduleSolution,
    basis: NetPowerBasis,
) -> Result<DrReport, DrError> {
    for s in [baseline, dr] {
        if !s.is_optimal() {
            return Err(DrError::NotOptimal { mode: s.mode });
        }
    }
    if baseline.horizon != dr.horizon {
        return Err(DrError::HorizonMismatch { left: baseline.horizon, right: dr.horizon });
    }
    let delta_p = delta_p(&net_power(dr, basis), &net_power(baseline, basis))?;
    let mut cost_per_ton = BTreeMap::new();
    cost_per_ton.insert(baseline.mode, baseline.cost_per_ton);
    cost_per_ton.insert(dr.mode, dr.cost_per_ton);
    Ok(DrReport {
        baseline_mode: baseline.mode,
        dr_mode: dr.mode,
        basis,
        avg_delta_p: mean(&delta_p),
        delta_p,
        cost_per_ton,
        reduction_pct: reduction_pct(baseline.cost_per_ton, dr.cost_per_ton),
    })
}

fn reduction_pct(base: f64, other: f64) -> f64 {
    let r = (base - other) / base * 100.0;
    // Keep -0.0 out of the rendered tables.
    if r == 0.0 {
        0.0
    } else {
        r
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub mode: FlexMode,
    pub objective_usd: f64,
    pub cost_per_ton: f64,
    pub avg_delta_p: f64,
    pub reduction_pct: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub scenario_id: String,
    pub horizon: usize,
    pub dri_order_t: f64,
    pub basis: NetPowerBasis,
    pub rows: Vec<ComparisonRow>,
    pub reports: Vec<DrReport>,
}

pub fn compare_modes(solutions: &BTreeMap<FlexMode, ScheduleSolution>) -> Result<Comparison, DrError> {
    compare_modes_with(solutions, NetPowerBasis::default())
}

/// Every mode is compared against the baseline solution, which must be present.
pub fn compare_modes_with(
    solutions: &BTreeMap<FlexMode, ScheduleSolution>,
    basis: NetPowerBasis,
) -> Result<Comparison, DrError> {
    let base = solutions.get(&FlexMode::Baseline).ok_or(DrError::MissingBaseline)?;
    for s in solutions.values() {
        if s.scenario_id != base.scenario_id {
            return Err(DrError::MixedScenarios(base.scenario_id.clone(), s.scenario_id.clone()));
        }
    }
    let mut rows = Vec::new();
    let mut reports = Vec::new();
    for (mode, sol) in solutions {
        let report = dr_potential_with(base, sol, basis)?;
        rows.push(ComparisonRow {
            mode: *mode,
            objective_usd: sol.objective_value,
            cost_per_ton: sol.cost_per_ton,
            avg_delta_p: report.avg_delta_p,
            reduction_pct: report.reduction_pct,
        });
        reports.push(report);
    }
    Ok(Comparison {
        scenario_id: base.scenario_id.clone(),
        horizon: base.horizon,
        dri_order_t: base.dri_order,
        basis,
        rows,
        reports,
    })
}

impl Comparison {
    /// Aligned plain-text table.
    pub fn render_text(&self) -> String {
        let header = ["mode", "cost [$]", "cost [$/t]", "reduction [%]", "avg dP [MW]"];
        let body: Vec<[String; 5]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.mode.to_string(),
                    format!("{:.2}", r.objective_usd),
                    format!("{:.3}", r.cost_per_ton),
                    format!("{:.3}", r.reduction_pct),
                    format!("{:.3}", r.avg_delta_p),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &body {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        let _ = writeln!(
            out,
            "scenario {}  horizon {} h  order {} t  power basis {}",
            self.scenario_id, self.horizon, self.dri_order_t, self.basis
        );
        let line = |cells: &[&str]| {
            let mut s = format!("{:<w$}", cells[0], w = widths[0]);
            for (c, w) in cells[1..].iter().zip(&widths[1..]) {
                let _ = write!(s, "  {c:>w$}");
            }
            s
        };
        let _ = writeln!(out, "{}", line(&header));
        let rule: usize = widths.iter().sum::<usize>() + 2 * (widths.len() - 1);
        let _ = writeln!(out, "{}", "-".repeat(rule));
        for row in &body {
            let cells: Vec<&str> = row.iter().map(String::as_str).collect();
            let _ = writeln!(out, "{}", line(&cells));
        }
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("comparison serializes") + "\n"
    }

    /// Hourly `delta_p` per mode, one column each.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("hour");
        for r in &self.reports {
            let _ = write!(out, ",delta_p_{}_mw", r.dr_mode);
        }
        out.push('\n');
        for t in 0..self.horizon {
            let _ = write!(out, "{}", t + 1);
            for r in &self.reports {
                let _ = write!(out, ",{}", r.delta_p.get(t).copied().unwrap_or(f64::NAN));
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheduler::{Dispatch, SolveStatus};

    fn sol(mode: FlexMode, buy: &[f64], sell: &[f64], cost_per_ton: f64) -> ScheduleSolution {
        let mut dispatch = Dispatch::default();
        dispatch.series.insert(VarFamily::PBuy, buy.to_vec());
        dispatch.series.insert(VarFamily::PSell, sell.to_vec());
        ScheduleSolution {
            status: SolveStatus::Optimal,
            mode,
            engine: "test".into(),
            scenario_id: "s".into(),
            horizon: buy.len(),
            dri_order: 100.0,
            dispatch,
            objective_value: cost_per_ton * 100.0,
            cost_breakdown: Vec::new(),
            cost_per_ton,
        }
    }

    #[test]
    fn self_comparison_is_zero() {
        let a = sol(FlexMode::Baseline, &[400.0, 0.0], &[0.0, 50.0], 373.0);
        let r = dr_potential(&a, &a).unwrap();
        assert_eq!(r.delta_p, vec![0.0, 0.0]);
        assert_eq!(r.avg_delta_p, 0.0);
        assert_eq!(r.reduction_pct, 0.0);
    }

    #[test]
    fn swapped_hours() {
        let a = sol(FlexMode::Baseline, &[400.0, 500.0], &[0.0, 0.0], 373.0);
        let b = sol(FlexMode::AeFlex, &[500.0, 400.0], &[0.0, 0.0], 356.7);
        let r = dr_potential(&a, &b).unwrap();
        assert_eq!(r.delta_p, vec![100.0, 100.0]);
        assert_eq!(r.avg_delta_p, 100.0);
        assert!((r.reduction_pct - 4.369973190348525).abs() < 1e-9);
    }

    #[test]
    fn sales_count_as_negative_power() {
        let a = sol(FlexMode::Baseline, &[100.0], &[0.0], 1.0);
        let b = sol(FlexMode::AeFlex, &[0.0], &[60.0], 1.0);
        assert_eq!(dr_potential(&a, &b).unwrap().delta_p, vec![160.0]);
    }

    #[test]
    fn errors() {
        let a = sol(FlexMode::Baseline, &[1.0, 2.0], &[0.0, 0.0], 1.0);
        let short = sol(FlexMode::AeFlex, &[1.0], &[0.0], 1.0);
        assert_eq!(
            dr_potential(&a, &short),
            Err(DrError::HorizonMismatch { left: 2, right: 1 })
        );
        let mut bad = a.clone();
        bad.mode = FlexMode::AeSfFlex;
        bad.status = SolveStatus::Infeasible;
        assert_eq!(dr_potential(&a, &bad), Err(DrError::NotOptimal { mode: FlexMode::AeSfFlex }));

        let mut other = a.clone();
        other.mode = FlexMode::AeFlex;
        other.scenario_id = "t".into();
        let map = BTreeMap::from([(FlexMode::Baseline, a.clone()), (FlexMode::AeFlex, other)]);
        assert!(matches!(compare_modes(&map), Err(DrError::MixedScenarios(..))));
        let map = BTreeMap::from([(FlexMode::AeFlex, a)]);
        assert_eq!(compare_modes(&map), Err(DrError::MissingBaseline));
    }

    #[test]
    fn identical_modes_give_zero_rows() {
        let a = sol(FlexMode::Baseline, &[10.0, 20.0, 30.0], &[0.0; 3], 350.0);
        let map: BTreeMap<_, _> = FlexMode::ALL
            .iter()
            .map(|&m| {
                let mut s = a.clone();
                s.mode = m;
                (m, s)
            })
            .collect();
        let c = compare_modes(&map).unwrap();
        assert_eq!(c.rows.len(), 3);
        for r in &c.rows {
            assert_eq!(r.avg_delta_p, 0.0);
            assert_eq!(r.reduction_pct, 0.0);
        }
        let text = c.render_text();
        assert_eq!(text.lines().count(), 6);
        assert!(text.contains("ae-sf-flex"));
        assert_eq!(c.to_csv().lines().count(), 4);
    }

    #[test]
    fn gross_basis_adds_consumers() {
        let mut a = sol(FlexMode::Baseline, &[0.0], &[0.0], 1.0);
        for (f, x) in [
            (VarFamily::PAe, 100.0),
            (VarFamily::PComp, 3.0),
            (VarFamily::PEh, 20.0),
            (VarFamily::PLeh, 1.0),
            (VarFamily::PExp, 2.0),
        ] {
            a.dispatch.series.insert(f, vec![x]);
        }
        assert_eq!(net_power(&a, NetPowerBasis::GrossConsumption), vec![124.0]);
        assert_eq!("gross-consumption".parse::<NetPowerBasis>(), Ok(NetPowerBasis::GrossConsumption));
    }
}
