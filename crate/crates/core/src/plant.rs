//! Linear models of the non-furnace components.
//!
//! Every generator returns a [`Block`]: the variables it owns, the rows it
//! adds and the cost terms it contributes. Blocks reference each other's
//! variables by [`VarRef`]; the scheduler merges them and checks that every
//! reference is declared exactly once.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::scenario::ScenarioConfig;

/// Decision variable families. Storage states (`Ht`, `Lts`) run over
/// `1..=T+1`, every other family over `1..=T`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VarFamily {
    PAe,
    PBuy,
    PSell,
    PEh,
    PLeh,
    PComp,
    PExp,
    MH2In,
    MH2Out,
    MlSell,
    /// Hydrogen routed through the expander on its way out of the tank.
    MH2Exp,
    /// Heat drawn from the low-temperature store (preheat plus rejection).
    WLtsOut,
    Ht,
    Lts,
    MDriQss,
    MDriDis,
    BGrid,
}

impl VarFamily {
    pub const ALL: [VarFamily; 17] = [
        VarFamily::PAe,
        VarFamily::PBuy,
        VarFamily::PSell,
        VarFamily::PEh,
        VarFamily::PLeh,
        VarFamily::PComp,
        VarFamily::PExp,
        VarFamily::MH2In,
        VarFamily::MH2Out,
        VarFamily::MlSell,
        VarFamily::MH2Exp,
        VarFamily::WLtsOut,
        VarFamily::Ht,
        VarFamily::Lts,
        VarFamily::MDriQss,
        VarFamily::MDriDis,
        VarFamily::BGrid,
    ];

    pub fn name(self) -> &'static str {
        match self {
            VarFamily::PAe => "P_AE",
            VarFamily::PBuy => "P_buy",
            VarFamily::PSell => "P_sell",
            VarFamily::PEh => "P_Eh",
            VarFamily::PLeh => "P_Leh",
            VarFamily::PComp => "P_comp",
            VarFamily::PExp => "P_exp",
            VarFamily::MH2In => "M_H2_in",
            VarFamily::MH2Out => "M_H2_out",
            VarFamily::MlSell => "Ml_sell",
            VarFamily::MH2Exp => "M_H2_exp",
            VarFamily::WLtsOut => "W_Lts_out",
            VarFamily::Ht => "HT",
            VarFamily::Lts => "Lts",
            VarFamily::MDriQss => "M_DRI_QSS",
            VarFamily::MDriDis => "M_DRI_dis",
            VarFamily::BGrid => "b_grid",
        }
    }

    pub fn is_state(self) -> bool {
        matches!(self, VarFamily::Ht | VarFamily::Lts)
    }

    pub fn is_binary(self) -> bool {
        self == VarFamily::BGrid
    }

    /// Number of indices of this family over a horizon of `t` hours.
    pub fn len(self, horizon: usize) -> usize {
        if self.is_state() {
            horizon + 1
        } else {
            horizon
        }
    }
}

/// A family at a 1-based hour index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VarRef {
    pub family: VarFamily,
    pub t: usize,
}

impl VarRef {
    pub fn new(family: VarFamily, t: usize) -> Self {
        Self { family, t }
    }
}

impl fmt::Display for VarRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.family.name(), self.t)
    }
}

fn v(family: VarFamily, t: usize) -> VarRef {
    VarRef::new(family, t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ge => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearConstraint {
    pub name: String,
    pub terms: Vec<(VarRef, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn new(name: impl Into<String>, terms: Vec<(VarRef, f64)>, relation: Relation, rhs: f64) -> Self {
        Self {
            name: name.into(),
            terms,
            relation,
            rhs,
        }
    }

    /// Left-hand side value under `value_of`.
    pub fn lhs(&self, value_of: impl Fn(VarRef) -> f64) -> f64 {
        self.terms.iter().map(|&(r, c)| c * value_of(r)).sum()
    }

    /// Amount by which the row is violated (zero when satisfied).
    pub fn violation(&self, value_of: impl Fn(VarRef) -> f64) -> f64 {
        let lhs = self.lhs(value_of);
        match self.relation {
            Relation::Le => (lhs - self.rhs).max(0.0),
            Relation::Ge => (self.rhs - lhs).max(0.0),
            Relation::Eq => (lhs - self.rhs).abs(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VarDecl {
    pub var: VarRef,
    pub lower: f64,
    pub upper: f64,
    pub binary: bool,
}

impl VarDecl {
    fn continuous(var: VarRef, lower: f64, upper: f64) -> Self {
        Self {
            var,
            lower,
            upper,
            binary: false,
        }
    }
}

/// A labelled part of the objective: `constant + sum coeff * var`, in $.
#[derive(Clone, Debug, PartialEq)]
pub struct CostTerm {
    pub label: &'static str,
    pub terms: Vec<(VarRef, f64)>,
    pub constant: f64,
}

impl CostTerm {
    pub fn evaluate(&self, value_of: impl Fn(VarRef) -> f64) -> f64 {
        self.constant + self.terms.iter().map(|&(r, c)| c * value_of(r)).sum::<f64>()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Block {
    pub vars: Vec<VarDecl>,
    pub constraints: Vec<LinearConstraint>,
    pub costs: Vec<CostTerm>,
}

impl Block {
    fn declare(&mut self, family: VarFamily, lower: f64, upper: f64, horizon: usize) {
        for t in 1..=family.len(horizon) {
            self.vars.push(VarDecl::continuous(v(family, t), lower, upper));
        }
    }

    fn row(&mut self, name: String, terms: Vec<(VarRef, f64)>, relation: Relation, rhs: f64) {
        self.constraints.push(LinearConstraint::new(name, terms, relation, rhs));
    }

    pub fn extend(&mut self, other: Block) {
        self.vars.extend(other.vars);
        self.constraints.extend(other.constraints);
        self.costs.extend(other.costs);
    }
}

/// Electrolyzer: constant specific consumption and aggregate power range.
/// Owns `P_AE` and `M_H2_in`.
pub fn ae_constraints(cfg: &ScenarioConfig) -> Block {
    let p = &cfg.plant;
    let horizon = cfg.horizon;
    let (lo, hi) = p.ae_bounds();
    let mut b = Block::default();
    b.declare(VarFamily::PAe, lo, hi, horizon);
    b.declare(VarFamily::MH2In, 0.0, f64::INFINITY, horizon);
    for t in 1..=horizon {
        b.row(
            format!("ae_efficiency_{t}"),
            vec![(v(VarFamily::PAe, t), 1.0), (v(VarFamily::MH2In, t), -p.kappa_h2)],
            Relation::Eq,
            0.0,
        );
    }
    b.costs.push(CostTerm {
        label: "ae",
        terms: (1..=horizon).map(|t| (v(VarFamily::PAe, t), p.c_ae)).collect(),
        constant: 0.0,
    });
    b
}

/// Hydrogen tank mass balance, outflow split, sales and the 50% cyclic level.
/// Owns `HT`, `M_H2_out` and `Ml_sell`.
pub fn hydrogen_storage_constraints(cfg: &ScenarioConfig) -> Block {
    let p = &cfg.plant;
    let horizon = cfg.horizon;
    let mut b = Block::default();
    b.declare(VarFamily::Ht, p.ht_min, p.ht_max, horizon);
    b.declare(VarFamily::MH2Out, 0.0, f64::INFINITY, horizon);
    b.declare(VarFamily::MlSell, 0.0, f64::INFINITY, horizon);
    for t in 1..=horizon {
        b.row(
            format!("ht_balance_{t}"),
            vec![
                (v(VarFamily::Ht, t + 1), 1.0),
                (v(VarFamily::Ht, t), -1.0),
                (v(VarFamily::MH2In, t), -cfg.sf.dt),
                (v(VarFamily::MH2Out, t), cfg.sf.dt),
            ],
            Relation::Eq,
            0.0,
        );
        b.row(
            format!("h2_outflow_{t}"),
            vec![
                (v(VarFamily::MH2Out, t), 1.0),
                (v(VarFamily::MDriDis, t), -cfg.sf.phi_h2),
                (v(VarFamily::MlSell, t), -1.0),
            ],
            Relation::Eq,
            0.0,
        );
        b.row(
            format!("h2_sales_{t}"),
            vec![(v(VarFamily::MlSell, t), 1.0)],
            Relation::Eq,
            cfg.h2_request.values[t - 1],
        );
    }
    let half = 0.5 * p.ht_cap;
    b.row("ht_initial".into(), vec![(v(VarFamily::Ht, 1), 1.0)], Relation::Eq, half);
    b.row(
        "ht_terminal".into(),
        vec![(v(VarFamily::Ht, horizon + 1), 1.0)],
        Relation::Eq,
        half,
    );
    b.costs.push(CostTerm {
        label: "h2_storage",
        terms: (1..=horizon)
            .map(|t| (v(VarFamily::MH2In, t), 2.0 * p.c_hs))
            .collect(),
        constant: 0.0,
    });
    b.costs.push(CostTerm {
        label: "h2_sales",
        terms: (1..=horizon)
            .map(|t| (v(VarFamily::MlSell, t), -p.hy_price))
            .collect(),
        constant: 0.0,
    });
    b
}

/// Heat-led high-temperature heater and the low-temperature thermal store.
/// Owns `P_Eh`, `P_Leh`, `Lts` and `W_Lts_out`.
///
/// The heater input follows the furnace: `P_Eh dt = (sf_heat - ftg - whb) M_dis`.
/// The store takes electrolyzer waste heat, compression heat and the
/// low-temperature heater; its outflow must cover the expander preheat and
/// anything beyond that is rejected.
pub fn heater_and_thermal_constraints(cfg: &ScenarioConfig) -> Block {
    let p = &cfg.plant;
    let horizon = cfg.horizon;
    let dt = cfg.sf.dt;
    let mut b = Block::default();
    b.declare(VarFamily::PEh, 0.0, f64::INFINITY, horizon);
    b.declare(VarFamily::PLeh, 0.0, p.leh_max, horizon);
    b.declare(VarFamily::Lts, 0.0, p.lts_cap, horizon);
    b.declare(VarFamily::WLtsOut, 0.0, f64::INFINITY, horizon);
    for t in 1..=horizon {
        b.row(
            format!("heat_led_{t}"),
            vec![
                (v(VarFamily::PEh, t), dt),
                (v(VarFamily::MDriDis, t), -p.eh_per_dri()),
            ],
            Relation::Eq,
            0.0,
        );
        b.row(
            format!("lts_balance_{t}"),
            vec![
                (v(VarFamily::Lts, t + 1), 1.0),
                (v(VarFamily::Lts, t), -1.0),
                (v(VarFamily::MH2In, t), -p.gamma_in * p.gamma_h2 * dt),
                (v(VarFamily::PComp, t), -p.gamma_in * dt),
                (v(VarFamily::PLeh, t), -p.gamma_in * dt),
                (v(VarFamily::WLtsOut, t), dt / p.gamma_out),
            ],
            Relation::Eq,
            0.0,
        );
        b.row(
            format!("expander_preheat_{t}"),
            vec![(v(VarFamily::WLtsOut, t), 1.0), (v(VarFamily::PExp, t), -1.0)],
            Relation::Ge,
            0.0,
        );
    }
    b.row(
        "lts_cyclic".into(),
        vec![(v(VarFamily::Lts, 1), 1.0), (v(VarFamily::Lts, horizon + 1), -1.0)],
        Relation::Eq,
        0.0,
    );
    b.costs.push(CostTerm {
        label: "eh",
        terms: (1..=horizon).map(|t| (v(VarFamily::PEh, t), p.c_eh)).collect(),
        constant: 0.0,
    });
    b.costs.push(CostTerm {
        label: "leh",
        terms: (1..=horizon).map(|t| (v(VarFamily::PLeh, t), p.c_leh)).collect(),
        constant: 0.0,
    });
    b
}

/// Grid purchase and sale with binary exclusivity. Owns `P_buy`, `P_sell`
/// and `b_grid`.
pub fn grid_constraints(cfg: &ScenarioConfig) -> Block {
    let p = &cfg.plant;
    let horizon = cfg.horizon;
    let big_m = cfg.big_m();
    let mut b = Block::default();
    b.declare(VarFamily::PBuy, 0.0, f64::INFINITY, horizon);
    b.declare(VarFamily::PSell, 0.0, f64::INFINITY, horizon);
    for t in 1..=horizon {
        b.vars.push(VarDecl {
            var: v(VarFamily::BGrid, t),
            lower: 0.0,
            upper: 1.0,
            binary: true,
        });
        b.row(
            format!("grid_sell_switch_{t}"),
            vec![(v(VarFamily::PSell, t), 1.0), (v(VarFamily::BGrid, t), -big_m)],
            Relation::Le,
            0.0,
        );
        b.row(
            format!("grid_buy_switch_{t}"),
            vec![(v(VarFamily::PBuy, t), 1.0), (v(VarFamily::BGrid, t), big_m)],
            Relation::Le,
            big_m,
        );
    }
    let dt = cfg.sf.dt;
    b.costs.push(CostTerm {
        label: "grid_purchase",
        terms: (1..=horizon)
            .map(|t| (v(VarFamily::PBuy, t), cfg.prices_buy.values[t - 1] * dt))
            .collect(),
        constant: 0.0,
    });
    b.costs.push(CostTerm {
        label: "carbon_tax",
        terms: (1..=horizon)
            .map(|t| (v(VarFamily::PBuy, t), p.phi_ec * p.c_tax_price * dt))
            .collect(),
        constant: 0.0,
    });
    b.costs.push(CostTerm {
        label: "grid_sale",
        terms: (1..=horizon)
            .map(|t| (v(VarFamily::PSell, t), -cfg.prices_sell.values[t - 1] * dt))
            .collect(),
        constant: 0.0,
    });
    b
}

/// Hourly power balance with the compressor and expander models. Owns
/// `P_comp`, `P_exp` and `M_H2_exp`.
pub fn power_balance(cfg: &ScenarioConfig) -> Block {
    let p = &cfg.plant;
    let horizon = cfg.horizon;
    let mut b = Block::default();
    b.declare(VarFamily::PComp, 0.0, f64::INFINITY, horizon);
    b.declare(VarFamily::PExp, 0.0, f64::INFINITY, horizon);
    b.declare(VarFamily::MH2Exp, 0.0, f64::INFINITY, horizon);
    for t in 1..=horizon {
        b.row(
            format!("compressor_{t}"),
            vec![(v(VarFamily::PComp, t), 1.0), (v(VarFamily::MH2In, t), -p.comp_coeff)],
            Relation::Eq,
            0.0,
        );
        b.row(
            format!("expander_{t}"),
            vec![(v(VarFamily::PExp, t), 1.0), (v(VarFamily::MH2Exp, t), -p.exp_coeff)],
            Relation::Eq,
            0.0,
        );
        b.row(
            format!("expander_flow_{t}"),
            vec![(v(VarFamily::MH2Exp, t), 1.0), (v(VarFamily::MH2Out, t), -1.0)],
            Relation::Le,
            0.0,
        );
        let res = cfg.pv.values[t - 1] + cfg.wind.values[t - 1];
        b.row(
            format!("power_balance_{t}"),
            vec![
                (v(VarFamily::PBuy, t), 1.0),
                (v(VarFamily::PExp, t), 1.0),
                (v(VarFamily::PSell, t), -1.0),
                (v(VarFamily::PAe, t), -1.0),
                (v(VarFamily::PComp, t), -1.0),
                (v(VarFamily::PEh, t), -1.0),
                (v(VarFamily::PLeh, t), -1.0),
            ],
            Relation::Eq,
            -res,
        );
    }
    let dt = cfg.sf.dt;
    let res_cost: f64 = (0..horizon)
        .map(|i| (p.c_s * cfg.pv.values[i] + p.c_w * cfg.wind.values[i]) * dt)
        .sum();
    b.costs.push(CostTerm {
        label: "renewables",
        terms: Vec::new(),
        constant: res_cost,
    });
    b.costs.push(CostTerm {
        label: "compressor_expander",
        terms: (1..=horizon)
            .flat_map(|t| {
                [
                    (v(VarFamily::PComp, t), p.c_coxp),
                    (v(VarFamily::PExp, t), p.c_coxp),
                ]
            })
            .collect(),
        constant: 0.0,
    });
    b
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::synth_scenario;
    use std::collections::HashMap;

    fn find<'a>(b: &'a Block, name: &str) -> &'a LinearConstraint {
        b.constraints.iter().find(|c| c.name == name).unwrap()
    }

    fn eval(values: &HashMap<VarRef, f64>) -> impl Fn(VarRef) -> f64 + '_ {
        move |r| values.get(&r).copied().unwrap_or(0.0)
    }

    #[test]
    fn electrolyzer_power_from_hydrogen() {
        let cfg = synth_scenario(1, 4);
        let b = ae_constraints(&cfg);
        let row = find(&b, "ae_efficiency_2");
        let vals = HashMap::from([(v(VarFamily::PAe, 2), 520.0), (v(VarFamily::MH2In, 2), 10.0)]);
        assert_eq!(row.violation(eval(&vals)), 0.0);
        let decl = b.vars.iter().find(|d| d.var == v(VarFamily::PAe, 1)).unwrap();
        assert_eq!((decl.lower, decl.upper), (60.0, 720.0));
        // Zero hydrogen means zero power, which sits below the 60 MW floor.
        assert!(0.0 < decl.lower);
    }

    #[test]
    fn tank_balance_arithmetic() {
        let cfg = synth_scenario(1, 4);
        let b = hydrogen_storage_constraints(&cfg);
        let row = find(&b, "ht_balance_1");
        let vals = HashMap::from([
            (v(VarFamily::Ht, 1), 10.0),
            (v(VarFamily::Ht, 2), 11.0),
            (v(VarFamily::MH2In, 1), 2.0),
            (v(VarFamily::MH2Out, 1), 1.0),
        ]);
        assert_eq!(row.violation(eval(&vals)), 0.0);
        assert_eq!(find(&b, "ht_initial").rhs, 60.0);
        assert_eq!(find(&b, "ht_terminal").rhs, 60.0);
        assert_eq!(find(&b, "h2_sales_3").rhs, 1.5);
    }

    #[test]
    fn heat_led_heater_input() {
        let cfg = synth_scenario(1, 4);
        let b = heater_and_thermal_constraints(&cfg);
        let row = find(&b, "heat_led_1");
        let vals = HashMap::from([(v(VarFamily::MDriDis, 1), 100.0), (v(VarFamily::PEh, 1), 25.0)]);
        assert!(row.violation(eval(&vals)) < 1e-12);
        let zero = HashMap::from([(v(VarFamily::MDriDis, 1), 0.0), (v(VarFamily::PEh, 1), 0.0)]);
        assert_eq!(row.violation(eval(&zero)), 0.0);
    }

    #[test]
    fn lossless_idle_store_is_constant() {
        let mut cfg = synth_scenario(1, 4);
        cfg.plant.gamma_in = 1.0;
        cfg.plant.gamma_out = 1.0;
        let b = heater_and_thermal_constraints(&cfg);
        let vals: HashMap<VarRef, f64> = (1..=5).map(|t| (v(VarFamily::Lts, t), 42.0)).collect();
        for c in &b.constraints {
            if c.name.starts_with("lts_") {
                assert_eq!(c.violation(eval(&vals)), 0.0, "{}", c.name);
            }
        }
    }

    #[test]
    fn grid_switch_excludes_buy_or_sell() {
        let cfg = synth_scenario(1, 4);
        let m = cfg.big_m();
        let b = grid_constraints(&cfg);
        let buy = find(&b, "grid_buy_switch_1");
        let sell = find(&b, "grid_sell_switch_1");
        // b = 1: any positive purchase violates.
        let on = HashMap::from([(v(VarFamily::BGrid, 1), 1.0), (v(VarFamily::PBuy, 1), 1e-3)]);
        assert!(buy.violation(eval(&on)) > 0.0);
        let on_sell = HashMap::from([(v(VarFamily::BGrid, 1), 1.0), (v(VarFamily::PSell, 1), m)]);
        assert_eq!(sell.violation(eval(&on_sell)), 0.0);
        // b = 0: any positive sale violates.
        let off = HashMap::from([(v(VarFamily::PSell, 1), 1e-3)]);
        assert!(sell.violation(eval(&off)) > 0.0);
        assert!(b.vars.iter().filter(|d| d.binary).all(|d| d.var.family == VarFamily::BGrid));
    }

    #[test]
    fn carbon_tax_coefficient() {
        let cfg = synth_scenario(1, 4);
        let b = grid_constraints(&cfg);
        let tax = b.costs.iter().find(|c| c.label == "carbon_tax").unwrap();
        assert!((tax.terms[0].1 - 22.8).abs() < 1e-12);
    }

    #[test]
    fn balance_sells_surplus_and_buys_deficit() {
        let mut cfg = synth_scenario(1, 4);
        cfg.pv.values[0] = 40.0;
        cfg.wind.values[0] = 60.0;
        let b = power_balance(&cfg);
        let row = find(&b, "power_balance_1");
        let surplus = HashMap::from([(v(VarFamily::PSell, 1), 100.0)]);
        assert_eq!(row.violation(eval(&surplus)), 0.0);

        cfg.pv.values[1] = 0.0;
        cfg.wind.values[1] = 0.0;
        let b = power_balance(&cfg);
        let row = find(&b, "power_balance_2");
        let deficit = HashMap::from([(v(VarFamily::PAe, 2), 300.0), (v(VarFamily::PBuy, 2), 300.0)]);
        assert_eq!(row.violation(eval(&deficit)), 0.0);
    }

    #[test]
    fn references_stay_inside_horizon() {
        let cfg = synth_scenario(3, 6);
        for b in [
            ae_constraints(&cfg),
            hydrogen_storage_constraints(&cfg),
            heater_and_thermal_constraints(&cfg),
            grid_constraints(&cfg),
            power_balance(&cfg),
        ] {
            for c in &b.constraints {
                assert!(!c.terms.is_empty());
                for (r, coeff) in &c.terms {
                    assert!(coeff.is_finite());
                    assert!(r.t >= 1 && r.t <= r.family.len(cfg.horizon), "{} in {}", r, c.name);
                }
            }
        }
    }
}
