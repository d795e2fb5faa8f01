use proptest::prelude::*;
use zchms_core::plant::VarFamily;
use zchms_core::scenario::{synth_scenario, FlexMode, ScenarioConfig};
use zchms_core::scheduler::{build_problem, infeasibility_hint, solve, ScheduleSolution, SolveStatus};
use zchms_core::solver::{engine_by_name, HighsEngine};

const TOL: f64 = 1e-6;

fn solve_mode(cfg: &ScenarioConfig, mode: FlexMode) -> ScheduleSolution {
    let mut cfg = cfg.clone();
    cfg.mode = mode;
    solve(&build_problem(&cfg).unwrap(), &HighsEngine).unwrap()
}

/// Recomputes every physical balance from the dispatch alone.
fn hygiene(cfg: &ScenarioConfig, sol: &ScheduleSolution) -> Result<(), String> {
    let d = &sol.dispatch;
    let t_len = cfg.horizon;
    let dis = d.get(VarFamily::MDriDis);
    let order: f64 = dis.iter().map(|x| x * cfg.sf.dt).sum();
    if (order - cfg.dri_order).abs() > TOL {
        return Err(format!("order {order} != {}", cfg.dri_order));
    }
    let ht = d.get(VarFamily::Ht);
    let half = 0.5 * cfg.plant.ht_cap;
    if (ht[0] - half).abs() > TOL || (ht[t_len] - half).abs() > TOL {
        return Err(format!("tank {} -> {}", ht[0], ht[t_len]));
    }
    let lts = d.get(VarFamily::Lts);
    if (lts[0] - lts[t_len]).abs() > TOL {
        return Err(format!("thermal store {} -> {}", lts[0], lts[t_len]));
    }
    let q = d.get(VarFamily::MDriQss);
    let beta = cfg.sf.lag_factor();
    let q0 = cfg.sf.q_init.unwrap_or(cfg.baseline_rate());
    for t in 0..t_len {
        let buy = d.get(VarFamily::PBuy)[t];
        let sell = d.get(VarFamily::PSell)[t];
        if buy.min(sell) > TOL {
            return Err(format!("hour {}: buys {buy} and sells {sell}", t + 1));
        }
        let supply = cfg.wind.values[t] + cfg.pv.values[t] + buy + d.get(VarFamily::PExp)[t];
        let use_ = sell
            + d.get(VarFamily::PAe)[t]
            + d.get(VarFamily::PComp)[t]
            + d.get(VarFamily::PEh)[t]
            + d.get(VarFamily::PLeh)[t];
        if (supply - use_).abs() > TOL {
            return Err(format!("hour {}: power residual {}", t + 1, supply - use_));
        }
        if sol.mode == FlexMode::AeSfFlex {
            let prev = if t == 0 { q0 } else { q[t - 1] };
            let r = dis[t] - (beta * prev + (1.0 - beta) * q[t]);
            if r.abs() > TOL {
                return Err(format!("hour {}: transition residual {r}", t + 1));
            }
        }
    }
    let parts: f64 = sol.cost_breakdown.iter().map(|c| c.usd).sum();
    if (parts - sol.objective_value).abs() > 1e-9 * sol.objective_value.abs().max(1.0) {
        return Err("breakdown does not sum to the objective".into());
    }
    Ok(())
}

fn scale_money(cfg: &mut ScenarioConfig, k: f64) {
    for s in [&mut cfg.prices_buy, &mut cfg.prices_sell] {
        s.values.iter_mut().for_each(|x| *x *= k);
    }
    let p = &mut cfg.plant;
    for c in [
        &mut p.c_s, &mut p.c_w, &mut p.c_ore, &mut p.c_sf, &mut p.c_ae, &mut p.c_eh, &mut p.c_coxp,
        &mut p.c_hs, &mut p.c_leh, &mut p.c_tax_price, &mut p.hy_price,
    ] {
        *c *= k;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn solutions_are_physically_consistent_and_nested(seed in 0u64..10_000, horizon in 4usize..16) {
        let cfg = synth_scenario(seed, horizon);
        let sols: Vec<_> = FlexMode::ALL.iter().map(|&m| solve_mode(&cfg, m)).collect();
        for s in &sols {
            prop_assert_eq!(s.status, SolveStatus::Optimal);
            let mut c = cfg.clone();
            c.mode = s.mode;
            prop_assert!(hygiene(&c, s).is_ok(), "{:?}: {:?}", s.mode, hygiene(&c, s));
        }
        let slack = |a: f64| 1e-7 * a.abs().max(1.0);
        prop_assert!(sols[0].objective_value >= sols[1].objective_value - slack(sols[0].objective_value));
        prop_assert!(sols[1].objective_value >= sols[2].objective_value - slack(sols[1].objective_value));
    }

    #[test]
    fn objective_is_homogeneous_in_monetary_parameters(seed in 0u64..10_000, k in 0.25..4.0f64) {
        let cfg = synth_scenario(seed, 8);
        let mut scaled = cfg.clone();
        scale_money(&mut scaled, k);
        for mode in FlexMode::ALL {
            let a = solve_mode(&cfg, mode).objective_value;
            let b = solve_mode(&scaled, mode).objective_value;
            prop_assert!((b - k * a).abs() <= 1e-6 * (k * a).abs().max(1.0), "{mode}: {b} vs {}", k * a);
        }
    }
}

#[test]
fn engines_agree_across_seeds() {
    let native = engine_by_name("native").unwrap();
    for seed in 0..4 {
        let cfg = synth_scenario(seed, 6);
        for mode in FlexMode::ALL {
            let mut c = cfg.clone();
            c.mode = mode;
            let p = build_problem(&c).unwrap();
            let a = solve(&p, &HighsEngine).unwrap();
            let b = solve(&p, native.as_ref()).unwrap();
            let rel = (a.objective_value - b.objective_value).abs() / a.objective_value.abs();
            assert!(rel < 1e-6, "seed {seed} {mode}: {rel}");
        }
    }
}

#[test]
fn impossible_hydrogen_request_is_reported_infeasible() {
    let mut cfg = synth_scenario(5, 6);
    cfg.h2_request.values.iter_mut().for_each(|x| *x = 20.0);
    for mode in FlexMode::ALL {
        cfg.mode = mode;
        let sol = solve(&build_problem(&cfg).unwrap(), &HighsEngine).unwrap();
        assert_eq!(sol.status, SolveStatus::Infeasible);
        assert!(sol.objective_value.is_nan());
        let hint = infeasibility_hint(&cfg).expect("hint");
        assert!(hint.starts_with("ht_terminal"), "{hint}");
    }
}

#[test]
fn solving_twice_is_bitwise_identical() {
    let cfg = synth_scenario(11, 24);
    for mode in FlexMode::ALL {
        let a = solve_mode(&cfg, mode);
        let b = solve_mode(&cfg, mode);
        assert_eq!(a.dispatch_csv(), b.dispatch_csv());
        assert_eq!(a.summary_json(), b.summary_json());
    }
}
