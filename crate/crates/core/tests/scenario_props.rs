use std::fs;

use proptest::prelude::*;
use zchms_core::scenario::{load_scenario, save_scenario, synth_scenario, FlexMode, ScenarioConfig};

fn mode_strategy() -> impl Strategy<Value = FlexMode> {
    prop::sample::select(FlexMode::ALL.to_vec())
}

/// Checks that do not go through `ScenarioConfig::validate`.
fn independently_valid(cfg: &ScenarioConfig) -> bool {
    let series = [&cfg.prices_buy, &cfg.prices_sell, &cfg.wind, &cfg.pv, &cfg.h2_request];
    series.iter().all(|s| s.values.len() == cfg.horizon && s.values.iter().all(|x| x.is_finite()))
        && cfg.wind.values.iter().all(|&x| x >= 0.0)
        && cfg.pv.values.iter().all(|&x| x >= 0.0)
        && cfg.h2_request.values.iter().all(|&x| x >= 0.0)
        && cfg
            .prices_sell
            .values
            .iter()
            .zip(&cfg.prices_buy.values)
            .all(|(s, b)| s <= b)
        && cfg.dri_order > 0.0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn save_then_load_is_identity(seed in any::<u64>(), horizon in 2usize..72, mode in mode_strategy()) {
        let mut cfg = synth_scenario(seed, horizon);
        cfg.mode = mode;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        save_scenario(&cfg, &path).unwrap();
        prop_assert_eq!(load_scenario(&path).unwrap(), cfg);
    }

    #[test]
    fn loaded_scenarios_are_always_valid(
        seed in 0u64..1000,
        series in 0usize..5,
        hour in 0usize..12,
        value in -50.0..500.0f64,
        order in -100.0..3000.0f64,
    ) {
        let mut cfg = synth_scenario(seed, 12);
        let target = match series {
            0 => &mut cfg.prices_buy,
            1 => &mut cfg.prices_sell,
            2 => &mut cfg.wind,
            3 => &mut cfg.pv,
            _ => &mut cfg.h2_request,
        };
        target.values[hour] = value;
        cfg.dri_order = order;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.json");
        save_scenario(&cfg, &path).unwrap();
        if let Ok(loaded) = load_scenario(&path) {
            prop_assert!(independently_valid(&loaded));
        }
    }
}

#[test]
fn truncated_profile_is_rejected() {
    let cfg = synth_scenario(3, 6);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    save_scenario(&cfg, &path).unwrap();
    let csv = dir.path().join("s.csv");
    let text = fs::read_to_string(&csv).unwrap();
    let kept: Vec<&str> = text.lines().take(5).collect();
    fs::write(&csv, kept.join("\n") + "\n").unwrap();
    let err = load_scenario(&path).unwrap_err().to_string();
    assert!(err.contains("price_buy") || err.contains("length") || err.contains("expected"), "{err}");
}

#[test]
fn unknown_keys_are_rejected() {
    let cfg = synth_scenario(3, 6);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    save_scenario(&cfg, &path).unwrap();
    let text = fs::read_to_string(&path).unwrap().replacen('{', "{\"bogus\": 1,", 1);
    fs::write(&path, text).unwrap();
    assert!(load_scenario(&path).is_err());
}
