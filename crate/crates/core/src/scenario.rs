//! Study inputs: hourly profiles, plant parameters, the production order and the
//! flexibility mode, plus the on-disk JSON + CSV format and a deterministic
//! synthetic scenario generator.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::sf_flex::SfFlexParams;

/// Header of the profile CSV, in column order.
pub const PROFILE_HEADER: [&str; 6] = [
    "hour",
    "price_buy",
    "price_sell",
    "wind_mw",
    "pv_mw",
    "h2_request_t",
];

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("malformed CSV in {path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
    #[error("series `{series}` has {found} values but the horizon is {expected}")]
    LengthMismatch {
        series: String,
        expected: usize,
        found: usize,
    },
    #[error("invalid `{field}`{}: {reason}", index.map(|i| format!(" at index {i}")).unwrap_or_default())]
    Invalid {
        field: String,
        index: Option<usize>,
        reason: String,
    },
}

impl ScenarioError {
    fn invalid(field: impl Into<String>, index: Option<usize>, reason: impl Into<String>) -> Self {
        ScenarioError::Invalid {
            field: field.into(),
            index,
            reason: reason.into(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Unit {
    #[serde(rename = "$/MWh")]
    UsdPerMwh,
    #[serde(rename = "MW")]
    Mw,
    #[serde(rename = "t/h")]
    TonnePerHour,
    #[serde(rename = "t")]
    Tonne,
}

impl Unit {
    /// Power and mass quantities cannot be negative; prices can.
    pub fn is_non_negative(self) -> bool {
        !matches!(self, Unit::UsdPerMwh)
    }
}

/// Hourly profile. `values[i]` belongs to hour `start_hour + i`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    pub start_hour: u32,
    pub values: Vec<f64>,
    pub unit: Unit,
}

impl TimeSeries {
    pub fn new(values: Vec<f64>, unit: Unit) -> Self {
        Self {
            start_hour: 1,
            values,
            unit,
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    fn validate(&self, name: &str, horizon: usize) -> Result<(), ScenarioError> {
        if self.values.len() != horizon {
            return Err(ScenarioError::LengthMismatch {
                series: name.to_string(),
                expected: horizon,
                found: self.values.len(),
            });
        }
        for (i, v) in self.values.iter().enumerate() {
            if !v.is_finite() {
                return Err(ScenarioError::invalid(name, Some(i), "value is not finite"));
            }
            if self.unit.is_non_negative() && *v < 0.0 {
                return Err(ScenarioError::invalid(
                    name,
                    Some(i),
                    format!("negative value {v} for a non-negative quantity"),
                ));
            }
        }
        Ok(())
    }
}

/// Which parts of the plant may deviate from steady operation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FlexMode {
    /// Constant furnace discharge and constant electrolyzer power.
    Baseline,
    /// Electrolyzer power free within its extended range; furnace constant.
    AeFlex,
    /// Electrolyzer and furnace setpoints both free.
    AeSfFlex,
}

impl FlexMode {
    pub const ALL: [FlexMode; 3] = [FlexMode::Baseline, FlexMode::AeFlex, FlexMode::AeSfFlex];

    pub fn as_str(self) -> &'static str {
        match self {
            FlexMode::Baseline => "baseline",
            FlexMode::AeFlex => "ae-flex",
            FlexMode::AeSfFlex => "ae-sf-flex",
        }
    }
}

impl fmt::Display for FlexMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FlexMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "baseline" => Ok(FlexMode::Baseline),
            "ae-flex" => Ok(FlexMode::AeFlex),
            "ae-sf-flex" => Ok(FlexMode::AeSfFlex),
            other => Err(format!(
                "unknown mode `{other}` (expected baseline, ae-flex or ae-sf-flex)"
            )),
        }
    }
}

/// Technical and economic parameters of everything except the shaft furnace
/// dynamics. Missing keys in a config file fall back to these defaults.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlantParams {
    /// Low-temperature waste heat per tonne of hydrogen produced, MWh/t.
    pub gamma_h2: f64,
    /// Electrolyzer specific consumption, MWh/t.
    pub kappa_h2: f64,
    /// Per-stack power range, MW.
    pub ae_single_min: f64,
    pub ae_single_max: f64,
    pub n_ae: u32,
    /// Hydrogen tank bounds and nominal capacity, t.
    pub ht_min: f64,
    pub ht_max: f64,
    pub ht_cap: f64,
    pub phi_eh: f64,
    pub gamma_in: f64,
    pub gamma_out: f64,
    /// Compressor and expander specific power, MWh/t of hydrogen.
    pub comp_coeff: f64,
    pub exp_coeff: f64,
    /// Top-gas and boiler heat recovered per tonne of DRI, MWh/t.
    pub ftg_coeff: f64,
    pub whb_coeff: f64,
    /// Reaction heat carried by the hot reducing gas per tonne of DRI, MWh/t.
    pub sf_heat_coeff: f64,
    /// Low-temperature thermal store capacity, MWh.
    pub lts_cap: f64,
    /// Low-temperature electric heater rating, MW.
    pub leh_max: f64,
    pub c_s: f64,
    pub c_w: f64,
    /// $/t of DRI.
    pub c_ore: f64,
    pub c_sf: f64,
    pub c_ae: f64,
    pub c_eh: f64,
    pub c_coxp: f64,
    pub c_hs: f64,
    pub c_leh: f64,
    /// $/t CO2.
    pub c_tax_price: f64,
    /// t CO2/MWh of purchased power.
    pub phi_ec: f64,
    /// $/t of hydrogen sold.
    pub hy_price: f64,
    /// Grid exchange switch constant, MW. Derived from the capacities when absent.
    pub big_m: Option<f64>,
}

impl Default for PlantParams {
    fn default() -> Self {
        Self {
            gamma_h2: 5.0,
            kappa_h2: 52.0,
            ae_single_min: 0.5,
            ae_single_max: 6.0,
            n_ae: 120,
            ht_min: 12.0,
            ht_max: 120.0,
            ht_cap: 120.0,
            phi_eh: 0.95,
            gamma_in: 0.9,
            gamma_out: 0.9,
            comp_coeff: 3.0,
            exp_coeff: 2.0,
            ftg_coeff: 0.05,
            whb_coeff: 0.05,
            sf_heat_coeff: 0.35,
            lts_cap: 200.0,
            leh_max: 50.0,
            c_s: 30.0,
            c_w: 25.0,
            c_ore: 180.0 / 1.4,
            c_sf: 33.56,
            c_ae: 13.65,
            c_eh: 34.83,
            c_coxp: 8.0,
            c_hs: 6.0,
            c_leh: 4.86,
            c_tax_price: 40.0,
            phi_ec: 0.57,
            hy_price: 6500.0,
            big_m: None,
        }
    }
}

impl PlantParams {
    /// Aggregate electrolyzer power range `N_AE * single` in MW.
    pub fn ae_bounds(&self) -> (f64, f64) {
        let n = f64::from(self.n_ae);
        (n * self.ae_single_min, n * self.ae_single_max)
    }

    /// Electric heater demand per tonne of DRI under heat-led operation, MWh/t.
    pub fn eh_per_dri(&self) -> f64 {
        self.sf_heat_coeff - self.ftg_coeff - self.whb_coeff
    }

    fn validate(&self) -> Result<(), ScenarioError> {
        let positive = [
            ("plant.kappa_h2", self.kappa_h2),
            ("plant.ae_single_max", self.ae_single_max),
            ("plant.ht_cap", self.ht_cap),
            ("plant.lts_cap", self.lts_cap),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(ScenarioError::invalid(name, None, format!("must be > 0, got {v}")));
            }
        }
        if self.n_ae == 0 {
            return Err(ScenarioError::invalid("plant.n_ae", None, "must be at least 1"));
        }
        let fractions = [
            ("plant.phi_eh", self.phi_eh),
            ("plant.gamma_in", self.gamma_in),
            ("plant.gamma_out", self.gamma_out),
        ];
        for (name, v) in fractions {
            if !(v > 0.0 && v <= 1.0) {
                return Err(ScenarioError::invalid(name, None, format!("must lie in (0, 1], got {v}")));
            }
        }
        let non_negative = [
            ("plant.gamma_h2", self.gamma_h2),
            ("plant.ae_single_min", self.ae_single_min),
            ("plant.ht_min", self.ht_min),
            ("plant.comp_coeff", self.comp_coeff),
            ("plant.exp_coeff", self.exp_coeff),
            ("plant.ftg_coeff", self.ftg_coeff),
            ("plant.whb_coeff", self.whb_coeff),
            ("plant.sf_heat_coeff", self.sf_heat_coeff),
            ("plant.leh_max", self.leh_max),
            ("plant.c_s", self.c_s),
            ("plant.c_w", self.c_w),
            ("plant.c_ore", self.c_ore),
            ("plant.c_sf", self.c_sf),
            ("plant.c_ae", self.c_ae),
            ("plant.c_eh", self.c_eh),
            ("plant.c_coxp", self.c_coxp),
            ("plant.c_hs", self.c_hs),
            ("plant.c_leh", self.c_leh),
            ("plant.c_tax_price", self.c_tax_price),
            ("plant.phi_ec", self.phi_ec),
            ("plant.hy_price", self.hy_price),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(ScenarioError::invalid(name, None, format!("must be finite and >= 0, got {v}")));
            }
        }
        if self.ae_single_min > self.ae_single_max {
            return Err(ScenarioError::invalid(
                "plant.ae_single_min",
                None,
                "exceeds plant.ae_single_max",
            ));
        }
        if self.ht_min >= self.ht_max {
            return Err(ScenarioError::invalid("plant.ht_min", None, "must be below plant.ht_max"));
        }
        if self.ht_max > self.ht_cap {
            return Err(ScenarioError::invalid("plant.ht_max", None, "exceeds plant.ht_cap"));
        }
        let half = 0.5 * self.ht_cap;
        if half < self.ht_min || half > self.ht_max {
            return Err(ScenarioError::invalid(
                "plant.ht_cap",
                None,
                "the 50% initial/terminal level lies outside [ht_min, ht_max]",
            ));
        }
        if self.eh_per_dri() < 0.0 {
            return Err(ScenarioError::invalid(
                "plant.sf_heat_coeff",
                None,
                "recovered top-gas and boiler heat exceed the furnace heat demand",
            ));
        }
        Ok(())
    }
}

/// The full input to one study.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub horizon: usize,
    pub prices_buy: TimeSeries,
    pub prices_sell: TimeSeries,
    pub wind: TimeSeries,
    pub pv: TimeSeries,
    pub h2_request: TimeSeries,
    /// Total DRI to discharge over the horizon, t.
    pub dri_order: f64,
    pub plant: PlantParams,
    pub sf: SfFlexParams,
    pub mode: FlexMode,
}

impl ScenarioConfig {
    /// Constant discharge rate that meets the order exactly, t/h.
    pub fn baseline_rate(&self) -> f64 {
        self.dri_order / (self.horizon as f64 * self.sf.dt)
    }

    /// Smallest switch constant that cannot cut off any feasible exchange.
    pub fn required_big_m(&self) -> f64 {
        let p = &self.plant;
        let (_, ae_max) = p.ae_bounds();
        let h2_out_max = self.sf.phi_h2 * self.sf.m_max + self.h2_request.max();
        self.wind.max()
            + self.pv.max()
            + ae_max
            + p.comp_coeff * ae_max / p.kappa_h2
            + p.eh_per_dri() * self.sf.m_max
            + p.leh_max
            + p.exp_coeff * h2_out_max
    }

    pub fn big_m(&self) -> f64 {
        self.plant.big_m.unwrap_or_else(|| self.required_big_m())
    }

    /// Electrolyzer power that a constant-rate plant needs to close the
    /// hydrogen balance over the horizon, MW.
    pub fn pinned_baseline_ae_power(&self) -> f64 {
        let t = self.horizon as f64;
        let demand: f64 = self.h2_request.values.iter().sum::<f64>()
            + self.sf.phi_h2 * self.baseline_rate() * t;
        self.plant.kappa_h2 * demand / t
    }

    /// Checks every invariant of the input types.
    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.horizon < 1 {
            return Err(ScenarioError::invalid("horizon", None, "must be at least 1"));
        }
        for (name, series) in self.named_series() {
            series.validate(name, self.horizon)?;
        }
        for (i, (sell, buy)) in self
            .prices_sell
            .values
            .iter()
            .zip(&self.prices_buy.values)
            .enumerate()
        {
            if sell > buy {
                return Err(ScenarioError::invalid(
                    "price_sell",
                    Some(i),
                    format!("sell price {sell} exceeds buy price {buy}"),
                ));
            }
        }
        self.plant.validate()?;
        self.sf
            .validate()
            .map_err(|e| ScenarioError::invalid("sf", None, e.to_string()))?;
        if (self.sf.dt - 1.0).abs() > 1e-12 {
            return Err(ScenarioError::invalid("sf.dt", None, "scheduling runs on a 1 h step"));
        }
        if !(self.dri_order.is_finite() && self.dri_order > 0.0) {
            return Err(ScenarioError::invalid("dri_order_t", None, "must be a positive tonnage"));
        }
        let rate = self.baseline_rate();
        if rate < self.sf.m_min || rate > self.sf.m_max {
            return Err(ScenarioError::invalid(
                "dri_order_t",
                None,
                format!(
                    "implied constant rate {rate} t/h lies outside [{}, {}]",
                    self.sf.m_min, self.sf.m_max
                ),
            ));
        }
        if let Some(q0) = self.sf.q_init {
            if q0 < self.sf.m_min || q0 > self.sf.m_max {
                return Err(ScenarioError::invalid("sf.q_init", None, "outside the discharge bounds"));
            }
        }
        if let Some(m) = self.plant.big_m {
            let need = self.required_big_m();
            if !(m >= need) {
                return Err(ScenarioError::invalid(
                    "plant.big_m",
                    None,
                    format!("{m} MW is below the capacity sum {need} MW"),
                ));
            }
        }
        Ok(())
    }

    pub fn named_series(&self) -> [(&'static str, &TimeSeries); 5] {
        [
            ("price_buy", &self.prices_buy),
            ("price_sell", &self.prices_sell),
            ("wind_mw", &self.wind),
            ("pv_mw", &self.pv),
            ("h2_request_t", &self.h2_request),
        ]
    }

    /// Hash of every input except the mode; solutions of the same study share it.
    pub fn fingerprint(&self) -> String {
        let file = self.to_file("profiles.csv");
        let mut doc = serde_json::to_value(&file).expect("config serializes");
        if let Some(obj) = doc.as_object_mut() {
            obj.remove("mode");
        }
        let mut hasher = Sha256::new();
        hasher.update(doc.to_string().as_bytes());
        for row in self.rows() {
            hasher.update(format!("{row:?}").as_bytes());
        }
        hex::encode(&hasher.finalize()[..8])
    }

    fn rows(&self) -> Vec<ProfileRow> {
        (0..self.horizon)
            .map(|i| ProfileRow {
                hour: i as u32 + 1,
                price_buy: self.prices_buy.values[i],
                price_sell: self.prices_sell.values[i],
                wind_mw: self.wind.values[i],
                pv_mw: self.pv.values[i],
                h2_request_t: self.h2_request.values[i],
            })
            .collect()
    }

    fn to_file(&self, profiles: &str) -> ScenarioFile {
        ScenarioFile {
            horizon: self.horizon,
            profiles: profiles.to_string(),
            dri_order_t: self.dri_order,
            mode: self.mode,
            plant: self.plant.clone(),
            sf: self.sf.clone(),
        }
    }
}

/// JSON document on disk. Time series live in a separate CSV.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    horizon: usize,
    /// Path of the profile CSV, relative to the JSON file.
    profiles: String,
    dri_order_t: f64,
    #[serde(default = "default_mode")]
    mode: FlexMode,
    #[serde(default)]
    plant: PlantParams,
    #[serde(default)]
    sf: SfFlexParams,
}

fn default_mode() -> FlexMode {
    FlexMode::Baseline
}

#[derive(Debug, Serialize, Deserialize)]
struct ProfileRow {
    hour: u32,
    price_buy: f64,
    price_sell: f64,
    wind_mw: f64,
    pv_mw: f64,
    h2_request_t: f64,
}

/// Reads a JSON config and the profile CSV it references, then validates.
pub fn load_scenario(path: &Path) -> Result<ScenarioConfig, ScenarioError> {
    let text = fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file: ScenarioFile = serde_json::from_str(&text).map_err(|source| ScenarioError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    let csv_path = path
        .parent()
        .unwrap_or_else(|| Path::new("."))
        .join(&file.profiles);
    let rows = read_profiles(&csv_path)?;
    for (i, row) in rows.iter().enumerate() {
        if row.hour as usize != i + 1 {
            return Err(ScenarioError::invalid(
                "hour",
                Some(i),
                format!("expected hour {}, found {}", i + 1, row.hour),
            ));
        }
    }
    let column = |f: fn(&ProfileRow) -> f64, unit| TimeSeries::new(rows.iter().map(f).collect(), unit);
    let cfg = ScenarioConfig {
        horizon: file.horizon,
        prices_buy: column(|r| r.price_buy, Unit::UsdPerMwh),
        prices_sell: column(|r| r.price_sell, Unit::UsdPerMwh),
        wind: column(|r| r.wind_mw, Unit::Mw),
        pv: column(|r| r.pv_mw, Unit::Mw),
        h2_request: column(|r| r.h2_request_t, Unit::TonnePerHour),
        dri_order: file.dri_order_t,
        plant: file.plant,
        sf: file.sf,
        mode: file.mode,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn read_profiles(path: &Path) -> Result<Vec<ProfileRow>, ScenarioError> {
    let csv_err = |source| ScenarioError::Csv {
        path: path.to_path_buf(),
        source,
    };
    let file = fs::File::open(path).map_err(|source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut reader = csv::Reader::from_reader(file);
    let header = reader.headers().map_err(csv_err)?.clone();
    if header.iter().ne(PROFILE_HEADER.iter().copied()) {
        return Err(ScenarioError::invalid(
            "profiles",
            None,
            format!("header must be `{}`", PROFILE_HEADER.join(",")),
        ));
    }
    reader
        .deserialize()
        .collect::<Result<Vec<ProfileRow>, _>>()
        .map_err(csv_err)
}

/// Writes `path` (JSON) and a sibling `<stem>.csv` holding the profiles.
pub fn save_scenario(cfg: &ScenarioConfig, path: &Path) -> Result<(), ScenarioError> {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("scenario");
    let csv_name = format!("{stem}.csv");
    let csv_path = path.parent().unwrap_or_else(|| Path::new(".")).join(&csv_name);

    let io_err = |p: &Path| {
        let p = p.to_path_buf();
        move |source| ScenarioError::Io { path: p, source }
    };
    let mut writer = csv::Writer::from_path(&csv_path).map_err(|source| ScenarioError::Csv {
        path: csv_path.clone(),
        source,
    })?;
    for row in cfg.rows() {
        writer.serialize(row).map_err(|source| ScenarioError::Csv {
            path: csv_path.clone(),
            source,
        })?;
    }
    writer.flush().map_err(io_err(&csv_path))?;

    let json = serde_json::to_string_pretty(&cfg.to_file(&csv_name)).map_err(|source| {
        ScenarioError::Json {
            path: path.to_path_buf(),
            source,
        }
    })?;
    fs::write(path, json + "\n").map_err(io_err(path))
}

// Hour-of-day buy price shape, $/MWh: night valley at 04:00-05:00, evening peak at 19:00.
const PRICE_SHAPE: [f64; 24] = [
    48.0, 42.0, 36.0, 30.0, 28.0, 31.0, 40.0, 52.0, 60.0, 58.0, 50.0, 44.0, 40.0, 42.0, 48.0,
    56.0, 66.0, 78.0, 84.0, 80.0, 70.0, 62.0, 56.0, 52.0,
];
const SELL_RATIO: f64 = 0.8;
const PV_PEAK_MW: f64 = 300.0;
const WIND_MEAN_MW: f64 = 180.0;
const WIND_MAX_MW: f64 = 400.0;
const SYNTH_RATE_TPH: f64 = 110.0;
const SYNTH_H2_REQUEST_TPH: f64 = 1.5;

/// Deterministic stand-in for a measured operating day.
///
/// Panics if `horizon < 2`.
pub fn synth_scenario(seed: u64, horizon: usize) -> ScenarioConfig {
    assert!(horizon >= 2, "synthetic scenarios need at least two hours");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let hour_of_day = |i: usize| i % 24;
    let buy: Vec<f64> = (0..horizon)
        .map(|i| PRICE_SHAPE[hour_of_day(i)] * rng.gen_range(0.94..1.06))
        .collect();
    let sell: Vec<f64> = buy.iter().map(|p| p * SELL_RATIO).collect();

    let clearness = rng.gen_range(0.75..1.0);
    let pv: Vec<f64> = (0..horizon)
        .map(|i| {
            let h = (hour_of_day(i) + 1) as f64;
            let bell = (std::f64::consts::PI * (h - 6.0) / 13.0).sin().max(0.0);
            let bell = if (6.0..=19.0).contains(&h) { bell } else { 0.0 };
            PV_PEAK_MW * clearness * bell * rng.gen_range(0.9..1.0)
        })
        .collect();

    let mut w = WIND_MEAN_MW * rng.gen_range(0.6..1.4);
    let wind: Vec<f64> = (0..horizon)
        .map(|_| {
            w = WIND_MEAN_MW + 0.8 * (w - WIND_MEAN_MW) + rng.gen_range(-50.0..50.0);
            w = w.clamp(0.0, WIND_MAX_MW);
            w
        })
        .collect();

    ScenarioConfig {
        horizon,
        prices_buy: TimeSeries::new(buy, Unit::UsdPerMwh),
        prices_sell: TimeSeries::new(sell, Unit::UsdPerMwh),
        wind: TimeSeries::new(wind, Unit::Mw),
        pv: TimeSeries::new(pv, Unit::Mw),
        h2_request: TimeSeries::new(vec![SYNTH_H2_REQUEST_TPH; horizon], Unit::TonnePerHour),
        dri_order: SYNTH_RATE_TPH * horizon as f64,
        plant: PlantParams::default(),
        sf: SfFlexParams::default(),
        mode: FlexMode::Baseline,
    }
}
