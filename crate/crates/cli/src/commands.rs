use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use zchms_core::drmetrics::{compare_modes_with, DrError};
use zchms_core::scenario::{load_scenario, save_scenario, synth_scenario, FlexMode, ScenarioConfig};
use zchms_core::scheduler::{
    brute_force_oracle, build_problem, infeasibility_hint, solve, ScheduleSolution, SolveError,
    SolveStatus,
};
use zchms_core::sf_flex::{
    identify_ttrans, read_trajectory_csv, simulate_reference, step_plan, check_metallization,
    SfFlexParams, SurrogatePlant, Trajectory,
};
use zchms_core::solver::{engine_from_env, MilpEngine};

use crate::manifest::{write_atomic, RunManifest};
use crate::{Cli, Command, CompareArgs, IdentifyArgs, ReportArgs, ScenarioSource, ScheduleArgs, SynthArgs};

const MET_BAND: f64 = 0.005;
const ORACLE_REL_TOL: f64 = 1e-6;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Infeasible { mode: FlexMode, hint: Option<String> },
    Engine(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 2,
            CliError::Infeasible { .. } => 3,
            CliError::Engine(_) => 4,
        }
    }

    pub fn hint(&self) -> Option<&str> {
        match self {
            CliError::Infeasible { hint, .. } => hint.as_deref(),
            _ => None,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Engine(m) => f.write_str(m),
            CliError::Infeasible { mode, .. } => write!(f, "{mode} schedule is infeasible"),
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Build(_) | SolveError::HorizonTooLarge(_) | SolveError::Io(_) => {
                CliError::Input(e.to_string())
            }
            SolveError::Engine(_) | SolveError::Inconsistent { .. } => CliError::Engine(e.to_string()),
        }
    }
}

impl From<DrError> for CliError {
    fn from(e: DrError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> CliError + '_ {
    move |e| CliError::Input(format!("{}: {e}", path.display()))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    write_atomic(path, text.as_bytes()).map_err(io_err(path))
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

pub fn run(cli: &Cli, argv: &[String]) -> Result<(), CliError> {
    let started = Instant::now();
    let (out, config, seed, engine) = match &cli.command {
        Command::Identify(a) => (a.out.clone(), a.config.clone().or(a.trajectory.clone()), None, None),
        Command::Schedule(a) => (a.out.clone(), a.source.config.clone(), a.source.seed, Some(())),
        Command::Compare(a) => (a.out.clone(), a.source.config.clone(), a.source.seed, Some(())),
        Command::Synth(a) => (a.out.clone(), None, Some(a.seed), None),
        Command::Report(a) => (a.out.clone(), None, None, None),
    };
    ensure_dir(&out)?;
    let engine: Option<Box<dyn MilpEngine>> = match engine {
        Some(()) => Some(engine_from_env().map_err(|e| CliError::Input(e.to_string()))?),
        None => None,
    };
    match &cli.command {
        Command::Identify(a) => identify(a)?,
        Command::Schedule(a) => schedule(a, engine.as_deref().expect("engine selected"))?,
        Command::Compare(a) => compare(a, engine.as_deref().expect("engine selected"))?,
        Command::Synth(a) => synth(a)?,
        Command::Report(a) => report(a)?,
    }
    RunManifest {
        command: argv.to_vec(),
        config,
        seed,
        engine: engine.map_or_else(|| "none".to_string(), |e| e.name().to_string()),
        out: out.clone(),
        version: env!("CARGO_PKG_VERSION"),
        wall_time_s: started.elapsed().as_secs_f64(),
    }
    .write(&out)
    .map_err(io_err(&out))
}

fn load_source(src: &ScenarioSource) -> Result<ScenarioConfig, CliError> {
    match (&src.config, src.seed) {
        (Some(path), _) => load_scenario(path).map_err(|e| CliError::Input(e.to_string())),
        (None, Some(seed)) => {
            if src.horizon < 2 {
                return Err(CliError::Input("synthetic scenarios need a horizon of at least 2 hours".into()));
            }
            Ok(synth_scenario(seed, src.horizon))
        }
        (None, None) => Err(CliError::Input("either --config or --seed is required".into())),
    }
}

fn solve_mode(cfg: &ScenarioConfig, mode: FlexMode, engine: &dyn MilpEngine) -> Result<ScheduleSolution, CliError> {
    let mut cfg = cfg.clone();
    cfg.mode = mode;
    let problem = build_problem(&cfg).map_err(|e| CliError::Input(e.to_string()))?;
    let sol = solve(&problem, engine)?;
    match sol.status {
        SolveStatus::Optimal => Ok(sol),
        SolveStatus::Infeasible => Err(CliError::Infeasible {
            mode,
            hint: infeasibility_hint(&cfg),
        }),
        SolveStatus::Unbounded => Err(CliError::Engine(format!("{mode} schedule is unbounded"))),
    }
}

fn write_solution(out: &Path, sol: &ScheduleSolution) -> Result<(), CliError> {
    write_file(&out.join(format!("dispatch_{}.csv", sol.mode)), &sol.dispatch_csv())?;
    write_file(&out.join(format!("summary_{}.json", sol.mode)), &sol.summary_json())
}

fn schedule(a: &ScheduleArgs, engine: &dyn MilpEngine) -> Result<(), CliError> {
    let mut cfg = load_source(&a.source)?;
    cfg.mode = a.mode;
    let problem = build_problem(&cfg).map_err(|e| CliError::Input(e.to_string()))?;
    write_file(&a.out.join(format!("problem_{}.lp", a.mode)), &problem.to_lp_string())?;
    let sol = solve_mode(&cfg, a.mode, engine)?;
    write_solution(&a.out, &sol)?;
    println!(
        "{}: objective {:.2} $, {:.3} $/t over {} t",
        sol.mode, sol.objective_value, sol.cost_per_ton, sol.dri_order
    );
    Ok(())
}

fn compare(a: &CompareArgs, engine: &dyn MilpEngine) -> Result<(), CliError> {
    let cfg = load_source(&a.source)?;
    let results: Vec<Result<ScheduleSolution, CliError>> = std::thread::scope(|s| {
        let handles: Vec<_> = FlexMode::ALL
            .iter()
            .map(|&mode| {
                let cfg = &cfg;
                s.spawn(move || solve_mode(cfg, mode, engine))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    let mut solutions = BTreeMap::new();
    for r in results {
        let sol = r?;
        solutions.insert(sol.mode, sol);
    }
    let comparison = compare_modes_with(&solutions, a.power_basis)?;
    let mut table = comparison.render_text();
    if a.oracle {
        table.push_str(&oracle_line(&cfg, &solutions)?);
    }
    for sol in solutions.values() {
        write_solution(&a.out, sol)?;
    }
    write_file(&a.out.join("comparison.txt"), &table)?;
    write_file(&a.out.join("dr_report.json"), &comparison.to_json())?;
    write_file(&a.out.join("dr_report.csv"), &comparison.to_csv())?;
    print!("{table}");
    Ok(())
}

fn oracle_line(cfg: &ScenarioConfig, solutions: &BTreeMap<FlexMode, ScheduleSolution>) -> Result<String, CliError> {
    let mut line = String::from("oracle:");
    let mut all = true;
    for (mode, sol) in solutions {
        let mut c = cfg.clone();
        c.mode = *mode;
        let o = brute_force_oracle(&c)?;
        let rel = (o.objective_value - sol.objective_value).abs() / o.objective_value.abs().max(1.0);
        let ok = o.status == sol.status && rel <= ORACLE_REL_TOL;
        all &= ok;
        let _ = write!(line, " {mode} {} (rel diff {rel:.1e});", if ok { "agrees" } else { "DISAGREES" });
    }
    line.pop();
    let _ = writeln!(line, "{}", if all { "" } else { " MISMATCH" });
    if all {
        Ok(line)
    } else {
        Err(CliError::Engine(line.trim_end().to_string()))
    }
}

fn synth(a: &SynthArgs) -> Result<(), CliError> {
    if a.horizon < 2 {
        return Err(CliError::Input("synthetic scenarios need a horizon of at least 2 hours".into()));
    }
    let mut cfg = synth_scenario(a.seed, a.horizon);
    cfg.mode = a.mode;
    let path = a.out.join("scenario.json");
    save_scenario(&cfg, &path).map_err(|e| CliError::Input(e.to_string()))?;
    println!("wrote {}", path.display());
    Ok(())
}

fn report(a: &ReportArgs) -> Result<(), CliError> {
    let mut solutions = BTreeMap::new();
    for mode in FlexMode::ALL {
        let summary = a.out.join(format!("summary_{mode}.json"));
        if !summary.exists() {
            continue;
        }
        let dispatch = a.out.join(format!("dispatch_{mode}.csv"));
        let sol = ScheduleSolution::from_files(&dispatch, &summary).map_err(|e| CliError::Input(e.to_string()))?;
        solutions.insert(mode, sol);
    }
    if solutions.is_empty() {
        return Err(CliError::Input(format!("no summary_<mode>.json files in {}", a.out.display())));
    }
    let comparison = compare_modes_with(&solutions, a.power_basis)?;
    print!("{}", comparison.render_text());
    Ok(())
}

fn identify(a: &IdentifyArgs) -> Result<(), CliError> {
    let input = |e: zchms_core::sf_flex::SfFlexError| CliError::Input(e.to_string());
    let params = match &a.config {
        Some(p) => load_scenario(p).map_err(|e| CliError::Input(e.to_string()))?.sf,
        None => SfFlexParams::default(),
    };
    let traj: Trajectory = match (&a.trajectory, a.synthetic) {
        (Some(path), _) => read_trajectory_csv(path).map_err(input)?,
        (None, Some(kind)) => {
            let plan = step_plan(a.step.0, a.step.1, a.hold);
            simulate_reference(&plan, &SurrogatePlant::new(kind, a.t_true), &params.with_open_ramps())
                .map_err(input)?
                .sampled
        }
        (None, None) => return Err(CliError::Input("either --trajectory or --synthetic is required".into())),
    };
    let fit = identify_ttrans(&traj, &params).map_err(input)?;
    println!("T_trans = {:.6} h", fit.t_trans);
    println!("beta = {:.6}", fit.beta);
    println!("RMSE = {:.6} t/h ({:.3} % of rated)", fit.rmse, fit.rmse_pct_rated);
    if let Some(met) = &traj.met_rate {
        let setpoint = met.first().copied().unwrap_or(f64::NAN);
        let check = check_metallization(&traj, setpoint, MET_BAND).map_err(input)?;
        println!(
            "metallization within +/-{MET_BAND} of {setpoint}: {} (max deviation {:.6})",
            if check.passed { "yes" } else { "no" },
            check.max_deviation
        );
    }
    let path: PathBuf = a.out.join("identify_fit.csv");
    let mut csv = String::from("step,qss_tph,observed_dis_tph,fitted_dis_tph\n");
    for k in 0..traj.len() {
        let fitted = if k == 0 {
            traj.dis[0]
        } else {
            fit.beta * traj.qss[k - 1] + (1.0 - fit.beta) * traj.qss[k]
        };
        let _ = writeln!(csv, "{k},{},{},{}", traj.qss[k], traj.dis[k], fitted);
    }
    write_file(&path, &csv)
}
