//! Subcommand drivers. Each one assembles the physics from a configuration,
//! produces its artifact files inside the output directory, and returns the
//! paths it wrote.

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use tqsim::dynamics::{evolve_sampled, Trajectory};
use tqsim::measures::MeasureSeries;
use tqsim::power::{generating_power, optimize_power, OptimizeOptions, SampleKind};

use crate::config::{assemble, fmt_f64, toml_str, CliError, CliResult, InitialState, RunConfig};
use crate::output::{self, ReportRow};

fn runtime(err: impl std::fmt::Display) -> CliError {
    CliError::Runtime(err.to_string())
}

/// Integrates the configured trajectory and measures it.
pub fn run_trajectory(cfg: &RunConfig) -> CliResult<(Trajectory, MeasureSeries)> {
    let asm = assemble(cfg)?;
    let traj = evolve_sampled(
        &asm.rho0,
        &asm.system,
        &asm.channel_sets,
        cfg.t_max,
        cfg.dt,
        asm.mode,
        cfg.store_stride,
    )
    .map_err(runtime)?;
    let series = MeasureSeries::from_trajectory(&traj).map_err(runtime)?;
    Ok((traj, series))
}

/// `simulate`: one trajectory, one time-series file.
pub fn simulate(cfg: &RunConfig, out_dir: &Path) -> CliResult<Vec<PathBuf>> {
    let (traj, series) = run_trajectory(cfg)?;
    let text = output::timeseries_text(cfg, "simulate", &[], &series, &traj.diagnostics);
    let path = out_dir.join("simulate_timeseries.csv");
    output::write_file(&path, &text)?;
    Ok(vec![path])
}

/// One line of the sweep table.
pub struct SweepRow {
    pub gamma: f64,
    pub max_log_negativity: f64,
    pub steady_log_negativity: f64,
    pub max_l1_coherence: f64,
    pub steady_l1_coherence: f64,
}

fn sweep_row(cfg: &RunConfig) -> CliResult<SweepRow> {
    let (_traj, series) = run_trajectory(cfg)?;
    let max = |xs: &[f64]| xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let last = |xs: &[f64]| *xs.last().expect("series is nonempty");
    Ok(SweepRow {
        gamma: cfg.gamma,
        max_log_negativity: max(&series.log_negativity),
        steady_log_negativity: last(&series.log_negativity),
        max_l1_coherence: max(&series.l1_coherence),
        steady_l1_coherence: last(&series.l1_coherence),
    })
}

/// `sweep-gamma`: re-runs the configured trajectory across a list of
/// coupling strengths, fanning the independent runs out over the available
/// cores, and tabulates each run's peak and final measures.
pub fn sweep_gamma(cfg: &RunConfig, gammas: &[f64], out_dir: &Path) -> CliResult<Vec<PathBuf>> {
    if gammas.is_empty() {
        return Err(CliError::Constraint(
            "sweep needs at least one coupling value".into(),
        ));
    }
    for &g in gammas {
        if !g.is_finite() || g < 0.0 {
            return Err(CliError::Constraint(format!(
                "sweep couplings must be finite and >= 0, got {g}"
            )));
        }
    }

    let n = gammas.len();
    let workers = std::thread::available_parallelism()
        .map(|p| p.get())
        .unwrap_or(1)
        .min(n);
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<CliResult<SweepRow>>> = (0..n).map(|_| None).collect();
    std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|_| {
                scope.spawn(|| {
                    let mut local = Vec::new();
                    loop {
                        let i = next.fetch_add(1, Ordering::Relaxed);
                        if i >= n {
                            break;
                        }
                        let mut c = cfg.clone();
                        c.gamma = gammas[i];
                        local.push((i, sweep_row(&c)));
                    }
                    local
                })
            })
            .collect();
        for h in handles {
            for (i, row) in h.join().expect("sweep worker must not panic") {
                slots[i] = Some(row);
            }
        }
    });

    let mut rows = Vec::with_capacity(n);
    for slot in slots {
        rows.push(slot.expect("every index was claimed by a worker")?);
    }

    let gamma_list = gammas.iter().map(|g| fmt_f64(*g)).collect::<Vec<_>>();
    let extras = vec![("gammas".to_string(), format!("[{}]", gamma_list.join(", ")))];
    let text = output::sweep_text(cfg, &extras, &rows);
    let path = out_dir.join("sweep_gamma.csv");
    output::write_file(&path, &text)?;
    Ok(vec![path])
}

fn parse_kinds(tokens: &[String]) -> CliResult<Vec<SampleKind>> {
    if tokens.is_empty() {
        return Ok(SampleKind::ALL.to_vec());
    }
    tokens
        .iter()
        .map(|t| {
            SampleKind::ALL
                .iter()
                .copied()
                .find(|k| k.as_str() == t)
                .ok_or_else(|| {
                    let known: Vec<&str> = SampleKind::ALL.iter().map(|k| k.as_str()).collect();
                    CliError::Constraint(format!(
                        "unknown sample kind \"{t}\"; known: {}",
                        known.join(", ")
                    ))
                })
        })
        .collect()
}

fn resolve_horizon(cfg: &RunConfig, horizon: Option<f64>, cap_to_t_max: bool) -> CliResult<f64> {
    let h = horizon.unwrap_or(cfg.t_max);
    if !h.is_finite() || h <= 0.0 {
        return Err(CliError::Constraint(format!(
            "horizon must be finite and > 0, got {h}"
        )));
    }
    if cap_to_t_max && h > cfg.t_max {
        return Err(CliError::Constraint(format!(
            "horizon = {h} exceeds the trajectory length t_max = {}",
            cfg.t_max
        )));
    }
    Ok(h)
}

/// `optimize-power`: random search over separable initial states, then a
/// full trajectory dump of the winner. Writes the per-sample report, the
/// winning state, and the winner's time series.
pub fn optimize(
    cfg: &RunConfig,
    n_samples: usize,
    horizon: Option<f64>,
    kind_tokens: &[String],
    mix_terms: usize,
    out_dir: &Path,
) -> CliResult<Vec<PathBuf>> {
    let horizon = resolve_horizon(cfg, horizon, false)?;
    let kinds = parse_kinds(kind_tokens)?;
    let asm = assemble(cfg)?;

    let mut opts = OptimizeOptions::new(n_samples, horizon, cfg.dt, cfg.seed);
    opts.kinds = kinds.clone();
    opts.store_stride = cfg.store_stride;
    opts.mix_terms = mix_terms;
    opts.mode = asm.mode;
    let outcome = optimize_power(&asm.system, &asm.channel_sets, &opts).map_err(runtime)?;

    let kind_list = kinds
        .iter()
        .map(|k| k.as_str())
        .collect::<Vec<_>>()
        .join(",");
    let best = &outcome.best;
    let extras = vec![
        ("horizon".to_string(), fmt_f64(horizon)),
        ("n_samples".to_string(), n_samples.to_string()),
        ("kinds".to_string(), toml_str(&kind_list)),
        ("mix_terms".to_string(), mix_terms.to_string()),
        ("failures".to_string(), outcome.failures.to_string()),
        ("best_seed".to_string(), toml_str(&best.seed.to_string())),
        ("best_kind".to_string(), toml_str(best.kind.as_str())),
        (
            "best_e_value".to_string(),
            fmt_f64(outcome.best_report.e_value),
        ),
    ];
    let rows: Vec<ReportRow> = outcome.all.iter().map(ReportRow::from).collect();
    let report_path = out_dir.join("optimize_report.csv");
    output::write_file(
        &report_path,
        &output::report_text(cfg, "optimize-power", &extras, &rows),
    )?;

    // The winner goes out as a reloadable state file, and the trajectory
    // dump's header points at it so the dump round-trips like any other run.
    let state_name = "optimize_best_state.txt";
    let state_path = out_dir.join(state_name);
    let comments = vec![
        format!(
            "winning sample of an optimize-power search, seed {}",
            best.seed
        ),
        format!("kind {}", best.kind.as_str()),
        format!(
            "rows of alternating re im entries, {0} x {0}",
            best.state.dim()
        ),
    ];
    output::write_file(
        &state_path,
        &output::matrix_text(best.state.matrix(), &comments),
    )?;

    let mut dump_cfg = cfg.clone();
    dump_cfg.t_max = horizon;
    dump_cfg.initial_state = InitialState::MatrixFile(PathBuf::from(state_name));
    let traj = evolve_sampled(
        &best.state,
        &asm.system,
        &asm.channel_sets,
        horizon,
        cfg.dt,
        asm.mode,
        cfg.store_stride,
    )
    .map_err(runtime)?;
    let series = MeasureSeries::from_trajectory(&traj).map_err(runtime)?;
    let dump_extras = vec![
        ("horizon".to_string(), fmt_f64(horizon)),
        ("best_seed".to_string(), toml_str(&best.seed.to_string())),
        ("best_kind".to_string(), toml_str(best.kind.as_str())),
    ];
    let traj_path = out_dir.join("optimize_best_timeseries.csv");
    output::write_file(
        &traj_path,
        &output::timeseries_text(
            &dump_cfg,
            "optimize-power",
            &dump_extras,
            &series,
            &traj.diagnostics,
        ),
    )?;

    Ok(vec![report_path, state_path, traj_path])
}

/// `eval-state`: the configured initial state's own generating power, with
/// the same report schema as the search plus the measured trajectory.
pub fn eval_state(
    cfg: &RunConfig,
    horizon: Option<f64>,
    out_dir: &Path,
) -> CliResult<Vec<PathBuf>> {
    let horizon = resolve_horizon(cfg, horizon, true)?;
    let asm = assemble(cfg)?;
    let traj = evolve_sampled(
        &asm.rho0,
        &asm.system,
        &asm.channel_sets,
        cfg.t_max,
        cfg.dt,
        asm.mode,
        cfg.store_stride,
    )
    .map_err(runtime)?;
    let series = MeasureSeries::from_trajectory(&traj).map_err(runtime)?;
    let report = generating_power(&series, horizon, &asm.rho0).map_err(runtime)?;

    let intervals = report
        .intervals
        .iter()
        .map(|(a, b)| format!("[{}, {}]", fmt_f64(*a), fmt_f64(*b)))
        .collect::<Vec<_>>()
        .join(", ");
    let extras = vec![
        ("horizon".to_string(), fmt_f64(report.horizon)),
        ("threshold".to_string(), fmt_f64(report.threshold)),
        ("intervals".to_string(), format!("[{intervals}]")),
    ];
    let row = ReportRow {
        sample_index: 0,
        kind: cfg.initial_state.kind_token(),
        seed: cfg.seed,
        ln_max: report.ln_max,
        e_value: report.e_value,
    };
    let report_path = out_dir.join("eval_report.csv");
    output::write_file(
        &report_path,
        &output::report_text(cfg, "eval-state", &extras, &[row]),
    )?;

    let traj_path = out_dir.join("eval_timeseries.csv");
    output::write_file(
        &traj_path,
        &output::timeseries_text(cfg, "eval-state", &extras, &series, &traj.diagnostics),
    )?;

    Ok(vec![report_path, traj_path])
}

/// Output directory resolution: explicit flag, then the `TQSIM_OUT_DIR`
/// environment variable, then the working directory.
pub fn resolve_out_dir(flag: Option<PathBuf>) -> PathBuf {
    flag.or_else(|| std::env::var_os("TQSIM_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}
