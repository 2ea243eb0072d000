//! Delimited-text rendering of trajectories, sweep tables, and search
//! reports. Every file opens with the metadata header; floats are printed
//! in shortest round-trip form so identical runs produce identical bytes.

use std::path::Path;

use tqsim::dynamics::StateDiagnostics;
use tqsim::linalg::CMatrix;
use tqsim::measures::MeasureSeries;
use tqsim::power::SampleOutcome;

use crate::config::{fmt_f64, metadata_block, CliError, CliResult, RunConfig};
use crate::run::SweepRow;

pub const TIMESERIES_HEADER: &str =
    "tau,log_negativity,l1_coherence,trace_distance,fidelity,trace_dev,min_eig";
pub const SWEEP_HEADER: &str =
    "gamma,max_log_negativity,steady_log_negativity,max_l1_coherence,steady_l1_coherence";
pub const REPORT_HEADER: &str = "sample_index,kind,seed,ln_max,e_value";

/// Measured series plus per-sample integrator diagnostics, one row per
/// stored time.
pub fn timeseries_text(
    cfg: &RunConfig,
    command: &str,
    extras: &[(String, String)],
    series: &MeasureSeries,
    diagnostics: &[StateDiagnostics],
) -> String {
    assert_eq!(
        series.len(),
        diagnostics.len(),
        "series and diagnostics cover the same samples"
    );
    let mut s = metadata_block(cfg, command, extras);
    s.push_str(TIMESERIES_HEADER);
    s.push('\n');
    for i in 0..series.len() {
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_f64(series.tau[i]),
            fmt_f64(series.log_negativity[i]),
            fmt_f64(series.l1_coherence[i]),
            fmt_f64(series.trace_distance_to_initial[i]),
            fmt_f64(series.fidelity_to_initial[i]),
            fmt_f64(diagnostics[i].trace_dev),
            fmt_f64(diagnostics[i].min_eig),
        ));
    }
    s
}

/// One row per coupling value.
pub fn sweep_text(cfg: &RunConfig, extras: &[(String, String)], rows: &[SweepRow]) -> String {
    let mut s = metadata_block(cfg, "sweep-gamma", extras);
    s.push_str(SWEEP_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f64(r.gamma),
            fmt_f64(r.max_log_negativity),
            fmt_f64(r.steady_log_negativity),
            fmt_f64(r.max_l1_coherence),
            fmt_f64(r.steady_l1_coherence),
        ));
    }
    s
}

/// One row per evaluated sample, in sample-index order.
pub fn report_text(
    cfg: &RunConfig,
    command: &str,
    extras: &[(String, String)],
    rows: &[ReportRow],
) -> String {
    let mut s = metadata_block(cfg, command, extras);
    s.push_str(REPORT_HEADER);
    s.push('\n');
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            r.sample_index,
            r.kind,
            r.seed,
            fmt_f64(r.ln_max),
            fmt_f64(r.e_value),
        ));
    }
    s
}

/// A report line, decoupled from the library's sample type so evaluation
/// of explicitly configured states fits the same schema.
pub struct ReportRow {
    pub sample_index: usize,
    pub kind: String,
    pub seed: u64,
    pub ln_max: f64,
    pub e_value: f64,
}

impl From<&SampleOutcome> for ReportRow {
    fn from(o: &SampleOutcome) -> Self {
        ReportRow {
            sample_index: o.index,
            kind: o.kind.as_str().to_string(),
            seed: o.seed,
            ln_max: o.ln_max,
            e_value: o.e_value,
        }
    }
}

/// A matrix as whitespace-delimited rows of alternating real and imaginary
/// parts, with leading `#` comment lines. Inverse of the config module's
/// matrix loader.
pub fn matrix_text(m: &CMatrix, comments: &[String]) -> String {
    let mut s = String::new();
    for c in comments {
        s.push_str(&format!("# {c}\n"));
    }
    for i in 0..m.nrows() {
        let row: Vec<String> = (0..m.ncols())
            .flat_map(|j| [fmt_f64(m[(i, j)].re), fmt_f64(m[(i, j)].im)])
            .collect();
        s.push_str(&row.join(" "));
        s.push('\n');
    }
    s
}

/// Writes a finished artifact; failures land on the runtime exit path.
pub fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text)
        .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_metadata;

    #[test]
    fn report_rows_render_in_schema_order() {
        let cfg = RunConfig::default();
        let rows = vec![ReportRow {
            sample_index: 3,
            kind: "pure_product_qubit".into(),
            seed: 17,
            ln_max: 0.25,
            e_value: 0.0125,
        }];
        let text = report_text(&cfg, "optimize-power", &[], &rows);
        let mut lines = text.lines().skip_while(|l| l.starts_with('#'));
        assert_eq!(lines.next(), Some(REPORT_HEADER));
        assert_eq!(lines.next(), Some("3,pure_product_qubit,17,0.25,0.0125"));
        assert!(lines.next().is_none());
    }

    #[test]
    fn headers_parse_back_through_the_metadata_reader() {
        let cfg = RunConfig::default();
        let text = sweep_text(
            &cfg,
            &[("gammas".into(), "[0.05, 0.1]".into())],
            &[SweepRow {
                gamma: 0.05,
                max_log_negativity: 0.01,
                steady_log_negativity: 0.0,
                max_l1_coherence: 0.3,
                steady_l1_coherence: 0.2,
            }],
        );
        let parsed = parse_metadata(&text).unwrap();
        assert_eq!(parsed.config, cfg);
        assert_eq!(parsed.command, "sweep-gamma");
        assert!(parsed.extras.contains_key("gammas"));
    }
}
