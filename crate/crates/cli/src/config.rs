//! Run configuration: defaults, file parsing, flag overrides, validation,
//! and assembly of the physical objects the library works with.
//!
//! Bath parameters are configured relative to the computed splitting of the
//! two lowest composite levels: `kappa1`/`kappa2` in units of that frequency,
//! `beta1`/`beta2` in units of its inverse, and the cutoff as a multiple of
//! it. The assembly step converts them to the absolute units the library
//! expects.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use tqsim::bath::{jump_channels, BathIndex, BathParams, JumpChannel};
use tqsim::circuit::{composite_hamiltonian, BasisMode, CircuitParams, CompositeSystem};
use tqsim::dynamics::{DensityMatrix, EvolveMode};
use tqsim::linalg::CMatrix;
use tqsim::{states, C64};

/// Composite dimension of the two-qutrit system; fixed by the truncation.
pub const SYSTEM_DIM: usize = 9;

/// Failure modes of the front end, each mapped onto a process exit code.
#[derive(Debug)]
pub enum CliError {
    /// A referenced file does not exist (exit code 2).
    MissingFile(String),
    /// Unparseable input: bad syntax, unknown keys, bad field types
    /// (exit code 3).
    Malformed(String),
    /// Well-formed input that violates a constraint (exit code 4).
    Constraint(String),
    /// Failures past a valid setup: integration aborts, unwritable outputs
    /// (exit code 1).
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Runtime(_) => 1,
            CliError::MissingFile(_) => 2,
            CliError::Malformed(_) => 3,
            CliError::Constraint(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::MissingFile(m) => write!(f, "missing file: {m}"),
            CliError::Malformed(m) => write!(f, "malformed input: {m}"),
            CliError::Constraint(m) => write!(f, "constraint violation: {m}"),
            CliError::Runtime(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

pub type CliResult<T> = Result<T, CliError>;

fn constraint(err: impl std::fmt::Display) -> CliError {
    CliError::Constraint(err.to_string())
}

fn runtime(err: impl std::fmt::Display) -> CliError {
    CliError::Runtime(err.to_string())
}

/// Basis route for the single-transmon levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Basis {
    Perturbative,
    #[default]
    Numeric,
}

impl Basis {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "perturbative" => Ok(Basis::Perturbative),
            "numeric" => Ok(Basis::Numeric),
            other => Err(constraint(format!(
                "basis must be \"perturbative\" or \"numeric\", got \"{other}\""
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Basis::Perturbative => "perturbative",
            Basis::Numeric => "numeric",
        }
    }
}

impl From<Basis> for BasisMode {
    fn from(b: Basis) -> Self {
        match b {
            Basis::Perturbative => BasisMode::Perturbative,
            Basis::Numeric => BasisMode::Numeric,
        }
    }
}

/// Which generator the trajectory integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    Unitary,
    #[default]
    Lindblad,
}

impl Mode {
    pub fn parse(s: &str) -> CliResult<Self> {
        match s {
            "unitary" => Ok(Mode::Unitary),
            "lindblad" => Ok(Mode::Lindblad),
            other => Err(constraint(format!(
                "mode must be \"unitary\" or \"lindblad\", got \"{other}\""
            ))),
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Mode::Unitary => "unitary",
            Mode::Lindblad => "lindblad",
        }
    }
}

impl From<Mode> for EvolveMode {
    fn from(m: Mode) -> Self {
        match m {
            Mode::Unitary => EvolveMode::Unitary,
            Mode::Lindblad => EvolveMode::Lindblad,
        }
    }
}

/// Initial state selection: a named preset, explicit pure-state amplitudes,
/// or a density-matrix file.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Preset(String),
    /// Nine `[re, im]` pairs in the product basis, slow index first.
    Custom(Vec<[f64; 2]>),
    /// Plain-text matrix file; see [`load_matrix_file`] for the format.
    MatrixFile(PathBuf),
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState::Preset("00".into())
    }
}

impl InitialState {
    /// Short token for report columns.
    pub fn kind_token(&self) -> String {
        match self {
            InitialState::Preset(name) => name.clone(),
            InitialState::Custom(_) => "custom".into(),
            InitialState::MatrixFile(_) => "matrix".into(),
        }
    }
}

/// File-level shape of the initial state key, before validation.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum InitialStateSpec {
    Preset(String),
    Custom { custom: Vec<[f64; 2]> },
    MatrixFile { matrix_file: PathBuf },
}

impl From<InitialStateSpec> for InitialState {
    fn from(spec: InitialStateSpec) -> Self {
        match spec {
            InitialStateSpec::Preset(name) => InitialState::Preset(name),
            InitialStateSpec::Custom { custom } => InitialState::Custom(custom),
            InitialStateSpec::MatrixFile { matrix_file } => InitialState::MatrixFile(matrix_file),
        }
    }
}

/// A fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Josephson-to-charging energy ratio of each transmon.
    pub ej_over_ec: f64,
    /// Charge-charge coupling strength.
    pub gamma: f64,
    /// Oscillator levels kept while diagonalizing a single transmon.
    pub fock_dim: usize,
    pub basis: Basis,
    /// Bath coupling scales, in units of the composite 0-1 splitting.
    pub kappa1: f64,
    pub kappa2: f64,
    /// Inverse bath temperatures, in inverse units of that splitting.
    pub beta1: f64,
    pub beta2: f64,
    /// Bath cutoff as a multiple of the splitting.
    pub cutoff_factor: f64,
    pub t_max: f64,
    pub dt: f64,
    pub initial_state: InitialState,
    pub mode: Mode,
    pub seed: u64,
    /// Keep every n-th integration step in the measured series.
    pub store_stride: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            ej_over_ec: 100.0,
            gamma: 0.2,
            fock_dim: 10,
            basis: Basis::Numeric,
            kappa1: 1.0 / 20.0,
            kappa2: 1.0 / 20.0,
            beta1: 5.0,
            beta2: 5.0,
            cutoff_factor: 50.0,
            t_max: 100.0,
            dt: 1e-3,
            initial_state: InitialState::default(),
            mode: Mode::Lindblad,
            seed: 0,
            store_stride: 10,
        }
    }
}

/// Raw key-value layer of a configuration file. Unknown keys are rejected
/// so a typo never silently falls back to a default.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartialConfig {
    pub ej_over_ec: Option<f64>,
    pub gamma: Option<f64>,
    pub fock_dim: Option<usize>,
    pub basis: Option<String>,
    pub kappa1: Option<f64>,
    pub kappa2: Option<f64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub cutoff_factor: Option<f64>,
    pub t_max: Option<f64>,
    pub dt: Option<f64>,
    pub initial_state: Option<InitialStateSpec>,
    pub mode: Option<String>,
    /* Full-range u64 seeds overflow TOML's i64 integers, so the key also
    accepts a quoted decimal string; headers always emit that form. */
    #[serde(default, deserialize_with = "de_opt_u64")]
    pub seed: Option<u64>,
    pub store_stride: Option<usize>,
}

fn de_opt_u64<'de, D>(deserializer: D) -> Result<Option<u64>, D::Error>
where
    D: serde::Deserializer<'de>,
{
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum IntOrString {
        Int(i64),
        Text(String),
    }
    match IntOrString::deserialize(deserializer)? {
        IntOrString::Int(i) => u64::try_from(i)
            .map(Some)
            .map_err(|_| serde::de::Error::custom(format!("seed must be >= 0, got {i}"))),
        IntOrString::Text(s) => s
            .parse::<u64>()
            .map(Some)
            .map_err(|e| serde::de::Error::custom(format!("seed \"{s}\": {e}"))),
    }
}

/* Keys the metadata parser claims for the configuration itself; everything
else in a header block is subcommand extras. */
const CONFIG_KEYS: [&str; 15] = [
    "ej_over_ec",
    "gamma",
    "fock_dim",
    "basis",
    "kappa1",
    "kappa2",
    "beta1",
    "beta2",
    "cutoff_factor",
    "t_max",
    "dt",
    "initial_state",
    "mode",
    "seed",
    "store_stride",
];

/// Command line overrides; every field mirrors a configuration key and wins
/// over both the file and the default.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct FlagOverrides {
    /// Josephson-to-charging energy ratio.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub ej_over_ec: Option<f64>,
    /// Charge-charge coupling strength.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    /// Oscillator levels kept in the single-transmon diagonalization.
    #[arg(long, global = true)]
    pub fock_dim: Option<usize>,
    /// Level basis: "perturbative" or "numeric".
    #[arg(long, global = true)]
    pub basis: Option<String>,
    /// First bath coupling, in units of the 0-1 splitting.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub kappa1: Option<f64>,
    /// Second bath coupling, in units of the 0-1 splitting.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub kappa2: Option<f64>,
    /// First bath inverse temperature, in inverse splitting units.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta1: Option<f64>,
    /// Second bath inverse temperature, in inverse splitting units.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub beta2: Option<f64>,
    /// Bath cutoff as a multiple of the splitting.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub cutoff_factor: Option<f64>,
    /// Trajectory length.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    /// Integrator step.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    /// Named initial state preset (files support custom states too).
    #[arg(long, global = true)]
    pub initial_state: Option<String>,
    /// Generator: "unitary" or "lindblad".
    #[arg(long, global = true)]
    pub mode: Option<String>,
    /// Master seed for randomized subcommands.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Keep every n-th step in the measured series.
    #[arg(long, global = true)]
    pub store_stride: Option<usize>,
}

impl RunConfig {
    /// Merges defaults, file keys, and flags (flags strongest), then
    /// validates the result.
    pub fn resolve(file: PartialConfig, flags: &FlagOverrides) -> CliResult<RunConfig> {
        let d = RunConfig::default();

        let basis = match flags.basis.as_deref().map(Basis::parse) {
            Some(b) => b?,
            None => match file.basis.as_deref().map(Basis::parse) {
                Some(b) => b?,
                None => d.basis,
            },
        };
        let mode = match flags.mode.as_deref().map(Mode::parse) {
            Some(m) => m?,
            None => match file.mode.as_deref().map(Mode::parse) {
                Some(m) => m?,
                None => d.mode,
            },
        };
        let initial_state = match &flags.initial_state {
            Some(name) => InitialState::Preset(name.clone()),
            None => file
                .initial_state
                .clone()
                .map(InitialState::from)
                .unwrap_or(d.initial_state),
        };

        let cfg = RunConfig {
            ej_over_ec: flags.ej_over_ec.or(file.ej_over_ec).unwrap_or(d.ej_over_ec),
            gamma: flags.gamma.or(file.gamma).unwrap_or(d.gamma),
            fock_dim: flags.fock_dim.or(file.fock_dim).unwrap_or(d.fock_dim),
            basis,
            kappa1: flags.kappa1.or(file.kappa1).unwrap_or(d.kappa1),
            kappa2: flags.kappa2.or(file.kappa2).unwrap_or(d.kappa2),
            beta1: flags.beta1.or(file.beta1).unwrap_or(d.beta1),
            beta2: flags.beta2.or(file.beta2).unwrap_or(d.beta2),
            cutoff_factor: flags
                .cutoff_factor
                .or(file.cutoff_factor)
                .unwrap_or(d.cutoff_factor),
            t_max: flags.t_max.or(file.t_max).unwrap_or(d.t_max),
            dt: flags.dt.or(file.dt).unwrap_or(d.dt),
            initial_state,
            mode,
            seed: flags.seed.or(file.seed).unwrap_or(d.seed),
            store_stride: flags
                .store_stride
                .or(file.store_stride)
                .unwrap_or(d.store_stride),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Front-end level constraints; the library enforces its own on top.
    pub fn validate(&self) -> CliResult<()> {
        let finite_pos = |name: &str, v: f64| -> CliResult<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(constraint(format!(
                    "{name} must be finite and > 0, got {v}"
                )))
            }
        };
        finite_pos("ej_over_ec", self.ej_over_ec)?;
        if !self.gamma.is_finite() || self.gamma < 0.0 {
            return Err(constraint(format!(
                "gamma must be finite and >= 0, got {}",
                self.gamma
            )));
        }
        finite_pos("kappa1", self.kappa1)?;
        finite_pos("kappa2", self.kappa2)?;
        finite_pos("beta1", self.beta1)?;
        finite_pos("beta2", self.beta2)?;
        finite_pos("cutoff_factor", self.cutoff_factor)?;
        finite_pos("t_max", self.t_max)?;
        finite_pos("dt", self.dt)?;
        if self.dt >= self.t_max {
            return Err(constraint(format!(
                "dt = {} must be smaller than t_max = {}",
                self.dt, self.t_max
            )));
        }
        if self.store_stride == 0 {
            return Err(constraint("store_stride must be >= 1"));
        }
        match &self.initial_state {
            InitialState::Preset(name) => {
                if states::preset(name).is_none() {
                    return Err(constraint(format!(
                        "unknown initial state preset \"{name}\"; known: {}",
                        states::PRESET_NAMES.join(", ")
                    )));
                }
            }
            InitialState::Custom(amps) => {
                if amps.len() != SYSTEM_DIM {
                    return Err(constraint(format!(
                        "custom initial state needs exactly {SYSTEM_DIM} amplitude pairs, got {}",
                        amps.len()
                    )));
                }
            }
            InitialState::MatrixFile(_) => {}
        }
        Ok(())
    }
}

/// Reads and parses a configuration file.
pub fn load_config_file(path: &Path) -> CliResult<PartialConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            CliError::MissingFile(path.display().to_string())
        } else {
            runtime(format!("reading {}: {e}", path.display()))
        }
    })?;
    toml::from_str(&text).map_err(|e| CliError::Malformed(format!("{}: {e}", path.display())))
}

/// The physical objects a subcommand works with, built from a configuration.
pub struct Assembled {
    pub system: CompositeSystem,
    pub channel_sets: Vec<Vec<JumpChannel>>,
    pub rho0: DensityMatrix,
    pub mode: EvolveMode,
}

/// Builds the composite system, both bath channel sets, and the initial
/// state. Library-side rejections of the physical parameters surface as
/// constraint violations.
pub fn assemble(cfg: &RunConfig) -> CliResult<Assembled> {
    let params = CircuitParams::new(1.0, cfg.ej_over_ec, cfg.gamma, cfg.fock_dim)
        .map_err(constraint)?
        .with_basis(cfg.basis.into());
    let system = composite_hamiltonian(&params).map_err(constraint)?;
    let w01 = system.omega01;
    let bath1 = BathParams::new(cfg.kappa1 * w01, cfg.beta1 / w01, cfg.cutoff_factor * w01)
        .map_err(constraint)?;
    let bath2 = BathParams::new(cfg.kappa2 * w01, cfg.beta2 / w01, cfg.cutoff_factor * w01)
        .map_err(constraint)?;
    let channel_sets = vec![
        jump_channels(&system, BathIndex::One, &bath1),
        jump_channels(&system, BathIndex::Two, &bath2),
    ];
    let rho0 = initial_density(&cfg.initial_state, system.dim())?;
    Ok(Assembled {
        system,
        channel_sets,
        rho0,
        mode: cfg.mode.into(),
    })
}

fn initial_density(init: &InitialState, dim: usize) -> CliResult<DensityMatrix> {
    match init {
        InitialState::Preset(name) => states::preset(name)
            .ok_or_else(|| constraint(format!("unknown initial state preset \"{name}\""))),
        InitialState::Custom(amps) => {
            let v: Vec<C64> = amps.iter().map(|[re, im]| C64::new(*re, *im)).collect();
            DensityMatrix::from_pure(&v).map_err(constraint)
        }
        InitialState::MatrixFile(path) => {
            let m = load_matrix_file(path, dim)?;
            DensityMatrix::new(m).map_err(constraint)
        }
    }
}

/// Parses a density matrix from plain text: `dim` rows of `2*dim` floats
/// (alternating real and imaginary parts), `#` comments and blank lines
/// ignored.
pub fn load_matrix_file(path: &Path, dim: usize) -> CliResult<CMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        if e.kind() == std::io::ErrorKind::NotFound {
            CliError::MissingFile(path.display().to_string())
        } else {
            runtime(format!("reading {}: {e}", path.display()))
        }
    })?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row: Result<Vec<f64>, _> = line.split_whitespace().map(str::parse::<f64>).collect();
        let row = row.map_err(|e| {
            CliError::Malformed(format!("{} line {}: {e}", path.display(), lineno + 1))
        })?;
        if row.len() != 2 * dim {
            return Err(CliError::Malformed(format!(
                "{} line {}: expected {} numbers, got {}",
                path.display(),
                lineno + 1,
                2 * dim,
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != dim {
        return Err(CliError::Malformed(format!(
            "{}: expected {dim} matrix rows, got {}",
            path.display(),
            rows.len()
        )));
    }
    Ok(CMatrix::from_fn(dim, dim, |i, j| {
        C64::new(rows[i][2 * j], rows[i][2 * j + 1])
    }))
}

/* Metadata headers: every output file opens with `# key = value` lines that
are valid TOML once the prefix is stripped, so a file can be re-parsed into
the exact configuration that produced it. */

/// Renders a float so TOML reads it back as a float with identical bits.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

/// Renders a string as a quoted TOML literal.
pub fn toml_str(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn initial_state_value(init: &InitialState) -> String {
    match init {
        InitialState::Preset(name) => toml_str(name),
        InitialState::Custom(amps) => {
            let pairs: Vec<String> = amps
                .iter()
                .map(|[re, im]| format!("[{}, {}]", fmt_f64(*re), fmt_f64(*im)))
                .collect();
            format!("{{ custom = [{}] }}", pairs.join(", "))
        }
        InitialState::MatrixFile(path) => {
            format!(
                "{{ matrix_file = {} }}",
                toml_str(&path.display().to_string())
            )
        }
    }
}

/// The `# key = value` header block. `extras` are appended after the
/// configuration keys; their values must already be valid TOML.
pub fn metadata_block(cfg: &RunConfig, command: &str, extras: &[(String, String)]) -> String {
    let unix = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let mut s = String::new();
    s.push_str(&format!("# tqsim_version = {}\n", toml_str(tqsim::VERSION)));
    s.push_str(&format!("# generated_unix = {unix}\n"));
    s.push_str(&format!("# command = {}\n", toml_str(command)));
    s.push_str(&format!("# ej_over_ec = {}\n", fmt_f64(cfg.ej_over_ec)));
    s.push_str(&format!("# gamma = {}\n", fmt_f64(cfg.gamma)));
    s.push_str(&format!("# fock_dim = {}\n", cfg.fock_dim));
    s.push_str(&format!("# basis = {}\n", toml_str(cfg.basis.as_str())));
    s.push_str(&format!("# kappa1 = {}\n", fmt_f64(cfg.kappa1)));
    s.push_str(&format!("# kappa2 = {}\n", fmt_f64(cfg.kappa2)));
    s.push_str(&format!("# beta1 = {}\n", fmt_f64(cfg.beta1)));
    s.push_str(&format!("# beta2 = {}\n", fmt_f64(cfg.beta2)));
    s.push_str(&format!(
        "# cutoff_factor = {}\n",
        fmt_f64(cfg.cutoff_factor)
    ));
    s.push_str(&format!("# t_max = {}\n", fmt_f64(cfg.t_max)));
    s.push_str(&format!("# dt = {}\n", fmt_f64(cfg.dt)));
    s.push_str(&format!(
        "# initial_state = {}\n",
        initial_state_value(&cfg.initial_state)
    ));
    s.push_str(&format!("# mode = {}\n", toml_str(cfg.mode.as_str())));
    s.push_str(&format!("# seed = {}\n", toml_str(&cfg.seed.to_string())));
    s.push_str(&format!("# store_stride = {}\n", cfg.store_stride));
    for (k, v) in extras {
        s.push_str(&format!("# {k} = {v}\n"));
    }
    s
}

/// A parsed metadata header.
#[derive(Debug)]
pub struct ParsedMetadata {
    pub config: RunConfig,
    /// Subcommand-specific keys beyond the configuration itself.
    pub extras: BTreeMap<String, toml::Value>,
    pub version: String,
    pub command: String,
    pub generated_unix: u64,
}

/// Reads the `#`-prefixed header back into the configuration that produced
/// the file, plus any subcommand extras.
pub fn parse_metadata(text: &str) -> CliResult<ParsedMetadata> {
    let mut toml_src = String::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix('#') {
            toml_src.push_str(rest.trim_start());
            toml_src.push('\n');
        } else {
            break;
        }
    }
    let table: toml::Table = toml::from_str(&toml_src)
        .map_err(|e| CliError::Malformed(format!("metadata header: {e}")))?;

    let mut config_table = toml::Table::new();
    let mut extras = BTreeMap::new();
    let mut version = String::new();
    let mut command = String::new();
    let mut generated_unix = 0u64;
    for (k, v) in table {
        match k.as_str() {
            "tqsim_version" => version = v.as_str().unwrap_or_default().to_string(),
            "command" => command = v.as_str().unwrap_or_default().to_string(),
            "generated_unix" => generated_unix = v.as_integer().unwrap_or(0) as u64,
            key if CONFIG_KEYS.contains(&key) => {
                config_table.insert(k, v);
            }
            _ => {
                extras.insert(k, v);
            }
        }
    }
    let partial: PartialConfig = toml::Value::Table(config_table)
        .try_into()
        .map_err(|e| CliError::Malformed(format!("metadata header: {e}")))?;
    let config = RunConfig::resolve(partial, &FlagOverrides::default())?;
    Ok(ParsedMetadata {
        config,
        extras,
        version,
        command,
        generated_unix,
    })
}
