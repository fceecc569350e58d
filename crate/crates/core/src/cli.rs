//! Configuration parsing, command dispatch, and CSV emission.
//!
//! All commands consume one JSON configuration document (strict: unknown keys
//! are rejected) and write CSV with a fixed header. Numeric cells use nine
//! significant digits in scientific notation with a `.` separator; node sets
//! are emitted as sorted integer arrays inside quoted cells.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fading::FadingDraw;
use crate::gap::gap_empirical;
use crate::mc::MonteCarloConfig;
use crate::model::{
    build_input_covariance, validate_network, CompressionConfig, GaussianNetwork, RawNetwork,
    StrategyAssignment, StrategyMode,
};
use crate::outage::{
    curve_epscap_vs_snr, curve_error_vs_rate, CompositeModel, ErrorCurveRow,
};
use crate::rate::rate_mnnc;
use crate::sets::NodeSet;

/// The computation a configuration requests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Rate,
    Gap,
    Outage,
    Epscap,
    Curves,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Rate => "rate",
            Command::Gap => "gap",
            Command::Outage => "outage",
            Command::Epscap => "epscap",
            Command::Curves => "curves",
        }
    }
}

/// Strategy block: which relays compress, the coherent power splits, and the
/// per-relay compression noises. Omitted fields default to all-compress,
/// full-power private inputs, and unit noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategySpec {
    /// Compressing relays as a sorted integer array; `None` means all.
    #[serde(default)]
    pub cf_set: Option<Vec<usize>>,
    /// β for the source followed by each decoding relay in increasing order.
    #[serde(default)]
    pub betas: Option<Vec<f64>>,
    /// Compression noise per relay (defaults to 1.0 each).
    #[serde(default)]
    pub nhat: Option<Vec<f64>>,
}

impl Default for StrategySpec {
    fn default() -> Self {
        StrategySpec {
            cf_set: None,
            betas: None,
            nhat: None,
        }
    }
}

/// Composite single-relay channel model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "lowercase", tag = "family")]
pub enum ModelSpec {
    /// All gains i.i.d. unit circularly-symmetric complex Gaussian.
    Rayleigh { p: f64, p1: f64 },
    /// Finitely many states; gains as [re, im] pairs, positive weights.
    Finite {
        states: Vec<FiniteState>,
        p: f64,
        p1: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteState {
    pub g1: [f64; 2],
    pub g2: [f64; 2],
    pub g3: [f64; 2],
    pub weight: f64,
}

impl ModelSpec {
    pub fn build(&self) -> Result<CompositeModel> {
        match self {
            ModelSpec::Rayleigh { p, p1 } => CompositeModel::rayleigh(*p, *p1),
            ModelSpec::Finite { states, p, p1 } => {
                let entries = states
                    .iter()
                    .map(|s| {
                        Ok((
                            FadingDraw::new(
                                num_complex::Complex64::new(s.g1[0], s.g1[1]),
                                num_complex::Complex64::new(s.g2[0], s.g2[1]),
                                num_complex::Complex64::new(s.g3[0], s.g3[1]),
                            )?,
                            s.weight,
                        ))
                    })
                    .collect::<Result<Vec<_>>>()?;
                CompositeModel::finite(entries, *p, *p1)
            }
        }
    }
}

/// Parameter sweep for the rate command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    /// Currently `source_power` (replaces the source node power per point).
    pub parameter: String,
    pub grid: Vec<f64>,
}

/// Monte Carlo block.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct McSpec {
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default)]
    pub seed: u64,
}

fn default_samples() -> u64 {
    10_000
}

impl Default for McSpec {
    fn default() -> Self {
        McSpec {
            samples: default_samples(),
            seed: 0,
        }
    }
}

/// Rate grid for the outage and curves commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutageSpec {
    pub r_grid: Vec<f64>,
    /// Subset of {lower, df, cf_partial, cf_full, scs_partial, scs_full};
    /// `None` emits all six.
    #[serde(default)]
    pub schemes: Option<Vec<String>>,
}

/// ε and SNR grid for the epscap and curves commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EpsCapSpec {
    pub eps: f64,
    pub snr_grid_db: Vec<f64>,
}

/// One fully-validated run request.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub network: Option<RawNetworkSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<StrategySpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outage: Option<OutageSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epscap: Option<EpsCapSpec>,
    #[serde(default)]
    pub mc: McSpec,
    /// Output CSV path; defaults to `<command>.csv` in the working directory.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

/// Serializable mirror of the network record (gains as [re, im] pairs).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawNetworkSpec {
    pub n_relays: usize,
    /// Rows indexed by receiver 1..=N+1, columns by transmitter 0..=N.
    pub gains: Vec<Vec<[f64; 2]>>,
    pub power: Vec<f64>,
    #[serde(default)]
    pub complex: bool,
}

impl RawNetworkSpec {
    pub fn build(&self) -> Result<GaussianNetwork> {
        let raw = RawNetwork {
            n_relays: self.n_relays,
            gains: self
                .gains
                .iter()
                .map(|row| row.iter().map(|g| g[0]).collect())
                .collect(),
            gains_im: if self.complex {
                Some(
                    self.gains
                        .iter()
                        .map(|row| row.iter().map(|g| g[1]).collect())
                        .collect(),
                )
            } else {
                if self
                    .gains
                    .iter()
                    .any(|row| row.iter().any(|g| g[1] != 0.0))
                {
                    return Err(Error::config(
                        "gains",
                        "imaginary parts require `complex: true`",
                    ));
                }
                None
            },
            power: self.power.clone(),
            complex: self.complex,
        };
        validate_network(&raw)
    }
}

/// Parses and validates a JSON configuration document.
pub fn parse_config(document: &str) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_str(document)?;
    validate(&cfg)?;
    Ok(cfg)
}

fn require<'a, T>(block: &'a Option<T>, name: &str, command: Command) -> Result<&'a T> {
    block.as_ref().ok_or_else(|| {
        Error::config(
            name,
            format!("block is required by the `{}` command", command.name()),
        )
    })
}

fn check_grid(grid: &[f64], name: &str) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::config(name, "grid must be nonempty"));
    }
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::config(name, "grid must be strictly increasing"));
    }
    Ok(())
}

fn validate(cfg: &RunConfig) -> Result<()> {
    if cfg.mc.samples == 0 {
        return Err(Error::config("mc.samples", "at least one sample required"));
    }
    match cfg.command {
        Command::Rate => {
            require(&cfg.network, "network", cfg.command)?;
            if let Some(s) = &cfg.sweep {
                if s.parameter != "source_power" {
                    return Err(Error::config(
                        "sweep.parameter",
                        format!("unsupported parameter `{}`", s.parameter),
                    ));
                }
                check_grid(&s.grid, "sweep.grid")?;
                if s.grid.iter().any(|&p| !(p > 0.0)) {
                    return Err(Error::config("sweep.grid", "powers must be positive"));
                }
            }
        }
        Command::Gap => {
            require(&cfg.network, "network", cfg.command)?;
        }
        Command::Outage => {
            require(&cfg.model, "model", cfg.command)?;
            let o = require(&cfg.outage, "outage", cfg.command)?;
            check_grid(&o.r_grid, "outage.r_grid")?;
            if o.r_grid.iter().any(|&r| !(r >= 0.0)) {
                return Err(Error::config("outage.r_grid", "rates must be nonnegative"));
            }
            if let Some(s) = &o.schemes {
                for name in s {
                    scheme_column(name)
                        .ok_or_else(|| Error::config("outage.schemes", format!("unknown scheme `{name}`")))?;
                }
            }
        }
        Command::Epscap => {
            let e = require(&cfg.epscap, "epscap", cfg.command)?;
            check_grid(&e.snr_grid_db, "epscap.snr_grid_db")?;
            if !(0.0..1.0).contains(&e.eps) {
                return Err(Error::config("epscap.eps", "eps must lie in [0, 1)"));
            }
        }
        Command::Curves => {
            require(&cfg.model, "model", cfg.command)?;
            let o = require(&cfg.outage, "outage", cfg.command)?;
            check_grid(&o.r_grid, "outage.r_grid")?;
            let e = require(&cfg.epscap, "epscap", cfg.command)?;
            check_grid(&e.snr_grid_db, "epscap.snr_grid_db")?;
            if !(0.0..1.0).contains(&e.eps) {
                return Err(Error::config("epscap.eps", "eps must lie in [0, 1)"));
            }
        }
    }
    Ok(())
}

/// Nine significant digits, locale independent.
pub fn fmt_g9(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else {
        format!("{v:.8e}")
    }
}

fn fmt_set(s: NodeSet) -> String {
    let items: Vec<String> = s.iter().map(|k| k.to_string()).collect();
    format!("\"[{}]\"", items.join(","))
}

fn scheme_column(name: &str) -> Option<fn(&ErrorCurveRow) -> crate::mc::OutageEstimate> {
    match name {
        "lower" => Some(|r| r.lower),
        "df" => Some(|r| r.df),
        "cf_partial" => Some(|r| r.cf_partial),
        "cf_full" => Some(|r| r.cf_full),
        "scs_partial" => Some(|r| r.scs_partial),
        "scs_full" => Some(|r| r.scs_full),
        _ => None,
    }
}

const ALL_SCHEMES: [&str; 6] = [
    "lower",
    "df",
    "cf_partial",
    "cf_full",
    "scs_partial",
    "scs_full",
];

fn default_out(command: Command) -> PathBuf {
    PathBuf::from(format!("{}.csv", command.name()))
}

/// Executes a validated configuration and returns the paths written. On any
/// failure no partial file is left behind: every CSV is materialized in
/// memory first and already-written siblings are removed before the error
/// propagates.
pub fn run(cfg: &RunConfig) -> Result<Vec<PathBuf>> {
    validate(cfg)?;
    let out = cfg.out.clone().unwrap_or_else(|| default_out(cfg.command));
    let artifacts: Vec<(PathBuf, String)> = match cfg.command {
        Command::Rate => vec![(out, run_rate(cfg)?)],
        Command::Gap => vec![(out, run_gap(cfg)?)],
        Command::Outage => vec![(out, run_outage(cfg)?)],
        Command::Epscap => vec![(out, run_epscap(cfg)?)],
        Command::Curves => {
            let stem = out
                .file_stem()
                .and_then(|s| s.to_str())
                .unwrap_or("curves")
                .to_string();
            let dir = out.parent().map(Path::to_path_buf).unwrap_or_default();
            vec![
                (
                    dir.join(format!("{stem}_error_vs_rate.csv")),
                    run_curves_error(cfg)?,
                ),
                (
                    dir.join(format!("{stem}_epscap_vs_snr.csv")),
                    run_epscap(cfg)?,
                ),
            ]
        }
    };
    let mut written: Vec<PathBuf> = Vec::new();
    for (path, body) in &artifacts {
        if let Err(e) = fs::write(path, body) {
            for w in &written {
                let _ = fs::remove_file(w);
            }
            return Err(e.into());
        }
        written.push(path.clone());
    }
    Ok(written)
}

fn strategy_parts(
    cfg: &RunConfig,
    net: &GaussianNetwork,
) -> Result<(StrategyAssignment, Vec<f64>, CompressionConfig)> {
    let n = net.n_relays();
    let spec = cfg.strategy.clone().unwrap_or_default();
    let cf_set = match &spec.cf_set {
        Some(list) => {
            let mut s = NodeSet::EMPTY;
            for &k in list {
                if k == 0 || k > n {
                    return Err(Error::config(
                        "strategy.cf_set",
                        format!("relay index {k} out of range 1..={n}"),
                    ));
                }
                s = s.with(k);
            }
            s
        }
        None => NodeSet::full(n),
    };
    let strategy = StrategyAssignment::new(n, cf_set, StrategyMode::General)?;
    let n_betas = 1 + strategy.df_set().len();
    let betas = match spec.betas {
        Some(b) => {
            if b.len() != n_betas {
                return Err(Error::config(
                    "strategy.betas",
                    format!("need {n_betas} fractions, got {}", b.len()),
                ));
            }
            b
        }
        None => vec![1.0; n_betas],
    };
    let compression = CompressionConfig::new(spec.nhat.unwrap_or_else(|| vec![1.0; n]))?;
    Ok((strategy, betas, compression))
}

fn run_rate(cfg: &RunConfig) -> Result<String> {
    let spec = cfg.network.as_ref().unwrap();
    let param_name = cfg
        .sweep
        .as_ref()
        .map(|s| s.parameter.as_str())
        .unwrap_or("index");
    let grid: Vec<f64> = match &cfg.sweep {
        Some(s) => s.grid.clone(),
        None => vec![0.0],
    };
    let mut body = format!("{param_name},rate_bits,binding_subset,V,T\n");
    for &value in &grid {
        let mut spec = spec.clone();
        if cfg.sweep.is_some() {
            if spec.power.is_empty() {
                return Err(Error::config("network.power", "no source power to sweep"));
            }
            spec.power[0] = value;
        }
        let net = spec.build()?;
        let (strategy, betas, compression) = strategy_parts(cfg, &net)?;
        let inputs = build_input_covariance(&net, &strategy, &betas)?;
        let res = rate_mnnc(&net, &inputs, &compression, &strategy)?;
        body.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_g9(value),
            fmt_g9(res.rate),
            fmt_set(res.binding_subset),
            fmt_set(res.chosen_v),
            fmt_set(res.chosen_t),
        ));
    }
    Ok(body)
}

fn run_gap(cfg: &RunConfig) -> Result<String> {
    let net = cfg.network.as_ref().unwrap().build()?;
    let (strategy, _betas, compression) = strategy_parts(cfg, &net)?;
    let v = strategy.cf_set();
    let report = gap_empirical(&net, &compression, v)?;
    let (d1, _) = crate::gap::gap_mnnc_delta1(net.n_relays(), v)?;
    let inputs = build_input_covariance(&net, &strategy, &vec![1.0; 1 + strategy.df_set().len()])?;
    let d2 = crate::gap::gap_mnnc_delta2(&net, &inputs, v)?;
    let mut body = "N,V,delta1,delta2,empirical,nnc_constant\n".to_string();
    body.push_str(&format!(
        "{},{},{},{},{},{}\n",
        net.n_relays(),
        fmt_set(v),
        fmt_g9(d1),
        fmt_g9(d2),
        fmt_g9(report.empirical_gap),
        fmt_g9(crate::gap::gap_nnc_constant(net.n_relays())),
    ));
    Ok(body)
}

fn mc_config(cfg: &RunConfig) -> Result<MonteCarloConfig> {
    MonteCarloConfig::new(cfg.mc.samples, cfg.mc.seed)
}

fn run_outage(cfg: &RunConfig) -> Result<String> {
    let o = cfg.outage.as_ref().unwrap();
    let model = cfg.model.as_ref().unwrap().build()?;
    let mc = mc_config(cfg)?;
    let rows = curve_error_vs_rate(&model, &o.r_grid, &mc)?;
    let schemes: Vec<String> = o
        .schemes
        .clone()
        .unwrap_or_else(|| ALL_SCHEMES.iter().map(|s| s.to_string()).collect());
    let mut body = "r,scheme,p_hat,std_err,samples\n".to_string();
    for row in &rows {
        for name in &schemes {
            let est = scheme_column(name).unwrap()(row);
            body.push_str(&format!(
                "{},{},{},{},{}\n",
                fmt_g9(row.r),
                name,
                fmt_g9(est.p_hat),
                fmt_g9(est.std_err),
                est.samples,
            ));
        }
    }
    Ok(body)
}

fn run_epscap(cfg: &RunConfig) -> Result<String> {
    let e = cfg.epscap.as_ref().unwrap();
    let mc = mc_config(cfg)?;
    let rows = curve_epscap_vs_snr(e.eps, &e.snr_grid_db, &mc)?;
    let mut body = "snr_dB,lower_SCS,upper_cutset\n".to_string();
    for row in &rows {
        body.push_str(&format!(
            "{},{},{}\n",
            fmt_g9(row.snr_db),
            fmt_g9(row.lower),
            fmt_g9(row.upper),
        ));
    }
    Ok(body)
}

fn run_curves_error(cfg: &RunConfig) -> Result<String> {
    let o = cfg.outage.as_ref().unwrap();
    let model = cfg.model.as_ref().unwrap().build()?;
    let mc = mc_config(cfg)?;
    let rows = curve_error_vs_rate(&model, &o.r_grid, &mc)?;
    let mut body =
        "r,lower_bound,DF,CF_partial,CF_full,SCS_partial,SCS_full\n".to_string();
    for row in &rows {
        body.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            fmt_g9(row.r),
            fmt_g9(row.lower.p_hat),
            fmt_g9(row.df.p_hat),
            fmt_g9(row.cf_partial.p_hat),
            fmt_g9(row.cf_full.p_hat),
            fmt_g9(row.scs_partial.p_hat),
            fmt_g9(row.scs_full.p_hat),
        ));
    }
    Ok(body)
}
