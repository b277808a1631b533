//! Command-line front end.
//!
//! Exit codes: 0 success, 1 estimation failure, 2 I/O, 3 invalid input, 4 unknown node ids.
//! Failures print a single `error kind=... code=... msg="..."` line on stderr.

mod nodes;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use nodes::NodeTable;

use crate::error::{Error, Result};
use crate::estimators::{
    ate_estimate, baseline_estimates, hausman_confounding_test, ipw_estimate, Baselines, EstimateResult, HausmanResult,
    PropensityModel, Sample,
};
use crate::groups::{build_groups, BandwidthRule, GroupInputs, GroupRecord, GroupRule, KappaPolicy};
use crate::netgen::{
    calibrate_scale, clustering_coefficient, sample_network, CalibrationOptions, CovariateTable, EuclideanDiscrepancy,
    LinkFamily, Network, PairDiscrepancy, Transitivity,
};
use crate::simlab::{generate_sample, rmse_experiment, DgpSpec, RmseConfig};

#[derive(Debug, Parser)]
#[command(name = "homonet", version, about = "Treatment effects with network-based comparison groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Estimate the ATE from a node table and an edge list.
    Estimate(EstimateArgs),
    /// Run the RMSE simulation study.
    Simulate(SimulateArgs),
    /// Degree and clustering summary of an edge list.
    Diagnose(DiagnoseArgs),
    /// Draw a sample and network from the simulation design.
    Netgen(NetgenArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RuleKind {
    OrderM,
    CommonFriends,
    Kappa,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EstimateArgs {
    /// CSV with a header row; one row per unit.
    #[arg(long)]
    pub nodes: PathBuf,
    /// Whitespace-separated edge list of 0-based row indices (or ids with --id-col).
    #[arg(long)]
    pub edges: PathBuf,
    #[arg(long)]
    pub outcome: String,
    #[arg(long)]
    pub treatment: String,
    /// Column of node ids referenced by the edge list.
    #[arg(long)]
    pub id_col: Option<String>,
    /// Observed covariates for the baselines and the confounding test (default: all other columns).
    #[arg(long, value_delimiter = ',')]
    pub covariates: Option<Vec<String>>,
    #[arg(long, value_enum, default_value = "order-m")]
    pub rule: RuleKind,
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long, default_value_t = 2)]
    pub c: usize,
    /// Neighbors kept under κ-truncation (default `max(5, ceil(ln n))`).
    #[arg(long)]
    pub top_k: Option<usize>,
    /// Explicit κ threshold; overrides --top-k.
    #[arg(long)]
    pub kappa: Option<f64>,
    /// Columns of the observed discrepancy used by κ-truncation.
    #[arg(long, value_delimiter = ',')]
    pub h_cols: Option<Vec<String>>,
    /// Covariates controlled by kernel weights within groups.
    #[arg(long, value_delimiter = ',')]
    pub kernel_cols: Option<Vec<String>>,
    /// Kernel bandwidth (default: Silverman rule).
    #[arg(long)]
    pub bandwidth: Option<f64>,
    /// Compare with an observables-only estimate.
    #[arg(long)]
    pub hausman: bool,
    #[arg(long)]
    pub out: PathBuf,
    /// JSON file receiving every comparison group.
    #[arg(long)]
    pub groups_out: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SimulateArgs {
    /// JSON grid; defaults to n=500, all families, beta3 in {0, 0.5, 1}, every estimator, 500 replications.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// CSV table; the JSON report with Monte-Carlo standard errors goes to `<stem>.mc.json`.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DiagnoseArgs {
    #[arg(long)]
    pub edges: PathBuf,
    /// Number of nodes (default: one past the largest id).
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct NetgenArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// CSV of the generated units: id, covariates, T, Y and true CATE.
    #[arg(long)]
    pub nodes_out: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
}

/// Network part of a `netgen` config; the design fields sit alongside.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NetgenConfig {
    #[serde(flatten)]
    pub dgp: DgpSpec,
    /// Link scale; calibrated to `target_degree` when absent.
    #[serde(default)]
    pub scale: Option<f64>,
    #[serde(default = "default_target_degree")]
    pub target_degree: f64,
    #[serde(default = "default_link")]
    pub link: LinkFamily,
}

fn default_target_degree() -> f64 {
    5.5
}

fn default_link() -> LinkFamily {
    LinkFamily::Gaussian
}

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io { .. } => 2,
        Error::Input(_) | Error::Parse(_) | Error::NotIntegrable(_) => 3,
        Error::Referential(_) => 4,
        _ => 1,
    }
}

/// Single-line diagnostic for an error.
pub fn error_line(e: &Error) -> String {
    format!("error kind={} code={} msg={:?}", e.kind(), exit_code(e), e.to_string())
}

/// Parses arguments, runs the command and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments");
            eprintln!("error kind=usage code=3 msg={first:?}");
            return 3;
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{}", error_line(&e));
            exit_code(&e)
        }
    }
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::Estimate(a) => run_estimate(&a),
        Command::Simulate(a) => run_simulate(&a),
        Command::Diagnose(a) => run_diagnose(&a),
        Command::Netgen(a) => run_netgen(&a),
    }
}

fn write_file(path: &Path, body: &[u8]) -> Result<()> {
    fs::write(path, body).map_err(|e| Error::io(path, e))
}

fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut body = serde_json::to_vec_pretty(value).map_err(|e| Error::Input(e.to_string()))?;
    body.push(b'\n');
    write_file(path, &body)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

/// Outcome of one estimator in the report; failures are kept rather than aborting the run.
#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Entry<T> {
    Ok(T),
    Failed { estimator: String, error: String },
}

impl<T> Entry<T> {
    fn from(label: &str, r: Result<T>) -> Self {
        match r {
            Ok(v) => Entry::Ok(v),
            Err(e) => Entry::Failed { estimator: label.to_string(), error: e.to_string() },
        }
    }
}

#[derive(Debug, Serialize)]
pub struct HausmanReport {
    #[serde(flatten)]
    pub test: HausmanResult,
    pub observables_estimate: EstimateResult,
}

#[derive(Debug, Serialize)]
pub struct EstimateReport {
    pub config: EstimateArgs,
    pub nodes: usize,
    pub edges: usize,
    pub mean_degree: f64,
    pub ate: EstimateResult,
    pub baselines: Option<Entry<Baselines>>,
    pub hausman: Option<Entry<HausmanReport>>,
    pub sensitivity: Vec<Entry<EstimateResult>>,
}

fn indices(names: &[String], all: &[String]) -> Result<Vec<usize>> {
    names
        .iter()
        .map(|n| {
            all.iter()
                .position(|c| c == n)
                .ok_or_else(|| Error::Input(format!("column {n:?} is not among the covariates ({})", all.join(","))))
        })
        .collect()
}

fn load_sample(a: &EstimateArgs) -> Result<(Sample, Vec<String>, Network)> {
    let table = NodeTable::load(&a.nodes, a.id_col.as_deref())?;
    let n = table.n();
    let y = table.column(&a.outcome)?.to_vec();
    let t = table
        .column(&a.treatment)?
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            if v == 0.0 || v == 1.0 {
                Ok(v as u8)
            } else {
                Err(Error::Input(format!("treatment {:?} is {v} on data row {}; expected 0 or 1", a.treatment, i + 1)))
            }
        })
        .collect::<Result<Vec<u8>>>()?;
    let mut names: Vec<String> = match &a.covariates {
        Some(c) => c.clone(),
        None => table.columns.iter().filter(|c| **c != a.outcome && **c != a.treatment).cloned().collect(),
    };
    for extra in a.kernel_cols.iter().chain(a.h_cols.iter()).flatten() {
        if !names.contains(extra) {
            names.push(extra.clone());
        }
    }
    let mut values = Vec::with_capacity(n * names.len());
    let cols: Vec<&[f64]> = names.iter().map(|c| table.column(c)).collect::<Result<_>>()?;
    for i in 0..n {
        values.extend(cols.iter().map(|c| c[i]));
    }
    let d = names.len();
    let cov = CovariateTable::new(n, d, values, names.clone(), (0..d).collect(), Vec::new())?;
    let net = table.load_edges(&a.edges)?;
    Ok((Sample::new(cov, t, y)?, names, net))
}

fn rule_from(a: &EstimateArgs, names: &[String]) -> Result<GroupRule> {
    let base = match a.rule {
        RuleKind::OrderM => GroupRule::order_m(a.m),
        RuleKind::CommonFriends => GroupRule::common_friends(a.c),
        RuleKind::Kappa => GroupRule::kappa(match a.kappa {
            Some(k) => KappaPolicy::Explicit(k),
            None => KappaPolicy::TopK(a.top_k),
        }),
    };
    let kernel = indices(a.kernel_cols.as_deref().unwrap_or(&[]), names)?;
    let bw = a.bandwidth.map_or(BandwidthRule::Silverman, BandwidthRule::Explicit);
    let rule = base.with_kernel(kernel, bw);
    rule.validate()?;
    Ok(rule)
}

pub fn run_estimate(a: &EstimateArgs) -> Result<()> {
    let (sample, names, net) = load_sample(a)?;
    let rule = rule_from(a, &names)?;
    let h_idx = indices(a.h_cols.as_deref().unwrap_or(&[]), &names)?;
    if a.rule == RuleKind::Kappa && h_idx.is_empty() {
        return Err(Error::Input("the kappa rule needs --h-cols".into()));
    }
    let h = EuclideanDiscrepancy { cov: &sample.covariates, cols: &h_idx };
    let disc: Option<&dyn PairDiscrepancy> = if h_idx.is_empty() { None } else { Some(&h) };

    let mut ate = ate_estimate(&net, &rule, &sample, disc)?;
    ate.theta = None;

    let cov_idx = indices(a.covariates.as_deref().unwrap_or(&names), &names)?;
    let pm = PropensityModel::fit(&sample.covariates, &cov_idx, &sample.treatment);
    let baselines = Some(Entry::from(
        "baselines",
        pm.as_ref().map_err(clone_err).and_then(|pm| baseline_estimates(&sample, &cov_idx, pm)),
    ));
    let hausman = a.hausman.then(|| {
        Entry::from(
            "hausman",
            pm.as_ref().map_err(clone_err).and_then(|pm| {
                let obs = ipw_estimate(&sample, pm)?;
                let test = hausman_confounding_test(&ate, &obs, &sample, &net, &rule, pm, disc)?;
                Ok(HausmanReport { test, observables_estimate: obs })
            }),
        )
    });
    let sensitivity = [GroupRule::order_m(1), GroupRule::order_m(2), GroupRule::common_friends(2)]
        .into_iter()
        .map(|r| {
            let r = r.with_kernel(rule.kernel_cols.clone(), rule.bandwidth);
            let label = r.label();
            Entry::from(&label, ate_estimate(&net, &r, &sample, None).map(|mut e| {
                e.theta = None;
                e
            }))
        })
        .collect();

    if let Some(path) = &a.groups_out {
        let inputs = GroupInputs { covariates: Some(&sample.covariates), treatment: &sample.treatment, discrepancy: disc };
        let records: Vec<GroupRecord> = build_groups(&net, &rule, &inputs)?.groups.iter().map(|g| g.record()).collect();
        write_json(path, &records)?;
    }
    let report = EstimateReport {
        config: a.clone(),
        nodes: net.n(),
        edges: net.edge_count(),
        mean_degree: net.mean_degree(),
        ate,
        baselines,
        hausman,
        sensitivity,
    };
    write_json(&a.out, &report)
}

fn clone_err(e: &Error) -> Error {
    match e {
        Error::Io { path, source } => Error::Io { path: path.clone(), source: std::io::Error::new(source.kind(), source.to_string()) },
        other => Error::Estimation(other.to_string()),
    }
}

pub fn run_simulate(a: &SimulateArgs) -> Result<()> {
    let config = match &a.config {
        Some(p) => read_json::<RmseConfig>(p)?,
        None => RmseConfig::new(500, 500),
    };
    let report = rmse_experiment(&config, a.seed)?;
    write_file(&a.out, report.to_csv().as_bytes())?;
    write_json(&sidecar_path(&a.out), &report)
}

/// `rmse.csv` -> `rmse.mc.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    out.with_extension("mc.json")
}

#[derive(Debug, Serialize)]
pub struct Diagnosis {
    pub nodes: usize,
    pub edges: usize,
    pub mean_degree: f64,
    pub isolated: usize,
    /// Entry `k` counts nodes of degree `k`.
    pub degree_histogram: Vec<usize>,
    pub clustering: Transitivity,
}

pub fn diagnose(net: &Network) -> Diagnosis {
    let hist = net.degree_histogram();
    Diagnosis {
        nodes: net.n(),
        edges: net.edge_count(),
        mean_degree: net.mean_degree(),
        isolated: hist.first().copied().unwrap_or(0),
        degree_histogram: hist,
        clustering: clustering_coefficient(net),
    }
}

pub fn run_diagnose(a: &DiagnoseArgs) -> Result<()> {
    let net = Network::load_edge_list(&a.edges, a.nodes)?;
    write_json(&a.out, &diagnose(&net))
}

pub fn run_netgen(a: &NetgenArgs) -> Result<()> {
    let mut cfg: NetgenConfig = read_json(&a.config)?;
    cfg.dgp.seed = a.seed;
    let gen = generate_sample(&cfg.dgp)?;
    let template = gen.link.clone();
    let template = crate::netgen::LinkSpec { family: cfg.link.clone(), ..template };
    let cov = &gen.sample.covariates;
    let scale = match cfg.scale {
        Some(s) => s,
        None => {
            let seed = crate::rng::derive_seed(a.seed, &[0xCA1]);
            calibrate_scale(cov, &template, cfg.target_degree, seed, CalibrationOptions::default())?.scale
        }
    };
    let spec = template.with_scale(scale);
    let net = sample_network(cov, &spec, crate::rng::derive_seed(a.seed, &[0xE]))?;
    net.save_edge_list(&a.out)?;
    if let Some(path) = &a.nodes_out {
        let mut body = String::from("id,x1,x2,x3,T,Y,cate\n");
        for i in 0..cov.n() {
            let x = cov.row(i);
            body.push_str(&format!(
                "{i},{},{},{},{},{},{}\n",
                x[0], x[1], x[2], gen.sample.treatment[i], gen.sample.outcome[i], gen.cate[i]
            ));
        }
        write_file(path, body.as_bytes())?;
    }
    println!("nodes={} edges={} mean_degree={:.4} scale={scale:.6}", net.n(), net.edge_count(), net.mean_degree());
    Ok(())
}
