//! The `orderflow` command line.
//!
//! Summaries go to the given writer (standard output for the binary);
//! structured results are only ever written to the `--out` file.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use orderflow_core::{
    build_network_with, build_projection, canonical_description, count_arcs_formula,
    count_nodes_formula, decode_path, enumerate_orders_with, fit_mle, for_each_path,
    membership_distance, path_count, semiorder_fifo_arc_count, BayesConfig, EnumerationCaps, Error,
    Network, NetworkCaps, OrderKind, PairVector, PathRef, ProjectionMap, SolverConfig,
};

use crate::error::CliError;
use crate::export::{to_dot, to_lp};
use crate::json::{
    read_json, to_json_string, write_text, BayesReportJson, ChoiceDataJson, NetworkJson,
    PointInput, SolveResultJson,
};
use crate::parallel::bayes_factor_parallel;

#[derive(Debug, Parser)]
#[command(
    name = "orderflow",
    version,
    about = "Network-flow formulations of linear, weak, interval and semiorder polytopes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a network, check its size against the counting formulas, and export it.
    Build(BuildArgs),
    /// Check that projected paths are exactly the characteristic vectors of the orders.
    Verify(VerifyArgs),
    /// Distance from a point to the order polytope; exit 0 inside, 4 outside.
    Member(MemberArgs),
    /// Maximum-likelihood choice probabilities within the order polytope.
    Mle(MleArgs),
    /// Encompassing-prior Bayes factor of the order model.
    Bayes(BayesArgs),
}

fn parse_kind(s: &str) -> Result<OrderKind, String> {
    s.parse()
        .map_err(|_| format!("unknown kind `{s}`; use lo, wo, io or so"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Lp,
}

#[derive(Debug, Args)]
pub struct NetworkArgs {
    #[arg(long, value_parser = parse_kind)]
    pub kind: OrderKind,
    /// Replace the size cap for the chosen kind.
    #[arg(long)]
    pub cap_override: Option<usize>,
}

impl NetworkArgs {
    fn build(&self, n: usize) -> Result<Network, CliError> {
        let mut caps = NetworkCaps::default();
        if let Some(cap) = self.cap_override {
            caps = caps.with(self.kind, cap);
        }
        Ok(build_network_with(n, self.kind, &caps)?)
    }
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    /// Convergence tolerance: the duality gap for `mle`, the membership distance for `member` and `bayes`.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum TolMeaning {
    Gap,
    Membership,
}

impl SolverArgs {
    fn config(&self, meaning: TolMeaning) -> Result<SolverConfig, CliError> {
        let mut cfg = SolverConfig::default();
        if let Some(tol) = self.tol {
            match meaning {
                TolMeaning::Gap => cfg.duality_gap_tolerance = tol,
                TolMeaning::Membership => cfg.membership_tolerance = tol,
            }
        }
        if let Some(iters) = self.max_iters {
            cfg.max_iterations = iters;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub network: NetworkArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub network: NetworkArgs,
}

#[derive(Debug, Args)]
pub struct MemberArgs {
    /// A point `{"n", "pairs": [{"i", "j", "p"}]}` or a relation `{"n", "pairs": [[i, j]]}`.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Must match the file when given.
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub network: NetworkArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct MleArgs {
    /// Choice data `{"n", "pairs": [{"i", "j", "chose_j", "chose_i", "indifferent"}]}`.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[command(flatten)]
    pub network: NetworkArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BayesArgs {
    /// Choice data; without it the posterior is a second prior sample.
    #[arg(long = "in")]
    pub input: Option<PathBuf>,
    /// Required without `--in`; must match the data otherwise.
    #[arg(long)]
    pub n: Option<usize>,
    #[command(flatten)]
    pub network: NetworkArgs,
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    #[arg(long, env = "ORDERFLOW_SEED", default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `args` (program name first), runs the command and returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Build(a) => cmd_build(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Member(a) => cmd_member(a, out),
        Command::Mle(a) => cmd_mle(a, out),
        Command::Bayes(a) => cmd_bayes(a, out),
    }
}

macro_rules! say {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).map_err(|e| CliError::Io(format!("cannot write summary: {e}")))?
    };
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn write_output(path: &Option<PathBuf>, text: &str, out: &mut dyn Write) -> Result<(), CliError> {
    if let Some(path) = path {
        write_text(path, text)?;
        say!(out, "wrote {}", path.display());
    }
    Ok(())
}

pub fn cmd_build(a: &BuildArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let kind = a.network.kind;
    let net = a.network.build(a.n)?;
    let desc = canonical_description(&net);
    let node_formula = count_nodes_formula(a.n, kind);
    let arc_formula = count_arcs_formula(a.n, kind);
    say!(out, "{kind} network, n = {}", a.n);
    say!(out, "|N| = {} (formula {node_formula})", net.node_count());
    let expected_arcs = if kind == OrderKind::Semiorder {
        let fifo = semiorder_fifo_arc_count(a.n);
        say!(
            out,
            "|A| = {} (published formula {arc_formula}, head-of-queue count {fifo})",
            net.arc_count()
        );
        fifo
    } else {
        say!(out, "|A| = {} (formula {arc_formula})", net.arc_count());
        arc_formula
    };
    say!(
        out,
        "description: {} nonnegativity bounds, {} balance rows",
        desc.size(),
        desc.equalities.len()
    );
    let text = match a.format {
        Format::Json => {
            let proj = build_projection(&net);
            to_json_string(&NetworkJson::from_network(&net, Some(&proj)))
        }
        Format::Dot => to_dot(&net),
        Format::Lp => to_lp(&net),
    };
    write_output(&a.out, &text, out)?;
    let matches =
        net.node_count() as u128 == node_formula && net.arc_count() as u128 == expected_arcs;
    say!(
        out,
        "formula check: {}",
        if matches { "pass" } else { "FAIL" }
    );
    Ok(if matches { 0 } else { 2 })
}

fn image_key(proj: &ProjectionMap, path: &PathRef) -> Vec<u8> {
    proj.apply_path(path)
        .values()
        .iter()
        .map(|&v| v as u8)
        .collect()
}

pub fn cmd_verify(a: &VerifyArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let kind = a.network.kind;
    let mut caps = EnumerationCaps::default();
    if let Some(cap) = a.network.cap_override {
        caps = caps.with(kind, cap);
    }
    let orders = enumerate_orders_with(a.n, kind, &caps)?;
    let net = a.network.build(a.n)?;
    let proj = build_projection(&net);
    let mut decoded = BTreeSet::new();
    let mut images = BTreeSet::new();
    let mut paths = 0u128;
    let mut failure = None;
    for_each_path(&net, |arcs| {
        paths += 1;
        let path = PathRef::new(arcs.to_vec());
        match decode_path(&net, &path) {
            Ok(r) => {
                decoded.insert(r);
            }
            Err(e) => failure = Some(e),
        }
        images.insert(image_key(&proj, &path));
    });
    if let Some(e) = failure {
        return Err(CliError::Consistency(format!("path decoding failed: {e}")));
    }
    let expected_images: BTreeSet<Vec<u8>> = orders
        .iter()
        .map(|r| {
            orderflow_core::characteristic_vector(r)
                .values()
                .iter()
                .map(|&v| v as u8)
                .collect()
        })
        .collect();
    let order_set: BTreeSet<_> = orders.into_iter().collect();
    let decoded_ok = decoded == order_set;
    let images_ok = images == expected_images;
    let count_ok = paths == path_count(&net);
    say!(out, "{kind}, n = {}", a.n);
    say!(out, "paths: {paths}");
    say!(out, "orders of this kind: {}", order_set.len());
    say!(out, "distinct decoded orders: {}", decoded.len());
    say!(out, "distinct projected vertices: {}", images.len());
    say!(out, "decoded orders match: {}", yes_no(decoded_ok));
    say!(out, "projected vertices match: {}", yes_no(images_ok));
    let pass = decoded_ok && images_ok && count_ok;
    say!(out, "{}", if pass { "pass" } else { "FAIL" });
    Ok(if pass { 0 } else { 2 })
}

fn check_n(expected: Option<usize>, found: usize) -> Result<(), CliError> {
    match expected {
        Some(n) if n != found => Err(CliError::Input(format!(
            "--n {n} does not match the input file (n = {found})"
        ))),
        _ => Ok(()),
    }
}

fn format_point(p: &PairVector) -> String {
    p.iter()
        .map(|(i, j, v)| format!("({i},{j})={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn cmd_member(a: &MemberArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let input: PointInput = read_json(&a.input)?;
    let target = input.to_vector()?;
    check_n(a.n, target.n())?;
    let kind = a.network.kind;
    let cfg = a.solver.config(TolMeaning::Membership)?;
    let net = a.network.build(target.n())?;
    let proj = build_projection(&net);
    let m = membership_distance(&net, &proj, &target, &cfg)?;
    say!(out, "{kind} polytope, n = {}", target.n());
    say!(out, "distance: {}", m.distance);
    say!(out, "nearest point: {}", format_point(&m.nearest));
    say!(
        out,
        "frank-wolfe gap: {} after {} iterations",
        m.result.gap,
        m.result.iterations
    );
    if !m.result.converged() {
        say!(
            out,
            "warning: iteration limit reached before the distance was certified"
        );
    }
    say!(
        out,
        "{} (tolerance {})",
        if m.inside { "inside" } else { "outside" },
        cfg.membership_tolerance
    );
    let mut json = SolveResultJson::from_result(kind, &m.result);
    json.distance = Some(m.distance);
    json.inside = Some(m.inside);
    write_output(&a.out, &to_json_string(&json), out)?;
    Ok(if m.inside { 0 } else { 4 })
}

pub fn cmd_mle(a: &MleArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let data = read_json::<ChoiceDataJson>(&a.input)?.to_data()?;
    let kind = a.network.kind;
    let cfg = a.solver.config(TolMeaning::Gap)?;
    let net = a.network.build(data.n())?;
    let proj = build_projection(&net);
    let fit = fit_mle(&net, &proj, &data, &cfg).map_err(|e| match e {
        Error::IncompatibleData(_) => CliError::Input(format!(
            "{e}; the data has indifference counts, fit a weak order or larger model instead"
        )),
        e => e.into(),
    })?;
    say!(
        out,
        "{kind} model, n = {}, {} responses",
        data.n(),
        data.total()
    );
    say!(out, "log-likelihood: {}", fit.log_likelihood);
    say!(out, "objective: {}", fit.result.objective);
    say!(out, "gap: {}", fit.result.gap);
    say!(out, "iterations: {}", fit.result.iterations);
    say!(out, "converged: {}", yes_no(fit.result.converged()));
    write_output(
        &a.out,
        &to_json_string(&SolveResultJson::from_fit(kind, &fit)),
        out,
    )?;
    Ok(0)
}

pub fn cmd_bayes(a: &BayesArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let data = match &a.input {
        Some(path) => Some(read_json::<ChoiceDataJson>(path)?.to_data()?),
        None => None,
    };
    let n = match (&data, a.n) {
        (Some(d), expected) => {
            check_n(expected, d.n())?;
            d.n()
        }
        (None, Some(n)) => n,
        (None, None) => return Err(CliError::Input("bayes needs --in or --n".into())),
    };
    let kind = a.network.kind;
    let cfg = BayesConfig {
        sample_count: a.samples,
        seed: a.seed,
        solver: a.solver.config(TolMeaning::Membership)?,
        ..Default::default()
    };
    let net = a.network.build(n)?;
    let proj = build_projection(&net);
    say!(
        out,
        "{kind} model, n = {n}, {} samples, seed {}",
        a.samples,
        a.seed
    );
    let report = match bayes_factor_parallel(&net, &proj, data.as_ref(), &cfg) {
        Ok(r) => BayesReportJson::from_report(n, kind, a.seed, &r),
        Err(Error::DegeneratePrior {
            posterior_hits,
            samples,
        }) => BayesReportJson {
            n,
            kind: kind.code().to_string(),
            seed: a.seed,
            samples,
            prior_hits: 0,
            posterior_hits,
            prior_proportion: 0.0,
            posterior_proportion: posterior_hits as f64 / samples as f64,
            bayes_factor: None,
            mc_stderr: None,
        },
        Err(e) => return Err(e.into()),
    };
    say!(
        out,
        "prior hits: {} ({})",
        report.prior_hits,
        report.prior_proportion
    );
    say!(
        out,
        "posterior hits: {} ({})",
        report.posterior_hits,
        report.posterior_proportion
    );
    match (report.bayes_factor, report.mc_stderr) {
        (Some(bf), Some(se)) => {
            say!(out, "bayes factor: {bf}");
            say!(out, "mc standard error: {se}");
        }
        _ => say!(
            out,
            "bayes factor: undefined, no prior draw fell inside the polytope"
        ),
    }
    write_output(&a.out, &to_json_string(&report), out)?;
    Ok(0)
}
