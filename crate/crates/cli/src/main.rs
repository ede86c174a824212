//! `spcauchy`: evaluate, sample, match, sweep and benchmark the spherical
//! Cauchy distribution from the command line.
//!
//! Exit status: 0 on success, 1 on an unresolved reference value, a failed
//! self-test or an I/O failure, 2 on invalid arguments.

mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use output::{emit, render, OutputFormat, PlainRow};
use spcauchy_bench::{
    run_error_sweep, run_latent_step_bench, run_robustness_grid, run_selftest, BenchConfig,
    BenchRecord, GRID_DIMS, GRID_RHOS, LATENT_STEP_DIMS,
};
use spcauchy_core::kl::{kl_quadrature, kl_series, rho_of_z, DEFAULT_NODES};
use spcauchy_core::oracles::kl_reference;
use spcauchy_core::{kl, Error, KlMethod, MatchedPair, SeriesOptions, SpCauchy, UnitVector};

#[derive(Parser)]
#[command(
    name = "spcauchy",
    version,
    about = "Spherical Cauchy distribution toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Out {
    /// Output format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Plain)]
    format: OutputFormat,
    /// Write to this file (atomically) instead of stdout.
    #[arg(short = 'o', long = "output")]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate KL(spCauchy_d(mu, rho) || uniform) in nats.
    ///
    /// CSV/JSON fields: method, d, rho, value_or_time (the KL), terms_or_nodes,
    /// converged.
    Kl {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        rho: f64,
        /// series, quadrature, asymptotic, combined, hybrid, midpoint, laplace,
        /// closed, or reference.
        #[arg(long, default_value = "combined")]
        method: String,
        /// Quadrature node budget.
        #[arg(long, default_value_t = DEFAULT_NODES)]
        nodes: usize,
        /// Series relative stopping tolerance.
        #[arg(long, default_value_t = SeriesOptions::default().rel_tol)]
        rel_tol: f64,
        /// Series term cap.
        #[arg(long, default_value_t = SeriesOptions::default().max_terms)]
        max_terms: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Draw reparameterized samples; one unit vector per row.
    ///
    /// CSV columns x0..x{d-1}; JSON is an array of arrays.
    Sample {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        rho: f64,
        /// "north" (first axis) or d comma-separated reals, normalized.
        #[arg(long, default_value = "north", allow_hyphen_values = true)]
        mu: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, env = "SPCAUCHY_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Convert between spCauchy rho and the matched vMF kappa.
    ///
    /// CSV/JSON fields: d, rho, kappa.
    #[command(group(ArgGroup::new("param").required(true).args(["kappa", "rho"])))]
    Match {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        kappa: Option<f64>,
        #[arg(long)]
        rho: Option<f64>,
        #[command(flatten)]
        out: Out,
    },
    /// Plot-ready sweeps.
    ///
    /// --error fields: method, d, rho (at the worst point), value_or_time (max
    /// |reference - hybrid|), argmax_z, excluded.
    /// --values fields: method, d, rho, value_or_time (the KL), terms_or_nodes,
    /// converged.
    #[command(group(ArgGroup::new("kind").required(true).args(["error", "values"])))]
    Sweep {
        /// Worst-case hybrid error per dimension.
        #[arg(long)]
        error: bool,
        /// KL values of --methods over the --dims x --rhos grid.
        #[arg(long)]
        values: bool,
        #[arg(long, default_value_t = 2)]
        dmin: usize,
        #[arg(long, default_value_t = 64)]
        dmax: usize,
        #[arg(long, value_delimiter = ',', default_values_t = GRID_DIMS)]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = GRID_RHOS)]
        rhos: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "series,quadrature,combined,hybrid"
        )]
        methods: Vec<String>,
        #[command(flatten)]
        out: Out,
    },
    /// Robustness grid or latent-step timing.
    ///
    /// Fields: method, d, rho (the matched rho for --latent), value_or_time
    /// (total seconds), forward_seconds, backward_or_grad_seconds, succeeded,
    /// failure_kind.
    #[command(group(ArgGroup::new("kind").required(true).args(["grid", "latent"])))]
    Bench {
        /// "appendixB" for the 13 x 10 grid, or "custom" with --dims/--rhos.
        #[arg(long)]
        grid: Option<String>,
        /// Latent-step timing over --dims.
        #[arg(long)]
        latent: bool,
        #[arg(long, value_delimiter = ',')]
        dims: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',')]
        rhos: Option<Vec<f64>>,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "series,quadrature,combined,hybrid"
        )]
        methods: Vec<String>,
        #[arg(long, default_value_t = 128)]
        batch: usize,
        #[arg(long, default_value_t = 10)]
        warmup: usize,
        #[arg(long, default_value_t = 50)]
        iters: usize,
        #[arg(long, env = "SPCAUCHY_SEED", default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Run the invariant suite; exit 1 if any check fails.
    ///
    /// CSV/JSON fields: check, passed, detail.
    Selftest {
        #[command(flatten)]
        out: Out,
    },
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::ReferenceDisagreement { .. } | Error::MaxDepthExceeded { .. } => {
                Failure::Runtime(e.to_string())
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type CmdResult = Result<(), Failure>;

#[derive(Serialize)]
struct KlRow {
    method: String,
    d: usize,
    rho: f64,
    value_or_time: f64,
    terms_or_nodes: usize,
    converged: bool,
}

impl PlainRow for KlRow {
    fn plain(&self) -> String {
        format!(
            "kl = {}\nmethod = {}\nterms_or_nodes = {}\nconverged = {}",
            self.value_or_time, self.method, self.terms_or_nodes, self.converged
        )
    }
}

#[derive(Serialize)]
struct MatchRow {
    d: usize,
    rho: f64,
    kappa: f64,
}

impl PlainRow for MatchRow {
    fn plain(&self) -> String {
        format!("d = {}\nrho = {}\nkappa = {}", self.d, self.rho, self.kappa)
    }
}

#[derive(Serialize)]
struct ErrorRow {
    method: &'static str,
    d: usize,
    rho: f64,
    value_or_time: f64,
    argmax_z: f64,
    excluded: usize,
}

impl PlainRow for ErrorRow {
    fn plain(&self) -> String {
        format!(
            "d = {:>3}  max |error| = {:.6}  at z = {:.6}",
            self.d, self.value_or_time, self.argmax_z
        )
    }
}

#[derive(Serialize)]
struct BenchRow {
    method: String,
    d: usize,
    rho: f64,
    value_or_time: f64,
    forward_seconds: f64,
    backward_or_grad_seconds: f64,
    succeeded: bool,
    failure_kind: &'static str,
}

impl From<&BenchRecord> for BenchRow {
    fn from(r: &BenchRecord) -> Self {
        Self {
            method: r.method.name().to_string(),
            d: r.d,
            rho: r.rho_or_kappa,
            value_or_time: r.total_seconds,
            forward_seconds: r.forward_seconds,
            backward_or_grad_seconds: r.backward_or_grad_seconds,
            succeeded: r.succeeded,
            failure_kind: r.failure_kind.as_str(),
        }
    }
}

impl PlainRow for BenchRow {
    fn plain(&self) -> String {
        format!(
            "{:<10} d = {:>4}  rho = {:<8}  total = {:.3e} s  {}",
            self.method,
            self.d,
            self.rho,
            self.value_or_time,
            if self.succeeded {
                "ok"
            } else {
                self.failure_kind
            }
        )
    }
}

#[derive(Serialize)]
struct CheckRow {
    check: &'static str,
    passed: bool,
    detail: String,
}

impl PlainRow for CheckRow {
    fn plain(&self) -> String {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        format!("{tag} {}: {}", self.check, self.detail)
    }
}

/// Rows of coordinates; CSV gets an `x0..` header.
struct Coords(Vec<Vec<f64>>);

impl Coords {
    fn render(&self, format: OutputFormat) -> Result<String, Failure> {
        let io = |e: String| Failure::Runtime(e);
        match format {
            OutputFormat::Json => serde_json::to_string(&self.0)
                .map(|s| s + "\n")
                .map_err(|e| io(e.to_string())),
            OutputFormat::Plain | OutputFormat::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                if format == OutputFormat::Csv {
                    let d = self.0.first().map_or(0, Vec::len);
                    w.write_record((0..d).map(|i| format!("x{i}")))
                        .map_err(|e| io(e.to_string()))?;
                }
                for row in &self.0 {
                    w.serialize(row).map_err(|e| io(e.to_string()))?;
                }
                let bytes = w.into_inner().map_err(|e| io(e.to_string()))?;
                String::from_utf8(bytes).map_err(|e| io(e.to_string()))
            }
        }
    }
}

fn write_rows<T: Serialize + PlainRow>(rows: &[T], out: &Out) -> CmdResult {
    let text = render(rows, out.format).map_err(Failure::Runtime)?;
    emit(&text, out.output.as_deref()).map_err(Failure::Runtime)
}

fn parse_methods(names: &[String]) -> Result<Vec<KlMethod>, Failure> {
    names
        .iter()
        .map(|n| n.parse::<KlMethod>().map_err(Failure::from))
        .collect()
}

fn parse_mu(arg: &str, d: usize) -> Result<UnitVector, Failure> {
    if arg.eq_ignore_ascii_case("north") {
        return Ok(UnitVector::north(d)?);
    }
    let coords: Vec<f64> = arg
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| {
            Failure::Usage(format!(
                "--mu must be 'north' or {d} comma-separated reals, got '{arg}'"
            ))
        })?;
    if coords.len() != d {
        return Err(Failure::Usage(format!(
            "--mu has {} components but --d is {d}",
            coords.len()
        )));
    }
    Ok(UnitVector::normalize(&coords)?)
}

fn cmd_kl(
    d: usize,
    rho: f64,
    method: &str,
    nodes: usize,
    opts: SeriesOptions,
    out: &Out,
) -> CmdResult {
    let row = if method.eq_ignore_ascii_case("reference") {
        KlRow {
            method: "reference".into(),
            d,
            rho,
            value_or_time: kl_reference(d, rho)?,
            terms_or_nodes: spcauchy_core::oracles::REFERENCE_NODES,
            converged: true,
        }
    } else {
        let m: KlMethod = method.parse().map_err(|e: Error| match e {
            Error::UnknownMethod { .. } => Failure::Usage(format!("{e}, reference")),
            other => other.into(),
        })?;
        let r = match m {
            KlMethod::Series => kl_series(d, rho, opts)?,
            KlMethod::Quadrature => kl_quadrature(d, rho, nodes)?,
            other => kl(d, rho, other)?,
        };
        KlRow {
            method: r.method.name().into(),
            d,
            rho,
            value_or_time: r.value,
            terms_or_nodes: r.terms_or_nodes,
            converged: r.converged,
        }
    };
    write_rows(&[row], out)
}

fn cmd_sample(d: usize, rho: f64, mu: &str, n: usize, seed: u64, out: &Out) -> CmdResult {
    let mu = parse_mu(mu, d)?;
    let dist = SpCauchy::new(mu, rho)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = dist
        .sample_n(n, &mut rng)?
        .into_iter()
        .map(UnitVector::into_vec)
        .collect();
    let text = Coords(rows).render(out.format)?;
    emit(&text, out.output.as_deref()).map_err(Failure::Runtime)
}

fn cmd_match(d: usize, kappa: Option<f64>, rho: Option<f64>, out: &Out) -> CmdResult {
    let p = match (kappa, rho) {
        (Some(k), None) => MatchedPair::from_kappa(d, k)?,
        (None, Some(r)) => MatchedPair::from_rho(d, r)?,
        _ => {
            return Err(Failure::Usage(
                "give exactly one of --kappa or --rho".into(),
            ))
        }
    };
    write_rows(
        &[MatchRow {
            d: p.d,
            rho: p.rho,
            kappa: p.kappa,
        }],
        out,
    )
}

fn cmd_sweep_error(dmin: usize, dmax: usize, out: &Out) -> CmdResult {
    if dmin < 2 || dmax < dmin {
        return Err(Failure::Usage(format!(
            "need 2 <= dmin <= dmax, got {dmin}..{dmax}"
        )));
    }
    let rows: Vec<ErrorRow> = run_error_sweep(dmin, dmax)
        .into_iter()
        .map(|r| ErrorRow {
            method: "hybrid",
            d: r.d,
            rho: rho_of_z(r.argmax_z).unwrap_or(f64::NAN),
            value_or_time: r.max_abs_kl_error,
            argmax_z: r.argmax_z,
            excluded: r.excluded,
        })
        .collect();
    write_rows(&rows, out)
}

fn cmd_sweep_values(dims: &[usize], rhos: &[f64], methods: &[KlMethod], out: &Out) -> CmdResult {
    let mut rows = Vec::new();
    for &m in methods {
        for &d in dims {
            for &rho in rhos {
                let r = kl(d, rho, m)?;
                rows.push(KlRow {
                    method: m.name().into(),
                    d,
                    rho,
                    value_or_time: r.value,
                    terms_or_nodes: r.terms_or_nodes,
                    converged: r.converged,
                });
            }
        }
    }
    write_rows(&rows, out)
}

fn cmd_bench(
    grid: Option<&str>,
    dims: Option<Vec<usize>>,
    rhos: Option<Vec<f64>>,
    methods: &[KlMethod],
    config: BenchConfig,
    out: &Out,
) -> CmdResult {
    let records = match grid {
        Some(g) if g.eq_ignore_ascii_case("appendixB") => {
            run_robustness_grid(&GRID_DIMS, &GRID_RHOS, methods)
        }
        Some("custom") => run_robustness_grid(
            &dims.unwrap_or_else(|| GRID_DIMS.to_vec()),
            &rhos.unwrap_or_else(|| GRID_RHOS.to_vec()),
            methods,
        ),
        Some(other) => {
            return Err(Failure::Usage(format!(
                "unknown grid '{other}'; valid: appendixB, custom"
            )))
        }
        None => {
            let config = BenchConfig {
                dims: dims.unwrap_or_else(|| LATENT_STEP_DIMS.to_vec()),
                ..config
            };
            config.validate().map_err(Failure::Usage)?;
            methods
                .iter()
                .flat_map(|&m| run_latent_step_bench(&config, m))
                .collect()
        }
    };
    let rows: Vec<BenchRow> = records.iter().map(BenchRow::from).collect();
    write_rows(&rows, out)
}

fn cmd_selftest(out: &Out) -> CmdResult {
    let rows: Vec<CheckRow> = run_selftest()
        .into_iter()
        .map(|c| CheckRow {
            check: c.name,
            passed: c.passed,
            detail: c.detail,
        })
        .collect();
    write_rows(&rows, out)?;
    let failed = rows.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(Failure::Runtime(format!(
            "{failed} self-test check(s) failed"
        )));
    }
    Ok(())
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Kl {
            d,
            rho,
            method,
            nodes,
            rel_tol,
            max_terms,
            out,
        } => cmd_kl(
            d,
            rho,
            &method,
            nodes,
            SeriesOptions { rel_tol, max_terms },
            &out,
        ),
        Command::Sample {
            d,
            rho,
            mu,
            n,
            seed,
            out,
        } => cmd_sample(d, rho, &mu, n, seed, &out),
        Command::Match { d, kappa, rho, out } => cmd_match(d, kappa, rho, &out),
        Command::Sweep {
            error,
            dmin,
            dmax,
            dims,
            rhos,
            methods,
            out,
            ..
        } => {
            if error {
                cmd_sweep_error(dmin, dmax, &out)
            } else {
                cmd_sweep_values(&dims, &rhos, &parse_methods(&methods)?, &out)
            }
        }
        Command::Bench {
            grid,
            dims,
            rhos,
            methods,
            batch,
            warmup,
            iters,
            seed,
            out,
            ..
        } => {
            let config = BenchConfig {
                dims: Vec::new(),
                rhos: Vec::new(),
                batch,
                warmup_iters: warmup,
                measured_iters: iters,
                seed,
            };
            cmd_bench(
                grid.as_deref(),
                dims,
                rhos,
                &parse_methods(&methods)?,
                config,
                &out,
            )
        }
        Command::Selftest { out } => cmd_selftest(&out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Usage(msg) | Failure::Runtime(msg)) = &f;
            eprintln!("spcauchy: {msg}");
            ExitCode::from(f.code())
        }
    }
}
