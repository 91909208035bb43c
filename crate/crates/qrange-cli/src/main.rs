//! `qrange` — compute q-numerical ranges, radii, bound tables, and run the
//! verification and experiment harnesses from the command line.
//!
//! Exit codes: 0 success, 2 parse/config error, 3 certified-invariant
//! violation found by `verify`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use qrange_core::bounds::{self, BoundCfg};
use qrange_core::findings;
use qrange_core::matcore::{adjoint, sigma_min, spectral_norm};
use qrange_core::qrange::{self, Closed2x2, QParam, RangeParams};
use qrange_core::radii;
use qrange_core::structure::{self, HarnessParams};
use qrange_core::verify;
use qrange_core::Error;

mod io;
mod svg;

#[derive(Parser)]
#[command(name = "qrange", version, about = "q-numerical range and radius toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
    Svg,
}

#[derive(Args)]
struct InputArg {
    /// Matrix file (.json or .csv).
    #[arg(long)]
    input: PathBuf,
    /// Override the format inferred from the extension.
    #[arg(long, value_enum)]
    matrix_format: Option<io::MatrixFormat>,
}

#[derive(Args)]
struct RunCfg {
    /// Angular grid size for support tables.
    #[arg(long, default_value_t = 720)]
    ntheta: usize,
    /// Random restarts per optimization.
    #[arg(long, default_value_t = 64)]
    restarts: usize,
    /// Master seed; every derived seed is a function of this.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output destination (prefix for multi-file outputs); stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Slack threshold below which a bound is reported violated.
    #[arg(long, default_value_t = 1e-6)]
    tol_holds: f64,
    /// Normality gate for the normal-case evaluators.
    #[arg(long, default_value_t = 1e-10)]
    tol_normal: f64,
    /// Complex-symmetry premise tolerance.
    #[arg(long, default_value_t = 1e-8)]
    tol_csym: f64,
    /// PSD clamp tolerance for polar square roots.
    #[arg(long, default_value_t = 1e-8)]
    tol_psd: f64,
}

impl RunCfg {
    fn bound_cfg(&self) -> BoundCfg {
        BoundCfg {
            restarts: self.restarts,
            recheck_restarts: 512,
            seed: self.seed,
            holds_tol: self.tol_holds,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample W_q(T): support table, point cloud, boundary polygon.
    Range {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        cfg: RunCfg,
        /// q values; complex literals like 0.3+0.4i are accepted.
        #[arg(long = "q", default_value = "0.5")]
        q_values: Vec<String>,
        /// Number of random admissible pairs in the cloud.
        #[arg(long, default_value_t = 512)]
        samples: usize,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// All scalar radii plus omega_q on a grid.
    Radius {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        cfg: RunCfg,
        /// Comma-separated real q grid.
        #[arg(long, default_value = "0,0.25,0.5,0.75,1")]
        q_grid: String,
    },
    /// Evaluate the bound catalog on a q grid.
    Bounds {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        cfg: RunCfg,
        #[arg(long, default_value = "0,0.25,0.5,0.75,1")]
        q_grid: String,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
    /// Run the ensemble property suite (exit 3 on certified violation).
    Verify {
        #[command(flatten)]
        cfg: RunCfg,
        #[arg(long, default_value = "random")]
        ensemble: String,
        /// Matrix dimensions, cycled across cases.
        #[arg(long, default_value = "2,3,4,5,6")]
        dims: String,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0")]
        q_grid: String,
        /// Run the bundled worked-example regression set instead.
        #[arg(long)]
        paper_fixtures: bool,
    },
    /// Diagonal-truncation convergence experiment.
    Converge {
        #[command(flatten)]
        cfg: RunCfg,
        /// Eigenvalue list (complex literals); default is the harmonic
        /// sequence 1/k.
        #[arg(long)]
        spectrum: Option<String>,
        #[arg(long, default_value = "2,4,8,16,24")]
        dims: String,
        #[arg(long, default_value = "0.5")]
        q: String,
        #[arg(long, default_value_t = 1e-3)]
        final_tol: f64,
    },
    /// Perturbation-stability experiment.
    Perturb {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        cfg: RunCfg,
        #[arg(long, default_value = "0.5")]
        q: String,
        /// Perturbation norms.
        #[arg(long, default_value = "1e-3,1e-2,1e-1")]
        eps: String,
        #[arg(long, default_value_t = 5)]
        trials: usize,
    },
    /// Aluthge transform plus the inclusion experiment.
    Transform {
        #[command(flatten)]
        input: InputArg,
        #[command(flatten)]
        cfg: RunCfg,
        #[arg(long, default_value = "0.5")]
        q: String,
        #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
        format: OutputFormat,
    },
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn emit_named(prefix: &Option<PathBuf>, fallback: &str, suffix: &str, content: &str) -> Result<PathBuf, Error> {
    let base = prefix
        .clone()
        .unwrap_or_else(|| PathBuf::from(fallback));
    let path = PathBuf::from(format!("{}{suffix}", base.display()));
    std::fs::write(&path, content)
        .map_err(|e| Error::Config(format!("cannot write {}: {e}", path.display())))?;
    Ok(path)
}

fn parse_usize_list(s: &str) -> Result<Vec<usize>, Error> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad integer '{p}'")))
        })
        .collect()
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number '{p}'")))
        })
        .collect()
}

#[derive(Serialize)]
struct RangeDoc {
    q: [f64; 2],
    n_theta: usize,
    thetas: Vec<f64>,
    support: Vec<f64>,
    hull: Vec<[f64; 2]>,
    cloud: Vec<[f64; 2]>,
    contains_zero: bool,
    margin: f64,
}

fn range_doc(range: &qrange_core::qrange::ConvexRange) -> RangeDoc {
    let (contains, margin) = qrange::contains_zero(range);
    RangeDoc {
        q: [range.q.value().re, range.q.value().im],
        n_theta: range.n_theta,
        thetas: range.thetas(),
        support: range.support.clone(),
        hull: range.hull.iter().map(|z| [z.re, z.im]).collect(),
        cloud: range.cloud.iter().map(|z| [z.re, z.im]).collect(),
        contains_zero: contains,
        margin,
    }
}

fn range_csv(range: &qrange_core::qrange::ConvexRange) -> String {
    let mut out = String::from("theta,support,boundary_re,boundary_im\n");
    for (k, th) in range.thetas().iter().enumerate() {
        let (bre, bim) = match range.hull.get(k) {
            Some(v) => (v.re.to_string(), v.im.to_string()),
            None => (String::new(), String::new()),
        };
        out.push_str(&format!("{th},{},{bre},{bim}\n", range.support[k]));
    }
    out
}

fn cmd_range(
    input: InputArg,
    cfg: RunCfg,
    q_values: Vec<String>,
    samples: usize,
    format: OutputFormat,
) -> Result<(), Error> {
    let t = io::read_matrix(&input.input, input.matrix_format)?;
    let mut ranges = Vec::new();
    for (i, spec) in q_values.iter().enumerate() {
        let q = QParam::new(io::parse_complex(spec)?)?;
        let params = RangeParams {
            n_theta: cfg.ntheta,
            n_samples: samples,
            restarts: cfg.restarts,
            seed: cfg.seed.wrapping_add(i as u64),
        };
        ranges.push(qrange::range_cloud(&t, q, &params)?);
    }
    match format {
        OutputFormat::Json => {
            let docs: Vec<RangeDoc> = ranges.iter().map(range_doc).collect();
            let mut text = serde_json::to_string_pretty(&docs).expect("serializable");
            text.push('\n');
            emit(&cfg.out, &text)?;
        }
        OutputFormat::Csv => {
            if cfg.out.is_some() || ranges.len() > 1 {
                for (i, r) in ranges.iter().enumerate() {
                    let path =
                        emit_named(&cfg.out, "qrange_range", &format!("_q{i}.csv"), &range_csv(r))?;
                    eprintln!("wrote {}", path.display());
                }
            } else {
                emit(&None, &range_csv(&ranges[0]))?;
            }
        }
        OutputFormat::Svg => {
            let plots: Vec<svg::RangePlot> = ranges
                .iter()
                .zip(&q_values)
                .map(|(r, spec)| svg::RangePlot {
                    label: format!("q={spec}"),
                    hull: r.hull.clone(),
                    cloud: r.cloud.clone(),
                })
                .collect();
            let path = emit_named(&cfg.out, "qrange_range", ".svg", &svg::render(&plots))?;
            eprintln!("wrote {}", path.display());
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct RadiusDoc {
    input_digest: String,
    dim: usize,
    norm: f64,
    sigma_min: f64,
    numerical_radius: f64,
    crawford: f64,
    transcendental_radius: f64,
    transcendental_center: [f64; 2],
    per_q: Vec<PerQRadius>,
}

#[derive(Serialize)]
struct PerQRadius {
    q: f64,
    omega: f64,
    witness: Vec<[f64; 2]>,
    witness_phase: f64,
    spread: f64,
    restarts_used: usize,
    closed_form_2x2: Option<String>,
}

fn cmd_radius(input: InputArg, cfg: RunCfg, q_grid: String) -> Result<(), Error> {
    let t = io::read_matrix(&input.input, input.matrix_format)?;
    let qs = io::parse_q_grid(&q_grid)?;
    let w = radii::numerical_radius(&t);
    let c = radii::crawford(&t);
    let m = radii::transcendental_radius(&t);
    let center = match m.witness {
        radii::Witness::Scalar(l) => [l.re, l.im],
        radii::Witness::Vector(_) => [f64::NAN, f64::NAN],
    };
    let mut per_q = Vec::new();
    for (i, &q) in qs.iter().enumerate() {
        let est = qrange::omega_q(&t, q, cfg.restarts, cfg.seed.wrapping_add(i as u64))?;
        let closed = if t.dim() == 2 {
            match qrange::omega_q_2x2_closed(&t, q)? {
                Closed2x2::Diagonal(v) => Some(format!("diagonal:{v}")),
                Closed2x2::ReducedForm(v) => Some(format!("reduced:{v}")),
                Closed2x2::NotApplicable => Some("not_applicable".into()),
            }
        } else {
            None
        };
        per_q.push(PerQRadius {
            q,
            omega: est.value,
            witness: est.witness_x.entries().iter().map(|z| [z.re, z.im]).collect(),
            witness_phase: est.witness_phase,
            spread: est.spread,
            restarts_used: est.restarts_used,
            closed_form_2x2: closed,
        });
    }
    let doc = RadiusDoc {
        input_digest: bounds::digest(&[&t]),
        dim: t.dim(),
        norm: spectral_norm(&t),
        sigma_min: sigma_min(&t),
        numerical_radius: w.value,
        crawford: c.value,
        transcendental_radius: m.value,
        transcendental_center: center,
        per_q,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    emit(&cfg.out, &text)
}

fn bounds_csv(rows: &[bounds::BoundReport]) -> String {
    let mut out = String::from("bound_id,q,rhs,omega_est,slack,holds,power,lower,inputs_digest\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            r.bound_id,
            r.q,
            r.rhs,
            r.omega_est,
            r.slack,
            r.holds,
            match r.power {
                bounds::Power::Linear => "linear",
                bounds::Power::Squared => "squared",
            },
            r.lower,
            r.inputs_digest
        ));
    }
    out
}

fn cmd_bounds(
    input: InputArg,
    cfg: RunCfg,
    q_grid: String,
    format: OutputFormat,
) -> Result<(), Error> {
    let t = io::read_matrix(&input.input, input.matrix_format)?;
    let qs = io::parse_q_grid(&q_grid)?;
    let rows = bounds::bound_sweep(&t, &qs, &cfg.bound_cfg())?;
    match format {
        OutputFormat::Csv => emit(&cfg.out, &bounds_csv(&rows)),
        _ => {
            let mut text = serde_json::to_string_pretty(&rows).expect("serializable");
            text.push('\n');
            emit(&cfg.out, &text)
        }
    }
}

fn cmd_verify(
    cfg: RunCfg,
    ensemble: String,
    dims: String,
    count: usize,
    q_grid: String,
    paper_fixtures: bool,
) -> Result<u8, Error> {
    if paper_fixtures {
        #[derive(Serialize)]
        struct FixtureDoc {
            discrepancies: Vec<findings::Finding>,
            fixtures: Vec<findings::Finding>,
            all_as_expected: bool,
        }
        let discrepancies = findings::documented_discrepancies(cfg.restarts, cfg.seed)?;
        let fixtures = findings::fixture_regressions(cfg.restarts, cfg.seed)?;
        let ok = discrepancies.iter().chain(&fixtures).all(|f| f.as_expected());
        let doc = FixtureDoc { discrepancies, fixtures, all_as_expected: ok };
        let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
        text.push('\n');
        emit(&cfg.out, &text)?;
        return Ok(if ok { 0 } else { 3 });
    }

    let vcfg = verify::VerifyConfig {
        ensemble: ensemble.parse()?,
        dims: parse_usize_list(&dims)?,
        count,
        qs: io::parse_q_grid(&q_grid)?,
        restarts: cfg.restarts,
        recheck_restarts: 512,
        seed: cfg.seed,
        holds_tol: cfg.tol_holds,
    };
    let report = verify::run(&vcfg)?;
    let ok = report.certified_ok;
    let mut text = serde_json::to_string_pretty(&report).expect("serializable");
    text.push('\n');
    emit(&cfg.out, &text)?;
    Ok(if ok { 0 } else { 3 })
}

fn cmd_converge(
    cfg: RunCfg,
    spectrum: Option<String>,
    dims: String,
    q: String,
    final_tol: f64,
) -> Result<(), Error> {
    let dims = parse_usize_list(&dims)?;
    let max_dim = *dims.last().ok_or_else(|| Error::Config("empty dims".into()))?;
    let eigenvalues: Vec<Complex64> = match spectrum {
        Some(spec) => spec
            .split(',')
            .map(|p| io::parse_complex(p.trim()))
            .collect::<Result<_, _>>()?,
        None => (1..=max_dim)
            .map(|k| Complex64::new(1.0 / k as f64, 0.0))
            .collect(),
    };
    let q = QParam::new(io::parse_complex(&q)?)?;
    let params = HarnessParams {
        n_theta: cfg.ntheta,
        restarts: cfg.restarts,
        seed: cfg.seed,
        final_tol,
    };
    let report = structure::run_convergence(&eigenvalues, q, &dims, &params)?;
    let mut text = serde_json::to_string_pretty(&report).expect("serializable");
    text.push('\n');
    emit(&cfg.out, &text)
}

fn cmd_perturb(
    input: InputArg,
    cfg: RunCfg,
    q: String,
    eps: String,
    trials: usize,
) -> Result<(), Error> {
    let t = io::read_matrix(&input.input, input.matrix_format)?;
    let q: f64 = q
        .parse()
        .map_err(|_| Error::Parse(format!("bad q value '{q}'")))?;
    let eps = parse_f64_list(&eps)?;
    let seeds: Vec<u64> = (0..trials as u64)
        .map(|k| cfg.seed.wrapping_add(k).wrapping_mul(2).wrapping_add(1))
        .collect();
    let params = HarnessParams {
        n_theta: cfg.ntheta,
        restarts: cfg.restarts,
        seed: cfg.seed,
        final_tol: 1e-3,
    };
    let report = structure::run_perturbation(&t, q, &seeds, &eps, &params)?;
    let mut text = serde_json::to_string_pretty(&report).expect("serializable");
    text.push('\n');
    emit(&cfg.out, &text)
}

fn cmd_transform(input: InputArg, cfg: RunCfg, q: String, format: OutputFormat) -> Result<(), Error> {
    let t = io::read_matrix(&input.input, input.matrix_format)?;
    let q = QParam::new(io::parse_complex(&q)?)?;
    let tilde = structure::aluthge_with(&t, cfg.tol_psd);
    let normal = structure::is_normal(&t, cfg.tol_normal);

    if format == OutputFormat::Csv {
        // Just the transformed matrix, in the same CSV dialect as the input.
        return emit(&cfg.out, &io::matrix_to_csv(&tilde));
    }
    let report = structure::check_thm5(&t, q, cfg.ntheta, cfg.restarts, cfg.seed)?;

    if format == OutputFormat::Svg {
        let params = RangeParams {
            n_theta: cfg.ntheta,
            n_samples: 256,
            restarts: cfg.restarts,
            seed: cfg.seed,
        };
        let r_t = qrange::range_cloud(&t, q, &params)?;
        let r_star = qrange::range_cloud(&adjoint(&t), q, &params)?;
        let r_tilde = qrange::range_cloud(&tilde, q, &params)?;
        let plots = vec![
            svg::RangePlot { label: "W_q(T)".into(), hull: r_t.hull, cloud: vec![] },
            svg::RangePlot { label: "W_q(T*)".into(), hull: r_star.hull, cloud: vec![] },
            svg::RangePlot { label: "W_q(Aluthge)".into(), hull: r_tilde.hull, cloud: r_tilde.cloud },
        ];
        let path = emit_named(&cfg.out, "qrange_transform", ".svg", &svg::render(&plots))?;
        eprintln!("wrote {}", path.display());
        return Ok(());
    }

    #[derive(Serialize)]
    struct TransformDoc {
        aluthge: serde_json::Value,
        input_is_normal: bool,
        note: String,
        report: structure::TheoremReport,
    }
    let doc = TransformDoc {
        aluthge: serde_json::from_str(&io::matrix_to_json(&tilde)).expect("valid json"),
        input_is_normal: normal,
        note: if normal {
            "input is normal: the Aluthge transform equals the input".into()
        } else {
            String::new()
        },
        report,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    emit(&cfg.out, &text)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.cmd {
        Cmd::Range { input, cfg, q_values, samples, format } => {
            cmd_range(input, cfg, q_values, samples, format)?;
            Ok(0)
        }
        Cmd::Radius { input, cfg, q_grid } => {
            cmd_radius(input, cfg, q_grid)?;
            Ok(0)
        }
        Cmd::Bounds { input, cfg, q_grid, format } => {
            cmd_bounds(input, cfg, q_grid, format)?;
            Ok(0)
        }
        Cmd::Verify { cfg, ensemble, dims, count, q_grid, paper_fixtures } => {
            cmd_verify(cfg, ensemble, dims, count, q_grid, paper_fixtures)
        }
        Cmd::Converge { cfg, spectrum, dims, q, final_tol } => {
            cmd_converge(cfg, spectrum, dims, q, final_tol)?;
            Ok(0)
        }
        Cmd::Perturb { input, cfg, q, eps, trials } => {
            cmd_perturb(input, cfg, q, eps, trials)?;
            Ok(0)
        }
        Cmd::Transform { input, cfg, q, format } => {
            cmd_transform(input, cfg, q, format)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("QRANGE_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Parse(_) | Error::Config(_) | Error::DimMismatch(_) | Error::NonFinite => 2,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
