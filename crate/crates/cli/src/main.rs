//! `tandemcount` command-line front end.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error, 3 I/O or
//! runtime failure.

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::json;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use tandemcount::asymptotics::{self, mc, spectral, ModelSpec};
use tandemcount::counts;
use tandemcount::oracle::{self, DEFAULT_CAP};
use tandemcount::series::SeriesPoly;
use tandemcount::walk::{s_face_weight, TandemWalk};
use tandemcount::{Error, Model, SCHEMA};

#[derive(Parser, Debug)]
#[command(name = "tandemcount", version, about = "Exact counts and asymptotic checks for P and S tandem walks")]
struct Cli {
    /// Worker thread cap for Monte Carlo runs (overrides TANDEMCOUNT_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SeriesKind {
    /// Polyhedral orientations, `p_n`.
    P,
    /// Schnyder labelings, `s_n`.
    S,
    /// The auxiliary series `s'_m`.
    SPrime,
    /// The transformed Schnyder series.
    STilde,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    P,
    S,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::P => Model::P,
            ModelArg::S => Model::S,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Bfile,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a counting series.
    Count {
        #[arg(long, value_enum, default_value = "p")]
        model: SeriesKind,
        #[arg(long, default_value_t = 30)]
        n_max: usize,
        /// Emit the refined multivariate series.
        #[arg(long)]
        refine: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// First index written to a b-file (default: the series' first index).
        #[arg(long)]
        offset: Option<u32>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compare the recurrence tables with brute-force enumeration.
    Crosscheck {
        #[arg(long, value_enum, default_value = "p")]
        model: ModelArg,
        #[arg(long, default_value_t = 6)]
        n_max: usize,
        /// Raise the enumeration cap (slow beyond the default).
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the Dyck-pair bijection and the lift into S walks.
    Bijection {
        #[arg(long, default_value_t = 5)]
        n_max: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Growth constants, spectral identities, covariance, exponents and
    /// optional Monte Carlo.
    Asymptotics {
        #[arg(long, value_enum, default_value = "p")]
        model: ModelArg,
        /// Range of the exact series used for the bound check and exponent fit.
        #[arg(long, default_value_t = 120)]
        n_max: usize,
        #[arg(long, default_value_t = 0)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Walk length (P) or aggregated-step count (S) of the Monte Carlo runs.
        #[arg(long, default_value_t = 10)]
        mc_n: usize,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// List every walk counted at one index, in the text form.
    DumpWalks {
        #[arg(long, value_enum, default_value = "p")]
        model: ModelArg,
        /// Walk length (P) or number of SE steps (S).
        #[arg(long)]
        n: usize,
        #[arg(long)]
        cap: Option<usize>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

enum Failure {
    Usage(String),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::Json(_) | Error::ThreadPool(_) => Failure::Io(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Outcome = Result<bool, Failure>;

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    let res = match output {
        Some(path) => fs::write(path, text),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    res.map_err(|e| Failure::Io(match output {
        Some(p) => format!("cannot write {}: {e}", p.display()),
        None => format!("cannot write to stdout: {e}"),
    }))
}

fn json_text(v: &impl serde::Serialize) -> Result<String, Failure> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Failure::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn first_index(kind: SeriesKind) -> u32 {
    match kind {
        SeriesKind::P | SeriesKind::STilde => 3,
        SeriesKind::S => 2,
        SeriesKind::SPrime => 1,
    }
}

fn cmd_count(
    kind: SeriesKind,
    n_max: usize,
    refine: bool,
    format: Format,
    offset: Option<u32>,
    output: &Option<PathBuf>,
) -> Outcome {
    let lo = first_index(kind) as usize;
    if n_max < lo {
        return Err(Failure::Usage(format!("--n-max must be at least {lo} for this series")));
    }
    let name = match kind {
        SeriesKind::P => "p",
        SeriesKind::S => "s",
        SeriesKind::SPrime => "s-prime",
        SeriesKind::STilde => "s-tilde",
    };
    let (series, seeded): (SeriesPoly, Vec<Vec<u32>>) = match (kind, refine) {
        (SeriesKind::P, false) => (counts::count_p_series(n_max)?, vec![]),
        (SeriesKind::S, false) => {
            (counts::count_s_series(n_max)?, vec![vec![2]])
        }
        (SeriesKind::SPrime, false) => (counts::count_s_prime_series(n_max)?, vec![]),
        (SeriesKind::STilde, false) => (counts::count_s_tilde(n_max)?, vec![]),
        (SeriesKind::P, true) => (counts::count_p_refined(n_max)?, vec![]),
        (SeriesKind::S, true) => {
            let r = counts::count_s_refined(n_max)?;
            (r.series, r.seeded_terms)
        }
        (SeriesKind::STilde, true) => (counts::count_s_tilde_refined(n_max)?, vec![]),
        (SeriesKind::SPrime, true) => {
            return Err(Failure::Usage("--refine is not available for s-prime".into()));
        }
    };
    let text = match format {
        Format::Json => {
            let mut s = series.to_json(name, &seeded)?;
            s.push('\n');
            s
        }
        Format::Csv => series.to_csv(),
        Format::Text => format!("{series}\n"),
        Format::Bfile => {
            if refine {
                return Err(Failure::Usage("b-files hold univariate series; drop --refine".into()));
            }
            let first = offset.unwrap_or(first_index(kind));
            if first as usize > n_max {
                return Err(Failure::Usage(format!("--offset {first} exceeds --n-max {n_max}")));
            }
            series.to_bfile(first, n_max as u32)?
        }
    };
    emit(output, &text)?;
    Ok(true)
}

fn cmd_crosscheck(model: Model, n_max: usize, cap: Option<usize>, output: &Option<PathBuf>) -> Outcome {
    if let Some(c) = cap.filter(|&c| c > DEFAULT_CAP) {
        eprintln!("warning: enumeration cap raised to {c}; runtime grows exponentially");
    }
    let report = oracle::crosscheck(model, n_max, cap.unwrap_or(DEFAULT_CAP))?;
    emit(output, &json_text(&report)?)?;
    if let Some(m) = &report.first_mismatch {
        eprintln!(
            "mismatch at n={} ({},{}) {}: oracle {} vs recurrence {}",
            m.n, m.i, m.j, m.family, m.oracle, m.dp
        );
    }
    Ok(report.is_ok())
}

fn cmd_bijection(n_max: usize, output: &Option<PathBuf>) -> Outcome {
    if n_max > 7 {
        return Err(Failure::Usage("--n-max above 7 is too large for exhaustive Dyck-pair enumeration".into()));
    }
    let report = oracle::check_bijections(n_max)?;
    emit(output, &json_text(&report)?)?;
    Ok(report.status == oracle::Status::Ok)
}

fn cmd_asymptotics(
    model: Model,
    n_max: usize,
    samples: usize,
    seed: u64,
    mc_n: usize,
    output: &Option<PathBuf>,
) -> Outcome {
    if n_max < 8 {
        return Err(Failure::Usage("--n-max must be at least 8".into()));
    }
    let spec = ModelSpec::of(model);
    let minimization = asymptotics::minimize_step_series(model)?;
    let (gp, gm, d) = spectral::exact_at_one(model);
    let roots = spectral::root_coefficient_check(model);
    let grad = spectral::gradient_g(model);
    let (h11, h12, h22) = spectral::covariance_from_gamma(model);
    let (g11, g12, g22) = spectral::gamma_hessian(model);
    let xi_numeric = -h12 / h11;
    let series = match model {
        Model::P => counts::count_p_series(n_max)?,
        Model::S => counts::count_s_series(n_max)?,
    };
    let violation = asymptotics::first_bound_violation(model, &series)?;
    let fit = asymptotics::exponent_fit(&series, &spec.growth)?;

    let exact_ok = roots.all() && gp.to_string() == spec.growth.to_string() && violation.is_none();
    let mut report = json!({
        "schema": SCHEMA,
        "model": model,
        "exact": {
            "z0": spec.z0.to_string(),
            "growth": spec.growth.to_string(),
            "xi": spec.xi.to_string(),
            "minimization": minimization,
            "gamma_plus_at_11": gp.to_string(),
            "gamma_minus_at_11": gm.to_string(),
            "delta_at_11": d.to_string(),
            "root_coefficient_check": roots,
            "gradient_g_at_11": [grad.0, grad.1],
        },
        "covariance": {
            "reference": [spec.covariance.0.to_string(), spec.covariance.1.to_string()],
            "log_g_hessian": [[h11, h12], [h12, h22]],
            "gamma_plus_hessian": [[g11, g12], [g12, g22]],
            "xi_numeric": xi_numeric,
        },
        "exponent": {
            "alpha": spec.alpha,
            "alpha_from_numeric_xi": asymptotics::conjectured_exponent(xi_numeric),
            "bounds_checked_to": n_max,
            "first_bound_violation": violation,
            "fit": fit,
        },
    });
    if samples > 0 {
        let r = mc::mc_estimate(model, mc_n, samples, seed)?;
        report["mc"] = serde_json::to_value(&r).map_err(|e| Failure::Io(e.to_string()))?;
    }
    emit(output, &json_text(&report)?)?;
    Ok(exact_ok)
}

fn cmd_dump_walks(model: Model, n: usize, cap: Option<usize>, output: &Option<PathBuf>) -> Outcome {
    let cap = cap.unwrap_or(DEFAULT_CAP);
    let mut out = String::new();
    match model {
        Model::P => {
            for w in oracle::enumerate_p_walks_capped(n, cap)?.walks {
                out.push_str(&w.to_string());
                out.push('\n');
            }
        }
        Model::S => {
            for (w, _) in oracle::enumerate_s_walks_capped(n, cap)?.walks {
                out.push_str(&s_text(&w));
                out.push('\n');
            }
        }
    }
    emit(output, &out)?;
    Ok(true)
}

fn s_text(w: &TandemWalk) -> String {
    w.to_text_with(|p, s| if s.is_se() { None } else { s_face_weight(p, s).map(|wt| wt.0) }.or(Some(BigUint::from(1u32))))
}

fn run(cli: Cli) -> Outcome {
    if let Some(k) = cli.threads {
        if k == 0 {
            return Err(Failure::Usage("--threads must be positive".into()));
        }
        std::env::set_var("TANDEMCOUNT_THREADS", k.to_string());
    }
    match cli.command {
        Command::Count { model, n_max, refine, format, offset, output } => {
            cmd_count(model, n_max, refine, format, offset, &output)
        }
        Command::Crosscheck { model, n_max, cap, output } => cmd_crosscheck(model.into(), n_max, cap, &output),
        Command::Bijection { n_max, output } => cmd_bijection(n_max, &output),
        Command::Asymptotics { model, n_max, samples, seed, mc_n, output } => {
            cmd_asymptotics(model.into(), n_max, samples, seed, mc_n, &output)
        }
        Command::DumpWalks { model, n, cap, output } => cmd_dump_walks(model.into(), n, cap, &output),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}
