use std::collections::BTreeMap;
use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use renyi::estimators::median_copies_for;
use renyi::experiment::{parse_key_values, to_csv};
use renyi::formats::{parse_distribution_file, parse_samples, write_distribution};
use renyi::hardness::{lecam_certificate, CertificateMode, Construction, HardInstance};
use renyi::polyapprox::{estimator_polynomial, write_polynomial};
use renyi::report::{emit_certificate, render_certificate, CertificateArgs};
use renyi::sampling::parse_distribution;
use renyi::{
    run_experiment, sample_complexity_search, Error, Estimator, EstimatorConfig, EstimatorKind, ExperimentConfig,
    LogBase, Result, SamplingMode, SearchConfig, TauRule,
};

#[derive(Parser)]
#[command(name = "renyi", version, about = "Rényi entropy estimation from samples")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the entropy of a recorded sample (file or stdin).
    Estimate(EstimateArgs),
    /// Run a Monte Carlo experiment and write a CSV report.
    Experiment(ExperimentArgs),
    /// Find the smallest sample size that meets an accuracy target.
    Search(SearchArgs),
    /// Build a lower-bound instance and print its two-point certificate.
    Certificate(CertificateCmd),
    /// Print the shifted best polynomial approximation of x^alpha.
    Approx(ApproxArgs),
}

#[derive(Args)]
struct EstimateArgs {
    /// Sample file of whitespace-separated symbol tokens; stdin when absent or `-`.
    input: Option<PathBuf>,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value = "empirical")]
    estimator: EstimatorKind,
    #[arg(long)]
    median_copies: Option<usize>,
    /// Target failure probability; sets the number of median copies.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long, default_value = "experiment")]
    tau_rule: TauRule,
    #[arg(long, default_value = "fixed")]
    sampling: SamplingMode,
    #[arg(long, default_value = "e")]
    base: LogBase,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Flat `key = value` config file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Comma-separated estimator names.
    #[arg(long)]
    estimator: Option<String>,
    /// Comma-separated distribution labels, e.g. `uniform,zipf-0.75`.
    #[arg(long)]
    distributions: Option<String>,
    #[arg(long)]
    k: Option<usize>,
    /// Sample sizes: `a,b,c` or `start:stop:step`.
    #[arg(long)]
    n: Option<String>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    tau_rule: Option<String>,
    #[arg(long)]
    median_copies: Option<usize>,
    #[arg(long)]
    sampling: Option<String>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value = "e")]
    base: LogBase,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long, default_value = "uniform")]
    distribution: String,
    #[arg(long)]
    k: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long, default_value = "bias_corrected")]
    estimator: EstimatorKind,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 400)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "fixed")]
    sampling: SamplingMode,
    #[arg(long, default_value = "experiment")]
    tau_rule: TauRule,
    #[arg(long, default_value_t = 1)]
    median_copies: usize,
    #[arg(long, default_value_t = 16)]
    n_min: u64,
    /// Largest sample size to try before giving up.
    #[arg(long, default_value_t = 1 << 22)]
    n_max: u64,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CertificateCmd {
    /// two_point, matched, scaled or heavy.
    #[arg(long, default_value = "two_point")]
    construction: Construction,
    #[arg(long, default_value_t = 10_000)]
    k: usize,
    #[arg(long, default_value_t = 2.0)]
    alpha: f64,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long, default_value_t = 100)]
    n: u64,
    #[arg(long, default_value = "product")]
    mode: CertificateMode,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    /// Matching order for the moment-matched constructions.
    #[arg(long, default_value_t = 3)]
    order: usize,
    #[arg(long, default_value_t = 0.5)]
    beta: f64,
    /// Certify a custom pair read from two distribution files instead.
    #[arg(long, requires = "q")]
    p: Option<PathBuf>,
    #[arg(long, requires = "p")]
    q: Option<PathBuf>,
    /// Also write the pair as `<prefix>_p.txt` and `<prefix>_q.txt`.
    #[arg(long)]
    export: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ApproxArgs {
    #[arg(long)]
    alpha: f64,
    /// Degree; derived from `--n` and `--tau-rule` when absent.
    #[arg(long)]
    degree: Option<usize>,
    #[arg(long)]
    n: Option<f64>,
    #[arg(long, default_value = "experiment")]
    tau_rule: TauRule,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Estimate(args) => estimate(args),
        Command::Experiment(args) => experiment(args),
        Command::Search(args) => search(args),
        Command::Certificate(args) => certificate(args),
        Command::Approx(args) => approx(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => Ok(fs::write(path, text)?),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_input(path: Option<&Path>) -> Result<String> {
    match path {
        Some(p) if p != Path::new("-") => {
            fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
        }
        _ => {
            let mut text = String::new();
            std::io::stdin().read_to_string(&mut text)?;
            Ok(text)
        }
    }
}

fn estimate(args: EstimateArgs) -> Result<()> {
    let (samples, names) = parse_samples(&read_input(args.input.as_deref())?);
    if samples.is_empty() {
        return Err(Error::InvalidParameters("the sample is empty".into()));
    }
    let copies = match (args.median_copies, args.epsilon) {
        (Some(t), _) => t,
        (None, Some(eps)) => median_copies_for(eps)?,
        (None, None) => 1,
    };
    let config = EstimatorConfig::new(args.alpha, args.estimator)
        .with_median_copies(copies)
        .with_tau_rule(args.tau_rule)
        .with_sampling(args.sampling);
    let budget = samples.len() as f64 / copies as f64;
    let estimator = Estimator::new(config, budget.max(1.0))?;
    let batches = estimator.batches_from_samples(&samples)?;
    let est = estimator.estimate(&batches)?;
    let text = format!(
        "estimator {}\nalpha {}\nsamples {}\ndistinct {}\nmedian_copies {copies}\npower_sum {:e}\nentropy {}\nbase {}\nclamped {}\n",
        args.estimator,
        args.alpha,
        samples.len(),
        names.len(),
        est.power_sum,
        est.entropy_in(args.base),
        if args.base == LogBase::Two { "2" } else { "e" },
        est.clamped,
    );
    emit(args.out.as_deref(), &text)
}

fn experiment(args: ExperimentArgs) -> Result<()> {
    let mut map = match &args.config {
        Some(path) => parse_key_values(
            &fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
        )?,
        None => BTreeMap::new(),
    };
    let mut set = |key: &str, value: Option<String>| {
        if let Some(v) = value {
            map.insert(key.to_string(), v);
        }
    };
    set("alpha", args.alpha.map(|v| v.to_string()));
    set("estimators", args.estimator);
    set("distributions", args.distributions);
    set("k", args.k.map(|v| v.to_string()));
    set("n_grid", args.n);
    set("trials", args.trials.map(|v| v.to_string()));
    set("seed", args.seed.map(|v| v.to_string()));
    set("tau_rule", args.tau_rule);
    set("median_copies", args.median_copies.map(|v| v.to_string()));
    set("sampling", args.sampling);
    set("workers", args.workers.map(|v| v.to_string()));
    set("output", args.out.map(|p| p.display().to_string()));
    let cfg = ExperimentConfig::from_map(&map)?;

    let mut rows = run_experiment(&cfg)?;
    if args.base == LogBase::Two {
        for row in &mut rows {
            for v in [
                &mut row.true_entropy,
                &mut row.mean_estimate,
                &mut row.std_estimate,
                &mut row.mean_abs_error,
            ] {
                *v = LogBase::Two.from_nats(*v);
            }
        }
    }
    emit(cfg.output.as_deref(), &to_csv(&rows))
}

fn search(args: SearchArgs) -> Result<()> {
    let spec = parse_distribution(&args.distribution, args.k).map_err(|e| Error::Config(e.to_string()))?;
    let estimator = EstimatorConfig::new(args.alpha, args.estimator)
        .with_sampling(args.sampling)
        .with_tau_rule(args.tau_rule)
        .with_median_copies(args.median_copies);
    let cfg = SearchConfig {
        trials: args.trials,
        seed: args.seed,
        n_min: args.n_min,
        n_max: args.n_max,
        workers: args.workers,
        ..SearchConfig::new(spec, estimator, args.delta, args.epsilon)
    };
    let r = sample_complexity_search(&cfg)?;
    let (lo, hi) = r.at_n_star.wilson();
    let mut text = format!(
        "distribution {}\nk {}\nalpha {}\nestimator {}\ndelta {}\nepsilon {}\ntrue_entropy {}\nn_star {}\nfailure_rate {}\nwilson_95 {lo} {hi}\n",
        spec.label(),
        spec.k,
        args.alpha,
        args.estimator,
        args.delta,
        args.epsilon,
        r.true_entropy,
        r.n_star,
        r.at_n_star.rate(),
    );
    for e in &r.evaluations {
        text.push_str(&format!("evaluated {} {}\n", e.n, e.rate()));
    }
    emit(args.out.as_deref(), &text)
}

fn certificate(args: CertificateCmd) -> Result<()> {
    let (inst, text) = match (&args.p, &args.q) {
        (Some(p), Some(q)) => {
            let load = |path: &PathBuf| -> Result<_> {
                parse_distribution_file(
                    &fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?,
                )
            };
            let inst = HardInstance::new(load(p)?, load(q)?, args.alpha, Construction::Custom)?;
            let cert = lecam_certificate(&inst, args.n, args.mode, args.epsilon)?;
            let text = render_certificate(&inst, &cert)?;
            (inst, text)
        }
        _ => {
            let req = CertificateArgs {
                construction: args.construction,
                k: args.k,
                alpha: args.alpha,
                delta: args.delta,
                order: args.order,
                beta: args.beta,
                n: args.n,
                mode: args.mode,
                epsilon: args.epsilon,
            };
            (req.instance()?, emit_certificate(&req)?)
        }
    };
    if let Some(prefix) = &args.export {
        let stem = prefix.display();
        fs::write(format!("{stem}_p.txt"), write_distribution(&inst.p))?;
        fs::write(format!("{stem}_q.txt"), write_distribution(&inst.q))?;
    }
    emit(args.out.as_deref(), &text)
}

fn approx(args: ApproxArgs) -> Result<()> {
    let degree = match (args.degree, args.n) {
        (Some(d), _) => d,
        (None, Some(n)) => args.tau_rule.degree(n),
        (None, None) => return Err(Error::Config("give --degree or --n".into())),
    };
    let poly = estimator_polynomial(args.alpha, degree)?;
    emit(args.out.as_deref(), &write_polynomial(&poly))
}
