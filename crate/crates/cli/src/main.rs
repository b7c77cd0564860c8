use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use mcmpb_cli::dataset;
use mcmpb_cli::report::{render_table, ReportDocument};
use mcmpb_cli::CliError;
use mcmpb_core::fixtures::Fixture;
use mcmpb_core::mcmpb::{classify_modality, moments, reflect, shape_index, IndexKind};
use mcmpb_core::queue::{simulate, stationary_exact, total_variation, QueueSpec};
use mcmpb_core::{build_table, fit_model, FrequencyData, McmpbParams, ModelKind, NChoice};

#[derive(Parser)]
#[command(
    name = "mcmpb",
    version,
    about = "Fit, sample and explore the MCMPB count distribution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a count model to a dataset file or an embedded fixture.
    Fit(FitArgs),
    /// Simulate the birth-death queue and compare with its stationary law.
    Simulate(SimulateArgs),
    /// Print the pmf and cdf of one MCMPB law.
    Pmf(PmfArgs),
    /// Evaluate a shape index over a grid of (alpha, beta).
    Grid(GridArgs),
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct FitArgs {
    /// CSV file, or one of: bacterial, saxony, linnet, trip.
    dataset: String,
    #[arg(long, default_value = "mcmpb", value_parser = parse_model)]
    model: ModelKind,
    /// `auto` for profile likelihood, or a fixed integer.
    #[arg(long, default_value = "auto")]
    n: String,
    /// Treat the data as zero-truncated.
    #[arg(long)]
    truncated: bool,
    /// Write the JSON report here.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SimulateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    /// Arrival rate scale.
    #[arg(long)]
    lambda: f64,
    /// Service rate scale.
    #[arg(long)]
    mu: f64,
    #[arg(long, default_value_t = 1e5)]
    horizon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct PmfArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    alpha: f64,
    #[arg(long)]
    beta: f64,
    #[arg(long)]
    psi: f64,
    /// Print the law of n - X instead.
    #[arg(long)]
    reflect: bool,
    /// Also print moments and the modality class.
    #[arg(long)]
    moments: bool,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct GridArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    psi: f64,
    /// `lo:hi`, inclusive.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    alpha_range: (f64, f64),
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    beta_range: (f64, f64),
    #[arg(long)]
    step: f64,
    #[arg(long, value_parser = parse_index)]
    index: IndexKind,
}

fn parse_model(s: &str) -> Result<ModelKind, String> {
    s.parse().map_err(|e: mcmpb_core::Error| e.to_string())
}

fn parse_index(s: &str) -> Result<IndexKind, String> {
    s.parse().map_err(|e: mcmpb_core::Error| e.to_string())
}

fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(':').ok_or("expected `lo:hi`")?;
    let lo: f64 = lo
        .trim()
        .parse()
        .map_err(|_| format!("bad lower bound `{lo}`"))?;
    let hi: f64 = hi
        .trim()
        .parse()
        .map_err(|_| format!("bad upper bound `{hi}`"))?;
    if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
        return Err(format!("empty or non-finite range {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn load(source: &str, truncated: bool) -> Result<FrequencyData, CliError> {
    let path = Path::new(source);
    let data = if path.exists() {
        dataset::read(path)?
    } else if let Some(f) = Fixture::from_name(source) {
        f.data()
    } else {
        return Err(CliError::Data(format!("{source}: no such file or fixture")));
    };
    if truncated && !data.truncated_at_zero() {
        let counts = data
            .counts()
            .iter()
            .copied()
            .filter(|&(x, f)| x > 0 || f > 0)
            .collect();
        return Ok(FrequencyData::new(counts, true)?);
    }
    Ok(data)
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    let data = load(&args.dataset, args.truncated)?;
    let choice = match args.n.as_str() {
        "auto" => NChoice::Auto,
        s => {
            let n: usize = s.parse().map_err(|_| {
                CliError::Usage(format!("--n expects `auto` or an integer, got `{s}`"))
            })?;
            if !args.model.bounded() {
                return Err(CliError::Usage(format!(
                    "{} has unbounded support; --n does not apply",
                    args.model
                )));
            }
            if n < data.max_value() {
                return Err(CliError::Data(format!(
                    "--n {n} is smaller than the largest count {}",
                    data.max_value()
                )));
            }
            NChoice::Fixed(n)
        }
    };
    let fit = fit_model(args.model, &data, choice)?;
    print!("{}", render_table(&fit));
    if let Some(out) = &args.out {
        let doc = ReportDocument {
            dataset: args.dataset.clone(),
            fit: fit.clone(),
        };
        let json = doc.to_json().map_err(|e| CliError::Data(e.to_string()))?;
        std::fs::write(out, json + "\n")
            .map_err(|e| CliError::Data(format!("{}: {e}", out.display())))?;
    }
    if !fit.converged {
        return Err(CliError::NonConvergence(
            "optimizer stopped before meeting its tolerance".into(),
        ));
    }
    Ok(())
}

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let spec = QueueSpec::new(args.n, args.alpha, args.beta, args.mu, args.lambda)?;
    let exact = stationary_exact(&spec)?;
    let run = simulate(&spec, args.horizon, args.seed)?;
    println!("x,exact,empirical");
    for (x, (p, q)) in exact.iter().zip(&run.occupancy).enumerate() {
        println!("{x},{p:.11e},{q:.11e}");
    }
    println!();
    println!("events: {}", run.events);
    println!("recorded_time: {}", run.recorded_time);
    println!(
        "tv_distance: {:.11e}",
        total_variation(&exact, &run.occupancy)?
    );
    Ok(())
}

fn cmd_pmf(args: PmfArgs) -> Result<(), CliError> {
    let mut params = McmpbParams::new(args.n, args.alpha, args.beta, args.psi)?;
    if args.reflect {
        params = reflect(&params);
    }
    let table = build_table(&params)?;
    println!("x,pmf,cdf");
    for (x, (p, c)) in table.pmf.iter().zip(&table.cdf).enumerate() {
        println!("{x},{p:.11e},{c:.11e}");
    }
    if args.moments {
        let m = moments(&table);
        println!();
        println!("mean: {:.11e}", m.mean);
        println!("variance: {:.11e}", m.variance());
        println!("dispersion_index: {:.11e}", m.dispersion_index);
        println!("skewness: {:.11e}", m.skewness);
        println!("kurtosis_excess: {:.11e}", m.kurtosis_excess);
        println!("modality: {}", classify_modality(&table));
    }
    Ok(())
}

fn steps(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    (0..=count)
        .map(|i| ((lo + i as f64 * step) * 1e10).round() / 1e10)
        .collect()
}

fn cmd_grid(args: GridArgs) -> Result<(), CliError> {
    if !(args.step > 0.0 && args.step.is_finite()) {
        return Err(CliError::Usage(format!(
            "--step must be positive, got {}",
            args.step
        )));
    }
    let alphas = steps(args.alpha_range.0, args.alpha_range.1, args.step);
    let betas = steps(args.beta_range.0, args.beta_range.1, args.step);
    let name = match args.index {
        IndexKind::Dispersion => "dispersion",
        IndexKind::Skewness => "skewness",
        IndexKind::Kurtosis => "kurtosis",
    };
    println!("alpha,beta,{name}");
    for &a in &alphas {
        for &b in &betas {
            let v = shape_index(&McmpbParams::new(args.n, a, b, args.psi)?, args.index)?;
            println!("{a},{b},{v:.11e}");
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fit(a) => cmd_fit(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Pmf(a) => cmd_pmf(a),
        Command::Grid(a) => cmd_grid(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mcmpb: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
