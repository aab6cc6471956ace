use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ifslab::error::Error;
use ifslab::exact::Scalar;
use ifslab::fourier;
use ifslab::geometry::PointCloud;
use ifslab::ifs::{attractor_points, IFS};
use ifslab::io::{
    builtin_ifs, builtin_measure, parse_ifs_json, parse_measure_json, BUILTIN_MEASURES,
    BUILTIN_SYSTEMS,
};
use ifslab::measure::{
    approximate_measure, approximate_set, lq_dimension_estimate, Measure, CELL_BUDGET,
};
use ifslab::separation::{esc_diagnostic, PAIR_BUDGET};
use ifslab::verify;

#[derive(Parser)]
#[command(
    name = "ifslab",
    about = "Separation diagnostics, L^q spectra, and dimension-preserving approximation for iterated function systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct InputArgs {
    /// Built-in definition name.
    #[arg(long, conflicts_with = "input")]
    builtin: Option<String>,
    /// Path to a JSON definition.
    #[arg(long)]
    input: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write to this path instead of stdout.
    #[arg(long)]
    out: Option<String>,
    /// Override the default work budget (also via IFSLAB_BUDGET).
    #[arg(long)]
    budget: Option<u128>,
    /// Worker-thread cap; outputs are independent of its value.
    #[arg(long, default_value_t = 1)]
    threads: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the separation sequences and the overlap classification.
    Separation {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 8)]
        n_max: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Estimate the L^q dimension over dyadic partitions.
    Lq {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 2.0)]
        q: f64,
        #[arg(long, default_value_t = 14)]
        k_max: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Greedy eps-net of an attractor point cloud.
    ApproxSet {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        eps: f64,
        /// Attractor enumeration depth for the input system.
        #[arg(long, default_value_t = 8)]
        depth: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dimension-preserving smoothing of a measure, with certificate.
    ApproxMeasure {
        #[command(flatten)]
        input: InputArgs,
        /// Approximation accuracy; rationals like 1/20 stay exact.
        #[arg(long)]
        eps: String,
        #[arg(long)]
        beta: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample |mu_hat| along a frequency grid and probe for decay.
    Fourier {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, default_value_t = 1024.0)]
        xi_max: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "paper")]
        suite: String,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Budget { .. } => 3,
        _ => 2,
    }
}

fn env_budget() -> Option<u128> {
    std::env::var("IFSLAB_BUDGET").ok()?.parse().ok()
}

fn resolve_budget(output: &OutputArgs, default: u128) -> u128 {
    output.budget.or_else(env_budget).unwrap_or(default)
}

fn load_ifs(input: &InputArgs) -> Result<(IFS, String), Error> {
    match (&input.builtin, &input.input) {
        (Some(name), _) => builtin_ifs(name)
            .map(|i| (i, name.clone()))
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown builtin system '{name}'; available: {}",
                    BUILTIN_SYSTEMS.join(", ")
                ))
            }),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)?;
            Ok((parse_ifs_json(&text)?.to_ifs()?, path.clone()))
        }
        (None, None) => Err(Error::InvalidInput(
            "provide --builtin or --input".into(),
        )),
    }
}

fn load_measure(input: &InputArgs) -> Result<(Measure, String), Error> {
    match (&input.builtin, &input.input) {
        (Some(name), _) => builtin_measure(name)
            .map(|m| (m, name.clone()))
            .ok_or_else(|| {
                Error::InvalidInput(format!(
                    "unknown builtin measure '{name}'; available: {}",
                    BUILTIN_MEASURES.join(", ")
                ))
            }),
        (None, Some(path)) => {
            let text = fs::read_to_string(path)?;
            Ok((parse_measure_json(&text)?, path.clone()))
        }
        (None, None) => Err(Error::InvalidInput(
            "provide --builtin or --input".into(),
        )),
    }
}

fn emit(output: &OutputArgs, text: &str) -> Result<(), Error> {
    match &output.out {
        Some(path) => fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run() -> Result<u8, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Separation {
            input,
            n_max,
            output,
        } => {
            let (ifs, name) = load_ifs(&input)?;
            let budget = resolve_budget(&output, PAIR_BUDGET);
            let config = format!("separation --builtin {name} --n-max {n_max} --budget {budget}");
            let report = esc_diagnostic(&ifs, n_max, budget)?;
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&report)
                    .map_err(|e| Error::from(e))?
                    + "\n",
                Format::Csv => {
                    let mut csv = format!("# ifslab {config}\n");
                    csv.push_str("n,delta_n,delta_star_n,witness_i,witness_j\n");
                    for (i, n) in report.n_values.iter().enumerate() {
                        let w = &report.witnesses[i];
                        csv.push_str(&format!(
                            "{},{},{},{},{}\n",
                            n,
                            report.delta_n[i],
                            report.delta_star_n[i],
                            w.delta_pair.0,
                            w.delta_pair.1
                        ));
                    }
                    csv
                }
                Format::Text => {
                    let mut s = format!("separation diagnostic for {name}\n");
                    for (i, n) in report.n_values.iter().enumerate() {
                        s.push_str(&format!(
                            "n = {:2}: delta_n = {}  delta*_n = {}\n",
                            n, report.delta_n[i], report.delta_star_n[i]
                        ));
                    }
                    s.push_str(&format!(
                        "delta_hat = {}  classification = {:?}\n",
                        report.delta_hat, report.classification
                    ));
                    if let Some(note) = &report.budget_note {
                        s.push_str(&format!("budget: {note}\n"));
                    }
                    s
                }
            };
            emit(&output, &text)?;
            Ok(if report.budget_note.is_some() { 3 } else { 0 })
        }
        Command::Lq {
            input,
            q,
            k_max,
            output,
        } => {
            let (mu, name) = load_measure(&input)?;
            let budget = resolve_budget(&output, CELL_BUDGET);
            let config = format!("lq --builtin {name} --q {q} --k-max {k_max} --budget {budget}");
            let report = lq_dimension_estimate(&mu, q, k_max, budget)?;
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&report)
                    .map_err(|e| Error::from(e))?
                    + "\n",
                Format::Csv => {
                    let mut csv = format!("# ifslab {config}\n");
                    csv.push_str("k,tau_k,dim_k\n");
                    for (k, dim) in &report.sequence {
                        csv.push_str(&format!("{},{},{}\n", k, dim * (q - 1.0), dim));
                    }
                    csv
                }
                Format::Text => format!(
                    "L^q dimension estimate for {name} (q = {q}): {}\n{}\n",
                    report.extrapolated, report.error_note
                ),
            };
            emit(&output, &text)?;
            Ok(0)
        }
        Command::ApproxSet {
            input,
            eps,
            depth,
            output,
        } => {
            let (ifs, name) = load_ifs(&input)?;
            let cloud = attractor_points(&ifs, depth)?;
            let net = approximate_set(&cloud, eps)?;
            let config = format!("approx-set --builtin {name} --eps {eps} --depth {depth}");
            let text = match output.format {
                Format::Json => {
                    serde_json::to_string_pretty(&net).map_err(|e| Error::from(e))? + "\n"
                }
                Format::Csv => {
                    let mut csv = format!("# ifslab {config}\n");
                    csv.push_str(&point_csv(&net));
                    csv
                }
                Format::Text => format!(
                    "eps-net for {name}: {} of {} points kept, resolution {}\n",
                    net.points.len(),
                    cloud.points.len(),
                    net.resolution
                ),
            };
            emit(&output, &text)?;
            Ok(0)
        }
        Command::ApproxMeasure {
            input,
            eps,
            beta,
            output,
        } => {
            let (mu, name) = load_measure(&input)?;
            let eps_s = parse_eps(&eps)?;
            let (measure, cert) = approximate_measure(&mu, &eps_s, beta)?;
            let config = format!("approx-measure --builtin {name} --eps {eps} --beta {beta}");
            let text = match output.format {
                Format::Json => {
                    let value = serde_json::json!({
                        "measure": measure,
                        "certificate": cert,
                    });
                    serde_json::to_string_pretty(&value).map_err(|e| Error::from(e))?
                        + "\n"
                }
                Format::Csv => {
                    let mut csv = format!("# ifslab {config}\nfield,value\n");
                    for (k, v) in [
                        ("epsilon", cert.epsilon),
                        ("beta", cert.beta),
                        ("dl_nu_result", cert.dl_nu_result),
                        ("dl_nu_result_bound", cert.dl_nu_result_bound),
                        ("support_radius", cert.support_radius),
                        ("support_radius_bound", cert.support_radius_bound),
                        ("dim_template", cert.dim_template),
                        ("dim_result", cert.dim_result),
                        ("dim_gap", cert.dim_gap),
                    ] {
                        csv.push_str(&format!("{k},{v}\n"));
                    }
                    csv
                }
                Format::Text => format!(
                    "smoothing of {name}: eps = {}, beta = {}\n\
                     d_L(nu, result) = {} (bound {})\n\
                     support radius {} (bound {}, ok = {})\n\
                     dim result {} vs template {} (gap {})\n",
                    cert.epsilon,
                    cert.beta,
                    cert.dl_nu_result,
                    cert.dl_nu_result_bound,
                    cert.support_radius,
                    cert.support_radius_bound,
                    cert.support_ok,
                    cert.dim_result,
                    cert.dim_template,
                    cert.dim_gap
                ),
            };
            emit(&output, &text)?;
            Ok(0)
        }
        Command::Fourier {
            input,
            xi_max,
            output,
        } => {
            let (mu, name) = load_measure(&input)?;
            if xi_max <= 1.0 {
                return Err(Error::InvalidInput("xi-max must exceed 1".into()));
            }
            let grid = fourier::default_grid(&mu, xi_max);
            let report = fourier::decay_probe(&mu, &grid)?;
            let config = format!("fourier --builtin {name} --xi-max {xi_max}");
            let text = match output.format {
                Format::Json => serde_json::to_string_pretty(&report)
                    .map_err(|e| Error::from(e))?
                    + "\n",
                Format::Csv => {
                    let mut csv = format!("# ifslab {config}\nxi_abs,magnitude\n");
                    for (f, m) in report.frequencies.iter().zip(&report.magnitudes) {
                        csv.push_str(&format!("{f},{m}\n"));
                    }
                    csv
                }
                Format::Text => format!(
                    "decay probe for {name}: verdict {:?}, envelope exponent {:?}, \
                     max truncation error {}\n",
                    report.verdict, report.fitted_exponent, report.max_truncation_error
                ),
            };
            emit(&output, &text)?;
            Ok(0)
        }
        Command::Verify { suite } => {
            if suite != "paper" {
                return Err(Error::InvalidInput(format!(
                    "unknown suite '{suite}'; available: paper"
                )));
            }
            let results = verify::run_paper_suite();
            print!("{}", verify::format_table(&results));
            Ok(if results.iter().all(|r| r.passed) { 0 } else { 1 })
        }
    }
}

fn parse_eps(text: &str) -> Result<Scalar, Error> {
    if let Some(r) = ifslab::exact::parse_rat(text) {
        let s = Scalar::from_rat(r);
        if s.to_f64() > 0.0 {
            return Ok(s);
        }
    }
    if let Ok(v) = text.parse::<f64>() {
        if v > 0.0 {
            return Ok(Scalar::from_f64(v));
        }
    }
    Err(Error::InvalidInput(format!(
        "eps '{text}' is not a positive number or fraction"
    )))
}

fn point_csv(cloud: &PointCloud) -> String {
    let dim = cloud.dim();
    let mut csv = (0..dim)
        .map(|i| format!("x{i}"))
        .collect::<Vec<_>>()
        .join(",")
        + "\n";
    for p in &cloud.points {
        csv.push_str(
            &p.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(","),
        );
        csv.push('\n');
    }
    csv
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("ifslab: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
