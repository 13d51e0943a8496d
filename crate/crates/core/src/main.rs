use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use b1lab::harness::{self, Format};
use b1lab::operators::apply;
use b1lab::probes::{self, Corpus, Rect};
use b1lab::spaces::{self, Space, SpaceTag};
use b1lab::{parse, Config, Lab, OpKind, OperatorSpec, C64};

#[derive(Parser)]
#[command(name = "b1lab", version, about = "Norms, operators and verification suites on the space B₁")]
struct Cli {
    /// key=value configuration file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a norm
    Norm {
        #[arg(long)]
        space: String,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        /// Derivative order for fpqs
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        f: String,
    },
    /// Apply an operator and print Taylor coefficients
    Apply {
        #[arg(long)]
        op: OpKind,
        #[arg(long)]
        symbol: Option<String>,
        #[arg(long)]
        f: String,
        #[arg(long = "N")]
        degree: Option<usize>,
    },
    /// Operator-norm lower bound over the corpus, with the upper bound when known
    Opnorm {
        #[arg(long)]
        op: OpKind,
        #[arg(long)]
        symbol: Option<String>,
    },
    /// Essential-norm decay table (Tg) or lower bound (Ig)
    Essnorm {
        #[arg(long)]
        op: OpKind,
        #[arg(long)]
        symbol: String,
        #[arg(long, value_delimiter = ',', default_value = "0.9,0.99,0.999")]
        radii: Vec<f64>,
    },
    /// Resolvent portrait over a rectangle of λ values
    Portrait {
        #[arg(long)]
        op: OpKind,
        #[arg(long)]
        symbol: String,
        /// x0,x1,y0,y1
        #[arg(long, allow_hyphen_values = true)]
        rect: String,
        #[arg(long)]
        step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for large values of ‖fg‖/(‖f‖‖g‖)
    Search {
        #[arg(long, value_enum, default_value = "product-constant")]
        target: Target,
        #[arg(long)]
        iters: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run verification checks
    Verify {
        /// `all` or comma-separated check ids
        #[arg(long, default_value = "all")]
        suite: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the per-check CSV summary
        #[arg(long)]
        csv: Option<PathBuf>,
        /// List check ids and exit
        #[arg(long)]
        list: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    ProductConstant,
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Runtime(e.to_string())
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}

fn load_lab(path: Option<&PathBuf>) -> Result<Lab, Failure> {
    let config = match path {
        Some(p) => Config::from_file(p).map_err(usage)?,
        None => Config::default(),
    };
    Lab::new(config).map_err(usage)
}

fn operator(op: OpKind, symbol: Option<&str>) -> Result<OperatorSpec, Failure> {
    let symbol = symbol.map(parse).transpose().map_err(usage)?;
    OperatorSpec::new(op, symbol).map_err(usage)
}

fn write_or_print(path: Option<&PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    let lab = load_lab(cli.config.as_ref())?;
    match cli.command {
        Command::Norm { space, p, q, s, n, f } => {
            let tag: SpaceTag = space.parse().map_err(usage)?;
            let space = Space::from_tag(tag, p, q, s, n).map_err(usage)?;
            let f = parse(&f).map_err(usage)?;
            let v = spaces::norm(&lab, &f, space)?;
            match v.argmax {
                Some(a) => println!("value = {:.15e}\nerr_est = {:.3e}\nargmax = {}", v.value, v.err_est, a),
                None => println!("value = {:.15e}\nerr_est = {:.3e}", v.value, v.err_est),
            }
        }
        Command::Apply { op, symbol, f, degree } => {
            let spec = operator(op, symbol.as_deref())?;
            let n = degree.unwrap_or(lab.degree());
            let f = parse(&f).map_err(usage)?;
            let series = f.to_series(n).series;
            let out = apply(&spec, &series, n)?;
            for (k, c) in out.coeffs().iter().enumerate() {
                println!("{k}\t{:.17e}\t{:.17e}", c.re, c.im);
            }
        }
        Command::Opnorm { op, symbol } => {
            let spec = operator(op, symbol.as_deref())?;
            let corpus = Corpus::generate(&lab, lab.config.seed, lab.config.corpus);
            let report = probes::opnorm_lower(&lab, &spec, corpus.members())?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        Command::Essnorm { op, symbol, radii } => {
            let g = parse(&symbol).map_err(usage)?;
            if radii.iter().any(|r| !(*r > 0.0 && *r < 1.0)) {
                return Err(usage("radii must lie in (0, 1)"));
            }
            let out = match op {
                OpKind::Tg => json!({ "op": "Tg", "symbol": g.render(), "decay": probes::tg_essnorm_decay(&lab, &g, &radii)? }),
                OpKind::Ig => {
                    let seq: Vec<C64> = probes::radial_sequence_to_max(&lab, &g, &radii);
                    json!({ "op": "Ig", "symbol": g.render(), "report": probes::ig_essnorm_lower(&lab, &g, &seq)? })
                }
                k => return Err(usage(format!("essnorm supports Tg and Ig, not {k}"))),
            };
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Portrait { op, symbol, rect, step, out } => {
            if !matches!(op, OpKind::Mg | OpKind::Ig) {
                return Err(usage(format!("portraits support Mg and Ig, not {op}")));
            }
            let g = parse(&symbol).map_err(usage)?;
            let rect: Rect = rect.parse().map_err(usage)?;
            let corpus = Corpus::generate(&lab, lab.config.seed, 8);
            let portrait = probes::resolvent_portrait(&lab, op, &g, rect, step, corpus.members())?;
            write_or_print(out.as_ref(), &portrait.to_csv())?;
        }
        Command::Search { target: Target::ProductConstant, iters, seed } => {
            let iters = iters.unwrap_or(lab.config.search_iters);
            let seed = seed.unwrap_or(lab.config.seed);
            let corpus = Corpus::generate(&lab, seed, 40);
            let report = probes::product_constant_search(&lab, seed, iters, corpus.members())?;
            let out = json!({ "bound": report.as_bound(), "search": report });
            println!("{}", serde_json::to_string_pretty(&out)?);
        }
        Command::Verify { suite, out, csv, list } => {
            if list {
                for c in harness::registry() {
                    println!("{:8} {}", c.id, c.statement);
                }
                return Ok(ExitCode::SUCCESS);
            }
            harness::resolve(&[suite.clone()]).map_err(usage)?;
            let report = harness::run_suite_with(&lab, &[suite], |r| {
                eprintln!(
                    "{:8} {:12} measured {:.6e} bound {:.6e} ({} ms)",
                    r.id,
                    format!("{:?}", r.outcome.verdict).to_lowercase(),
                    r.outcome.measured,
                    r.outcome.bound,
                    r.runtime_ms
                );
            })?;
            let json = String::from_utf8(harness::emit(&report, Format::Json)?)?;
            write_or_print(out.as_ref(), &(json + "\n"))?;
            if let Some(p) = csv {
                std::fs::write(p, harness::emit(&report, Format::Csv)?)?;
            }
            let s = &report.summary;
            eprintln!(
                "{} checks: {} passed, {} inconclusive, {} violated, {} errors",
                s.total, s.passed, s.inconclusive, s.violated, s.errors
            );
            return Ok(if report.all_pass() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
    }
    Ok(ExitCode::SUCCESS)
}
