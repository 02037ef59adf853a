//! `arccover`: certify the hexagonal cover, search its parameters, and
//! sample random curves against it.
//!
//! Exit codes: 0 success, 1 verdict failed or a curve not placed, 2 usage
//! or I/O error, 3 solver failure. Thread count follows `RAYON_NUM_THREADS`.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use arccover::catalog::{build_catalog, find_case};
use arccover::certify::{certify_cases, fmt7, CaseStatus, CertificationReport, Verdict, DEFAULT_THRESHOLD};
use arccover::oracle::monte_carlo;
use arccover::search::{search, write_trace, SearchConfig};
use arccover::svg::case_svg;
use arccover::{minimize_chain_length, CoverParams, SolveOptions};
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "arccover", version, about = "Certify a hexagonal cover for closed curves of length one")]
struct Cli {
    /// JSON file holding exactly {"s": .., "t": .., "s2": ..}; default is the canonical triple.
    #[arg(long, global = true, value_name = "FILE")]
    params: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve catalog cases and check their lower bounds.
    Certify(CertifyArgs),
    /// Grid search over the clip legs.
    Search(SearchArgs),
    /// Place random convex curves of length one in the cover.
    Sample(SampleArgs),
    /// Print the constraint system of one case as JSON.
    DumpConstraints {
        #[arg(long)]
        case: String,
    },
}

#[derive(Args, Debug)]
struct CertifyArgs {
    #[arg(long, conflicts_with = "all")]
    case: Option<String>,
    /// Every case (the default).
    #[arg(long)]
    all: bool,
    #[arg(long, default_value_t = DEFAULT_THRESHOLD)]
    threshold: f64,
    #[arg(long, default_value_t = 1e-6)]
    gap_tol: f64,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Directory for one SVG figure per case.
    #[arg(long, value_name = "DIR")]
    svg: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Overrides the threshold in the config file.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, value_name = "FILE")]
    trace: Option<PathBuf>,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SampleArgs {
    #[arg(long)]
    curves: u64,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 720)]
    angles: usize,
    /// Directory for JSON dumps of curves that could not be placed.
    #[arg(long, value_name = "DIR")]
    failures: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Solver(String),
}

impl From<arccover::Error> for Failure {
    fn from(e: arccover::Error) -> Self {
        match e {
            arccover::Error::Infeasible => Failure::Solver(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> Failure {
    Failure::Usage(format!("{}: {e}", path.display()))
}

fn load_params(path: Option<&Path>) -> Result<CoverParams, Failure> {
    match path {
        None => Ok(CoverParams::canonical()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| io_err(p, e))?;
            CoverParams::from_json_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| io_err(path, e))
}

fn run_certify(params: &CoverParams, a: &CertifyArgs) -> Result<ExitCode, Failure> {
    let opts = SolveOptions { gap_tol: a.gap_tol, seed: a.seed, ..SolveOptions::default() };
    let cases = match &a.case {
        Some(name) => vec![find_case(params, name)?],
        None => build_catalog(params),
    };
    let report = certify_cases(params, &cases, a.threshold, &opts)?;
    print!("{}", report.summary());
    if let Some(out) = &a.out {
        write_file(out, &report.to_json_string())?;
    }
    if let Some(dir) = &a.svg {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        for case in &cases {
            let r = minimize_chain_length(&case.constraints, &opts)?;
            if r.primal_value.is_finite() {
                let file = dir.join(format!("{}.svg", case.name.replace('/', "_")));
                write_file(&file, &case_svg(params, case, &r))?;
            }
        }
    }
    Ok(exit_for(&report))
}

fn exit_for(report: &CertificationReport) -> ExitCode {
    if report.cases.iter().any(|c| c.status == CaseStatus::Failed) {
        ExitCode::from(3)
    } else if report.verdict == Verdict::Failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

fn run_search(a: &SearchArgs) -> Result<ExitCode, Failure> {
    let text = fs::read_to_string(&a.config).map_err(|e| io_err(&a.config, e))?;
    let mut cfg = SearchConfig::from_json_str(&text)?;
    if let Some(t) = a.threshold {
        cfg.threshold = t;
    }
    let out = search(&cfg)?;
    if let Some(path) = &a.trace {
        let f = fs::File::create(path).map_err(|e| io_err(path, e))?;
        write_trace(&out.trace, f)?;
    }
    if let Some(path) = &a.out {
        write_file(path, &out.report.to_json_string())?;
    }
    let b = &out.best;
    println!(
        "best s {:.7} t {:.7} s2 {:.7} area {:.7} evaluated {}{}",
        b.s,
        b.t,
        b.s2,
        out.report.area,
        out.trace.len(),
        if out.found { "" } else { " (no feasible triple; canonical shown)" }
    );
    if let Some(c) = out.report.binding_case() {
        println!("binding {} {}", c.name, fmt7(c.lower_bound));
    }
    Ok(if out.found { exit_for(&out.report) } else { ExitCode::from(1) })
}

fn run_sample(params: &CoverParams, a: &SampleArgs) -> Result<ExitCode, Failure> {
    let report = monte_carlo(params, a.curves, a.seed, a.angles)?;
    println!("placed {} of {} curves", report.placed, report.trials);
    if let Some(dir) = &a.failures {
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        for f in &report.failures {
            write_file(&dir.join(format!("failure-{}-{}.json", f.seed, f.trial)), &f.to_json_string())?;
        }
    }
    for f in &report.failures {
        eprintln!("not placed: trial {} best margin {:.3e}", f.trial, f.best.margin);
    }
    Ok(if report.failures.is_empty() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    let params = load_params(cli.params.as_deref())?;
    match &cli.command {
        Command::Certify(a) => run_certify(&params, a),
        Command::Search(a) => run_search(a),
        Command::Sample(a) => run_sample(&params, a),
        Command::DumpConstraints { case } => {
            let spec = find_case(&params, case)?;
            println!("{}", spec.constraints.to_json_string());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(msg)) => {
            eprintln!("solver failure: {msg}");
            ExitCode::from(3)
        }
    }
}
