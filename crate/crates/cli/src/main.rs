use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use twistlab_cli::config::{ConfigError, RunConfig, Settings};
use twistlab_cli::record::{write_histogram, write_json_lines, write_table, Record};
use twistlab_cli::suites;
use twistlab::zeros::ZeroRecord;

#[derive(Parser, Debug)]
#[command(name = "twistlab", version, about = "Checks for standard twists of half-integral weight L-functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the preset forms
    Forms(Common),
    /// Coefficient table n, c(n), a(n)
    Coeffs(Common),
    /// Evaluate F(s, alpha) at --s
    Eval(Common),
    /// Smoothed twist against the gamma-weighted double series
    VerifyBasic(Common),
    /// Continued twist against the functional-equation side
    VerifyFe(Common),
    /// Residue at s0 and its alpha-independent constant
    Residues(Common),
    /// Trivial zeros along the tube, as CSV
    TrivialZeros(Common),
    /// Zero counts against the main terms
    CountZeros(Common),
    /// Growth exponent in t
    Growth(Common),
    /// All suites with a summary and residual histogram
    Report(Common),
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Preset form name
    #[arg(long)]
    form: Option<String>,
    /// Twist parameter as an exact fraction p/q
    #[arg(long)]
    alpha: Option<String>,
    /// Twist given through n_alpha = N alpha^2 / 4, as p/q
    #[arg(long)]
    n_alpha: Option<String>,
    /// Strip parameter of the basic formula
    #[arg(long)]
    delta: Option<f64>,
    /// Comma-separated X values
    #[arg(long, value_delimiter = ',')]
    xgrid: Option<Vec<f64>>,
    /// Override the default tolerance of the suite
    #[arg(long)]
    tol: Option<f64>,
    /// Directory for JSON and CSV artifacts
    #[arg(long)]
    out: Option<PathBuf>,
    /// `default` or `re,im;re,im;...`
    #[arg(long)]
    points: Option<String>,
    /// Trivial-zero window a,b meaning -b <= sigma <= -a
    #[arg(long, value_delimiter = ',')]
    range: Option<Vec<f64>>,
    /// Height for zero counting
    #[arg(long = "T")]
    t: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    sigma: Option<f64>,
    #[arg(long)]
    tmin: Option<f64>,
    #[arg(long)]
    tmax: Option<f64>,
    /// Last n of the coefficient table
    #[arg(long)]
    max: Option<u64>,
    /// Point re,im for eval
    #[arg(long, allow_hyphen_values = true)]
    s: Option<String>,
    /// Config file of key = value lines; flags win
    #[arg(long)]
    config: Option<PathBuf>,
    /// JSON lines on stdout instead of a table
    #[arg(long)]
    json: bool,
    /// CSV on stdout (coefficients, zeros, histogram) instead of a table
    #[arg(long)]
    csv: bool,
}

impl Common {
    fn settings(&self) -> Result<RunConfig, ConfigError> {
        let flags = Settings {
            form: self.form.clone(),
            alpha: self.alpha.clone(),
            n_alpha: self.n_alpha.clone(),
            delta: self.delta,
            xgrid: self.xgrid.clone(),
            tol: self.tol,
            out: self.out.clone(),
            points: self.points.clone(),
            range: self.range.clone(),
            t: self.t,
            sigma: self.sigma,
            tmin: self.tmin,
            tmax: self.tmax,
            max: self.max,
            s: self.s.clone(),
        };
        let file = match &self.config {
            Some(path) => Settings::from_file(path)?,
            None => Settings::default(),
        };
        RunConfig::from_settings(flags.over(file))
    }
}

/// What a command produced, before rendering.
#[derive(Default)]
struct Output {
    records: Vec<Record>,
    /// (file name, contents) written under --out and printed for --csv.
    csv: Option<(&'static str, Vec<u8>)>,
    histogram: bool,
    summary: bool,
}

fn zeros_csv(zeros: &[ZeroRecord]) -> Result<Vec<u8>, ConfigError> {
    let io = |e: csv::Error| ConfigError(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["beta", "gamma", "residual", "kind", "distance_to_line"]).map_err(io)?;
    for z in zeros {
        w.write_record([
            format!("{:.15e}", z.location.re),
            format!("{:.15e}", z.location.im),
            format!("{:.3e}", z.residual),
            format!("{:?}", z.kind).to_lowercase(),
            format!("{:.3e}", z.distance_to_line),
        ])
        .map_err(io)?;
    }
    w.into_inner().map_err(|e| ConfigError(format!("csv: {e}")))
}

fn run(command: &Command, cfg: &RunConfig) -> Result<Output, ConfigError> {
    Ok(match command {
        Command::Forms(_) => Output { records: suites::forms()?, ..Default::default() },
        Command::Coeffs(_) => {
            let mut buf = Vec::new();
            cfg.form()?.write_csv(cfg.max, &mut buf)?;
            Output { csv: Some(("coefficients.csv", buf)), ..Default::default() }
        }
        Command::Eval(_) => Output { records: suites::evaluate(cfg)?, ..Default::default() },
        Command::VerifyBasic(_) => Output { records: suites::verify_basic(cfg)?, ..Default::default() },
        Command::VerifyFe(_) => Output { records: suites::verify_fe(cfg)?, ..Default::default() },
        Command::Residues(_) => Output { records: suites::residues(cfg)?, ..Default::default() },
        Command::TrivialZeros(_) => {
            let tz = suites::trivial_zeros(cfg)?;
            Output { records: tz.records, csv: Some(("zeros.csv", zeros_csv(&tz.zeros)?)), ..Default::default() }
        }
        Command::CountZeros(_) => Output { records: suites::count_zeros(cfg)?, ..Default::default() },
        Command::Growth(_) => Output { records: suites::growth(cfg, cfg.sigma)?, ..Default::default() },
        Command::Report(_) => {
            let r = suites::report(cfg)?;
            Output {
                records: r.records,
                csv: Some(("zeros.csv", zeros_csv(&r.zeros)?)),
                histogram: true,
                summary: true,
            }
        }
    })
}

fn summary_json(cfg: &RunConfig, records: &[Record]) -> serde_json::Value {
    let checked = records.iter().filter(|r| r.pass.is_some()).count();
    let failed: Vec<&str> = records.iter().filter(|r| r.failed()).map(|r| r.paper_eq.as_str()).collect();
    serde_json::json!({
        "config": cfg,
        "checks": checked,
        "passed": checked - failed.len(),
        "failed": failed,
        "pass": failed.is_empty(),
    })
}

fn emit(cfg: &RunConfig, common: &Common, out: &Output) -> io::Result<()> {
    if let Some(dir) = &cfg.out {
        fs::create_dir_all(dir)?;
        if !out.records.is_empty() {
            write_json_lines(&out.records, fs::File::create(dir.join("records.jsonl"))?)?;
        }
        if let Some((name, bytes)) = &out.csv {
            fs::write(dir.join(name), bytes)?;
        }
        if out.histogram {
            write_histogram(&out.records, fs::File::create(dir.join("histogram.csv"))?).map_err(io::Error::other)?;
        }
        if out.summary {
            let text = serde_json::to_string_pretty(&summary_json(cfg, &out.records))?;
            fs::write(dir.join("summary.json"), text + "\n")?;
        }
    }
    let stdout = io::stdout();
    let mut w = stdout.lock();
    if common.csv {
        match &out.csv {
            Some((_, bytes)) => w.write_all(bytes)?,
            None if out.histogram => write_histogram(&out.records, &mut w).map_err(io::Error::other)?,
            None => write_json_lines(&out.records, &mut w)?,
        }
    } else if common.json {
        write_json_lines(&out.records, &mut w)?;
    } else if out.records.is_empty() {
        if let Some((_, bytes)) = &out.csv {
            w.write_all(bytes)?;
        }
    } else {
        write_table(&out.records, &mut w)?;
    }
    w.flush()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let common = match &cli.command {
        Command::Forms(c)
        | Command::Coeffs(c)
        | Command::Eval(c)
        | Command::VerifyBasic(c)
        | Command::VerifyFe(c)
        | Command::Residues(c)
        | Command::TrivialZeros(c)
        | Command::CountZeros(c)
        | Command::Growth(c)
        | Command::Report(c) => c.clone(),
    };
    let result = common.settings().and_then(|cfg| Ok((run(&cli.command, &cfg)?, cfg)));
    let (out, cfg) = match result {
        Ok(v) => v,
        Err(e) => {
            eprintln!("twistlab: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(e) = emit(&cfg, &common, &out) {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            return ExitCode::SUCCESS;
        }
        eprintln!("twistlab: {e}");
        return ExitCode::from(2);
    }
    let failed: Vec<&Record> = out.records.iter().filter(|r| r.failed()).collect();
    for r in &failed {
        eprintln!("twistlab: {} failed at {}", r.paper_eq, r.point.as_deref().unwrap_or("-"));
    }
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
