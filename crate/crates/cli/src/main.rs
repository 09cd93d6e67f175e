//! `anosov-forge`: audit, lift and visualize abelian actions by toral and
//! nilmanifold automorphisms.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anosov_core::normalforms::Convention;
use anosov_core::report::{
    analyze, chambers_report, is_spectrum_document, lift_file, normal_forms_at_element, normal_forms_from_spectrum,
    selftest, ActionFile, AuditReport, SpectrumFile,
};
use anosov_core::{Config, Error};
use clap::{Args, Parser, Subcommand, ValueEnum};

const EXIT_INPUT_ERROR: u8 = 3;
const EXIT_UNDECIDED: u8 = 2;
const BITS_ENV: &str = "ANOSOV_FORGE_BITS";

#[derive(Parser)]
#[command(name = "anosov-forge", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Tuning {
    /// Largest denominator tried when certifying rational exponent ratios.
    #[arg(long)]
    max_den: Option<u64>,
    /// Precision cap in bits (default from ANOSOV_FORGE_BITS, else 4096).
    #[arg(long)]
    bits: Option<u32>,
    /// Seed for the random 2-plane of the splittings.
    #[arg(long)]
    seed: Option<u64>,
    /// Largest scaling tried when rounding chamber witnesses.
    #[arg(long)]
    witness_cap: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Svg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    DiagonalLinear,
    AllJ,
    ExcludeSelf,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::DiagonalLinear => Convention::DiagonalLinear,
            ConventionArg::AllJ => Convention::AllJ,
            ConventionArg::ExcludeSelf => Convention::ExcludeSelf,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Audit the rigidity hypotheses of one or more action files.
    Analyze {
        /// Action files (JSON)
        files: Vec<PathBuf>,
        /// Write the JSON report here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        /// Analyze this many files concurrently.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Lift a torus action to a free nilpotent Lie algebra and audit the lift.
    Lift {
        /// Torus action file
        file: PathBuf,
        /// Nilpotency step, at least 2
        #[arg(long)]
        step: usize,
        /// Write the lifted action file here (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the audit of the lift here (`-` for stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Weyl chambers as JSON, or as an SVG diagram for rank 2.
    Chambers {
        /// Action file
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the output here (default: stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Subresonance indices and group dimension for a spectrum file or a
    /// chamber witness of an action file.
    NormalForms {
        /// Spectrum file or action file
        file: PathBuf,
        /// Chamber whose witness supplies the contracting spectrum.
        #[arg(long, default_value_t = 0)]
        chamber: usize,
        /// Explicit lattice element, comma separated; overrides --chamber.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        element: Option<Vec<i64>>,
        #[arg(long, value_enum)]
        convention: Option<ConventionArg>,
        /// Write the report here (default: stdout).
        #[arg(long)]
        json: Option<PathBuf>,
        #[command(flatten)]
        tuning: Tuning,
    },
    /// Compare the exact algorithms against their independent oracles.
    Selftest {
        /// Print the results as JSON.
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        tuning: Tuning,
    },
}

fn base_config() -> Result<Config, String> {
    let mut cfg = Config::default();
    if let Ok(v) = std::env::var(BITS_ENV) {
        cfg.precision_cap_bits = v
            .trim()
            .parse()
            .map_err(|_| format!("{BITS_ENV} must be a positive integer, got {v:?}"))?;
    }
    Ok(cfg)
}

/// Defaults, then the environment, then the file, then flags.
fn config_for(tuning: &Tuning, file: Option<&ActionFile>) -> Result<Config, String> {
    let mut cfg = base_config()?;
    if let Some(f) = file {
        f.options.apply(&mut cfg);
    }
    if let Some(v) = tuning.max_den {
        cfg.max_den = v;
    }
    if let Some(v) = tuning.bits {
        cfg.precision_cap_bits = v;
    }
    if let Some(v) = tuning.seed {
        cfg.seed = v;
    }
    if let Some(v) = tuning.witness_cap {
        cfg.witness_cap = v;
    }
    Ok(cfg)
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::UndecidedProportionality(..)
        | Error::PrecisionExhausted(_)
        | Error::LpInfeasibleAtPrecision(_)
        | Error::WitnessSearchExhausted(_)
        | Error::UndecidedBoundary(_)
        | Error::SingularElement(_) => EXIT_UNDECIDED,
        _ => EXIT_INPUT_ERROR,
    }
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_action(path: &Path) -> Result<ActionFile, String> {
    ActionFile::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn emit(dest: Option<&Path>, text: &str) -> Result<(), String> {
    match dest {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(p) if p == Path::new("-") => {
            print!("{text}");
            Ok(())
        }
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
    }
}

fn print_summary(path: &Path, r: &AuditReport) {
    let h = &r.hypotheses;
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}: {}", path.display(), r.name);
    for (name, c) in [
        ("commuting", &h.commuting),
        ("unimodular", &h.unimodular),
        ("semisimple", &h.semisimple),
        ("totally_reducible", &h.totally_reducible),
        ("tns", &h.tns),
        ("anosov_in_every_chamber", &h.anosov_in_every_chamber),
    ] {
        let _ = writeln!(out, "  {name:<24} {}", status_word(&c.verdict));
    }
    let _ = writeln!(out, "  {:<24} {}", "theorem_hypotheses", status_word(&r.theorem_hypotheses));
}

fn status_word(s: &anosov_core::report::Status) -> String {
    use anosov_core::report::Status;
    match s {
        Status::True => "true".into(),
        Status::False => "false".into(),
        Status::Undecided { precision_bits } => format!("undecided at {precision_bits} bits"),
        Status::NotEvaluated => "not evaluated".into(),
    }
}

type Outcome = Result<(AuditReport, u128), (String, u8)>;

/// Exit code of a batch: input errors, then false, then undecided.
fn worse(a: u8, b: u8) -> u8 {
    let severity = |c: u8| match c {
        0 => 0,
        EXIT_UNDECIDED => 1,
        1 => 2,
        _ => 3,
    };
    if severity(b) > severity(a) {
        b
    } else {
        a
    }
}

fn analyze_one(path: &Path, tuning: &Tuning) -> Outcome {
    let start = Instant::now();
    let file = read_action(path).map_err(|e| (e, EXIT_INPUT_ERROR))?;
    let cfg = config_for(tuning, Some(&file)).map_err(|e| (e, EXIT_INPUT_ERROR))?;
    let report = analyze(&file, &cfg).map_err(|e| (format!("{}: {e}", path.display()), error_code(&e)))?;
    Ok((report, start.elapsed().as_millis()))
}

fn run_analyze(files: &[PathBuf], json: Option<&Path>, jobs: usize, tuning: &Tuning) -> Result<u8, (String, u8)> {
    if files.is_empty() {
        return Err(("analyze needs at least one file".into(), EXIT_INPUT_ERROR));
    }
    let outcomes: Vec<Outcome> = if jobs > 1 && files.len() > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| (e.to_string(), EXIT_INPUT_ERROR))?;
        pool.install(|| {
            use rayon::prelude::*;
            files.par_iter().map(|p| analyze_one(p, tuning)).collect()
        })
    } else {
        files.iter().map(|p| analyze_one(p, tuning)).collect()
    };
    let mut code = 0u8;
    let mut reports = Vec::new();
    for (path, o) in files.iter().zip(outcomes) {
        match o {
            Ok((r, ms)) => {
                eprintln!("{}: analyzed in {ms} ms", path.display());
                if json.is_none_or(|p| p != Path::new("-")) {
                    print_summary(path, &r);
                }
                code = worse(code, r.exit_code() as u8);
                reports.push(r);
            }
            Err((msg, c)) => {
                eprintln!("error: {msg}");
                code = worse(code, c);
            }
        }
    }
    if let Some(dest) = json {
        let text = if files.len() == 1 {
            match reports.first() {
                Some(r) => r.to_json(),
                None => return Ok(code),
            }
        } else {
            let mut s = serde_json::to_string_pretty(&reports).expect("reports serialize");
            s.push('\n');
            s
        };
        emit(Some(dest), &text).map_err(|e| (e, EXIT_INPUT_ERROR))?;
    }
    Ok(code)
}

fn run(cli: Cli) -> Result<u8, (String, u8)> {
    let input = |e: String| (e, EXIT_INPUT_ERROR);
    let core = |e: Error| {
        let c = error_code(&e);
        (e.to_string(), c)
    };
    match cli.command {
        Command::Analyze {
            files,
            json,
            jobs,
            tuning,
        } => run_analyze(&files, json.as_deref(), jobs, &tuning),
        Command::Lift {
            file,
            step,
            out,
            json,
            tuning,
        } => {
            let f = read_action(&file).map_err(input)?;
            let cfg = config_for(&tuning, Some(&f)).map_err(input)?;
            let (lifted, audit) = lift_file(&f, step, &cfg).map_err(core)?;
            emit(out.as_deref(), &lifted.to_json()).map_err(input)?;
            if let Some(j) = json {
                emit(Some(&j), &audit.to_json()).map_err(input)?;
            }
            Ok(audit.exit_code() as u8)
        }
        Command::Chambers {
            file,
            format,
            out,
            tuning,
        } => {
            let f = read_action(&file).map_err(input)?;
            let cfg = config_for(&tuning, Some(&f)).map_err(input)?;
            let rep = chambers_report(&f, &cfg).map_err(core)?;
            let text = match format {
                Format::Json => rep.to_json(),
                Format::Svg => rep.to_svg().map_err(core)?,
            };
            emit(out.as_deref(), &text).map_err(input)?;
            Ok(0)
        }
        Command::NormalForms {
            file,
            chamber,
            element,
            convention,
            json,
            tuning,
        } => {
            let text = read(&file).map_err(input)?;
            let conv = convention.map(Convention::from);
            let report = if is_spectrum_document(&text) {
                let s = SpectrumFile::parse(&text).map_err(core)?;
                let cfg = config_for(&tuning, None).map_err(input)?;
                normal_forms_from_spectrum(&s, conv, &cfg).map_err(core)?
            } else {
                let f = ActionFile::parse(&text).map_err(core)?;
                let cfg = config_for(&tuning, Some(&f)).map_err(input)?;
                normal_forms_at_element(&f, chamber, element, conv, &cfg).map_err(core)?
            };
            emit(json.as_deref(), &report.to_json()).map_err(input)?;
            Ok(0)
        }
        Command::Selftest { json, tuning } => {
            let cfg = config_for(&tuning, None).map_err(input)?;
            let lines = selftest(&cfg);
            if json {
                println!("{}", serde_json::to_string_pretty(&lines).expect("lines serialize"));
            } else {
                for l in &lines {
                    println!("{} {}: {}", if l.passed { "PASS" } else { "FAIL" }, l.name, l.detail);
                }
            }
            Ok(if lines.iter().all(|l| l.passed) { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(c) => ExitCode::from(c),
        Err((msg, c)) => {
            eprintln!("error: {msg}");
            ExitCode::from(c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn batch_exit_code_severity() {
        assert_eq!(worse(0, EXIT_UNDECIDED), EXIT_UNDECIDED);
        assert_eq!(worse(EXIT_UNDECIDED, 1), 1);
        assert_eq!(worse(1, EXIT_UNDECIDED), 1);
        assert_eq!(worse(1, EXIT_INPUT_ERROR), EXIT_INPUT_ERROR);
        assert_eq!(worse(EXIT_INPUT_ERROR, 0), EXIT_INPUT_ERROR);
    }
}
