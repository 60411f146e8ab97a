//! Argument parsing and subcommand dispatch for the `spikequant` binary.
//!
//! Exit codes: 0 success, 1 selftest found violations, 2 usage or input error.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::alexiewicz::{alexiewicz_norm, LeakRate};
use crate::error::{Error, Result};
use crate::experiments::{run_trials, summarize};
use crate::io;
use crate::lif::{lif_transform, membrane_trace, quantization_error, LifConfig, ResetMode};
use crate::selftest::{run_selftest, SelftestConfig, ViolationKind};
use crate::svg;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

fn parse_alpha(s: &str) -> std::result::Result<LeakRate, String> {
    s.parse::<LeakRate>()
        .map_err(|_| format!("alpha must be a non-negative number or 'inf', got '{s}'"))
}

fn parse_threshold(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err("threshold must be positive".to_string())
    }
}

fn parse_half_range(s: &str) -> std::result::Result<f64, String> {
    parse_threshold(s).map_err(|_| "half range must be positive".to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "spikequant",
    version,
    about = "LIF spike-train quantization and the leaky Alexiewicz norm"
)]
struct Cli {
    #[command(subcommand)]
    command: RawCommand,
}

#[derive(Debug, Subcommand)]
enum RawCommand {
    /// Print the leaky Alexiewicz norm of a spike train.
    Norm {
        #[arg(long, value_parser = parse_alpha, allow_negative_numbers = true)]
        alpha: LeakRate,
        input: PathBuf,
    },
    /// Run the LIF operator and write the output train to stdout.
    Lif {
        #[arg(long, value_parser = parse_threshold, allow_negative_numbers = true)]
        threshold: f64,
        #[arg(long, value_parser = parse_alpha, allow_negative_numbers = true)]
        alpha: LeakRate,
        #[arg(long)]
        mode: ResetMode,
        input: PathBuf,
        /// CSV of sample times (header `time`) at which to record the membrane potential.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Where the membrane trace is written.
        #[arg(long, default_value = "trace.csv", requires = "trace")]
        trace_out: PathBuf,
    },
    /// Print the quantization error of the LIF operator on a train.
    QuantError {
        #[arg(long, value_parser = parse_threshold, allow_negative_numbers = true)]
        threshold: f64,
        #[arg(long, value_parser = parse_alpha, allow_negative_numbers = true)]
        alpha: LeakRate,
        #[arg(long)]
        mode: ResetMode,
        input: PathBuf,
    },
    /// Run a Monte-Carlo error study described by a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Directory receiving results.csv and stats.csv.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Directory receiving one SVG box plot per (mode, alpha).
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Fuzz the quantization bound and the reset-to-mod reference.
    Selftest {
        /// Number of random trains.
        #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
        runs: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "mod")]
        mode: ResetMode,
        /// Amplitude half range in units of the threshold.
        #[arg(long, default_value_t = 1.5, value_parser = parse_half_range)]
        half_range: f64,
    },
}

/// A validated invocation.
#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Norm {
        alpha: LeakRate,
        input: PathBuf,
    },
    Lif {
        config: LifConfig,
        input: PathBuf,
        trace: Option<(PathBuf, PathBuf)>,
    },
    QuantError {
        config: LifConfig,
        input: PathBuf,
    },
    Experiment {
        config: PathBuf,
        out: PathBuf,
        svg: Option<PathBuf>,
    },
    Selftest {
        runs: usize,
        seed: u64,
        mode: ResetMode,
        half_range: f64,
    },
}

/// Parses `argv` (including the program name).
pub fn parse_args<I, T>(argv: I) -> std::result::Result<Command, clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv)?;
    let lif = |threshold, alpha, mode| {
        LifConfig::new(threshold, alpha, mode).expect("validated threshold")
    };
    Ok(match cli.command {
        RawCommand::Norm { alpha, input } => Command::Norm { alpha, input },
        RawCommand::Lif {
            threshold,
            alpha,
            mode,
            input,
            trace,
            trace_out,
        } => Command::Lif {
            config: lif(threshold, alpha, mode),
            input,
            trace: trace.map(|t| (t, trace_out)),
        },
        RawCommand::QuantError {
            threshold,
            alpha,
            mode,
            input,
        } => Command::QuantError {
            config: lif(threshold, alpha, mode),
            input,
        },
        RawCommand::Experiment { config, out, svg } => Command::Experiment { config, out, svg },
        RawCommand::Selftest {
            runs,
            seed,
            mode,
            half_range,
        } => Command::Selftest {
            runs: runs as usize,
            seed,
            mode,
            half_range,
        },
    })
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn stdout_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

/// Writes `results.csv` and `stats.csv` (and SVG panels) for a config file.
pub fn run_experiment(config_path: &Path, out: &Path, svg_dir: Option<&Path>) -> Result<()> {
    let config = io::read_experiment_config(config_path)?;
    let rows = run_trials(&config)?;
    let cells = summarize(&rows, config.threshold)?;

    create_dir(out)?;
    let mut buf = Vec::new();
    io::write_results_csv(&mut buf, &rows).expect("in-memory write");
    write_file(&out.join("results.csv"), &buf)?;
    buf.clear();
    io::write_stats_csv(&mut buf, &cells).expect("in-memory write");
    write_file(&out.join("stats.csv"), &buf)?;

    if let Some(dir) = svg_dir {
        create_dir(dir)?;
        for (mode, alpha, group) in svg::panels(&cells) {
            let doc = svg::render_boxplot(&group, config.threshold);
            write_file(&dir.join(svg::panel_file_name(mode, alpha)), doc.as_bytes())?;
        }
    }
    Ok(())
}

/// Executes a command, writing its primary output to `stdout`.
pub fn run(command: &Command, stdout: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Norm { alpha, input } => {
            let train = io::read_train_csv(input)?;
            writeln!(stdout, "{}", alexiewicz_norm(&train, *alpha)).map_err(stdout_err)?;
        }
        Command::QuantError { config, input } => {
            let train = io::read_train_csv(input)?;
            writeln!(stdout, "{}", quantization_error(&train, config)).map_err(stdout_err)?;
        }
        Command::Lif {
            config,
            input,
            trace,
        } => {
            let train = io::read_train_csv(input)?;
            if let Some((times_path, out_path)) = trace {
                let times = io::read_times_csv(times_path)?;
                let samples = membrane_trace(&train, config, &times)?;
                write_file(out_path, io::format_trace_csv(&samples).as_bytes())?;
            }
            let out = lif_transform(&train, config);
            stdout
                .write_all(io::format_train_csv(&out).as_bytes())
                .map_err(stdout_err)?;
        }
        Command::Experiment { config, out, svg } => {
            run_experiment(config, out, svg.as_deref())?;
        }
        Command::Selftest {
            runs,
            seed,
            mode,
            half_range,
        } => {
            let config = SelftestConfig {
                trains: *runs,
                seed: *seed,
                mode: *mode,
                half_range: *half_range,
                ..Default::default()
            };
            let report = run_selftest(&config);
            let bound = report.count(|k| matches!(k, ViolationKind::Bound { .. }));
            let oracle = report.count(|k| matches!(k, ViolationKind::Oracle));
            let multiple = report.count(|k| matches!(k, ViolationKind::Multiple { .. }));
            let w = stdout;
            let io_err = stdout_err;
            writeln!(
                w,
                "bound: {} checks, {bound} violations (mode={mode}, half_range={half_range})",
                report.bound_checks
            )
            .map_err(io_err)?;
            if report.oracle_checks > 0 {
                writeln!(
                    w,
                    "oracle: {} checks, {oracle} mismatches, {multiple} non-multiples",
                    report.oracle_checks
                )
                .map_err(io_err)?;
            }
            if report.passed() {
                writeln!(w, "OK: 0 violations").map_err(io_err)?;
            } else {
                let first = &report.violations[0];
                writeln!(
                    w,
                    "FAIL: {} violations; first at seed {} (threshold={}, alpha={}, {:?})",
                    report.violations.len(),
                    first.seed,
                    first.threshold,
                    first.alpha,
                    first.kind
                )
                .map_err(io_err)?;
                return Ok(EXIT_VIOLATION);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Entry point shared by the binary: parse, run, and map errors to exit codes.
pub fn main_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let command = match parse_args(argv) {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return EXIT_OK;
        }
        Err(e) => {
            let rendered = e.to_string();
            eprintln!("{}", rendered.lines().next().unwrap_or("usage error"));
            return EXIT_USAGE;
        }
    };
    let stdout = std::io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match run(&command, &mut out) {
        Ok(code) => code,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let _ = out.flush();
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn usage_message(args: &[&str]) -> String {
        parse_args(args.iter().copied()).unwrap_err().to_string()
    }

    #[test]
    fn norm_command() {
        let c = parse_args(["spikequant", "norm", "--alpha", "0", "t.csv"]).unwrap();
        assert_eq!(
            c,
            Command::Norm {
                alpha: LeakRate::ZERO,
                input: "t.csv".into()
            }
        );
        let c = parse_args(["spikequant", "norm", "--alpha", "inf", "t.csv"]).unwrap();
        assert!(matches!(
            c,
            Command::Norm {
                alpha: LeakRate::Infinite,
                ..
            }
        ));
    }

    #[test]
    fn rejects_bad_threshold_and_alpha() {
        let msg = usage_message(&[
            "spikequant",
            "lif",
            "--threshold",
            "-1",
            "--alpha",
            "0",
            "--mode",
            "mod",
            "x.csv",
        ]);
        assert!(msg.contains("threshold must be positive"), "{msg}");
        let msg = usage_message(&[
            "spikequant",
            "lif",
            "--threshold",
            "0",
            "--alpha",
            "0",
            "--mode",
            "mod",
            "x.csv",
        ]);
        assert!(msg.contains("threshold must be positive"), "{msg}");
        let msg = usage_message(&["spikequant", "norm", "--alpha", "-0.5", "t.csv"]);
        assert!(msg.contains("non-negative"), "{msg}");
        let msg = usage_message(&["spikequant", "norm", "--alpha", "abc", "t.csv"]);
        assert!(msg.contains("alpha"), "{msg}");
    }

    #[test]
    fn rejects_missing_and_unknown_flags() {
        assert!(parse_args(["spikequant", "norm", "t.csv"]).is_err());
        assert!(parse_args(["spikequant", "norm", "--alpha", "0", "--bogus", "t.csv"]).is_err());
        assert!(parse_args([
            "spikequant",
            "lif",
            "--threshold",
            "1",
            "--alpha",
            "0",
            "--mode",
            "half",
            "x.csv"
        ])
        .is_err());
        assert!(parse_args(["spikequant"]).is_err());
    }

    #[test]
    fn experiment_defaults() {
        let c = parse_args(["spikequant", "experiment", "--config", "c.json"]).unwrap();
        assert_eq!(
            c,
            Command::Experiment {
                config: "c.json".into(),
                out: ".".into(),
                svg: None
            }
        );
    }

    #[test]
    fn selftest_flags() {
        let c = parse_args(["spikequant", "selftest"]).unwrap();
        assert_eq!(
            c,
            Command::Selftest {
                runs: 10_000,
                seed: 0,
                mode: ResetMode::Mod,
                half_range: 1.5
            }
        );
        assert!(parse_args(["spikequant", "selftest", "--runs", "0"]).is_err());
        assert!(parse_args(["spikequant", "selftest", "--half-range", "0"]).is_err());
    }

    #[test]
    fn lif_trace_flags() {
        let c = parse_args([
            "spikequant",
            "lif",
            "--threshold",
            "1",
            "--alpha",
            "0.5",
            "--mode",
            "subtract",
            "in.csv",
            "--trace",
            "times.csv",
        ])
        .unwrap();
        match c {
            Command::Lif { config, trace, .. } => {
                assert_eq!(config.mode(), ResetMode::Subtract);
                assert_eq!(trace, Some(("times.csv".into(), "trace.csv".into())));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_args([
            "spikequant",
            "lif",
            "--threshold",
            "1",
            "--alpha",
            "0",
            "--mode",
            "mod",
            "in.csv",
            "--trace-out",
            "t.csv",
        ])
        .is_err());
    }
}
