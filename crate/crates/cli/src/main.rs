use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fsorf_cli::{preset, run_sweep_with_config, validate_config, write_csv, Grid, Metric, SweepRequest};
use fsorf_metrics::ConstellationSpec;

#[derive(Parser)]
#[command(name = "fsorf", version, about = "Satellite-UAV FSO/RF relay performance sweeps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a metric over transmit power and write CSV.
    Sweep {
        #[arg(long)]
        metric: Option<Metric>,
        /// Figure preset (see `fsorf presets`).
        #[arg(long)]
        preset: Option<String>,
        /// Transmit power grid in dBm, start:stop:step.
        #[arg(long = "ptx-dbm", allow_hyphen_values = true)]
        ptx_dbm: Option<Grid>,
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        /// Add Monte-Carlo columns.
        #[arg(long)]
        compare: bool,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// family:M[:MixNq[:betaR]], e.g. hqam:16 or rqam:8:4x2.
        #[arg(long)]
        constellation: Option<String>,
        /// Delay exponent for the effective capacity.
        #[arg(long)]
        theta: Option<f64>,
    },
    /// Echo the resolved configuration and report range problems.
    Validate {
        config: PathBuf,
        /// Metric the config is meant for; enables metric-specific warnings.
        #[arg(long)]
        metric: Option<Metric>,
    },
    /// List the figure presets.
    Presets,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn read(path: &PathBuf) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn run(cli: Cli) -> Result<ExitCode, String> {
    match cli.command {
        Command::Sweep {
            metric,
            preset,
            ptx_dbm,
            samples,
            seed,
            compare,
            config,
            out,
            constellation,
            theta,
        } => {
            let constellation = constellation
                .map(|s| s.parse::<ConstellationSpec>())
                .transpose()
                .map_err(|e| e.to_string())?;
            let req = SweepRequest {
                metric,
                ptx_dbm,
                preset,
                constellation,
                theta,
                samples,
                seed,
                compare,
            };
            let src = config.as_ref().map(read).transpose()?;
            let output = run_sweep_with_config(&req, src.as_deref()).map_err(|e| e.to_string())?;
            for w in &output.warnings {
                eprintln!("warning: {w}");
            }
            match out {
                Some(path) => {
                    let f = File::create(&path).map_err(|e| format!("cannot create {}: {e}", path.display()))?;
                    write_csv(&output.rows, BufWriter::new(f)).map_err(|e| e.to_string())?;
                }
                None => write_csv(&output.rows, io::stdout().lock()).map_err(|e| e.to_string())?,
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { config, metric } => {
            let src = read(&config)?;
            let report = validate_config(&src, metric).map_err(|e| e.to_string())?;
            print!("{report}");
            io::stdout().flush().ok();
            Ok(if report.is_ok() { ExitCode::SUCCESS } else { ExitCode::FAILURE })
        }
        Command::Presets => {
            for name in preset::names() {
                let p = preset::load(name)?;
                println!("{name:<6} {:<12} {} curves  {}", p.metric.as_str(), p.curve.len(), p.description);
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
