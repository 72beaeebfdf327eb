//! `rssi-locate` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or model error.
//! Diagnostics go to stderr; data goes to the `--out`/`--output` file or
//! stdout.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::lateration::{locate_from_rssi, Method};
use crate::metrics::position_error;
use crate::{io, pathloss, simulator, Error, Result};

#[derive(Debug, Parser)]
#[command(name = "rssi-locate", version, about = "RSSI ranging and lateration toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit (plo_db, eta) from a `distance_m,rssi_dbm,tx_power_dbm` CSV.
    Calibrate {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Reference distance in meters.
        #[arg(long, default_value_t = pathloss::DEFAULT_D0_M)]
        d0: f64,
    },
    /// Locate every transmitter in a receiver log.
    Locate {
        #[arg(long)]
        model: PathBuf,
        /// `rx_id,x_m,y_m` CSV; the last row is the lateration reference.
        #[arg(long)]
        anchors: PathBuf,
        #[arg(long)]
        observations: PathBuf,
        /// `tri` uses the first three anchors, `multi` all of them.
        #[arg(long, value_parser = parse_method)]
        method: Option<Method>,
        #[arg(long, allow_hyphen_values = true)]
        tx_power: f64,
    },
    /// Run one replication of one method on a scenario.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_parser = parse_method)]
        method: Method,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0)]
        replication: u64,
    },
    /// Paired trilateration vs multilateration over many replications.
    Compare {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        replications: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Tabulate predicted RSSI against distance.
    Curve {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        tx_power: f64,
        #[arg(long)]
        dmin: f64,
        #[arg(long)]
        dmax: f64,
        #[arg(long)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the built-in 10 m x 10 m field scenario as JSON.
    Scenario {
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
}


fn parse_method(s: &str) -> std::result::Result<Method, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Runs the CLI with process stdio and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = write!(out, "{rendered}");
            } else {
                let _ = write!(err, "{rendered}");
            }
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Argument(_) => 1,
                _ => 2,
            }
        }
    }
}

fn emit(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| {
            Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", p.display())))
        }),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn load_scenario(path: &Path, seed: Option<u64>) -> Result<simulator::Scenario> {
    let scenario = io::parse_scenario(&io::read_to_string(path)?)?;
    Ok(match seed {
        Some(s) => scenario.with_seed(s),
        None => scenario,
    })
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    match command {
        Command::Calibrate { input, output, d0 } => {
            let samples = io::parse_ranging_samples(&io::read_to_string(&input)?)?;
            let model = pathloss::calibrate_with_reference(&samples, d0)?;
            emit(Some(&output), &io::write_model(&model)?, out)?;
            writeln!(out, "plo_db = {:.3}", model.plo_db())?;
            writeln!(out, "eta = {:.3}", model.eta())?;
            writeln!(err, "fitted {} samples, model written to {}", samples.len(), output.display())?;
        }
        Command::Locate {
            model,
            anchors,
            observations,
            method,
            tx_power,
        } => {
            let model = io::parse_model(&io::read_to_string(&model)?)?;
            let anchors = io::parse_anchors(&io::read_to_string(&anchors)?)?;
            let records = io::parse_observations(&io::read_to_string(&observations)?, true)?;
            let method = method.unwrap_or_else(|| Method::for_anchor_count(anchors.len()));
            if method == Method::Multilateration && anchors.len() < 4 {
                return Err(Error::Argument(format!(
                    "multilateration needs at least 4 anchors, file has {}",
                    anchors.len()
                )));
            }
            let used = &anchors[..method.anchor_count(anchors.len())];
            for log in io::average_by_receiver(&records)? {
                let rssi = used
                    .iter()
                    .map(|a| {
                        log.mean_rssi_dbm.get(&a.id).copied().ok_or_else(|| {
                            Error::Schema(format!("transmitter {} has no readings from {}", log.tx_id, a.id))
                        })
                    })
                    .collect::<Result<Vec<f64>>>()?;
                let est = locate_from_rssi(used, &rssi, &model, tx_power)?;
                write!(
                    out,
                    "{} x={:.3} y={:.3} method={} residual={:.6} condition={}",
                    log.tx_id, est.position.x, est.position.y, est.method, est.residual_norm, est.condition_flag
                )?;
                if let Some(truth) = log.truth {
                    write!(out, " er={:.3}", position_error(est.position, truth))?;
                }
                writeln!(out)?;
            }
        }
        Command::Simulate {
            scenario,
            method,
            out: path,
            seed,
            replication,
        } => {
            let scenario = load_scenario(&scenario, seed)?;
            let report = simulator::run_trial(&scenario, method, replication)?;
            emit(path.as_deref(), &io::write_report(&report)?, out)?;
            writeln!(
                err,
                "{}: GER {:.3} m (min {:.3}, max {:.3}) over {} placements",
                report.method,
                report.ger_m,
                report.min_er_m,
                report.max_er_m,
                report.len()
            )?;
        }
        Command::Compare {
            scenario,
            replications,
            out: path,
            seed,
        } => {
            if replications < 1 {
                return Err(Error::Argument("--replications must be >= 1".into()));
            }
            let scenario = load_scenario(&scenario, seed)?;
            let report = simulator::compare_methods(&scenario, replications)?;
            emit(path.as_deref(), &io::write_comparison(&report)?, out)?;
            writeln!(
                err,
                "mean GER: trilateration {:.3} m, multilateration {:.3} m; multilateration wins {:.1}% of {} replications",
                report.mean_ger_tri,
                report.mean_ger_multi,
                100.0 * report.multi_win_rate,
                report.replications
            )?;
        }
        Command::Curve {
            model,
            tx_power,
            dmin,
            dmax,
            points,
            out: path,
        } => {
            let model = io::parse_model(&io::read_to_string(&model)?)?;
            let curve = io::rssi_curve(&model, tx_power, dmin, dmax, points)?;
            emit(path.as_deref(), &io::write_curve(&curve)?, out)?;
        }
        Command::Scenario { out: path, seed } => {
            let mut scenario = simulator::default_field_scenario();
            if let Some(s) = seed {
                scenario = scenario.with_seed(s);
            }
            emit(path.as_deref(), &io::write_scenario(&scenario)?, out)?;
        }
    }
    Ok(())
}
