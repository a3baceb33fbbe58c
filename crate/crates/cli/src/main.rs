//! `dicke`: parameter sweeps of the Dicke-model ground state written as
//! CSV or JSON tables.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use commands::{PhotonArgs, PhotonTable, Target, WignerArgs};
use config::SweepArgs;
use table::Table;

const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

#[derive(Parser)]
#[command(
    name = "dicke",
    version,
    about = "Quantum metrology across the Dicke superradiant transition"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Logarithmic negativity and lowest PPT symplectic eigenvalue
    Entanglement(SweepArgs),
    /// Quantum Fisher information and its two contributions
    Qfi(SweepArgs),
    /// Wigner function of one mode on a phase-space grid
    Wigner {
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        grid: WignerArgs,
    },
    /// Homodyne Fisher information against the QFI
    FiHomodyne {
        #[command(flatten)]
        sweep: SweepArgs,
        #[arg(long, value_enum, default_value = "radiation")]
        target: Target,
    },
    /// Photon-number statistics of the radiation mode
    Photon {
        #[command(flatten)]
        sweep: SweepArgs,
        #[command(flatten)]
        photon: PhotonArgs,
    },
    /// Photon-counting Fisher information against the QFI
    FiPhoton(SweepArgs),
    /// Summary at one or more couplings, with an optional Cramér–Rao bound
    Report {
        #[command(flatten)]
        sweep: SweepArgs,
        /// Number of repetitions for the Cramér–Rao bound
        #[arg(long)]
        samples: Option<u64>,
    },
}

fn run(cli: Cli) -> Result<Vec<Table>, (u8, String)> {
    let config_err = |e: config::ConfigError| (EXIT_CONFIG, e.to_string());
    let (args, tables) = match &cli.command {
        Command::Entanglement(a) => (
            a,
            vec![commands::entanglement(&a.resolve().map_err(config_err)?)],
        ),
        Command::Qfi(a) => (
            a,
            vec![commands::qfi_table(&a.resolve().map_err(config_err)?)],
        ),
        Command::Wigner { sweep, grid } => {
            let s = sweep.resolve().map_err(config_err)?;
            grid.validate().map_err(|e| (EXIT_CONFIG, e))?;
            (sweep, vec![commands::wigner(&s, grid)])
        }
        Command::FiHomodyne { sweep, target } => {
            let s = sweep.resolve().map_err(config_err)?;
            (sweep, vec![commands::fi_homodyne_table(&s, *target)])
        }
        Command::Photon { sweep, photon } => {
            let s = sweep.resolve().map_err(config_err)?;
            let mut out = Vec::new();
            if matches!(photon.table, PhotonTable::Mean | PhotonTable::Both) {
                out.push(commands::photon_mean(&s));
            }
            if matches!(photon.table, PhotonTable::Distribution | PhotonTable::Both) {
                out.push(commands::photon_distribution_table(&s, photon.n_max));
            }
            (sweep, out)
        }
        Command::FiPhoton(a) => (
            a,
            vec![commands::fi_photon_table(&a.resolve().map_err(config_err)?)],
        ),
        Command::Report { sweep, samples } => {
            let s = sweep.resolve().map_err(config_err)?;
            (sweep, vec![commands::report(&s, *samples)])
        }
    };
    let format = args.resolve().map_err(config_err)?.config.format;
    let written = match &args.out {
        Some(path) => File::create(path)
            .map_err(|e| {
                (
                    EXIT_CONFIG,
                    format!("cannot create {}: {e}", path.display()),
                )
            })
            .and_then(|f| {
                let mut w = BufWriter::new(f);
                table::write_tables(&tables, format, &mut w)
                    .and_then(|_| w.flush())
                    .map_err(|e| (EXIT_CONFIG, e.to_string()))
            }),
        None => table::write_tables(&tables, format, io::stdout().lock())
            .map_err(|e| (EXIT_CONFIG, e.to_string())),
    };
    written?;
    Ok(tables)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(tables) => {
            let failed: usize = tables.iter().map(Table::failures).sum();
            if failed > 0 {
                eprintln!("{failed} row(s) failed; see the status column");
                ExitCode::from(EXIT_NUMERICAL)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
