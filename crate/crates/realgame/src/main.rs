//! `realgame` — deterministic command-line front end for the
//! entanglement-swapping Bell game toolkit.
//!
//! Every command is a pure function of its flag set (seeds included):
//! repeated invocations emit byte-identical output. Errors print one JSON
//! object to stderr and exit nonzero.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use realgame::error::CliError;
use realgame::run::{
    cmd_bounds, cmd_embed_check, cmd_experiment, cmd_ideal, cmd_noise_sweep, cmd_score, cmd_seesaw,
    cmd_verify, Format, SweepParam,
};
use realgame_core::game::{BsmMode, NoiseConfig};
use realgame_core::scalar::Field;
use realgame_core::seesaw::Dims;

#[derive(Parser)]
#[command(
    name = "realgame",
    version,
    about = "Simulate and optimize an entanglement-swapping Bell game whose score separates \
             classical, real-amplitude, and complex quantum models",
    after_help = "Determinism: every command is a pure function of its flags (seeds included); \
                  repeated runs emit byte-identical output. REALGAME_THREADS caps worker threads."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BsmArg {
    /// Direct projection onto the four Bell states.
    Reference,
    /// iSWAP-decomposed measurement circuit with computational readout.
    Circuit,
}

impl From<BsmArg> for BsmMode {
    fn from(b: BsmArg) -> BsmMode {
        match b {
            BsmArg::Reference => BsmMode::Reference,
            BsmArg::Circuit => BsmMode::Circuit,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ParamArg {
    /// Werner visibility applied to each conditional swapped pair.
    Werner,
    /// Two-qubit depolarizing probability after every entangling gate.
    Depol2,
}

#[derive(Args)]
struct OutputArgs {
    /// Output encoding. CSV is only available for probability tables.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
    /// Write the document to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_dims(s: &str) -> Result<Dims, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(format!(
            "expected `a,b1,b2,c` (4 integers), got {} fields",
            parts.len()
        ));
    }
    let mut v = [0usize; 4];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| format!("`{part}` is not a positive integer"))?;
    }
    Dims::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Exact probability table and score of the ideal noiseless strategy.
    Ideal {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// The classical, real-amplitude, and complex score bounds.
    Bounds {
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep one noise parameter; report score, fidelity, and the
    /// interpolated crossing of the real-amplitude bound.
    NoiseSweep {
        /// Which parameter the grid varies.
        #[arg(long, value_enum, default_value_t = ParamArg::Werner)]
        param: ParamArg,
        /// First grid value.
        #[arg(long, default_value_t = 0.8)]
        from: f64,
        /// Last grid value.
        #[arg(long, default_value_t = 1.0)]
        to: f64,
        /// Number of grid points (endpoints included).
        #[arg(long, default_value_t = 81)]
        steps: usize,
        /// Bell-state-measurement implementation for the pipeline.
        #[arg(long, value_enum, default_value_t = BsmArg::Circuit)]
        bsm: BsmArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Full gate-level pipeline with noise, readout, and finite shots.
    Experiment {
        /// Single-qubit depolarizing probability after preparation.
        #[arg(long = "noise-depol1", default_value_t = 0.0)]
        depol1: f64,
        /// Two-qubit depolarizing probability after every entangling gate.
        #[arg(long = "noise-depol2", default_value_t = 0.0)]
        depol2: f64,
        /// Amplitude-damping probability per qubit after preparation.
        #[arg(long = "noise-amp-damp", default_value_t = 0.0)]
        amp_damp: f64,
        /// Phase-damping probability per qubit after preparation.
        #[arg(long = "noise-phase-damp", default_value_t = 0.0)]
        phase_damp: f64,
        /// Werner visibility applied to each conditional swapped pair.
        #[arg(long = "noise-werner", default_value_t = 1.0)]
        werner: f64,
        /// Symmetric readout flip probability per measured bit.
        #[arg(long = "readout-eps", default_value_t = 0.0)]
        readout_eps: f64,
        /// Apply inverse-confusion correction to the measured distributions.
        #[arg(long = "readout-correct", default_value_t = false)]
        readout_correct: bool,
        /// Bell-state-measurement implementation.
        #[arg(long, value_enum, default_value_t = BsmArg::Circuit)]
        bsm: BsmArg,
        /// Shots per setting; 0 = exact probabilities.
        #[arg(long, default_value_t = 0)]
        shots: u64,
        /// Seed for shot sampling and the bootstrap.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Block-coordinate ascent over strategies; optionally verify a saved
    /// result.
    Seesaw {
        /// Number field of the strategy space.
        #[arg(long, value_enum, default_value_t = FieldArg::Real)]
        field: FieldArg,
        /// Subsystem dimensions `a,b1,b2,c`. Omitted: real mode sweeps the
        /// {2,3,4} grid, complex mode searches 2,2,2,2.
        #[arg(long, value_parser = parse_dims)]
        dims: Option<Dims>,
        /// Restart budget (total across the sweep). Default: 200 real, 20
        /// complex.
        #[arg(long)]
        restarts: Option<usize>,
        /// Seed; restart i draws from stream i.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Reload a saved result, revalidate, and rescore it instead of
        /// searching.
        #[arg(long, value_name = "FILE")]
        verify: Option<PathBuf>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Randomized check of the real-embedding trace identity.
    EmbedCheck {
        /// Number of random (state, observable) pairs.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Largest Hilbert-space dimension exercised.
        #[arg(long = "max-dim", default_value_t = 8)]
        max_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Score a stored probability table (CSV or JSON).
    Score {
        /// Table file; `.csv` parses as CSV, anything else as JSON.
        #[arg(long, value_name = "FILE")]
        probs: PathBuf,
        /// Shots per setting for the finite-shot estimator; 0 = exact.
        #[arg(long, default_value_t = 0)]
        shots: u64,
        /// Seed for the estimator.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

/// Commands that only ever produce JSON reject `--format csv` up front.
fn require_json(output: &OutputArgs, command: &str) -> Result<(), CliError> {
    if output.format == FormatArg::Csv {
        return Err(CliError::invalid(format!(
            "`{command}` has no CSV form: CSV is only available for probability tables \
             (`ideal --format csv`)"
        )));
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(String, Option<PathBuf>), CliError> {
    match cli.command {
        Command::Ideal { output } => {
            let format = match output.format {
                FormatArg::Json => Format::Json,
                FormatArg::Csv => Format::Csv,
            };
            Ok((cmd_ideal(format)?, output.out))
        }
        Command::Bounds { output } => {
            require_json(&output, "bounds")?;
            Ok((cmd_bounds()?, output.out))
        }
        Command::NoiseSweep {
            param,
            from,
            to,
            steps,
            bsm,
            output,
        } => {
            require_json(&output, "noise-sweep")?;
            let p = match param {
                ParamArg::Werner => SweepParam::Werner,
                ParamArg::Depol2 => SweepParam::Depol2,
            };
            Ok((cmd_noise_sweep(p, from, to, steps, bsm.into())?, output.out))
        }
        Command::Experiment {
            depol1,
            depol2,
            amp_damp,
            phase_damp,
            werner,
            readout_eps,
            readout_correct,
            bsm,
            shots,
            seed,
            output,
        } => {
            require_json(&output, "experiment")?;
            let cfg = NoiseConfig {
                depol1,
                depol2,
                amp_damp,
                phase_damp,
                werner_v: werner,
                readout_eps,
                readout_correct,
                bsm: bsm.into(),
                shots,
            };
            Ok((cmd_experiment(&cfg, seed)?, output.out))
        }
        Command::Seesaw {
            field,
            dims,
            restarts,
            seed,
            verify,
            output,
        } => {
            require_json(&output, "seesaw")?;
            if let Some(path) = verify {
                return Ok((cmd_verify(&path)?, output.out));
            }
            let f = match field {
                FieldArg::Real => Field::Real,
                FieldArg::Complex => Field::Complex,
            };
            Ok((cmd_seesaw(f, dims, restarts, seed)?, output.out))
        }
        Command::EmbedCheck {
            trials,
            max_dim,
            seed,
            output,
        } => {
            require_json(&output, "embed-check")?;
            Ok((cmd_embed_check(trials, max_dim, seed)?, output.out))
        }
        Command::Score {
            probs,
            shots,
            seed,
            output,
        } => {
            require_json(&output, "score")?;
            Ok((cmd_score(&probs, shots, seed)?, output.out))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help/--version are not errors; let clap print them.
            if e.use_stderr() {
                let err = CliError::invalid(e.to_string().trim_end().to_string());
                eprint!("{}", err.to_json().to_text());
                return ExitCode::from(2);
            }
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };

    match dispatch(cli) {
        Ok((text, Some(path))) => {
            if let Err(e) = std::fs::write(&path, &text) {
                let err = CliError::io(&format!("writing {}", path.display()), e);
                eprint!("{}", err.to_json().to_text());
                return ExitCode::FAILURE;
            }
            ExitCode::SUCCESS
        }
        Ok((text, None)) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprint!("{}", err.to_json().to_text());
            ExitCode::FAILURE
        }
    }
}
