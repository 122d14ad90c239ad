use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use lueq::gen::{paper_example, random_local_unitary, random_state, Seed};
use lueq::invariants::{
    certificates, extended_certificates, genericity, structure_constants_theta_within, structure_constants_within,
    GENERICITY_TOL,
};
use lueq::state::{apply_local_unitary, VALIDATION_TOL};
use lueq::{decide, verify_witness, ComplexMatrix, DecideOptions, Verdict, Witness};
use serde_json::json;

mod error;
mod formats;
mod report;

use error::CliError;
use formats::{emit, to_json_string};

#[derive(Parser)]
#[command(name = "lueq", version, about = "Local-unitary equivalence of bipartite density matrices")]
struct Cli {
    /// Suppress the human-readable summary on standard error.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the invariant tables of a state.
    Invariants {
        state: PathBuf,
        /// Also print the invariants over a completed operator basis.
        #[arg(long)]
        extended: bool,
        /// Ancillary matrices for the completion (implies --extended).
        #[arg(long)]
        ancillary: Option<PathBuf>,
        /// Relative pivot tolerance for the genericity test.
        #[arg(long, default_value_t = GENERICITY_TOL)]
        tol: f64,
    },
    /// Decide whether two states are related by local unitaries.
    /// Exit 0 equivalent, 1 inequivalent, 4 inconclusive.
    Decide {
        a: PathBuf,
        b: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest degenerate eigenvalue block whose orderings are searched.
        #[arg(long, default_value_t = lueq::equivalence::MAX_BLOCK)]
        max_block: usize,
        #[arg(long, default_value_t = 8)]
        retries: usize,
        /// Include both certificate sets in the report.
        #[arg(long)]
        certificates: bool,
    },
    /// Check a witness file against two states. Exit 0 if it holds, 1 if not.
    Verify {
        a: PathBuf,
        b: PathBuf,
        witness: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Write a random state with distinct nonzero eigenvalues.
    RandomState {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        rank: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw Haar-random local unitaries, optionally applying them to a state.
    RandomLu {
        /// Subsystem dimension; taken from the state when --apply is given.
        #[arg(long, required_unless_present = "apply")]
        dim: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        apply: Option<PathBuf>,
        /// Output for the witness, or for the transformed state with --apply.
        #[arg(long)]
        out: Option<PathBuf>,
        /// With --apply, also write the witness here.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Write the two-qubit worked example, its ancillaries and a witness.
    PaperExample {
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Print structure constants of the completed first-factor basis.
    StructureConstants {
        state: PathBuf,
        #[arg(long)]
        ancillary: Option<PathBuf>,
        /// Use the second-factor basis instead.
        #[arg(long)]
        theta: bool,
        /// Bound on the expansion residual.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command, cli.quiet) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn say(quiet: bool, msg: impl AsRef<str>) {
    if !quiet {
        eprintln!("{}", msg.as_ref());
    }
}

fn core(context: &str) -> impl Fn(lueq::Error) -> CliError + '_ {
    move |source| CliError::Invalid {
        context: context.to_string(),
        source,
    }
}

fn run(command: Command, quiet: bool) -> Result<u8, CliError> {
    match command {
        Command::Invariants {
            state,
            extended,
            ancillary,
            tol,
        } => {
            let rho = formats::read_state(&state)?;
            let cert = certificates(&rho).map_err(core("invariants"))?;
            let gen = genericity(&cert, tol);
            let mut out = report::certificates(&cert, &gen);
            if extended || ancillary.is_some() {
                let supplied = ancillary.as_deref().map(formats::read_ancillary).transpose()?;
                let ctx = ancillary.as_deref().map_or("extended".to_string(), |p| p.display().to_string());
                let ext = extended_certificates(&rho, supplied.as_ref()).map_err(core(&ctx))?;
                out["extended"] = report::extended(&ext);
            }
            say(
                quiet,
                format!(
                    "n = {}, eigenvalues {:?}, {}",
                    cert.n,
                    cert.lambdas,
                    if gen.is_generic() { "generic" } else { "not generic" }
                ),
            );
            print!("{}", to_json_string(&out));
            Ok(0)
        }
        Command::Decide {
            a,
            b,
            tol,
            seed,
            max_block,
            retries,
            certificates: with_certs,
        } => {
            let ra = formats::read_state(&a)?;
            let rb = formats::read_state(&b)?;
            let opts = DecideOptions {
                tol,
                seed: Seed(seed),
                max_block,
                retries,
                ..DecideOptions::default()
            };
            let verdict = decide(&ra, &rb, &opts).map_err(core("decide"))?;
            let mut out = report::verdict(&verdict);
            if with_certs {
                let ca = certificates(&ra).map_err(core("decide"))?;
                let cb = certificates(&rb).map_err(core("decide"))?;
                out["certificates"] = json!({
                    "a": report::certificates(&ca, &ca.generic),
                    "b": report::certificates(&cb, &cb.generic),
                });
            }
            say(quiet, verdict.to_string());
            print!("{}", to_json_string(&out));
            Ok(match verdict {
                Verdict::Equivalent { .. } => 0,
                Verdict::Inequivalent(_) => 1,
                Verdict::Inconclusive { .. } => 4,
            })
        }
        Command::Verify { a, b, witness, tol } => {
            let ra = formats::read_state(&a)?;
            let rb = formats::read_state(&b)?;
            let (u, w) = formats::read_witness(&witness)?;
            check_unitary(&u, ra.dim(), "u", &witness)?;
            check_unitary(&w, ra.dim(), "w", &witness)?;
            let v = verify_witness(&ra, &rb, &Witness { u, w }, tol).map_err(core("verify"))?;
            say(
                quiet,
                format!("residual {:e}: {}", v.residual, if v.holds { "holds" } else { "fails" }),
            );
            print!(
                "{}",
                to_json_string(&json!({ "holds": v.holds, "residual": v.residual, "tol": tol }))
            );
            Ok(if v.holds { 0 } else { 1 })
        }
        Command::RandomState { dim, rank, seed, out } => {
            let rho = random_state::<f64>(dim, rank, Seed(seed)).map_err(core("random-state"))?;
            emit(out.as_deref(), &to_json_string(&formats::state_file(&rho)))?;
            say(quiet, format!("random state: dim {dim}, rank {rank}, seed {seed}"));
            Ok(0)
        }
        Command::RandomLu {
            dim,
            seed,
            apply,
            out,
            witness_out,
        } => {
            let state = apply.as_deref().map(formats::read_state).transpose()?;
            let n = match (&state, dim) {
                (Some(rho), Some(d)) if d != rho.dim() => {
                    return Err(CliError::Usage(format!(
                        "--dim {d} does not match the state's subsystem dimension {}",
                        rho.dim()
                    )))
                }
                (Some(rho), _) => rho.dim(),
                (None, Some(d)) if d > 0 => d,
                _ => return Err(CliError::Usage("--dim must be positive".into())),
            };
            let (u, w) = random_local_unitary::<f64>(n, Seed(seed));
            let wit = to_json_string(&formats::witness_file(&u, &w));
            match state {
                Some(rho) => {
                    let moved = apply_local_unitary(&rho, &u, &w).map_err(core("random-lu"))?;
                    emit(out.as_deref(), &to_json_string(&formats::state_file(&moved)))?;
                    if let Some(p) = witness_out.as_deref() {
                        emit(Some(p), &wit)?;
                    }
                }
                None => emit(out.as_deref(), &wit)?,
            }
            say(quiet, format!("local unitaries: dim {n}, seed {seed}"));
            Ok(0)
        }
        Command::PaperExample { out_dir } => {
            std::fs::create_dir_all(&out_dir).map_err(|source| CliError::Io {
                path: out_dir.display().to_string(),
                source,
            })?;
            let ex = paper_example::<f64>();
            let x = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
            let files = [
                ("rho.json", to_json_string(&formats::state_file(&ex.rho))),
                ("rho_prime.json", to_json_string(&formats::state_file(&ex.rho_prime))),
                ("ancillary.json", to_json_string(&formats::ancillary_file(&ex.ancillary))),
                ("ancillary_prime.json", to_json_string(&formats::ancillary_file(&ex.ancillary_prime))),
                ("witness.json", to_json_string(&formats::witness_file(&ComplexMatrix::identity(2), &x))),
            ];
            for (name, text) in &files {
                emit(Some(&out_dir.join(name)), text)?;
            }
            say(quiet, format!("wrote {} files to {}", files.len(), out_dir.display()));
            Ok(0)
        }
        Command::StructureConstants {
            state,
            ancillary,
            theta,
            tol,
        } => {
            let rho = formats::read_state(&state)?;
            let supplied = ancillary.as_deref().map(formats::read_ancillary).transpose()?;
            let ext = extended_certificates(&rho, supplied.as_ref()).map_err(core("structure-constants"))?;
            let sc = if theta {
                structure_constants_theta_within(&ext, tol)
            } else {
                structure_constants_within(&ext, tol)
            }
            .map_err(core("structure-constants"))?;
            say(quiet, format!("max expansion residual {:e}", sc.residual));
            print!("{}", to_json_string(&report::structure(&sc, tol)));
            Ok(0)
        }
    }
}

fn check_unitary(m: &ComplexMatrix<f64>, dim: usize, which: &'static str, path: &Path) -> Result<(), CliError> {
    if m.shape() != (dim, dim) {
        return Err(CliError::invalid(
            path,
            lueq::Error::DimensionMismatch {
                op: which,
                left: m.shape(),
                right: (dim, dim),
            },
        ));
    }
    let defect = m.unitarity_defect();
    if defect > VALIDATION_TOL {
        return Err(CliError::invalid(
            path,
            lueq::Error::NotUnitary {
                which,
                defect,
            },
        ));
    }
    Ok(())
}
