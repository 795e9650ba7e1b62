use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use toric_mirror::bundle::projectivize_canonical;
use toric_mirror::critical::{find_critical_points, SolverOptions};
use toric_mirror::gw::{load_table, GwProvider};
use toric_mirror::io::{self, FanDocument, PotentialDocument};
use toric_mirror::{Error, Fan, KahlerData};

#[derive(Parser)]
#[command(
    name = "toric-mirror",
    version,
    about = "Toric fans, corrected mirror potentials and their critical points"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fan and report its primitive relations and positivity.
    Analyze { fan: PathBuf },
    /// Build the fan of P(K_Y + O_Y) from a Fano fan Y.
    Bundle {
        fan: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Compute the mirror potential of a Fano or bundle fan.
    Potential {
        fan: PathBuf,
        /// Largest number of effective generators in a correction class.
        #[arg(long, default_value_t = 2)]
        cutoff: usize,
        #[arg(long)]
        gw_table: Option<PathBuf>,
        /// Treat invariants missing from every source as zero.
        #[arg(long)]
        assume_zero_above_cutoff: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Find critical points of a potential document.
    Crit {
        potential: PathBuf,
        /// One value per q-variable, q = exp(-t).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        t: Vec<f64>,
        #[command(flatten)]
        solver: SolverArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SolverArgs {
    #[arg(long, default_value_t = 8)]
    phases: usize,
    #[arg(long, default_value_t = 7)]
    moduli: usize,
    #[arg(long, default_value_t = 4096)]
    max_starts: usize,
    #[arg(long, default_value_t = 100)]
    max_steps: usize,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 1e-8)]
    dedup_radius: f64,
    /// Run the multistart on one thread.
    #[arg(long)]
    sequential: bool,
}

impl SolverArgs {
    fn options(&self) -> SolverOptions {
        SolverOptions {
            phases: self.phases,
            moduli: self.moduli,
            max_starts: self.max_starts,
            max_steps: self.max_steps,
            tol: self.tol,
            dedup_radius: self.dedup_radius,
            parallel: !self.sequential && toric_mirror::parallel_available(),
        }
    }
}

/// An error with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    use Error::*;
    match e {
        SchemaError(_)
        | BadLinearForm(_)
        | UnknownParameter(_)
        | MissingParameter(_)
        | FingerprintMismatch { .. }
        | InconsistentTable { .. }
        | BadChernDegree { .. }
        | InvalidQBasis(_)
        | QBasisRequired
        | DimensionMismatch { .. } => 2,
        NonPrimitiveRay { .. }
        | DuplicateRay { .. }
        | UnusedRay { .. }
        | MalformedCone { .. }
        | NonUnimodularCone { .. }
        | IncompleteFan(_)
        | BadFaceIntersection(_)
        | NotFullRank { .. }
        | ZeroVector
        | DependentGenerators => 3,
        NotFano | NotBundle => 4,
        UnknownInvariant { .. } => 5,
        NoConvergence { .. } => 6,
        _ => 1,
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::new(exit_code(&e), e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
}

fn write_output(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::new(2, format!("{}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Parse errors exit with 2, validation errors with 3.
fn load_fan(path: &Path) -> Result<(FanDocument, Fan), Failure> {
    let doc = FanDocument::parse(&read(path)?)?;
    let fan = doc
        .to_fan()
        .map_err(|e| Failure::new(3, format!("invalid fan: {e}")))?;
    Ok((doc, fan))
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { fan } => {
            let (_, fan) = load_fan(&fan)?;
            write_output(&io::to_canonical_json(&io::analyze(&fan)?)?, None)
        }
        Command::Bundle { fan, output } => {
            let (_, y) = load_fan(&fan)?;
            let x = projectivize_canonical(&y)?;
            let basis = toric_mirror::kahler::default_q_basis(&x)?;
            let k = KahlerData::standard(x.clone(), basis)?;
            let doc = FanDocument::from_fan(&x, Some(&k));
            write_output(&io::to_canonical_json(&doc)?, output.as_deref())
        }
        Command::Potential {
            fan,
            cutoff,
            gw_table,
            assume_zero_above_cutoff,
            output,
        } => {
            let (doc, fan) = load_fan(&fan)?;
            let k = doc.kahler_data(&fan)?;
            let mut gw = GwProvider::new().assume_zero(assume_zero_above_cutoff);
            if let Some(path) = gw_table {
                gw = gw.with_table(load_table(&path, &fan)?);
            }
            let pot = io::potential_document(&k, &gw, cutoff)?;
            write_output(&io::to_canonical_json(&pot)?, output.as_deref())
        }
        Command::Crit {
            potential,
            t,
            solver,
            output,
        } => {
            let doc = PotentialDocument::parse(&read(&potential)?)?;
            if t.len() != doc.q_variables.len() {
                return Err(Failure::new(
                    2,
                    format!(
                        "expected {} t values ({}), got {}",
                        doc.q_variables.len(),
                        doc.q_variables.join(", "),
                        t.len()
                    ),
                ));
            }
            let w = doc.to_laurent()?;
            let report = find_critical_points(&w, &t, &solver.options())?;
            write_output(&io::to_canonical_json(&report)?, output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
