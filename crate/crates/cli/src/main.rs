mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use resultant_core::Error;

#[derive(Parser)]
#[command(name = "resultant", version, about = "Determinantal matrices for unmixed sparse resultants of four trivariate Laurent polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Common {
    /// Support file: one lattice point per line
    pub support: PathBuf,
    /// `auto`, `indices=i1,i2,...` (0-based facet indices) or `direction=x,y,z:k`
    #[arg(long, default_value = "auto")]
    pub shelling: String,
    /// Seed for every random choice
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Emit JSON instead of text
    #[arg(long)]
    pub json: bool,
    /// Write the main output here instead of stdout
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// List facets with inner normals, offsets and vertices
    Facets(Common),
    /// Choose and certify a partial shelling
    Shell(Common),
    /// Ehrhart predictions for the matrix size and resultant degree
    PredictSize(Common),
    /// Build the bracket matrix (JSON)
    BuildMatrix {
        #[command(flatten)]
        common: Common,
        /// Include the Tate window (labels and entry degrees) in the output
        #[arg(long)]
        dump_tate: bool,
    },
    /// Evaluate the determinant at a coefficient system
    Evaluate {
        #[command(flatten)]
        common: Common,
        /// Four lines of N rationals; a seeded random system is used if absent
        #[arg(long)]
        coeffs: Option<PathBuf>,
    },
    /// Run the oracle suite on a support
    Verify {
        #[command(flatten)]
        common: Common,
        /// Number of common-root systems to test
        #[arg(long, default_value_t = 5)]
        roots: usize,
    },
    /// Cohomology of O(kD_Q - D_I) over a range of k
    Cohomology {
        #[command(flatten)]
        common: Common,
        /// Inclusive range `a..b`
        #[arg(long, default_value = "-2..2", allow_hyphen_values = true)]
        k_range: String,
        /// Enumeration box radius; enlarged automatically when omitted
        #[arg(long)]
        box_radius: Option<i64>,
    },
    /// Feasibility tests for supports of dimension four and up
    Feasibility(Common),
}

/// A failed oracle check.
#[derive(Debug)]
pub struct VerificationFailure(pub String);

impl std::fmt::Display for VerificationFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailure {}

fn classify(err: &anyhow::Error) -> (&'static str, u8) {
    if err.downcast_ref::<VerificationFailure>().is_some() {
        return ("verification_failure", 6);
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return ("io", 2);
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Parse { .. } | Error::Shape(_)) => ("parse", 2),
        Some(Error::EmptyInput | Error::DegenerateSpan { .. } | Error::DimensionInconsistent { .. } | Error::TooManyGenerators(_)) => {
            ("geometry", 3)
        }
        Some(Error::NoDiskSelection | Error::InvalidSelection(_) | Error::NonGenericDirection(..)) => ("no_disk", 4),
        Some(Error::DimensionMismatch { .. } | Error::FloorTooHigh { .. }) => ("dimension_mismatch", 5),
        Some(Error::NotStabilized { .. }) => ("not_stabilized", 6),
        Some(Error::InterpolationMismatch { .. } | Error::DegreePatternViolation { .. }) => ("verification_failure", 6),
        None => ("parse", 2),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Facets(c) => commands::facets(&c),
        Command::Shell(c) => commands::shell(&c),
        Command::PredictSize(c) => commands::predict_size(&c),
        Command::BuildMatrix { common, dump_tate } => commands::build_matrix(&common, dump_tate),
        Command::Evaluate { common, coeffs } => commands::evaluate(&common, coeffs.as_deref()),
        Command::Verify { common, roots } => commands::verify(&common, roots),
        Command::Cohomology {
            common,
            k_range,
            box_radius,
        } => commands::cohomology(&common, &k_range, box_radius),
        Command::Feasibility(c) => commands::feasibility(&c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let (code, exit) = classify(&err);
            let line = serde_json::json!({ "level": "error", "code": code, "exit": exit, "message": format!("{err:#}") });
            eprintln!("{line}");
            ExitCode::from(exit)
        }
    }
}
