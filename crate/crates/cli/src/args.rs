use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

pub const BITS_ENV: &str = "SK3_BITS";

#[derive(Parser, Debug)]
#[command(
    name = "sk3",
    version,
    about = "Singular K3 surfaces, Enriques quotients and elliptic fibrations"
)]
pub struct Cli {
    /// Emit a versioned JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Worker threads for parallel scans and surveys.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub module: Module,
}

#[derive(Subcommand, Debug)]
pub enum Module {
    /// Binary quadratic forms and class groups.
    #[command(subcommand)]
    Bqf(BqfCmd),
    /// Even lattices and discriminant forms.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Elliptic surfaces over the projective line.
    #[command(subcommand)]
    Ellsurf(EllsurfCmd),
    /// Singular K3 surfaces and Enriques involutions.
    #[command(subcommand)]
    K3(K3Cmd),
    /// Regression fixtures.
    #[command(subcommand)]
    Fixtures(FixturesCmd),
}

#[derive(Args, Debug, Clone)]
pub struct FormArgs {
    #[arg(allow_negative_numbers = true)]
    pub a: i64,
    #[arg(allow_negative_numbers = true)]
    pub b: i64,
    #[arg(allow_negative_numbers = true)]
    pub c: i64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScanKind {
    TwoTorsion,
    ClassNumberOne,
}

#[derive(Subcommand, Debug)]
pub enum BqfCmd {
    /// Reduce a form and print the transporting matrix.
    Reduce(FormArgs),
    /// Class group of discriminant d.
    Classgroup {
        #[arg(allow_negative_numbers = true)]
        d: i64,
    },
    /// Automorphism group of the reduced form.
    Aut(FormArgs),
    /// Scan discriminants with |d| <= bound.
    Scan {
        #[arg(long, default_value_t = 7392)]
        bound: u64,
        #[arg(long, value_enum, default_value_t = ScanKind::TwoTorsion)]
        kind: ScanKind,
    },
}

#[derive(Subcommand, Debug)]
pub enum LatticeCmd {
    /// Discriminant form of a lattice expression (e.g. "U + D4(-1)") or a Gram JSON file.
    Discform { lattice: String },
    /// Rank two forms of discriminant d whose discriminant form is sign * target.
    TFromNs {
        #[arg(long, allow_negative_numbers = true)]
        disc: i64,
        /// Lattice expression, Gram JSON file, or discriminant form JSON file.
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = -1, allow_negative_numbers = true)]
        sign: i8,
    },
}

#[derive(Subcommand, Debug)]
pub enum EllsurfCmd {
    /// Singular fibres, Euler checksum and optional Shioda-Tate data.
    Fibers {
        file: PathBuf,
        /// Mordell-Weil rank for Shioda-Tate.
        #[arg(long)]
        rank: Option<u32>,
        /// Torsion order for Shioda-Tate.
        #[arg(long)]
        torsion: Option<u32>,
        /// Determinant of the Mordell-Weil lattice modulo torsion.
        #[arg(long, default_value = "1")]
        mwl_disc: String,
    },
    /// Pull back along t = phi(s).
    Basechange {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        subst: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quadratic twist by a polynomial in t.
    Twist {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        gamma: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Height of the section (x, y).
    Height {
        file: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum K3Cmd {
    /// Full report for X_Q.
    Report {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long, env = BITS_ENV, default_value_t = 256)]
        bits: usize,
    },
    /// Inose pencil data; optionally write the rational model.
    Inose {
        #[command(flatten)]
        form: FormArgs,
        #[arg(long)]
        emit_model: Option<PathBuf>,
        #[arg(long, env = BITS_ENV, default_value_t = 256)]
        bits: usize,
    },
    /// Forms of the base change exception.
    Exceptions,
    /// Hilbert class polynomial of discriminant d.
    Classpoly {
        #[arg(allow_negative_numbers = true)]
        d: i64,
        #[arg(long, env = BITS_ENV, default_value_t = 256)]
        bits: usize,
    },
    /// Discriminants of class number one.
    ClassOne,
    /// NS = U + 2E8(-1) + <-4M> + <-2N>.
    Brauer { m: u64, n: u64 },
}

#[derive(Subcommand, Debug)]
pub enum FixturesCmd {
    /// Run every fixture in a directory.
    Run {
        #[arg(long, default_value = "fixtures")]
        dir: PathBuf,
        /// Only fixtures whose name contains this string.
        #[arg(long)]
        filter: Option<String>,
    },
}
