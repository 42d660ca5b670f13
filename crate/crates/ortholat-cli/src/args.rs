use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "ortholat", version, about = "Sphere points, orthogonal lattices and p-adic orthogonal groups")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report here (default: $ORTHOLAT_OUT_DIR/<command>.json when set).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write the CSV series here, for commands that produce one.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Print the JSON report instead of the plain summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Seed of the run's random generator.
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Upper bound on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Primitive integer points of norm D in dimension d.
    Sphere(SphereArgs),
    /// Orthogonal lattice and shape of one point, or of every point on a sphere.
    Shape(ShapeArgs),
    /// Least prime p ≥ M with p ≡ 1 mod 4 and p ∤ D.
    ChoosePrime(ChoosePrimeArgs),
    /// Z_p-classification of the orthogonal group of a point's lattice or of a Gram matrix.
    ClassifyForm(ClassifyArgs),
    /// Cartan decomposition in a model group.
    Cartan(CartanArgs),
    /// Haar volume of a norm ball (or sphere) with m(K) = 1.
    BallVolume(VolumeArgs),
    /// Coset representatives of K in a norm sphere.
    TreeCosets(TreeArgs),
    /// Lie algebra identity table and certificates.
    #[command(subcommand)]
    Lie(LieCommand),
    /// Hecke relations between sphere points.
    #[command(subcommand)]
    Hecke(HeckeCommand),
    /// Equidistribution sweep.
    #[command(subcommand)]
    Equidist(EquidistCommand),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sphere(_) => "sphere",
            Command::Shape(_) => "shape",
            Command::ChoosePrime(_) => "choose-prime",
            Command::ClassifyForm(_) => "classify-form",
            Command::Cartan(_) => "cartan",
            Command::BallVolume(_) => "ball-volume",
            Command::TreeCosets(_) => "tree-cosets",
            Command::Lie(_) => "lie",
            Command::Hecke(_) => "hecke",
            Command::Equidist(_) => "equidist",
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct SphereArgs {
    #[arg(long)]
    pub d: usize,
    #[arg(long = "D")]
    pub disc: i64,
    /// List every point in the JSON report, not just orbit representatives.
    #[arg(long)]
    pub points: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct ShapeArgs {
    /// A primitive integer vector, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with_all = ["d", "disc"])]
    pub v: Option<Vec<i64>>,
    #[arg(long, requires = "disc")]
    pub d: Option<usize>,
    #[arg(long = "D", requires = "d")]
    pub disc: Option<i64>,
}

#[derive(Debug, Args, Serialize)]
pub struct ChoosePrimeArgs {
    #[arg(long = "D")]
    pub disc: u64,
    /// Lower cutoff M.
    #[arg(long = "M", default_value_t = 5)]
    pub cutoff: u64,
}

#[derive(Debug, Args, Serialize)]
pub struct ClassifyArgs {
    /// Classify the Gram matrix A_v of this point's orthogonal lattice.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "gram")]
    pub v: Option<Vec<i64>>,
    /// A symmetric integer matrix, rows separated by ';'.
    #[arg(long, allow_hyphen_values = true)]
    pub gram: Option<String>,
    /// Prime; chosen automatically when absent.
    #[arg(long)]
    pub p: Option<u64>,
    /// Cutoff M for the automatic prime and the check on an explicit one.
    #[arg(long = "M", default_value_t = ortholat::forms::DEFAULT_PRIME_CUTOFF)]
    pub cutoff: u64,
    /// p-adic precision.
    #[arg(long = "N", default_value_t = 32)]
    pub precision: u32,
    /// Random model-group elements used to check the conjugator.
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    So21,
    So31,
    So22,
    Sl2,
}

#[derive(Debug, Args, Serialize)]
pub struct CartanArgs {
    #[arg(long, value_enum)]
    pub kind: GroupKind,
    #[arg(long)]
    pub p: u64,
    /// Decompose this matrix (rational entries, rows separated by ';').
    #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["m", "n"])]
    pub matrix: Option<String>,
    /// Otherwise decompose random k₁ a k₂ with these exponents.
    #[arg(long, default_value_t = 1)]
    pub m: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    pub n: i64,
    #[arg(long, default_value_t = 1)]
    pub samples: usize,
    /// Digits to which the factors must reassemble the input.
    #[arg(long = "N", default_value_t = 32)]
    pub precision: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct VolumeArgs {
    #[arg(long, value_enum)]
    pub kind: GroupKind,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub l: u32,
    /// The sphere ‖g‖ = p^ℓ instead of the ball.
    #[arg(long)]
    pub sphere: bool,
}

#[derive(Debug, Args, Serialize)]
pub struct TreeArgs {
    #[arg(long, value_enum)]
    pub kind: GroupKind,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub l: u32,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum LieCommand {
    /// Check every identity, and the certificates at the given primes.
    Verify {
        #[arg(long, value_delimiter = ',', default_values_t = [17u64, 29])]
        p: Vec<u64>,
        /// The unit λ in the compact factor λu².
        #[arg(long, default_value_t = 11, allow_negative_numbers = true)]
        lambda: i64,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeckeCommand {
    /// Partition a sphere into Hecke classes.
    Classes {
        #[arg(long)]
        d: usize,
        #[arg(long = "D")]
        disc: i64,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = ortholat::hecke::DEFAULT_K_MAX)]
        kmax: u32,
    },
    /// Search for a witness relating two points.
    Related {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        v: Vec<i64>,
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        w: Vec<i64>,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = ortholat::hecke::DEFAULT_K_MAX)]
        kmax: u32,
    },
    /// Scaled rotations fixing a point.
    Stabilizer {
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        v: Vec<i64>,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = ortholat::hecke::DEFAULT_K_MAX)]
        kmax: u32,
        /// Largest row norm considered (default 16p²).
        #[arg(long)]
        norm_bound: Option<i64>,
    },
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EquidistCommand {
    /// Run the discriminant sweep.
    Run {
        #[arg(long, default_value_t = 5)]
        d: usize,
        #[arg(long, default_value_t = 1_000)]
        dmin: i64,
        #[arg(long, default_value_t = 100_000)]
        dmax: i64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Cap thresholds.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true, default_values_t = [0.0, 0.25, 0.5, 0.75])]
        caps: Vec<f64>,
    },
}
