use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "lp-certify", version, about = "Certified Laguerre-Polya class I tests for positive-coefficient entire functions")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Shorthand for `--format csv`.
    #[arg(long, global = true)]
    pub csv: bool,
    /// Working precision in significant decimal digits (overrides LP_CERTIFY_PRECISION).
    #[arg(long, global = true)]
    pub precision: Option<u32>,
    /// Also write the report's plot table as CSV to this path.
    #[arg(long, value_name = "PATH", global = true)]
    pub plot_data: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a membership test or necessary condition.
    Test(TestArgs),
    /// Locate zeros of a truncation, count zeros in disks, check sign alternation.
    Zeros(ZerosArgs),
    /// Reproduce the partial theta constants and polynomial root bounds.
    #[command(subcommand)]
    Constants(ConstantsCommand),
    /// Evaluate the explicit inequalities, generically or along a family.
    VerifyInequalities(InequalityArgs),
    /// Count nonreal zeros disk by disk.
    Census(CensusArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    #[value(name = "hutchinson")]
    Hutchinson,
    #[value(name = "lemma12")]
    Lemma12,
    #[value(name = "theoremD")]
    TheoremD,
    #[value(name = "mthm1")]
    Mthm1,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    #[arg(long, value_enum)]
    pub criterion: CriterionArg,
    /// Family descriptor as a JSON object.
    #[arg(long)]
    pub function: String,
    /// Number of quotients checked directly.
    #[arg(long, default_value_t = 200)]
    pub n_max: usize,
    /// Nodes of the sign scan.
    #[arg(long, default_value_t = 512)]
    pub scan_nodes: usize,
}

#[derive(Debug, Args)]
pub struct ZerosArgs {
    #[arg(long)]
    pub function: String,
    /// Truncation degree.
    #[arg(long)]
    pub degree: usize,
    /// Inclusive disk index range `j1..j2` for winding counts.
    #[arg(long, value_parser = parse_range)]
    pub disks: Option<(usize, usize)>,
    /// Add the nonreal census over the disk range.
    #[arg(long, requires = "disks")]
    pub census: bool,
    /// Check the sign alternation at the disk radii for k = 2..=K.
    #[arg(long, value_name = "K")]
    pub alternation: Option<usize>,
    /// Relative tolerance for classifying a root as real.
    #[arg(long, default_value_t = 1e-8)]
    pub real_tol: f64,
}

#[derive(Debug, Subcommand)]
pub enum ConstantsCommand {
    /// Threshold of the partial theta function.
    #[command(name = "q-inf")]
    QInf {
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
    },
    /// Section constants, for one `n` or an inclusive range `a..b`.
    #[command(name = "c-n")]
    CN {
        #[arg(long, value_parser = parse_index_or_range)]
        n: (usize, usize),
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Interleaving of the section constants around the threshold.
    Interleaving {
        #[arg(long, default_value_t = 12)]
        n_max: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Largest real roots of the auxiliary polynomials.
    Roots {
        /// One of deg11, quintic_A, quintic_B, quartic_g; all when omitted.
        #[arg(long)]
        poly: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct InequalityArgs {
    /// Family descriptor; without it the generic checks run.
    #[arg(long)]
    pub family: Option<String>,
    /// Inclusive index range `a..b`.
    #[arg(long, value_parser = parse_range, default_value = "4..12")]
    pub j_range: (usize, usize),
}

#[derive(Debug, Args)]
pub struct CensusArgs {
    #[arg(long)]
    pub function: String,
    /// Inclusive disk index range `a..b`.
    #[arg(long, value_parser = parse_range, default_value = "6..14")]
    pub j_range: (usize, usize),
    /// Truncation degree; the smallest sufficient degree when omitted.
    #[arg(long)]
    pub degree: Option<usize>,
}

pub fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a range like 4..12, got '{s}'"))?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let lo: usize = a.trim().parse().map_err(|_| format!("invalid range start '{a}'"))?;
    let hi: usize = b.trim().parse().map_err(|_| format!("invalid range end '{b}'"))?;
    if lo > hi {
        return Err(format!("empty range {lo}..{hi}"));
    }
    Ok((lo, hi))
}

fn parse_index_or_range(s: &str) -> Result<(usize, usize), String> {
    if s.contains("..") {
        parse_range(s)
    } else {
        let n: usize = s.trim().parse().map_err(|_| format!("expected an integer or a range, got '{s}'"))?;
        Ok((n, n))
    }
}
