mod commands;
mod output;
mod selftest;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "univoque", version, about = "Certified computations for expansions in non-integer bases")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Width of enclosures for named constants and roots.
    #[arg(long, global = true, default_value = "1e-12")]
    pub precision: String,
    /// Node budget for expansion trees.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Steps of exact cycle search.
    #[arg(long, global = true)]
    pub max_depth: Option<usize>,
    /// Interval splits allowed in sign certification.
    #[arg(long, global = true)]
    pub max_splits: Option<usize>,
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Write the result here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<std::path::PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Komornik–Loreti constant, generalised golden ratio, or α(q).
    Constants(ConstantsArgs),
    /// Greedy, quasi-greedy or lazy digits of x, or all expansion prefixes.
    Expand(ExpandArgs),
    /// Uniqueness verdict for an eventually periodic sequence.
    Unique(UniqueArgs),
    /// Unique root of a difference series in a window.
    Root(RootArgs),
    /// Transversality certificate bundle for an alphabet size.
    Certify(CertifyArgs),
    /// Points with exactly two expansions.
    U2(U2Args),
    /// Dimension enclosure of the univoque set.
    Dim(DimArgs),
    /// Dimension enclosures over a grid of bases.
    Scan(ScanArgs),
    /// Negativity estimates used by the slicing argument.
    Inspect(InspectArgs),
    /// Run every subcommand's self-test.
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    Kl,
    Gr,
    Alpha,
}

#[derive(Args, Debug)]
pub struct ConstantsArgs {
    #[arg(long = "M", required_unless_present = "selftest")]
    pub m: Option<u32>,
    #[arg(long, value_enum, default_value = "kl")]
    pub which: Which,
    /// Base for `--which alpha`.
    #[arg(long)]
    pub q: Option<String>,
    /// Digits of α(q).
    #[arg(long, default_value_t = 32)]
    pub n: usize,
    #[arg(long)]
    pub selftest: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Greedy,
    QuasiGreedy,
    Lazy,
    Enumerate,
}

#[derive(Args, Debug)]
pub struct ExpandArgs {
    #[arg(long = "M", required_unless_present = "selftest")]
    pub m: Option<u32>,
    #[arg(long, required_unless_present = "selftest")]
    pub q: Option<String>,
    #[arg(long, required_unless_present = "selftest")]
    pub x: Option<String>,
    #[arg(long, default_value_t = 16)]
    pub depth: usize,
    #[arg(long, value_enum, default_value = "greedy")]
    pub mode: Mode,
    #[arg(long)]
    pub selftest: bool,
}

#[derive(Args, Debug)]
pub struct UniqueArgs {
    #[arg(long = "M", required_unless_present = "selftest")]
    pub m: Option<u32>,
    #[arg(long, required_unless_present = "selftest")]
    pub q: Option<String>,
    /// Sequence as `pre(period)`, e.g. `1(10)`.
    #[arg(long, required_unless_present = "selftest")]
    pub seq: Option<String>,
    #[arg(long, default_value_t = 64)]
    pub depth: usize,
    #[arg(long)]
    pub selftest: bool,
}

#[derive(Args, Debug)]
pub struct RootArgs {
    #[arg(long = "M", required_unless_present = "selftest")]
    pub m: Option<u32>,
    /// Difference series as `pre(period)`, e.g. `(-1,-1,-1)(0)`.
    #[arg(long, required_unless_present = "selftest", allow_hyphen_values = true)]
    pub diff: Option<String>,
    #[arg(long, required_unless_present = "selftest")]
    pub lo: Option<String>,
    #[arg(long, required_unless_present = "selftest")]
    pub hi: Option<String>,
    #[arg(long)]
    pub selftest: bool,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    #[arg(long = "M", required_unless_present = "selftest")]
    pub m: Option<u32>,
    #[arg(long)]
    pub selftest: bool,
}

#[derive(Args, Debug)]
pub struct U2Args {
    #[command(subcommand)]
    pub action: Option<U2Action>,
    #[arg(long)]
    pub selftest: bool,
}

#[derive(Subcommand, Debug)]
pub enum U2Action {
    /// Search pairs (a, b) for bases with two-expansion points.
    Search(U2SearchArgs),
    /// Check a candidate `π_q(w m a) = π_q(w (m+1) b)`.
    Check(U2CheckArgs),
}

#[derive(Args, Debug)]
pub struct U2SearchArgs {
    #[arg(long = "M")]
    pub m: u32,
    #[arg(long)]
    pub q_lo: String,
    #[arg(long)]
    pub q_hi: String,
    #[arg(long, default_value_t = 3)]
    pub period_bound: usize,
    #[arg(long, default_value_t = 2)]
    pub preperiod_bound: usize,
    /// Also write the JSON result to this file.
    #[arg(long)]
    pub json: Option<std::path::PathBuf>,
}

#[derive(Args, Debug)]
pub struct U2CheckArgs {
    #[arg(long = "M")]
    pub m_alphabet: u32,
    /// Common prefix digits, possibly empty.
    #[arg(long, default_value = "")]
    pub w: String,
    /// Digit before the split; the other branch uses m+1.
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub a: String,
    #[arg(long)]
    pub b: String,
    #[arg(long)]
    pub q: String,
    #[arg(long, default_value_t = 40)]
    pub depth: usize,
}

#[derive(Args, Debug)]
pub struct DimArgs {
    #[arg(long = "M", required_unless_present = "selftest")]
    pub m: Option<u32>,
    #[arg(long, required_unless_present = "selftest")]
    pub q: Option<String>,
    #[arg(long, default_value_t = 40)]
    pub n: usize,
    #[arg(long = "L", default_value_t = 40)]
    pub l: usize,
    #[arg(long)]
    pub selftest: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct ScanArgs {
    #[arg(long = "M", required_unless_present = "selftest")]
    pub m: Option<u32>,
    #[arg(long, required_unless_present = "selftest")]
    pub q_lo: Option<String>,
    #[arg(long, required_unless_present = "selftest")]
    pub q_hi: Option<String>,
    #[arg(long, default_value_t = 20)]
    pub steps: usize,
    #[arg(long, default_value_t = 40)]
    pub n: usize,
    #[arg(long = "L", default_value_t = 40)]
    pub l: usize,
    #[arg(long, value_enum, default_value = "json")]
    pub out: Format,
    #[arg(long)]
    pub selftest: bool,
}

#[derive(Args, Debug)]
pub struct InspectArgs {
    #[arg(long = "M", required_unless_present = "selftest")]
    pub m: Option<u32>,
    #[arg(long)]
    pub selftest: bool,
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    ExitCode::from(commands::run(cli, &argv[1..]))
}
