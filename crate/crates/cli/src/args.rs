use std::path::PathBuf;
use std::str::FromStr;

use clap::{ArgAction, Args, Parser, Subcommand};
use ffsieve::ModuliKind;

/// Inclusive integer range written `a..b`, or a single integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IntRange {
    pub lo: i64,
    pub hi: i64,
}

impl IntRange {
    pub fn values(self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |x: &str| x.trim().parse::<i64>().map_err(|e| format!("{x:?}: {e}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.strip_prefix('=').unwrap_or(b))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(Self { lo, hi })
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "ffsieve",
    version,
    about = "Large-sieve experiments over imaginary quadratic extensions of F_q(t)",
    args_override_self = true,
    allow_negative_numbers = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Measure the full and square-moduli sieve inequalities over a parameter grid
    Sieve(SieveArgs),
    /// Brute-force the spacing count 𝒦
    Kappa(KappaArgs),
    /// Linear exponential sums Σ(X, h), or U(X, Y; f, r) when --Y is given
    Expsum(ExpsumArgs),
    /// Check Poisson summation on lattices of multiples
    Poisson(PoissonArgs),
    /// Fourier transform of a scaled ball indicator
    Fourier(FourierArgs),
    /// Check the Weyl-shift identity
    Weyl(WeylArgs),
    /// Divisor counts τ(l) against 2^D(l)
    Divisors(DivisorArgs),
    /// Check exact orthogonality of the inner sums over all residues
    Orthogonality(OrthogonalityArgs),
    /// Report whether α defines an imaginary quadratic extension
    ValidateAlpha(ValidateArgs),
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Base field: a prime p, or p^m:c0,...,cm with a monic irreducible modulus
    #[arg(long = "q", default_value = "3")]
    pub field: String,
    /// α as coefficients, constant term first
    #[arg(long, default_value = "0,1")]
    pub alpha: String,
    /// File of KEY=VALUE lines; flags on the command line take precedence
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Emit line-delimited JSON instead of CSV
    #[arg(long)]
    pub json: bool,
    /// Write records here instead of stdout
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    /// Worker threads; 0 uses every core
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Seed for random coefficients and sampled instances
    #[arg(long, env = "FFSIEVE_SEED", default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args, Debug)]
pub struct SieveArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "all")]
    pub moduli: ModuliKind,
    #[arg(long = "Q", default_value = "1")]
    pub big_q: IntRange,
    #[arg(long = "N", default_value = "1")]
    pub n: IntRange,
    /// ones | zero | delta[:RE;IM] | random[:SEED] | user:v1,v2,... (repeatable)
    #[arg(long, action = ArgAction::Append, default_value = "ones")]
    pub coeffs: Vec<String>,
}

#[derive(Args, Debug)]
pub struct KappaArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value = "all")]
    pub moduli: ModuliKind,
    #[arg(long = "Q", default_value = "1")]
    pub big_q: IntRange,
    #[arg(long = "N", default_value = "1")]
    pub n: IntRange,
}

#[derive(Args, Debug)]
pub struct ExpsumArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long = "X", default_value = "1..3")]
    pub x: IntRange,
    /// Points h = a;b of K, each coordinate num/den (repeatable)
    #[arg(long, action = ArgAction::Append)]
    pub h: Vec<String>,
    /// Add every h = γr/f with nonzero f, γ of D at most this, r mod f
    #[arg(long)]
    pub grid: Option<i64>,
    /// Modulus for U sums
    #[arg(long)]
    pub f: Option<String>,
    /// Residue for U sums; every unit mod f when omitted
    #[arg(long)]
    pub r: Option<String>,
    /// Evaluate U(X, Y; f, r) over this range of Y instead of Σ(X, h)
    #[arg(long = "Y")]
    pub y: Option<IntRange>,
}

#[derive(Args, Debug)]
pub struct PoissonArgs {
    #[command(flatten)]
    pub common: Common,
    /// Generator of the lattice of multiples; drawn at random per trial when omitted
    #[arg(long)]
    pub f1: Option<String>,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    /// Ball scale exponent; drawn from -1..2 per trial when omitted
    #[arg(long = "L")]
    pub l: Option<i64>,
}

#[derive(Args, Debug)]
pub struct FourierArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Point of k^n, coordinates num/den separated by ';'
    #[arg(long, default_value = "0")]
    pub x: String,
    #[arg(long = "L", default_value_t = 0)]
    pub l: i64,
}

#[derive(Args, Debug)]
pub struct WeylArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub j: Option<String>,
    #[arg(long)]
    pub r1: Option<String>,
    #[arg(long)]
    pub f1: Option<String>,
    /// Radius exponent of the f-range; drawn from 0..1 per trial when omitted
    #[arg(long = "Qhalf")]
    pub qhalf: Option<i64>,
    #[arg(long, default_value_t = 50)]
    pub trials: usize,
}

#[derive(Args, Debug)]
pub struct DivisorArgs {
    #[command(flatten)]
    pub common: Common,
    /// Largest D(l) to enumerate
    #[arg(long = "D", default_value_t = 3)]
    pub d: i64,
}

#[derive(Args, Debug)]
pub struct OrthogonalityArgs {
    #[command(flatten)]
    pub common: Common,
    /// Single modulus; otherwise every f with D(f) up to --D
    #[arg(long)]
    pub f: Option<String>,
    #[arg(long = "D", default_value_t = 2)]
    pub d: i64,
    #[arg(long = "N", default_value = "1..3")]
    pub n: IntRange,
    #[arg(long, action = ArgAction::Append, default_values = ["delta", "ones", "random"])]
    pub coeffs: Vec<String>,
}

#[derive(Args, Debug)]
pub struct ValidateArgs {
    #[command(flatten)]
    pub common: Common,
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Sieve(a) => &a.common,
            Command::Kappa(a) => &a.common,
            Command::Expsum(a) => &a.common,
            Command::Poisson(a) => &a.common,
            Command::Fourier(a) => &a.common,
            Command::Weyl(a) => &a.common,
            Command::Divisors(a) => &a.common,
            Command::Orthogonality(a) => &a.common,
            Command::ValidateAlpha(a) => &a.common,
        }
    }
}
