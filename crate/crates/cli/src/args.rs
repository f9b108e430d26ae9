use clap::{Args, Parser, Subcommand};

use crate::config::{canonical_theta, CommandKind, Format, LRange, RunConfig, DEFAULT_CACHE_DIR};

#[derive(Debug, Parser)]
#[command(name = "pascal-charpoly", version, about = "Exact and asymptotic analysis of det(B + z I) for the symmetric Pascal matrix")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Working precision in decimal digits
    #[arg(long, default_value_t = 50, value_parser = clap::value_parser!(u32).range(16..=20000))]
    pub digits: u32,
    /// Largest winding sector |n|
    #[arg(long = "n-max", default_value_t = 6)]
    pub n_max: u32,
    /// Number of R_2k corrections (at most 7)
    #[arg(long = "k-max", default_value_t = 7, value_parser = clap::value_parser!(u32).range(0..=7))]
    pub k_max: u32,
    #[arg(long = "cache-dir", default_value = DEFAULT_CACHE_DIR)]
    pub cache_dir: String,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

fn theta_arg(s: &str) -> Result<String, String> {
    canonical_theta(s)
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Compute and cache characteristic polynomials
    Charpoly {
        #[arg(long = "L")]
        l: LRange,
        #[command(flatten)]
        common: Common,
    },
    /// Exact D(L, theta) and phi(L, theta)
    Eval {
        #[arg(long = "L")]
        l: LRange,
        /// "P/Q" means (P/Q) pi, a decimal means radians
        #[arg(long, value_parser = theta_arg, allow_hyphen_values = true)]
        theta: String,
        #[command(flatten)]
        common: Common,
    },
    /// Exact against asymptotic D(L, theta)
    Compare {
        #[arg(long = "L")]
        l: LRange,
        #[arg(long, value_parser = theta_arg, allow_hyphen_values = true)]
        theta: String,
        #[command(flatten)]
        common: Common,
    },
    /// Product-formula values of D at multiples of pi/3
    Special {
        #[arg(long = "L")]
        l: LRange,
        /// Restrict to theta = p pi / 3
        #[arg(long, value_parser = clap::value_parser!(i64).range(0..=3))]
        p: Option<i64>,
        #[command(flatten)]
        common: Common,
    },
    /// Fit amplitudes of the finite-size expansion
    Extract {
        /// "P/Q" means (P/Q) pi, a decimal means radians
        #[arg(long, value_parser = theta_arg, allow_hyphen_values = true)]
        theta: String,
        /// theta-derivative order (0..=2)
        #[arg(long, default_value_t = 0, value_parser = clap::value_parser!(u32).range(0..=2))]
        order: u32,
        /// Largest system size; the fit uses the largest sizes of its parity
        #[arg(long = "Lmax")]
        lmax: usize,
        /// Smallest system size admitted to the fit
        #[arg(long = "Lmin", default_value_t = 2)]
        lmin: usize,
        /// derivative-of-scaled or scaled-derivative
        #[arg(long)]
        mode: Option<String>,
        /// Correction terms per winding sector
        #[arg(long = "k-terms")]
        k_terms: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Integer relation between x and named constants
    Relate {
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Basis constant (repeatable): pi, gamma, log2, log3, zeta3,
        /// zetaprime, psi1_1_3, psi1_2_3, 1, optionally suffixed "/pi"
        #[arg(long = "const", required = true)]
        consts: Vec<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Loop-number mean and variance, wrapping probability
    Loops {
        #[arg(long = "L")]
        l: LRange,
        #[command(flatten)]
        common: Common,
    },
    /// Exact loop-number distribution P(L, m)
    Probabilities {
        #[arg(long = "L")]
        l: LRange,
        #[command(flatten)]
        common: Common,
    },
}

impl Cmd {
    /// The canonical configuration, or a usage message.
    pub fn config(&self) -> Result<RunConfig, String> {
        let (kind, common) = match self {
            Cmd::Charpoly { common, .. } => (CommandKind::Charpoly, common),
            Cmd::Eval { common, .. } => (CommandKind::Eval, common),
            Cmd::Compare { common, .. } => (CommandKind::Compare, common),
            Cmd::Special { common, .. } => (CommandKind::Special, common),
            Cmd::Extract { common, .. } => (CommandKind::Extract, common),
            Cmd::Relate { common, .. } => (CommandKind::Relate, common),
            Cmd::Loops { common, .. } => (CommandKind::Loops, common),
            Cmd::Probabilities { common, .. } => (CommandKind::Probabilities, common),
        };
        let mut c = RunConfig::new(kind);
        c.digits = common.digits;
        c.n_max = common.n_max;
        c.k_max = common.k_max as usize;
        c.cache_dir = common.cache_dir.clone();
        c.format = common.format;
        match self {
            Cmd::Charpoly { l, .. } | Cmd::Loops { l, .. } | Cmd::Probabilities { l, .. } => c.l = Some(*l),
            Cmd::Eval { l, theta, .. } | Cmd::Compare { l, theta, .. } => {
                c.l = Some(*l);
                c.theta = Some(theta.clone());
            }
            Cmd::Special { l, p, .. } => {
                c.l = Some(*l);
                c.p = *p;
            }
            Cmd::Extract { theta, order, lmax, lmin, mode, k_terms, .. } => {
                c.l = Some(format!("{lmin}..{lmax}").parse()?);
                c.theta = Some(theta.clone());
                c.order = Some(*order as usize);
                if let Some(m) = mode {
                    if m != "derivative-of-scaled" && m != "scaled-derivative" {
                        return Err(format!("unknown mode {m:?}"));
                    }
                }
                c.mode = mode.clone();
                if *k_terms == Some(0) {
                    return Err("k-terms must be positive".into());
                }
                c.k_terms = *k_terms;
            }
            Cmd::Relate { x, consts, .. } => {
                c.x = Some(x.trim().to_string());
                c.consts = consts.clone();
            }
        }
        Ok(c)
    }
}
