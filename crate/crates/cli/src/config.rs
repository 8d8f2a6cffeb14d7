use crate::error::CliError;
use clap::{Args, ValueEnum};
use l2fractal::builders::Family;
use l2fractal::invariants::{log_grid, WalkMode, WindowPolicy};
use l2fractal::operators::LaplacianKind;
use l2fractal::tolerances::MC_BUDGET;
use serde::Deserialize;
use std::path::{Path, PathBuf};

pub const OUT_DIR_ENV: &str = "L2FRACTAL_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Full,
    Plus,
    Minus,
}

impl From<Kind> for LaplacianKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Full => LaplacianKind::Full,
            Kind::Plus => LaplacianKind::Plus,
            Kind::Minus => LaplacianKind::Minus,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Walk {
    Exact,
    MonteCarlo,
}

/// Flags shared by every command. Each may also come from the config file.
#[derive(Args, Debug, Clone, Default)]
pub struct CommonArgs {
    /// Family: gasket, vicsek, lindstrom, carpet2 or dodecagon2.
    pub family: String,
    /// Build levels 0..=N.
    #[arg(long)]
    pub levels: Option<usize>,
    /// Window level n (default ambient - 1).
    #[arg(long)]
    pub window: Option<usize>,
    /// Ambient level m (default N).
    #[arg(long)]
    pub ambient: Option<usize>,
    /// Cell dimension j.
    #[arg(long)]
    pub j: Option<usize>,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    /// Use operators relative to the boundary subcomplex.
    #[arg(long)]
    pub relative: bool,
    /// Work on the dual graph of a 2-complex (top cells as vertices).
    #[arg(long)]
    pub dual: bool,
    #[arg(long)]
    pub t_lo: Option<f64>,
    #[arg(long)]
    pub t_hi: Option<f64>,
    /// Number of log-spaced grid points.
    #[arg(long)]
    pub points: Option<usize>,
    /// Fixed fit window, overriding the automatic choice.
    #[arg(long, requires = "fit_hi")]
    pub fit_lo: Option<f64>,
    #[arg(long, requires = "fit_lo")]
    pub fit_hi: Option<f64>,
    /// Fit return probabilities as well.
    #[arg(long, value_enum)]
    pub walk: Option<Walk>,
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Monte Carlo walkers, i.e. samples per reported return probability.
    #[arg(long)]
    pub budget: Option<usize>,
    /// Levels at which identity suites run, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub identity_levels: Option<Vec<usize>>,
    /// Output directory [env: L2FRACTAL_OUT_DIR].
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// TOML file with defaults for any of these flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Worker threads for Monte Carlo walks.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
struct FileConfig {
    levels: Option<usize>,
    window: Option<usize>,
    ambient: Option<usize>,
    j: Option<usize>,
    kind: Option<Kind>,
    relative: Option<bool>,
    dual: Option<bool>,
    t_lo: Option<f64>,
    t_hi: Option<f64>,
    points: Option<usize>,
    fit_lo: Option<f64>,
    fit_hi: Option<f64>,
    walk: Option<Walk>,
    k_max: Option<usize>,
    seed: Option<u64>,
    budget: Option<usize>,
    identity_levels: Option<Vec<usize>>,
    out_dir: Option<PathBuf>,
    threads: Option<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub family: Family,
    pub levels: usize,
    pub window: usize,
    pub ambient: usize,
    pub j: usize,
    pub kind: Kind,
    pub relative: bool,
    pub dual: bool,
    pub times: Vec<f64>,
    pub policy: Option<WindowPolicy>,
    pub walk: Option<Walk>,
    pub k_max: usize,
    pub seed: u64,
    pub budget: usize,
    pub identity_levels: Vec<usize>,
    /// Set when given by flag, file or environment.
    pub out_dir: Option<PathBuf>,
    pub threads: usize,
}

fn read_file(path: &Path) -> Result<FileConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

impl RunConfig {
    /// Flags win over the file, the file over the environment, and that over defaults.
    pub fn resolve(args: &CommonArgs, default_levels: usize) -> Result<Self, CliError> {
        let file = match &args.config {
            Some(p) => read_file(p)?,
            None => FileConfig::default(),
        };
        let family = Family::from_name(&args.family).ok_or_else(|| {
            let names: Vec<&str> = Family::ALL.iter().map(|f| f.name()).collect();
            CliError::Usage(format!(
                "unknown family '{}'; expected one of {}",
                args.family,
                names.join(", ")
            ))
        })?;
        let levels = args.levels.or(file.levels).unwrap_or(default_levels);
        let ambient = args.ambient.or(file.ambient).unwrap_or(levels);
        let window = args
            .window
            .or(file.window)
            .unwrap_or(ambient.saturating_sub(1));
        if ambient > levels || (ambient > 0 && window >= ambient) {
            return Err(CliError::Usage(format!(
                "need window < ambient <= levels, got {window} < {ambient} <= {levels}"
            )));
        }
        let t_lo = args.t_lo.or(file.t_lo).unwrap_or(0.1);
        let t_hi = args.t_hi.or(file.t_hi).unwrap_or(1e4);
        let points = args.points.or(file.points).unwrap_or(61);
        if !(t_lo > 0.0 && t_hi > t_lo && points >= 2) {
            return Err(CliError::Usage(format!(
                "time grid needs 0 < t-lo < t-hi and at least 2 points, got {t_lo}, {t_hi}, {points}"
            )));
        }
        let policy = match (args.fit_lo.or(file.fit_lo), args.fit_hi.or(file.fit_hi)) {
            (Some(lo), Some(hi)) if lo < hi => Some(WindowPolicy::Fixed { lo, hi }),
            (None, None) => None,
            (lo, hi) => {
                return Err(CliError::Usage(format!(
                    "fit window needs fit-lo < fit-hi, got {lo:?}, {hi:?}"
                )))
            }
        };
        let out_dir = args
            .out_dir
            .clone()
            .or(file.out_dir)
            .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from));
        let identity_levels = args
            .identity_levels
            .clone()
            .or(file.identity_levels)
            .unwrap_or_else(|| {
                let hi = window.saturating_sub(1);
                (hi.saturating_sub(1)..=hi).collect()
            });
        if let Some(&n) = identity_levels.iter().find(|&&n| n > levels) {
            return Err(CliError::Usage(format!(
                "identity level {n} exceeds levels {levels}"
            )));
        }
        Ok(RunConfig {
            family,
            levels,
            window,
            ambient,
            j: args.j.or(file.j).unwrap_or(0),
            kind: args.kind.or(file.kind).unwrap_or(Kind::Full),
            relative: args.relative || file.relative.unwrap_or(false),
            dual: args.dual || file.dual.unwrap_or(false),
            times: log_grid(t_lo, t_hi, points),
            policy,
            walk: args.walk.or(file.walk),
            k_max: args.k_max.or(file.k_max).unwrap_or(200),
            seed: args.seed.or(file.seed).unwrap_or(1),
            budget: args.budget.or(file.budget).unwrap_or(MC_BUDGET),
            identity_levels,
            out_dir,
            threads: args.threads.or(file.threads).unwrap_or(1).max(1),
        })
    }

    pub fn walk_mode(&self) -> Option<WalkMode> {
        self.walk.map(|w| match w {
            Walk::Exact => WalkMode::Exact,
            Walk::MonteCarlo => WalkMode::MonteCarlo {
                seed: self.seed,
                budget: self.budget,
            },
        })
    }

    pub fn out_dir_or_default(&self) -> PathBuf {
        self.out_dir.clone().unwrap_or_else(|| PathBuf::from("out"))
    }
}
