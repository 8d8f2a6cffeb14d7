//! Default tolerances. Every check and report in the crate reads its
//! thresholds from here.

/// Allowed deviation of a fitted `α` from a reference value.
pub const ALPHA_FIT: f64 = 0.1;
/// Floating-point slack for identities that hold exactly in exact arithmetic.
pub const IDENTITY: f64 = 1e-10;
/// Agreement required between spectral computations of the same quantity.
pub const SPECTRAL: f64 = 1e-8;
/// Maximum relative spread of local one-decade slopes inside an automatic fit window.
pub const SLOPE_SPREAD: f64 = 0.05;
/// Minimum width of an automatic fit window, in decades.
pub const MIN_DECADES: f64 = 1.0;
/// Fraction of `1/λ_min` beyond which heat curves are dominated by finite size.
pub const FINITE_SIZE_FACTOR: f64 = 0.1;
/// Required comparability constant in the Tauberian calibration.
pub const TAUBERIAN_K: f64 = 2.0;
/// Relative tolerance of the `φ_γ` asymptote check.
pub const ASYMPTOTE_REL: f64 = 0.01;
/// Default Monte Carlo budget, in walk steps per reported return probability.
pub const MC_BUDGET: usize = 1_000_000;
/// First step count used by automatic return-probability fits.
pub const WALK_FIT_START: f64 = 4.0;
