//! Numerical tolerances shared by the verification routines.

/// Microstate-level Crooks log-residual.
pub const CROOKS_MICROSTATE: f64 = 1e-10;
/// Distribution-level Crooks deviation over the floored support.
pub const CROOKS_DISTRIBUTION: f64 = 1e-8;
/// `|<s> - K[P_E || P_C]|`.
pub const KL_IDENTITY: f64 = 1e-8;
/// Lower bound accepted for `<s>`.
pub const ENTROPY_NONNEGATIVE: f64 = -1e-10;
/// `<s>` against `W_fric / T_ad` and against `(w_out / T_ad) <n_c>`.
pub const FRICTION_IDENTITY: f64 = 1e-6;
/// Relative tolerance for `T_ad K[rho || rho'] = W_fric`.
pub const QUANTUM_RELATIVE_ENTROPY: f64 = 1e-5;
/// `sum_s P_E(s) exp(-s) = 1`.
pub const INTEGRAL_FLUCTUATION: f64 = 1e-6;
/// Support points with less forward mass are excluded from log-ratios.
pub const PROBABILITY_FLOOR: f64 = 1e-12;
/// Entropy values closer than this are merged into one support point.
pub const ENTROPY_BINNING: f64 = 1e-12;
/// Eigenvalues of `rho'` below this are dropped from the trace.
pub const EIGENVALUE_CLIP: f64 = 1e-300;
/// Closed-form against brute-force mean particle creation.
pub const CREATED_CLOSED_FORM: f64 = 1e-6;
