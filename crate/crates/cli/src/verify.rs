//! The invariant suite behind `cosmoflux verify`: every check of the
//! configured point, then the canonical point with its reference values and
//! the unsqueezed point where all identities hold exactly.

use cosmoflux_core::{transition_kernel, JointFockIndex, SqueezeParameter, TruncationSpec};
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::AppError;
use crate::output::round_to;
use crate::run::{run_simulation, Check, RunReport, Status};

/// Reference values at the canonical point from a closed truncated-unitary
/// evaluation at cutoff 40.
pub const CANONICAL_MEAN_WORK: f64 = 5.049_224_630_526;
pub const CANONICAL_INNER_FRICTION: f64 = 2.885_271_216_787;
pub const CANONICAL_MEAN_ENTROPY: f64 = 1.442_635_608_394;
/// `(omega_out - omega) (<n_i> + 1)` with `<n_i> = 2 / (e - 1)`.
pub const CANONICAL_ADIABATIC_WORK: f64 = 2.163_953_413_738_653;

const EXACT: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyItem {
    pub point: &'static str,
    pub check: String,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub status: &'static str,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub items: Vec<VerifyItem>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.status != Status::Fail.label())
    }

    pub fn failures(&self) -> usize {
        self.items.iter().filter(|i| i.status == Status::Fail.label()).count()
    }

    fn push(&mut self, point: &'static str, check: impl Into<String>, residual: f64, tolerance: f64) {
        let status = if residual <= tolerance { Status::Pass } else { Status::Fail };
        self.items.push(VerifyItem {
            point,
            check: check.into(),
            residual: Some(residual),
            tolerance,
            status: status.label(),
        });
    }

    fn extend(&mut self, point: &'static str, checks: &[Check]) {
        for c in checks {
            self.items.push(VerifyItem {
                point,
                check: c.name.to_string(),
                residual: c.residual,
                tolerance: c.tolerance,
                status: c.status.label(),
            });
        }
    }

    pub fn to_text(&self, precision: usize) -> String {
        let mut out = String::new();
        for i in &self.items {
            let residual = i
                .residual
                .map(|r| format!("{:e}", round_to(r, precision.min(4))))
                .unwrap_or_else(|| "-".into());
            out.push_str(&format!(
                "[{}] {:<12} {:<28} residual {:<12} tolerance {:e}\n",
                i.status.to_uppercase(),
                i.point,
                i.check,
                residual,
                i.tolerance
            ));
        }
        out.push_str(&format!(
            "{} checks, {} failed\n",
            self.items.len(),
            self.failures()
        ));
        out
    }

    pub fn to_json(&self, precision: usize) -> Result<String, AppError> {
        let items: Vec<VerifyItem> = self
            .items
            .iter()
            .map(|i| VerifyItem {
                residual: i.residual.map(|r| round_to(r, precision)),
                ..i.clone()
            })
            .collect();
        serde_json::to_string_pretty(&items).map_err(|e| AppError::Output(e.to_string()))
    }
}

pub fn verify_invariants(config: &RunConfig) -> Result<VerifyReport, AppError> {
    let mut suite = VerifyReport::default();

    let configured = run_simulation(config)?;
    suite.extend("configured", &configured.checks);
    kernel_checks(&mut suite, "configured", &configured)?;

    let canonical = run_simulation(&RunConfig::canonical())?;
    suite.extend("canonical", &canonical.checks);
    kernel_checks(&mut suite, "canonical", &canonical)?;
    let bound = canonical.truncation_bound;
    suite.push(
        "canonical",
        "reference-mean-work",
        (canonical.mean_work - CANONICAL_MEAN_WORK).abs(),
        bound,
    );
    suite.push(
        "canonical",
        "reference-inner-friction",
        (canonical.inner_friction - CANONICAL_INNER_FRICTION).abs(),
        bound,
    );
    suite.push(
        "canonical",
        "reference-adiabatic-work",
        (canonical.adiabatic_work - CANONICAL_ADIABATIC_WORK).abs(),
        EXACT,
    );
    suite.push(
        "canonical",
        "reference-mean-entropy",
        (canonical.mean_entropy.unwrap_or(f64::NAN) - CANONICAL_MEAN_ENTROPY).abs(),
        1e-6,
    );

    // Unsqueezed channel: nothing is created and every entropy vanishes.
    let still = run_simulation(&RunConfig::direct(0.0, 1.0, 1.0, 1.0))?;
    suite.extend("zero-squeeze", &still.checks);
    for (name, value) in [
        ("mean-work", Some(still.mean_work)),
        ("inner-friction", Some(still.inner_friction)),
        ("mean-created", Some(still.mean_created)),
        ("mean-entropy", still.mean_entropy),
        ("kl-classical", still.kl_classical),
        ("kl-quantum", still.kl_quantum),
    ] {
        suite.push("zero-squeeze", format!("{name}-vanishes"), value.unwrap_or(f64::NAN).abs(), EXACT);
    }
    // A pure frequency change is all adiabatic work.
    let stretched = run_simulation(&RunConfig::direct(0.0, 1.0, 2.0, 1.0))?;
    suite.push(
        "zero-squeeze",
        "work-is-adiabatic",
        (stretched.mean_work - stretched.adiabatic_work).abs(),
        EXACT,
    );
    Ok(suite)
}

/// Vacuum column law and kernel symmetry on the report's own space.
fn kernel_checks(suite: &mut VerifyReport, point: &'static str, report: &RunReport) -> Result<(), AppError> {
    let config = &report.config;
    let z = SqueezeParameter::new(report.z)?;
    let spec = TruncationSpec::new(config.cutoff, config.leakage_tolerance)?;
    let kernel = transition_kernel(z, &spec)?;

    let t2 = z.tanh() * z.tanh();
    let c2 = z.cosh() * z.cosh();
    let mut law: f64 = 0.0;
    let mut expected = 1.0 / c2;
    for n in 0..=config.cutoff.min(10) {
        let p = kernel.prob(JointFockIndex::new(n, n), JointFockIndex::VACUUM);
        if expected > 0.0 {
            law = law.max((p - expected).abs() / expected);
        }
        expected *= t2;
    }
    suite.push(point, "vacuum-column-law", law, 1e-9);

    let mut asymmetry: f64 = 0.0;
    let top = config.cutoff.min(12);
    for na in 0..=top {
        for nb in 0..=top {
            let n = JointFockIndex::new(na, nb);
            for (m, p) in kernel.column(n) {
                asymmetry = asymmetry.max((p - kernel.prob(n, m)).abs());
            }
        }
    }
    suite.push(point, "kernel-symmetry", asymmetry, EXACT);
    Ok(())
}
