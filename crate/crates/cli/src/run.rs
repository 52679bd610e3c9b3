//! One configured point, end to end: scenario, kernel, thermal averages,
//! entropy statistics and the identities that tie them together.

use cosmoflux_core::fluctuation::{
    crooks_check, entropy_distributions, entropy_friction_identity, forward_joint,
    integral_fluctuation, mean_entropy_and_kl, quantum_relative_entropy, reverse_joint,
};
use cosmoflux_core::thermo::{average_work, mean_created_closed_form};
use cosmoflux_core::{tolerances, transition_kernel, ThermalDistribution, TruncationSpec};

use crate::config::{RunConfig, ScenarioKind};
use crate::error::AppError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

/// A measured residual against its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub status: Status,
}

impl Check {
    fn measured(name: &'static str, residual: f64, tolerance: f64) -> Self {
        let status = if residual <= tolerance { Status::Pass } else { Status::Fail };
        Self {
            name,
            residual: Some(residual),
            tolerance,
            status,
        }
    }

    fn skipped(name: &'static str, tolerance: f64) -> Self {
        Self {
            name,
            residual: None,
            tolerance,
            status: Status::Skip,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub config: RunConfig,
    pub z: f64,
    pub omega_in: f64,
    pub omega_out: f64,
    pub formal_extension: bool,
    pub mean_work: f64,
    pub adiabatic_work: f64,
    pub inner_friction: f64,
    pub mean_created: f64,
    pub mean_created_closed_form: f64,
    /// `None` on the zero-temperature path.
    pub mean_entropy: Option<f64>,
    pub kl_classical: Option<f64>,
    pub kl_quantum: Option<f64>,
    pub crooks_dev: Option<f64>,
    pub integral_fluctuation: Option<f64>,
    pub weighted_leakage: f64,
    pub truncation_bound: f64,
    pub thermal_defect: f64,
    pub checks: Vec<Check>,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    /// `name=status` items joined by `;`, then notices.
    pub fn flags(&self) -> String {
        let mut items: Vec<String> = self
            .checks
            .iter()
            .map(|c| format!("{}={}", c.name, c.status.label()))
            .collect();
        if self.mean_entropy.is_none() {
            items.push("vacuum-path".into());
        }
        if self.formal_extension {
            items.push("formal-extension".into());
        }
        items.join(";")
    }
}

pub fn run_simulation(config: &RunConfig) -> Result<RunReport, AppError> {
    let channel = config.scenario()?.channel()?;
    let spec = TruncationSpec::new(config.cutoff, config.leakage_tolerance)?;
    let kernel = transition_kernel(channel.z, &spec)?;
    let thermal = ThermalDistribution::new(config.temperature, channel.omega_in, &spec)?;
    let work = average_work(&kernel, &thermal, channel.omega_in, channel.omega_out)?;

    let mut checks = Vec::new();
    // Same tolerance as the library's own W_fric = omega_out <n_c> check.
    let rounding = 1e-12 * work.mean_work.abs().max(1.0);
    let friction_tolerance = work.truncation_bound + rounding;
    checks.push(Check::measured(
        "friction-created",
        abs_gap(work.inner_friction, work.omega_out * work.mean_created),
        friction_tolerance,
    ));
    checks.push(Check::measured(
        "second-law",
        (-work.inner_friction).max(0.0),
        friction_tolerance,
    ));
    let closed = mean_created_closed_form(channel.z, config.temperature, channel.omega_in);
    checks.push(Check::measured(
        "created-closed-form",
        abs_gap(work.mean_created, closed),
        tolerances::CREATED_CLOSED_FORM,
    ));

    let t_ad = work.adiabatic_temperature;
    let mut report = RunReport {
        config: config.clone(),
        z: channel.z.z(),
        omega_in: channel.omega_in,
        omega_out: channel.omega_out,
        formal_extension: channel.formal_extension,
        mean_work: work.mean_work,
        adiabatic_work: work.adiabatic_work,
        inner_friction: work.inner_friction,
        mean_created: work.mean_created,
        mean_created_closed_form: closed,
        mean_entropy: None,
        kl_classical: None,
        kl_quantum: None,
        crooks_dev: None,
        integral_fluctuation: None,
        weighted_leakage: work.weighted_leakage,
        truncation_bound: work.truncation_bound,
        thermal_defect: thermal.renorm_defect(),
        checks,
    };

    if t_ad.is_none() {
        for (name, tol) in ENTROPY_CHECKS {
            report.checks.push(Check::skipped(name, tol));
        }
        return Ok(report);
    }

    let fwd = forward_joint(&kernel, &thermal)?;
    let rev = reverse_joint(&kernel, &thermal)?;
    let (p_e, p_c) = entropy_distributions(&fwd, &rev, channel.omega_out, t_ad)?;
    let crooks = crooks_check(&fwd, &rev, &p_e, &p_c, channel.omega_out, t_ad)?;
    let ekl = mean_entropy_and_kl(&p_e, &p_c)?;
    let identity = entropy_friction_identity(&work, ekl.mean_entropy)?;
    let ifr = integral_fluctuation(&p_e);
    let qre = quantum_relative_entropy(&thermal, kernel.amplitudes(), &work)?;

    report.mean_entropy = Some(ekl.mean_entropy);
    report.kl_classical = Some(ekl.kl);
    report.kl_quantum = Some(qre.relative_entropy);
    report.crooks_dev = Some(crooks.distribution_deviation);
    report.integral_fluctuation = Some(ifr);

    let c = &mut report.checks;
    c.push(Check::measured(
        "crooks-microstate",
        crooks.microstate_residual,
        tolerances::CROOKS_MICROSTATE,
    ));
    c.push(Check::measured(
        "crooks-distribution",
        crooks.distribution_deviation,
        tolerances::CROOKS_DISTRIBUTION,
    ));
    c.push(Check::measured("kl-identity", ekl.residual(), tolerances::KL_IDENTITY));
    c.push(Check::measured(
        "entropy-nonnegative",
        (-ekl.mean_entropy).max(0.0),
        -tolerances::ENTROPY_NONNEGATIVE,
    ));
    c.push(Check::measured(
        "entropy-friction",
        identity.friction_residual(),
        tolerances::FRICTION_IDENTITY,
    ));
    c.push(Check::measured(
        "entropy-created",
        identity.created_residual(),
        tolerances::FRICTION_IDENTITY,
    ));
    c.push(Check::measured(
        "integral-fluctuation",
        abs_gap(ifr, 1.0),
        tolerances::INTEGRAL_FLUCTUATION,
    ));
    c.push(Check::measured(
        "quantum-relative-entropy",
        qre.relative_residual(),
        tolerances::QUANTUM_RELATIVE_ENTROPY,
    ));
    Ok(report)
}

const ENTROPY_CHECKS: [(&str, f64); 8] = [
    ("crooks-microstate", tolerances::CROOKS_MICROSTATE),
    ("crooks-distribution", tolerances::CROOKS_DISTRIBUTION),
    ("kl-identity", tolerances::KL_IDENTITY),
    ("entropy-nonnegative", -tolerances::ENTROPY_NONNEGATIVE),
    ("entropy-friction", tolerances::FRICTION_IDENTITY),
    ("entropy-created", tolerances::FRICTION_IDENTITY),
    ("integral-fluctuation", tolerances::INTEGRAL_FLUCTUATION),
    ("quantum-relative-entropy", tolerances::QUANTUM_RELATIVE_ENTROPY),
];

fn abs_gap(a: f64, b: f64) -> f64 {
    (a - b).abs()
}

/// `(k, m, epsilon, sigma)` echoed into reports; empty outside cosmology.
pub fn cosmology_echo(config: &RunConfig) -> [Option<f64>; 4] {
    if config.scenario == ScenarioKind::Cosmology {
        [config.k, config.m, config.epsilon, config.sigma]
    } else {
        [None; 4]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_squeeze_is_trivial() {
        let r = run_simulation(&RunConfig::direct(0.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(r.mean_work, 0.0);
        assert_eq!(r.inner_friction, 0.0);
        assert_eq!(r.mean_created, 0.0);
        assert_eq!(r.mean_entropy, Some(0.0));
        assert!(r.kl_classical.unwrap().abs() <= 1e-12);
        assert!(r.kl_quantum.unwrap().abs() <= 1e-12);
        assert!(r.passed(), "{}", r.flags());
    }

    #[test]
    fn canonical_point_passes() {
        let r = run_simulation(&RunConfig::canonical()).unwrap();
        assert!(r.passed(), "{}", r.flags());
        assert!((r.mean_work - 5.049_224_630_526).abs() <= r.truncation_bound);
        assert!((r.mean_entropy.unwrap() - 1.442_635_608_394).abs() <= 1e-6);
    }

    #[test]
    fn zero_temperature_skips_entropy() {
        let mut c = RunConfig::canonical();
        c.temperature = 0.0;
        let r = run_simulation(&c).unwrap();
        assert_eq!(r.mean_entropy, None);
        assert!(r.flags().contains("vacuum-path"));
        assert!((r.mean_created - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn cosmology_reference_point() {
        let r = run_simulation(&RunConfig::cosmology(1.0, 1.0, 1.0, 1.0, 1.0)).unwrap();
        assert!((r.z - 0.009_895_078_074_440_64).abs() < 1e-15);
        assert!((r.mean_created - r.mean_created_closed_form).abs() < 1e-12);
        // omega_in = sqrt(2) here, so <n_i> uses that frequency
        assert!((r.mean_created - 3.216_367_239_832_2e-4).abs() < 1e-14, "{}", r.mean_created);
    }

    #[test]
    fn tight_cutoff_is_a_leakage_error() {
        let mut c = RunConfig::direct(1.2, 1.0, 2.0, 1.0);
        c.cutoff = 8;
        let err = run_simulation(&c).unwrap_err();
        assert_eq!(err.exit_code(), 3, "{err}");
    }
}
