//! Thermal initial states and the mean-work bookkeeping of the squeeze.
//!
//! Both modes of the pair start in equilibrium at temperature `T` with
//! frequency `omega`. The joint Gibbs weights are geometric in the total
//! occupation, `p(n) = (1 - x)^2 x^{n_a + n_b}` with `x = exp(-omega / T)`,
//! renormalised over the truncated box. The zero-point energy cancels in
//! the weights but is kept in the work.

use alloc::vec::Vec;

use crate::fock::{JointFockIndex, SqueezeParameter, TransitionKernel, TruncationSpec};
use crate::math::{abs, ceil, exp, expm1, log};
use crate::{Error, Result};

/// Diagonal Gibbs state of the mode pair on a truncated space.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalDistribution {
    temperature: f64,
    omega: f64,
    cutoff: usize,
    // indexed by total occupation 0..=2N
    log_weights: Vec<f64>,
    weights: Vec<f64>,
    renorm_defect: f64,
}

impl ThermalDistribution {
    /// Gibbs weights at `(T, omega)`. `T = 0` gives the vacuum state.
    ///
    /// Fails when the box holds less than `1 - leakage_tolerance` of the
    /// untruncated thermal mass.
    pub fn new(temperature: f64, omega: f64, spec: &TruncationSpec) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::invalid("omega", omega, "must be finite and positive"));
        }
        if !(temperature >= 0.0 && temperature.is_finite()) {
            return Err(Error::invalid(
                "temperature",
                temperature,
                "must be finite and non-negative",
            ));
        }
        if temperature == 0.0 {
            return Ok(Self::vacuum(omega, spec));
        }
        let n = spec.cutoff();
        let beta_omega = omega / temperature;
        // 1 - x and 1 - x^{N+1}, without cancellation.
        let one_minus_x = -expm1(-beta_omega);
        let kept = -expm1(-beta_omega * (n + 1) as f64);
        let renorm_defect = 1.0 - kept * kept;
        if renorm_defect > spec.leakage_tolerance() {
            return Err(Error::Leakage {
                what: "thermal state",
                column: None,
                leaked: renorm_defect,
                tolerance: spec.leakage_tolerance(),
                suggested_cutoff: Some(thermal_cutoff(beta_omega, spec.leakage_tolerance())),
            });
        }
        let log_norm = 2.0 * log(one_minus_x) - 2.0 * log(kept);
        let log_weights: Vec<f64> = (0..=2 * n)
            .map(|t| log_norm - beta_omega * t as f64)
            .collect();
        let weights = log_weights.iter().map(|&l| exp(l)).collect();
        Ok(Self {
            temperature,
            omega,
            cutoff: n,
            log_weights,
            weights,
            renorm_defect,
        })
    }

    /// Point mass on `(0, 0)`.
    pub fn vacuum(omega: f64, spec: &TruncationSpec) -> Self {
        let n = spec.cutoff();
        let mut weights = alloc::vec![0.0; 2 * n + 1];
        let mut log_weights = alloc::vec![f64::NEG_INFINITY; 2 * n + 1];
        weights[0] = 1.0;
        log_weights[0] = 0.0;
        Self {
            temperature: 0.0,
            omega,
            cutoff: n,
            log_weights,
            weights,
            renorm_defect: 0.0,
        }
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn is_vacuum(&self) -> bool {
        self.temperature == 0.0
    }

    /// Untruncated thermal mass outside the box, removed by renormalising.
    pub fn renorm_defect(&self) -> f64 {
        self.renorm_defect
    }

    pub fn weight(&self, n: JointFockIndex) -> f64 {
        self.weights[n.total()]
    }

    pub fn log_weight(&self, n: JointFockIndex) -> f64 {
        self.log_weights[n.total()]
    }

    /// Weight of one microstate with the given total occupation.
    pub fn weight_of_total(&self, total: usize) -> f64 {
        self.weights[total]
    }

    /// `<n_a + n_b>` over the box.
    pub fn mean_total(&self) -> f64 {
        let n = self.cutoff;
        self.weights
            .iter()
            .enumerate()
            .map(|(t, w)| t as f64 * w * sector_size(n, t) as f64)
            .sum()
    }

    /// Sum of all weights over the box (one up to rounding).
    pub fn total_mass(&self) -> f64 {
        let n = self.cutoff;
        self.weights
            .iter()
            .enumerate()
            .map(|(t, w)| w * sector_size(n, t) as f64)
            .sum()
    }
}

/// Number of states with `n_a + n_b = total` inside the box.
fn sector_size(cutoff: usize, total: usize) -> usize {
    if total <= cutoff {
        total + 1
    } else {
        2 * cutoff + 1 - total
    }
}

fn thermal_cutoff(beta_omega: f64, tol: f64) -> usize {
    // 1 - (1 - y)^2 <= 2y with y = x^{N+1}
    let needed = log(tol / 2.0) / -beta_omega - 1.0;
    ceil(needed.max(0.0)) as usize
}

/// `<n_a + n_b>` of the untruncated thermal pair: `2 / (exp(omega / T) - 1)`.
pub fn mean_initial_closed_form(temperature: f64, omega: f64) -> f64 {
    if temperature == 0.0 {
        return 0.0;
    }
    2.0 / expm1(omega / temperature)
}

/// `(omega_out - omega_in) (<n_i> + 1)`, the work of a quantum adiabatic
/// change of frequency.
pub fn adiabatic_work(temperature: f64, omega_in: f64, omega_out: f64) -> f64 {
    (omega_out - omega_in) * (mean_initial_closed_form(temperature, omega_in) + 1.0)
}

/// `<n_c> = 2 sinh^2 z (<n_i> + 1)`, from the Heisenberg-picture number
/// operator `S^dagger a^dagger a S = cosh^2 z a^dagger a + sinh^2 z b b^dagger + ...`.
pub fn mean_created_closed_form(z: SqueezeParameter, temperature: f64, omega: f64) -> f64 {
    2.0 * z.sinh() * z.sinh() * (mean_initial_closed_form(temperature, omega) + 1.0)
}

/// Smallest cutoff for which the thermally weighted kernel leakage is
/// expected to stay below `tol`.
///
/// Each output mode is thermal with mean `cosh 2z nbar + sinh^2 z`; the mass
/// above `N` in either of the two modes is about `2 r^{N+1}` with
/// `r = nbar_f / (nbar_f + 1)`.
pub fn suggested_cutoff(z: SqueezeParameter, temperature: f64, omega: f64, tol: f64) -> usize {
    let nbar = mean_initial_closed_form(temperature, omega) / 2.0;
    let s2 = z.sinh() * z.sinh();
    let nbar_f = (1.0 + 2.0 * s2) * nbar + s2;
    if nbar_f == 0.0 {
        return 0;
    }
    let r = nbar_f / (nbar_f + 1.0);
    let needed = log(tol / 2.0) / log(r) - 1.0;
    ceil(needed.max(0.0)) as usize
}

/// Mean work and its decomposition for one thermal run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorkReport {
    /// `<W> = omega_out (<n_f> + 1) - omega_in (<n_i> + 1)`.
    pub mean_work: f64,
    /// `(omega_out - omega_in) (<n_i> + 1)`.
    pub adiabatic_work: f64,
    /// `<W> - W_ad`.
    pub inner_friction: f64,
    pub mean_initial: f64,
    pub mean_final: f64,
    /// `sum_{n,m} (total(m) - total(n)) p(m|n) p(n)`.
    pub mean_created: f64,
    pub omega_in: f64,
    pub omega_out: f64,
    /// `T omega_out / omega_in`; `None` on the vacuum path.
    pub adiabatic_temperature: Option<f64>,
    /// Bound on the cutoff-induced error of `<W>` and `W_fric`.
    pub truncation_bound: f64,
    /// `sum_n p(n) leak(n)`.
    pub weighted_leakage: f64,
}

/// Contracts the kernel with the thermal weights.
///
/// Fails with a leakage error carrying a suggested cutoff when the
/// thermally weighted leakage exceeds the tolerance of the kernel's space.
pub fn average_work(
    kernel: &TransitionKernel,
    thermal: &ThermalDistribution,
    omega_in: f64,
    omega_out: f64,
) -> Result<WorkReport> {
    let spec = kernel.spec();
    if spec.cutoff() != thermal.cutoff() {
        return Err(Error::SpaceMismatch {
            left: spec.cutoff(),
            right: thermal.cutoff(),
        });
    }
    let z = kernel.squeeze();
    let c2 = z.cosh() * z.cosh() + z.sinh() * z.sinh();
    let layout = spec.layout();

    let mut mean_initial = 0.0;
    let mut mean_final = 0.0;
    let mut mean_created = 0.0;
    let mut weighted_leakage = 0.0;
    let mut leaked_quanta = 0.0;
    let mut missing_final = 0.0;
    for d in layout.sectors() {
        for qn in 0..layout.block_len(d.unsigned_abs() as usize) {
            let n = layout.state(d, qn);
            let w = thermal.weight(n);
            if w == 0.0 {
                continue;
            }
            let tn = n.total() as f64;
            let mut kept_final = 0.0;
            let mut created = 0.0;
            for (m, p) in kernel.column(n) {
                let tm = m.total() as f64;
                kept_final += tm * p;
                created += (tm - tn) * p;
            }
            let leak = kernel.column_leakage(n);
            mean_initial += w * tn;
            mean_final += w * kept_final;
            mean_created += w * created;
            weighted_leakage += w * leak;
            leaked_quanta += w * tn * leak;
            // The untruncated column has <total> = cosh 2z (total(n) + 1) - 1.
            missing_final += w * (c2 * (tn + 1.0) - 1.0 - kept_final).max(0.0);
        }
    }

    let tol = spec.leakage_tolerance();
    if weighted_leakage > tol {
        return Err(Error::Leakage {
            what: "thermally weighted kernel",
            column: None,
            leaked: weighted_leakage,
            tolerance: tol,
            suggested_cutoff: Some(suggested_cutoff(z, thermal.temperature(), thermal.omega(), tol)),
        });
    }

    let mean_work = omega_out * (mean_final + 1.0) - omega_in * (mean_initial + 1.0);
    let adiabatic_work = (omega_out - omega_in) * (mean_initial + 1.0);
    let initial_gap = abs(mean_initial_closed_form(thermal.temperature(), thermal.omega()) - mean_initial);
    let truncation_bound = omega_out * (missing_final + leaked_quanta)
        + (omega_out * c2 + omega_in) * initial_gap;

    Ok(WorkReport {
        mean_work,
        adiabatic_work,
        inner_friction: mean_work - adiabatic_work,
        mean_initial,
        mean_final,
        mean_created,
        omega_in,
        omega_out,
        adiabatic_temperature: (!thermal.is_vacuum())
            .then(|| thermal.temperature() * omega_out / omega_in),
        truncation_bound,
        weighted_leakage,
    })
}

/// `(W_fric, <n_c>)`, after checking `W_fric = omega_out <n_c>` within the
/// truncation bound.
pub fn inner_friction(report: &WorkReport) -> Result<(f64, f64)> {
    let residual = abs(report.inner_friction - report.omega_out * report.mean_created);
    let rounding = 1e-12 * report.mean_work.abs().max(1.0);
    Error::check(
        "inner friction equals omega_out times created pairs",
        residual,
        report.truncation_bound + rounding,
    )?;
    Ok((report.inner_friction, report.mean_created))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::transition_kernel;

    const E: f64 = core::f64::consts::E;

    fn spec(n: usize) -> TruncationSpec {
        TruncationSpec::new(n, 1e-8).unwrap()
    }

    #[test]
    fn gibbs_weights() {
        let th = ThermalDistribution::new(1.0, 1.0, &spec(40)).unwrap();
        let x = 1.0 / E;
        assert!((th.weight(JointFockIndex::VACUUM) - (1.0 - x) * (1.0 - x)).abs() < 1e-15);
        assert!((th.weight(JointFockIndex::VACUUM) - 0.399_576_400_894).abs() < 1e-12);
        assert!((th.weight(JointFockIndex::new(1, 0)) - 0.146_995_943_066).abs() < 1e-12);
        assert_eq!(th.weight(JointFockIndex::new(1, 0)), th.weight(JointFockIndex::new(0, 1)));
        assert!((th.weight(JointFockIndex::new(1, 1)) - 0.054_076_785_390).abs() < 1e-12);
        assert!((th.total_mass() - 1.0).abs() < 1e-14);
        assert!((th.mean_total() - 1.163_953_413_739).abs() < 1e-12);
        assert!(th.renorm_defect() < 1e-16);
    }

    #[test]
    fn cold_limit_and_vacuum() {
        let th = ThermalDistribution::new(1e-3, 1.0, &spec(10)).unwrap();
        assert!((th.weight(JointFockIndex::VACUUM) - 1.0).abs() < 1e-300 + 1e-15);
        let vac = ThermalDistribution::new(0.0, 1.0, &spec(10)).unwrap();
        assert!(vac.is_vacuum());
        assert_eq!(vac.weight(JointFockIndex::VACUUM), 1.0);
        assert_eq!(vac.weight(JointFockIndex::new(1, 0)), 0.0);
        assert_eq!(vac.mean_total(), 0.0);
    }

    #[test]
    fn hot_state_needs_a_larger_box() {
        let err = ThermalDistribution::new(5.0, 1.0, &spec(10)).unwrap_err();
        match err {
            Error::Leakage { suggested_cutoff: Some(n), .. } => {
                assert!(ThermalDistribution::new(5.0, 1.0, &spec(n)).is_ok());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn adiabatic_work_closed_form() {
        assert_eq!(adiabatic_work(1.0, 1.0, 1.0), 0.0);
        assert!((adiabatic_work(1.0, 1.0, 2.0) - 2.163_953_413_739).abs() < 1e-12);
        assert_eq!(adiabatic_work(0.0, 1.0, 2.0), 1.0);
    }

    #[test]
    fn canonical_work() {
        let z = SqueezeParameter::from_tanh(0.5).unwrap();
        let s = spec(40);
        let k = transition_kernel(z, &s).unwrap();
        let th = ThermalDistribution::new(1.0, 1.0, &s).unwrap();
        let r = average_work(&k, &th, 1.0, 2.0).unwrap();
        // Reference values come from exponentiating the truncated generator,
        // which keeps the box closed; the kernel leaks instead. Both agree
        // within the reported truncation bound.
        assert!(r.truncation_bound < 1e-7);
        assert!((r.mean_work - 5.049_224_630_526).abs() < r.truncation_bound);
        assert!((r.adiabatic_work - 2.163_953_413_739).abs() < 1e-12);
        assert!((r.inner_friction - 2.885_271_216_787).abs() < r.truncation_bound);
        assert!((r.mean_created - 1.442_635_608_394).abs() < r.truncation_bound);
        assert_eq!(r.adiabatic_temperature, Some(2.0));
        let (fric, created) = inner_friction(&r).unwrap();
        assert_eq!(fric, r.inner_friction);
        let closed = mean_created_closed_form(z, 1.0, 1.0);
        assert!((closed - 1.442_635_609_159).abs() < 1e-12);
        assert!((created - closed).abs() < 1e-6 * closed);
    }

    #[test]
    fn vacuum_creation() {
        let z = SqueezeParameter::from_tanh(0.5).unwrap();
        let s = spec(40);
        let k = transition_kernel(z, &s).unwrap();
        let th = ThermalDistribution::vacuum(1.0, &s);
        let r = average_work(&k, &th, 1.0, 2.0).unwrap();
        assert!((r.mean_created - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(r.adiabatic_temperature, None);
        assert!((mean_created_closed_form(z, 0.0, 1.0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn no_squeeze_means_adiabatic() {
        let s = spec(30);
        let k = transition_kernel(SqueezeParameter::ZERO, &s).unwrap();
        let th = ThermalDistribution::new(1.0, 1.0, &s).unwrap();
        let r = average_work(&k, &th, 1.0, 2.0).unwrap();
        assert_eq!(r.mean_work, r.adiabatic_work);
        assert_eq!(r.inner_friction, 0.0);
        assert_eq!(r.mean_created, 0.0);
        let r = average_work(&k, &th, 1.0, 1.0).unwrap();
        assert_eq!(r.mean_work, 0.0);
    }

    #[test]
    fn thermal_leakage_suggests_cutoff() {
        let z = SqueezeParameter::new(1.0).unwrap();
        let s = TruncationSpec::new(40, 1e-8).unwrap();
        let k = transition_kernel(z, &s).unwrap();
        let th = ThermalDistribution::new(2.0, 1.0, &TruncationSpec::new(40, 1e-2).unwrap()).unwrap();
        let err = average_work(&k, &th, 1.0, 1.0).unwrap_err();
        match err {
            Error::Leakage { suggested_cutoff: Some(n), .. } => assert!(n > 40),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mismatched_spaces() {
        let k = transition_kernel(SqueezeParameter::ZERO, &spec(20)).unwrap();
        let th = ThermalDistribution::new(1.0, 1.0, &spec(22)).unwrap();
        assert_eq!(
            average_work(&k, &th, 1.0, 1.0).unwrap_err(),
            Error::SpaceMismatch { left: 20, right: 22 }
        );
    }
}
