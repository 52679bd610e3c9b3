//! Two-point-measurement entropy statistics of the squeeze.
//!
//! Energies are measured in the joint Fock basis before and after the
//! squeeze. For a thermal start the entropy change of a microstate
//! transition `n -> m` is `s = (omega_out / T_ad) (total(m) - total(n))`,
//! which equals `log p(n) - log p(m)` exactly because the Gibbs weights are
//! geometric. Every identity checked here follows from that and from the
//! symmetry `p(m|n) = p(n|m)` of the kernel.

use alloc::vec;
use alloc::vec::Vec;

use crate::fock::{BlockOperator, JointFockIndex, TransitionKernel};
use crate::linalg::jacobi_svd_left;
use crate::math::{abs, exp, log, sqrt};
use crate::thermo::{ThermalDistribution, WorkReport};
use crate::tolerances;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Thermal start, then the squeeze.
    Expansion,
    /// Thermal start for the final Hamiltonian, then the inverse squeeze.
    Contraction,
}

/// Joint probabilities `p(from -> to)` of a two-point measurement.
#[derive(Debug, Clone, Copy)]
pub struct ProcessJoint<'a> {
    kernel: &'a TransitionKernel,
    thermal: &'a ThermalDistribution,
    direction: Direction,
}

fn check_space(kernel: &TransitionKernel, thermal: &ThermalDistribution) -> Result<()> {
    let left = kernel.spec().cutoff();
    let right = thermal.cutoff();
    if left == right {
        Ok(())
    } else {
        Err(Error::SpaceMismatch { left, right })
    }
}

/// `p(n -> m) = p(m|n) p(n)`.
pub fn forward_joint<'a>(
    kernel: &'a TransitionKernel,
    thermal: &'a ThermalDistribution,
) -> Result<ProcessJoint<'a>> {
    check_space(kernel, thermal)?;
    Ok(ProcessJoint {
        kernel,
        thermal,
        direction: Direction::Expansion,
    })
}

/// `q(m -> n) = q(n|m) q(m)` with `q(n|m) = p(m|n)`, and `q(m)` the Gibbs
/// weight at `(T_ad, omega_out)`, which coincides with the weight at
/// `(T, omega_in)` because `omega_out / T_ad = omega_in / T`.
pub fn reverse_joint<'a>(
    kernel: &'a TransitionKernel,
    thermal: &'a ThermalDistribution,
) -> Result<ProcessJoint<'a>> {
    check_space(kernel, thermal)?;
    Ok(ProcessJoint {
        kernel,
        thermal,
        direction: Direction::Contraction,
    })
}

impl<'a> ProcessJoint<'a> {
    pub fn direction(&self) -> Direction {
        self.direction
    }

    pub fn kernel(&self) -> &'a TransitionKernel {
        self.kernel
    }

    pub fn thermal(&self) -> &'a ThermalDistribution {
        self.thermal
    }

    /// Conditional probability of reaching `to` from `from`.
    pub fn conditional(&self, from: JointFockIndex, to: JointFockIndex) -> f64 {
        match self.direction {
            Direction::Expansion => self.kernel.prob(to, from),
            Direction::Contraction => self.kernel.prob(from, to),
        }
    }

    /// `p(from -> to)`.
    pub fn prob(&self, from: JointFockIndex, to: JointFockIndex) -> f64 {
        self.conditional(from, to) * self.thermal.weight(from)
    }

    /// Visits every in-sector pair `(from, to, p(from -> to))` whose start
    /// state carries weight.
    pub fn for_each(&self, mut f: impl FnMut(JointFockIndex, JointFockIndex, f64)) {
        let layout = self.kernel.spec().layout();
        for d in layout.sectors() {
            let len = layout.block_len(d.unsigned_abs() as usize);
            for qf in 0..len {
                let from = layout.state(d, qf);
                let w = self.thermal.weight(from);
                if w == 0.0 {
                    continue;
                }
                for qt in 0..len {
                    let to = layout.state(d, qt);
                    f(from, to, self.conditional(from, to) * w);
                }
            }
        }
    }

    pub fn total_mass(&self) -> f64 {
        let mut total = 0.0;
        self.for_each(|_, _, p| total += p);
        total
    }
}

/// `s(n -> m) = (omega_out / T_ad) (total(m) - total(n))`.
pub fn entropy_change(
    n: JointFockIndex,
    m: JointFockIndex,
    omega_out: f64,
    adiabatic_temperature: Option<f64>,
) -> Result<f64> {
    let t_ad = adiabatic_temperature
        .filter(|t| *t > 0.0)
        .ok_or(Error::UndefinedEntropy)?;
    Ok(omega_out / t_ad * (m.total() as f64 - n.total() as f64))
}

/// Finitely supported distribution over entropy changes, sorted by `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyDistribution {
    support: Vec<f64>,
    masses: Vec<f64>,
    resolution: f64,
}

impl EntropyDistribution {
    /// Aggregates `(s, mass)` pairs, merging values within `resolution`.
    pub fn from_samples(samples: impl IntoIterator<Item = (f64, f64)>, resolution: f64) -> Self {
        let mut pairs: Vec<(f64, f64)> = samples.into_iter().collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut support: Vec<f64> = Vec::new();
        let mut masses: Vec<f64> = Vec::new();
        for (s, p) in pairs {
            match support.last() {
                Some(&last) if abs(s - last) <= resolution => {
                    *masses.last_mut().unwrap() += p;
                }
                _ => {
                    support.push(s);
                    masses.push(p);
                }
            }
        }
        Self {
            support,
            masses,
            resolution,
        }
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn resolution(&self) -> f64 {
        self.resolution
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.support.iter().copied().zip(self.masses.iter().copied())
    }

    /// Mass at the support point within `resolution` of `s`, or zero.
    pub fn mass_at(&self, s: f64) -> f64 {
        let i = self.support.partition_point(|&x| x < s - self.resolution);
        match self.support.get(i) {
            Some(&x) if abs(x - s) <= self.resolution => self.masses[i],
            _ => 0.0,
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.masses.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(s, p)| s * p).sum()
    }
}

/// `(P_E, P_C)`: the forward distribution of `s(n -> m)` and the reverse
/// distribution of the contraction's own entropy change
/// `s(m -> n) = -s(n -> m)`, so that `P_C(-s)` pairs with `P_E(s)`.
pub fn entropy_distributions(
    forward: &ProcessJoint<'_>,
    reverse: &ProcessJoint<'_>,
    omega_out: f64,
    adiabatic_temperature: Option<f64>,
) -> Result<(EntropyDistribution, EntropyDistribution)> {
    let t_ad = adiabatic_temperature
        .filter(|t| *t > 0.0)
        .ok_or(Error::UndefinedEntropy)?;
    let scale = omega_out / t_ad;
    // Entropy changes are multiples of `scale`; aggregate by the integer
    // change in total occupation first.
    let cutoff = forward.kernel.spec().cutoff();
    let offset = 2 * cutoff;
    let mut fwd = vec![0.0; 4 * cutoff + 1];
    let mut rev = vec![0.0; 4 * cutoff + 1];
    forward.for_each(|n, m, p| fwd[offset + m.total() - n.total()] += p);
    reverse.for_each(|m, n, p| rev[offset + n.total() - m.total()] += p);
    let spread = |masses: Vec<f64>| {
        EntropyDistribution::from_samples(
            masses
                .into_iter()
                .enumerate()
                .filter(|(_, p)| *p > 0.0)
                .map(|(i, p)| (scale * (i as f64 - offset as f64), p)),
            tolerances::ENTROPY_BINNING,
        )
    };
    Ok((spread(fwd), spread(rev)))
}

/// Measured deviations from `P_E(s) / P_C(-s) = e^s`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrooksCheck {
    /// `max |log P_E(s) - log P_C(-s) - s|` over `P_E(s) > floor`.
    pub distribution_deviation: f64,
    /// `max |log p(n -> m) - log q(m -> n) - s(n -> m)|` over microstates.
    pub microstate_residual: f64,
    /// Forward mass on support points below the floor.
    pub floored_mass: f64,
}

impl CrooksCheck {
    pub fn verify(&self) -> Result<()> {
        Error::check(
            "microstate Crooks residual",
            self.microstate_residual,
            tolerances::CROOKS_MICROSTATE,
        )?;
        Error::check(
            "distribution Crooks deviation",
            self.distribution_deviation,
            tolerances::CROOKS_DISTRIBUTION,
        )
    }
}

/// Distribution-level Crooks deviation, plus the floored mass.
pub fn crooks_deviation(p_e: &EntropyDistribution, p_c: &EntropyDistribution) -> Result<(f64, f64)> {
    let mut deviation: f64 = 0.0;
    let mut floored = 0.0;
    for (s, pe) in p_e.iter() {
        if pe <= tolerances::PROBABILITY_FLOOR {
            floored += pe;
            continue;
        }
        let pc = p_c.mass_at(-s);
        if pc <= 0.0 {
            return Err(Error::SupportMismatch {
                s,
                forward_mass: pe,
            });
        }
        deviation = deviation.max(abs(log(pe) - log(pc) - s));
    }
    Ok((deviation, floored))
}

/// Microstate-level residual of `p(n -> m) = q(m -> n) e^{s(n -> m)}`,
/// evaluated in the log domain over pairs with nonzero transition
/// probability.
pub fn microstate_crooks_residual(
    forward: &ProcessJoint<'_>,
    reverse: &ProcessJoint<'_>,
    omega_out: f64,
    adiabatic_temperature: Option<f64>,
) -> Result<f64> {
    let t_ad = adiabatic_temperature
        .filter(|t| *t > 0.0)
        .ok_or(Error::UndefinedEntropy)?;
    let scale = omega_out / t_ad;
    let thermal = forward.thermal;
    let mut worst: f64 = 0.0;
    forward.for_each(|n, m, _| {
        let p = forward.conditional(n, m);
        let q = reverse.conditional(m, n);
        if p > 0.0 && q > 0.0 {
            let lhs = log(p) + thermal.log_weight(n);
            let rhs = log(q) + reverse.thermal.log_weight(m);
            let s = scale * (m.total() as f64 - n.total() as f64);
            worst = worst.max(abs(lhs - rhs - s));
        }
    });
    Ok(worst)
}

/// Both Crooks checks at once.
pub fn crooks_check(
    forward: &ProcessJoint<'_>,
    reverse: &ProcessJoint<'_>,
    p_e: &EntropyDistribution,
    p_c: &EntropyDistribution,
    omega_out: f64,
    adiabatic_temperature: Option<f64>,
) -> Result<CrooksCheck> {
    let (distribution_deviation, floored_mass) = crooks_deviation(p_e, p_c)?;
    let microstate_residual =
        microstate_crooks_residual(forward, reverse, omega_out, adiabatic_temperature)?;
    Ok(CrooksCheck {
        distribution_deviation,
        microstate_residual,
        floored_mass,
    })
}

/// `sum_s P_E(s) e^{-s}`.
pub fn integral_fluctuation(p_e: &EntropyDistribution) -> f64 {
    p_e.iter().map(|(s, p)| p * exp(-s)).sum()
}

pub fn verify_integral_fluctuation(value: f64) -> Result<()> {
    Error::check(
        "integral fluctuation relation",
        abs(value - 1.0),
        tolerances::INTEGRAL_FLUCTUATION,
    )
}

/// Mean entropy production and the classical relative entropy
/// `K[P_E(s) || P_C(-s)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyKl {
    pub mean_entropy: f64,
    pub kl: f64,
}

impl EntropyKl {
    pub fn residual(&self) -> f64 {
        abs(self.mean_entropy - self.kl)
    }

    pub fn verify(&self) -> Result<()> {
        Error::check("mean entropy equals relative entropy", self.residual(), tolerances::KL_IDENTITY)?;
        Error::check(
            "mean entropy is non-negative",
            -self.mean_entropy,
            -tolerances::ENTROPY_NONNEGATIVE,
        )
    }
}

pub fn mean_entropy_and_kl(p_e: &EntropyDistribution, p_c: &EntropyDistribution) -> Result<EntropyKl> {
    let mut kl = 0.0;
    for (s, pe) in p_e.iter() {
        if pe <= tolerances::PROBABILITY_FLOOR {
            continue;
        }
        let pc = p_c.mass_at(-s);
        if pc <= 0.0 {
            return Err(Error::SupportMismatch {
                s,
                forward_mass: pe,
            });
        }
        kl += pe * (log(pe) - log(pc));
    }
    Ok(EntropyKl {
        mean_entropy: p_e.mean(),
        kl,
    })
}

/// `<s>` against `W_fric / T_ad` and `(omega_out / T_ad) <n_c>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrictionIdentity {
    pub mean_entropy: f64,
    pub friction_over_temperature: f64,
    pub created_term: f64,
}

impl FrictionIdentity {
    pub fn friction_residual(&self) -> f64 {
        abs(self.mean_entropy - self.friction_over_temperature)
    }

    pub fn created_residual(&self) -> f64 {
        abs(self.mean_entropy - self.created_term)
    }

    pub fn verify(&self) -> Result<()> {
        Error::check(
            "entropy equals inner friction over temperature",
            self.friction_residual(),
            tolerances::FRICTION_IDENTITY,
        )?;
        Error::check(
            "entropy equals scaled particle creation",
            self.created_residual(),
            tolerances::FRICTION_IDENTITY,
        )
    }
}

/// Fails with [`Error::UndefinedEntropy`] on the vacuum path.
pub fn entropy_friction_identity(report: &WorkReport, mean_entropy: f64) -> Result<FrictionIdentity> {
    let t_ad = report
        .adiabatic_temperature
        .filter(|t| *t > 0.0)
        .ok_or(Error::UndefinedEntropy)?;
    Ok(FrictionIdentity {
        mean_entropy,
        friction_over_temperature: report.inner_friction / t_ad,
        created_term: report.omega_out / t_ad * report.mean_created,
    })
}

/// `K[rho || rho']` with `rho' = S rho S^T`, next to `W_fric`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantumRelativeEntropy {
    pub relative_entropy: f64,
    pub adiabatic_temperature: f64,
    pub inner_friction: f64,
}

impl QuantumRelativeEntropy {
    pub fn scaled(&self) -> f64 {
        self.adiabatic_temperature * self.relative_entropy
    }

    /// `|T_ad K - W_fric| / max(1, W_fric)`.
    pub fn relative_residual(&self) -> f64 {
        abs(self.scaled() - self.inner_friction) / self.inner_friction.abs().max(1.0)
    }

    pub fn verify(&self) -> Result<()> {
        Error::check(
            "scaled quantum relative entropy equals inner friction",
            self.relative_residual(),
            tolerances::QUANTUM_RELATIVE_ENTROPY,
        )
    }
}

/// `tr rho log rho - tr rho log rho'` for diagonal `rho` and
/// `rho' = S rho S^T`, sector by sector.
///
/// `rho'` is diagonalised through the singular value decomposition of
/// `S rho^{1/2}`: its eigenvalues are the squared singular values and its
/// eigenvectors the left singular vectors. The eigenvalues of `rho'` span as
/// many decades as the Gibbs weights, and only this route resolves the small
/// ones to relative accuracy. Eigenvalues below
/// [`tolerances::EIGENVALUE_CLIP`] are dropped from the trace.
pub fn quantum_relative_entropy(
    thermal: &ThermalDistribution,
    squeeze: &BlockOperator,
    report: &WorkReport,
) -> Result<QuantumRelativeEntropy> {
    let t_ad = report
        .adiabatic_temperature
        .filter(|t| *t > 0.0)
        .ok_or(Error::UndefinedEntropy)?;
    let spec = squeeze.spec();
    if spec.cutoff() != thermal.cutoff() {
        return Err(Error::SpaceMismatch {
            left: spec.cutoff(),
            right: thermal.cutoff(),
        });
    }
    let layout = spec.layout();
    let mut k = 0.0;
    for d in 0..=spec.cutoff() {
        let s = squeeze.block(d);
        let len = s.rows();
        let states = || (0..len).map(|q| layout.state(d as i64, q));
        let rho: Vec<f64> = states().map(|n| thermal.weight(n)).collect();
        let log_rho: Vec<f64> = states().map(|n| thermal.log_weight(n)).collect();
        let mut b = s.clone();
        for i in 0..len {
            for j in 0..len {
                b[(i, j)] *= sqrt(rho[j]);
            }
        }
        let (sigma, u) = jacobi_svd_left(&b)?;
        let log_mu: Vec<Option<f64>> = sigma
            .iter()
            .map(|&sv| {
                let mu = sv * sv;
                (mu >= tolerances::EIGENVALUE_CLIP).then(|| log(mu))
            })
            .collect();

        let mut block = 0.0;
        for i in 0..len {
            if rho[i] == 0.0 {
                continue;
            }
            let log_prime: f64 = log_mu
                .iter()
                .enumerate()
                .filter_map(|(kk, lm)| lm.map(|lm| u[(i, kk)] * u[(i, kk)] * lm))
                .sum();
            block += rho[i] * (log_rho[i] - log_prime);
        }
        // Sector -d has the same weights and the same matrix.
        k += if d == 0 { block } else { 2.0 * block };
    }
    Ok(QuantumRelativeEntropy {
        relative_entropy: k,
        adiabatic_temperature: t_ad,
        inner_friction: report.inner_friction,
    })
}
