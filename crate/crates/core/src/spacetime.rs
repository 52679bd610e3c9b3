//! Squeezing parameters and asymptotic frequencies for the supported
//! spacetimes.
//!
//! Units are natural (`c = hbar = G = k_B = 1`).

use core::f64::consts::PI;

use crate::fock::SqueezeParameter;
use crate::math::{expm1, exp, log1p, sqrt, tanh};
use crate::{Error, Result};

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::invalid(name, v, "must be finite and positive"))
    }
}

/// Expanding universe with conformal factor
/// `Omega^2(eta) = 1 + epsilon (1 + tanh(sigma eta))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CosmologyParams {
    pub momentum: f64,
    pub mass: f64,
    pub epsilon: f64,
    pub sigma: f64,
}

impl CosmologyParams {
    pub fn new(momentum: f64, mass: f64, epsilon: f64, sigma: f64) -> Result<Self> {
        if !momentum.is_finite() {
            return Err(Error::invalid("k", momentum, "must be finite"));
        }
        if !(mass >= 0.0 && mass.is_finite()) {
            return Err(Error::invalid("m", mass, "must be finite and non-negative"));
        }
        positive("epsilon", epsilon)?;
        positive("sigma", sigma)?;
        Ok(Self {
            momentum,
            mass,
            epsilon,
            sigma,
        })
    }
}

/// Observer with constant proper acceleration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnruhParams {
    pub acceleration: f64,
    pub omega: f64,
}

impl UnruhParams {
    pub fn new(acceleration: f64, omega: f64) -> Result<Self> {
        Ok(Self {
            acceleration: positive("acceleration", acceleration)?,
            omega: positive("omega", omega)?,
        })
    }
}

/// Eternal Schwarzschild black hole of mass `mass_bh`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlackHoleParams {
    pub mass_bh: f64,
    pub omega: f64,
}

impl BlackHoleParams {
    pub fn new(mass_bh: f64, omega: f64) -> Result<Self> {
        Ok(Self {
            mass_bh: positive("mass_bh", mass_bh)?,
            omega: positive("omega", omega)?,
        })
    }
}

pub fn conformal_factor(eta: f64, p: &CosmologyParams) -> f64 {
    1.0 + p.epsilon * (1.0 + tanh(p.sigma * eta))
}

/// `(omega, omega_tilde)`: mode frequencies in the far past and far future.
pub fn asymptotic_frequencies(p: &CosmologyParams) -> Result<(f64, f64)> {
    if p.momentum == 0.0 && p.mass == 0.0 {
        return Err(Error::DegenerateMode);
    }
    let k2 = p.momentum * p.momentum;
    let m2 = p.mass * p.mass;
    Ok((sqrt(k2 + m2), sqrt(k2 + m2 * (1.0 + 2.0 * p.epsilon))))
}

/// `tanh z = sinh(pi (w_out - w_in) / 2 sigma) / sinh(pi (w_out + w_in) / 2 sigma)`.
pub fn squeeze_from_cosmology(omega_in: f64, omega_out: f64, sigma: f64) -> Result<SqueezeParameter> {
    positive("omega_in", omega_in)?;
    positive("sigma", sigma)?;
    if !(omega_out >= omega_in && omega_out.is_finite()) {
        return Err(Error::invalid(
            "omega_out",
            omega_out,
            "must be finite and at least omega_in",
        ));
    }
    let minus = PI * (omega_out - omega_in) / (2.0 * sigma);
    let plus = PI * (omega_out + omega_in) / (2.0 * sigma);
    // sinh(a) / sinh(b) rewritten so neither factor overflows for small sigma.
    let ratio = exp(minus - plus) * expm1(-2.0 * minus) / expm1(-2.0 * plus);
    SqueezeParameter::from_tanh(ratio)
}

/// `tanh z = exp(-pi omega / a)`.
pub fn squeeze_from_unruh(p: &UnruhParams) -> Result<SqueezeParameter> {
    squeeze_from_exponent(PI * p.omega / p.acceleration)
}

/// `tanh z = exp(-4 pi M omega)`.
pub fn squeeze_from_blackhole(p: &BlackHoleParams) -> Result<SqueezeParameter> {
    squeeze_from_exponent(4.0 * PI * p.mass_bh * p.omega)
}

/// `z = artanh(exp(-x))`, evaluated as `log1p(2 t / (1 - t)) / 2` with
/// `1 - t = -expm1(-x)` so that neither small nor large `x` loses digits.
fn squeeze_from_exponent(x: f64) -> Result<SqueezeParameter> {
    let t = exp(-x);
    SqueezeParameter::new(0.5 * log1p(2.0 * t / -expm1(-x)))
}

/// Everything the thermodynamic pipeline needs from a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeChannel {
    pub z: SqueezeParameter,
    pub omega_in: f64,
    pub omega_out: f64,
    /// Set for horizon scenarios, where the unitary pair-creation treatment
    /// is applied formally although observers outside the horizon see
    /// non-unitary dynamics.
    pub formal_extension: bool,
}

impl SqueezeChannel {
    pub fn new(z: SqueezeParameter, omega_in: f64, omega_out: f64) -> Result<Self> {
        Ok(Self {
            z,
            omega_in: positive("omega_in", omega_in)?,
            omega_out: positive("omega_out", omega_out)?,
            formal_extension: false,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Scenario {
    Cosmology(CosmologyParams),
    Unruh(UnruhParams),
    BlackHole(BlackHoleParams),
    Direct(SqueezeChannel),
}

impl Scenario {
    pub fn name(&self) -> &'static str {
        match self {
            Scenario::Cosmology(_) => "cosmology",
            Scenario::Unruh(_) => "unruh",
            Scenario::BlackHole(_) => "blackhole",
            Scenario::Direct(_) => "direct-z",
        }
    }

    /// Horizon scenarios keep the mode frequency: `omega_out = omega_in`.
    pub fn channel(&self) -> Result<SqueezeChannel> {
        match self {
            Scenario::Cosmology(p) => {
                let (w, wt) = asymptotic_frequencies(p)?;
                SqueezeChannel::new(squeeze_from_cosmology(w, wt, p.sigma)?, w, wt)
            }
            Scenario::Unruh(p) => Ok(SqueezeChannel {
                formal_extension: true,
                ..SqueezeChannel::new(squeeze_from_unruh(p)?, p.omega, p.omega)?
            }),
            Scenario::BlackHole(p) => Ok(SqueezeChannel {
                formal_extension: true,
                ..SqueezeChannel::new(squeeze_from_blackhole(p)?, p.omega, p.omega)?
            }),
            Scenario::Direct(c) => Ok(*c),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cosmo(k: f64, m: f64, eps: f64, sigma: f64) -> CosmologyParams {
        CosmologyParams::new(k, m, eps, sigma).unwrap()
    }

    #[test]
    fn conformal_factor_limits() {
        let p = cosmo(1.0, 1.0, 1.0, 1.0);
        assert_eq!(conformal_factor(-1e3, &p), 1.0);
        assert_eq!(conformal_factor(0.0, &p), 2.0);
        assert_eq!(conformal_factor(1e3, &p), 3.0);
    }

    #[test]
    fn frequencies() {
        let (w, wt) = asymptotic_frequencies(&cosmo(1.0, 0.0, 0.7, 1.0)).unwrap();
        assert_eq!((w, wt), (1.0, 1.0));
        let (w, wt) = asymptotic_frequencies(&cosmo(1.0, 1.0, 1.0, 1.0)).unwrap();
        assert!((w - core::f64::consts::SQRT_2).abs() < 1e-15);
        assert_eq!(wt, 2.0);
        let (w, wt) = asymptotic_frequencies(&cosmo(0.0, 1.0, 0.5, 1.0)).unwrap();
        assert_eq!(w, 1.0);
        assert!((wt - libm::sqrt(2.0)).abs() < 1e-15);
        assert_eq!(
            asymptotic_frequencies(&cosmo(0.0, 0.0, 1.0, 1.0)),
            Err(Error::DegenerateMode)
        );
    }

    #[test]
    fn cosmology_squeezing_reference_point() {
        let z = squeeze_from_cosmology(libm::sqrt(2.0), 2.0, 1.0).unwrap();
        assert!((z.tanh() - 0.009_894_755_136_246_65).abs() < 1e-15);
        assert!((z.z() - 0.009_895_078_074_440_64).abs() < 1e-15);
    }

    #[test]
    fn cosmology_squeezing_small_sigma_does_not_overflow() {
        let z = squeeze_from_cosmology(1.0, 3.0, 1e-4).unwrap();
        assert!(z.tanh() >= 0.0 && z.tanh() < 1e-300);
        let z = squeeze_from_cosmology(1.0, 1.0, 1e-4).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn unruh_and_blackhole_reference_points() {
        let z = squeeze_from_unruh(&UnruhParams::new(PI, 1.0).unwrap()).unwrap();
        assert!((z.z() - 0.385_968_416_452_652_36).abs() < 1e-14);
        assert!((z.tanh() - libm::exp(-1.0)).abs() < 1e-15);

        let z = squeeze_from_blackhole(&BlackHoleParams::new(1.0 / (4.0 * PI), 1.0).unwrap()).unwrap();
        assert!((z.z() - 0.385_968_416_452_652_36).abs() < 1e-14);

        let z = squeeze_from_blackhole(&BlackHoleParams::new(1.0, 1.0).unwrap()).unwrap();
        assert!((z.tanh() - 3.487_342_356_209_e-6).abs() < 1e-17);
    }

    #[test]
    fn horizon_channels_are_flagged() {
        let c = Scenario::Unruh(UnruhParams::new(1.0, 1.0).unwrap()).channel().unwrap();
        assert!(c.formal_extension);
        assert_eq!(c.omega_in, c.omega_out);
        let c = Scenario::Cosmology(cosmo(1.0, 1.0, 1.0, 1.0)).channel().unwrap();
        assert!(!c.formal_extension);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(CosmologyParams::new(1.0, -1.0, 1.0, 1.0).is_err());
        assert!(CosmologyParams::new(1.0, 1.0, 0.0, 1.0).is_err());
        assert!(CosmologyParams::new(1.0, 1.0, 1.0, 0.0).is_err());
        assert!(UnruhParams::new(0.0, 1.0).is_err());
        assert!(BlackHoleParams::new(1.0, -2.0).is_err());
        assert!(squeeze_from_cosmology(2.0, 1.0, 1.0).is_err());
    }
}
