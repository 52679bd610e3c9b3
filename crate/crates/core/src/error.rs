use core::fmt;

use crate::fock::JointFockIndex;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter is outside its physical or numerical domain.
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    /// Both the momentum and the mass vanish, so the mode has zero frequency.
    DegenerateMode,
    /// Probability lost to the Fock-space cutoff exceeds the budget.
    Leakage {
        what: &'static str,
        column: Option<JointFockIndex>,
        leaked: f64,
        tolerance: f64,
        suggested_cutoff: Option<usize>,
    },
    /// Two objects built on different truncations were combined.
    SpaceMismatch { left: usize, right: usize },
    /// Entropy quantities are undefined on the zero-temperature path.
    UndefinedEntropy,
    /// `P_E(s)` carries mass above the floor while `P_C(-s)` is empty.
    SupportMismatch { s: f64, forward_mass: f64 },
    /// A numerical identity failed beyond its tolerance.
    Verification {
        check: &'static str,
        residual: f64,
        tolerance: f64,
    },
    /// An iterative routine failed to converge.
    NoConvergence { routine: &'static str },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }

    pub(crate) fn check(check: &'static str, residual: f64, tolerance: f64) -> Result<()> {
        if residual <= tolerance {
            Ok(())
        } else {
            Err(Error::Verification {
                check,
                residual,
                tolerance,
            })
        }
    }

    /// True for errors caused by an insufficient Fock cutoff.
    pub fn is_leakage(&self) -> bool {
        matches!(self, Error::Leakage { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter {
                name,
                value,
                reason,
            } => write!(f, "invalid {name} = {value}: {reason}"),
            Error::DegenerateMode => {
                write!(f, "degenerate mode: momentum and mass are both zero")
            }
            Error::Leakage {
                what,
                column,
                leaked,
                tolerance,
                suggested_cutoff,
            } => {
                write!(f, "{what} leaks {leaked:e} beyond the cutoff (tolerance {tolerance:e})")?;
                if let Some(n) = column {
                    write!(f, " in column ({}, {})", n.n_a, n.n_b)?;
                }
                if let Some(c) = suggested_cutoff {
                    write!(f, "; try cutoff >= {c}")?;
                }
                Ok(())
            }
            Error::SpaceMismatch { left, right } => {
                write!(f, "objects built on different cutoffs ({left} vs {right})")
            }
            Error::UndefinedEntropy => {
                write!(f, "entropy change is undefined at zero temperature")
            }
            Error::SupportMismatch { s, forward_mass } => write!(
                f,
                "P_E({s}) = {forward_mass:e} but the reverse process has no mass at -s"
            ),
            Error::Verification {
                check,
                residual,
                tolerance,
            } => write!(
                f,
                "verification `{check}` failed: residual {residual:e} > tolerance {tolerance:e}"
            ),
            Error::NoConvergence { routine } => write!(f, "{routine} did not converge"),
        }
    }
}

impl core::error::Error for Error {}
