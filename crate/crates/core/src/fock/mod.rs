//! Truncated two-mode Fock space and the squeeze operator acting on it.
//!
//! States are labelled by a [`JointFockIndex`] `(n_a, n_b)` with both
//! occupations at most the cutoff `N`. The squeeze generator
//! `G = z (a^dagger b^dagger - a b)` conserves `n_a - n_b`, so every operator
//! here is stored as one dense block per difference sector. Sectors `d` and
//! `-d` carry identical matrices and share storage.

mod amplitude;
mod kernel;
mod oracle;

use alloc::vec::Vec;

use crate::math::{atanh, cosh, log, sinh, sqrt, tanh};
use crate::{Error, Result};

pub use amplitude::squeeze_amplitude;
pub use kernel::{transition_kernel, TransitionKernel};
pub use oracle::{
    generator_block, oracle_cutoff_for, squeeze_generator, squeeze_operator_oracle,
    BlockOperator,
};

/// Cutoff and leakage budget of a truncated two-mode Fock space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationSpec {
    cutoff: usize,
    leakage_tolerance: f64,
}

impl TruncationSpec {
    pub fn new(cutoff: usize, leakage_tolerance: f64) -> Result<Self> {
        if !(leakage_tolerance > 0.0 && leakage_tolerance < 1.0) {
            return Err(Error::invalid(
                "leakage_tolerance",
                leakage_tolerance,
                "must lie in (0, 1)",
            ));
        }
        Ok(Self {
            cutoff,
            leakage_tolerance,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn leakage_tolerance(&self) -> f64 {
        self.leakage_tolerance
    }

    /// `(N + 1)^2`.
    pub fn dimension(&self) -> usize {
        (self.cutoff + 1) * (self.cutoff + 1)
    }

    pub fn contains(&self, n: JointFockIndex) -> bool {
        n.n_a <= self.cutoff && n.n_b <= self.cutoff
    }

    /// Row-major position of `n` in [`enumerate_basis`].
    pub fn index_of(&self, n: JointFockIndex) -> Option<usize> {
        self.contains(n).then(|| n.n_a * (self.cutoff + 1) + n.n_b)
    }

    pub fn state_at(&self, index: usize) -> Option<JointFockIndex> {
        (index < self.dimension()).then(|| {
            JointFockIndex::new(index / (self.cutoff + 1), index % (self.cutoff + 1))
        })
    }

    pub fn layout(&self) -> BlockLayout {
        BlockLayout {
            cutoff: self.cutoff,
        }
    }
}

/// Occupations `(n_a, n_b)` of the modes `k` and `-k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct JointFockIndex {
    pub n_a: usize,
    pub n_b: usize,
}

impl JointFockIndex {
    pub const VACUUM: Self = Self { n_a: 0, n_b: 0 };

    pub const fn new(n_a: usize, n_b: usize) -> Self {
        Self { n_a, n_b }
    }

    pub fn total(&self) -> usize {
        self.n_a + self.n_b
    }

    pub fn difference(&self) -> i64 {
        self.n_a as i64 - self.n_b as i64
    }
}

/// All basis states, ordered row-major in `(n_a, n_b)`.
pub fn enumerate_basis(spec: &TruncationSpec) -> Vec<JointFockIndex> {
    let n = spec.cutoff;
    (0..=n)
        .flat_map(|a| (0..=n).map(move |b| JointFockIndex::new(a, b)))
        .collect()
}

/// Addressing of difference sectors inside a truncated space.
///
/// Sector `d >= 0` holds the states `(q + d, q)` and sector `-d` the states
/// `(q, q + d)`, with `q = 0..=N - d`. Both are addressed by the sector
/// magnitude `d` and the position `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockLayout {
    cutoff: usize,
}

impl BlockLayout {
    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    /// Number of states in sector `d` (and `-d`).
    pub fn block_len(&self, d: usize) -> usize {
        self.cutoff + 1 - d
    }

    /// `(|d|, q)` for a state inside the space.
    pub fn locate(&self, n: JointFockIndex) -> (usize, usize) {
        (n.n_a.abs_diff(n.n_b), n.n_a.min(n.n_b))
    }

    pub fn state(&self, d: i64, q: usize) -> JointFockIndex {
        let m = d.unsigned_abs() as usize;
        if d >= 0 {
            JointFockIndex::new(q + m, q)
        } else {
            JointFockIndex::new(q, q + m)
        }
    }

    /// Signed sectors `-N..=N`.
    pub fn sectors(&self) -> impl Iterator<Item = i64> {
        let n = self.cutoff as i64;
        -n..=n
    }
}

/// Squeezing magnitude `z >= 0`, with `cosh z`, `sinh z` and `tanh z` cached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezeParameter {
    z: f64,
    tanh: f64,
    cosh: f64,
    sinh: f64,
}

impl SqueezeParameter {
    pub const ZERO: Self = Self {
        z: 0.0,
        tanh: 0.0,
        cosh: 1.0,
        sinh: 0.0,
    };

    pub fn new(z: f64) -> Result<Self> {
        if !(z >= 0.0 && z.is_finite()) {
            return Err(Error::invalid("z", z, "must be finite and non-negative"));
        }
        Ok(Self {
            z,
            tanh: tanh(z),
            cosh: cosh(z),
            sinh: sinh(z),
        })
    }

    /// Builds the parameter from `tanh z` in `[0, 1)`. The hyperbolic
    /// functions are taken from `t` directly so that `tanh()` round-trips.
    pub fn from_tanh(t: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::invalid("tanh_z", t, "must lie in [0, 1)"));
        }
        let cosh = 1.0 / sqrt((1.0 - t) * (1.0 + t));
        Ok(Self {
            z: atanh(t),
            tanh: t,
            cosh,
            sinh: t * cosh,
        })
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    pub fn tanh(&self) -> f64 {
        self.tanh
    }

    pub fn cosh(&self) -> f64 {
        self.cosh
    }

    pub fn sinh(&self) -> f64 {
        self.sinh
    }

    pub fn is_zero(&self) -> bool {
        self.tanh == 0.0
    }

    /// Probability that the vacuum column spills past cutoff `n`:
    /// `tanh^{2(N+1)} z`.
    pub fn vacuum_tail(&self, cutoff: usize) -> f64 {
        crate::math::powi(self.tanh * self.tanh, cutoff as u32 + 1)
    }

    /// Smallest cutoff whose vacuum tail is within `tol`.
    pub fn vacuum_cutoff(&self, tol: f64) -> usize {
        if self.tanh == 0.0 {
            return 0;
        }
        let needed = log(tol) / (2.0 * log(self.tanh)) - 1.0;
        crate::math::ceil(needed.max(0.0)) as usize
    }
}
