use alloc::vec::Vec;

use super::{JointFockIndex, SqueezeParameter, TruncationSpec};
use crate::linalg::{expm, Matrix};
use crate::math::{ceil, log, sqrt};
use crate::{Error, Result};

/// Dense generator `G = z (a^dagger b^dagger - a b)` on the full truncated
/// basis, in the ordering of [`enumerate_basis`](super::enumerate_basis).
pub fn squeeze_generator(z: SqueezeParameter, spec: &TruncationSpec) -> Matrix {
    let n = spec.cutoff();
    let mut g = Matrix::zeros(spec.dimension(), spec.dimension());
    for a in 0..n {
        for b in 0..n {
            let from = spec.index_of(JointFockIndex::new(a, b)).unwrap();
            let to = spec.index_of(JointFockIndex::new(a + 1, b + 1)).unwrap();
            let v = z.z() * sqrt(((a + 1) * (b + 1)) as f64);
            g[(to, from)] = v;
            g[(from, to)] = -v;
        }
    }
    g
}

/// Generator restricted to sector `d`, in the sector coordinate `q`.
pub fn generator_block(z: SqueezeParameter, len: usize, d: usize) -> Matrix {
    let mut g = Matrix::zeros(len, len);
    for q in 0..len.saturating_sub(1) {
        let v = z.z() * sqrt(((q + d + 1) * (q + 1)) as f64);
        g[(q + 1, q)] = v;
        g[(q, q + 1)] = -v;
    }
    g
}

/// An operator that is block diagonal over the difference sectors of a
/// truncated space. Only sectors `d >= 0` are stored; sector `-d` reuses
/// the matrix of sector `d`.
#[derive(Debug, Clone)]
pub struct BlockOperator {
    spec: TruncationSpec,
    blocks: Vec<Matrix>,
}

impl BlockOperator {
    pub(crate) fn new(spec: TruncationSpec, blocks: Vec<Matrix>) -> Self {
        debug_assert_eq!(blocks.len(), spec.cutoff() + 1);
        Self { spec, blocks }
    }

    pub fn spec(&self) -> &TruncationSpec {
        &self.spec
    }

    /// Matrix of sector `d` (equivalently `-d`).
    pub fn block(&self, d: usize) -> &Matrix {
        &self.blocks[d]
    }

    /// `<m| op |n>`; zero across sectors and outside the space.
    pub fn get(&self, m: JointFockIndex, n: JointFockIndex) -> f64 {
        if m.difference() != n.difference() || !self.spec.contains(m) || !self.spec.contains(n) {
            return 0.0;
        }
        let layout = self.spec.layout();
        let (d, qm) = layout.locate(m);
        let (_, qn) = layout.locate(n);
        self.blocks[d][(qm, qn)]
    }

    /// Full matrix in the [`enumerate_basis`](super::enumerate_basis) order.
    pub fn to_dense(&self) -> Matrix {
        let spec = &self.spec;
        let layout = spec.layout();
        let mut out = Matrix::zeros(spec.dimension(), spec.dimension());
        for d in layout.sectors() {
            let block = &self.blocks[d.unsigned_abs() as usize];
            for i in 0..block.rows() {
                let row = spec.index_of(layout.state(d, i)).unwrap();
                for j in 0..block.cols() {
                    let col = spec.index_of(layout.state(d, j)).unwrap();
                    out[(row, col)] = block[(i, j)];
                }
            }
        }
        out
    }

    /// `max |(S^T S - I)_ij|` over all sectors.
    pub fn orthogonality_defect(&self) -> f64 {
        self.blocks
            .iter()
            .map(Matrix::orthogonality_defect)
            .fold(0.0, f64::max)
    }
}

/// `S = exp(G)` on the truncated space, computed sector by sector with a
/// scaling-and-squaring matrix exponential. Independent of the closed-form
/// amplitude and of the spectral kernel.
///
/// Entries close to the cutoff feel the truncation; use
/// [`oracle_cutoff_for`] to pick a cutoff at which the low-index entries
/// match the untruncated operator.
pub fn squeeze_operator_oracle(z: SqueezeParameter, spec: &TruncationSpec) -> Result<BlockOperator> {
    let n = spec.cutoff();
    let leaked = z.vacuum_tail(n);
    if leaked > spec.leakage_tolerance() {
        return Err(Error::Leakage {
            what: "squeeze operator vacuum column",
            column: Some(JointFockIndex::VACUUM),
            leaked,
            tolerance: spec.leakage_tolerance(),
            suggested_cutoff: Some(z.vacuum_cutoff(spec.leakage_tolerance())),
        });
    }
    let layout = spec.layout();
    let blocks = (0..=n)
        .map(|d| expm(&generator_block(z, layout.block_len(d), d)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BlockOperator::new(*spec, blocks))
}

/// Cutoff at which the truncated oracle reproduces the untruncated
/// amplitudes for all occupations up to `max_index` to about `accuracy`.
///
/// Amplitudes out of a state with `k` quanta decay like
/// `k^poly * tanh^q z` in the sector coordinate, so the cutoff grows with
/// `max_index` and with `log(accuracy) / log(tanh z)`.
pub fn oracle_cutoff_for(z: SqueezeParameter, max_index: usize, accuracy: f64) -> usize {
    let floor = max_index + 20;
    let t = z.tanh();
    if t == 0.0 {
        return floor;
    }
    let decay = ceil(log(accuracy) / (2.0 * log(t))) as usize;
    floor.max(2 * max_index + decay + 10)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(n: usize) -> TruncationSpec {
        TruncationSpec::new(n, 1e-8).unwrap()
    }

    #[test]
    fn generator_entries() {
        let z = SqueezeParameter::new(0.5).unwrap();
        let s = spec(1);
        let g = squeeze_generator(z, &s);
        let vac = s.index_of(JointFockIndex::VACUUM).unwrap();
        let pair = s.index_of(JointFockIndex::new(1, 1)).unwrap();
        assert_eq!(g[(pair, vac)], 0.5);
        assert_eq!(g[(vac, pair)], -0.5);
        let zero = squeeze_generator(SqueezeParameter::ZERO, &spec(3));
        assert_eq!(zero.max_abs(), 0.0);
    }

    #[test]
    fn generator_is_antisymmetric() {
        let z = SqueezeParameter::new(0.8).unwrap();
        let g = squeeze_generator(z, &spec(5));
        let mut sum = g.clone();
        sum.add_scaled(1.0, &g.transpose());
        assert_eq!(sum.max_abs(), 0.0);
    }

    #[test]
    fn zero_squeeze_is_identity() {
        let op = squeeze_operator_oracle(SqueezeParameter::ZERO, &spec(6)).unwrap();
        assert_eq!(op.to_dense(), Matrix::identity(49));
    }

    #[test]
    fn canonical_entries() {
        let z = SqueezeParameter::from_tanh(0.5).unwrap();
        let op = squeeze_operator_oracle(z, &spec(40)).unwrap();
        let vac = JointFockIndex::VACUUM;
        assert!((op.get(vac, vac) - 0.866_025_403_784).abs() < 1e-12);
        assert!((op.get(JointFockIndex::new(1, 1), vac) - 0.433_012_701_892).abs() < 1e-12);
        assert!((op.get(vac, JointFockIndex::new(1, 1)) + 0.433_012_701_892).abs() < 1e-12);
    }

    #[test]
    fn dense_matches_full_exponential() {
        let z = SqueezeParameter::new(0.6).unwrap();
        let s = TruncationSpec::new(6, 1e-2).unwrap();
        let blocks = squeeze_operator_oracle(z, &s).unwrap().to_dense();
        let full = expm(&squeeze_generator(z, &s)).unwrap();
        assert!(blocks.max_abs_diff(&full) < 1e-13);
    }

    #[test]
    fn oversqueezed_vacuum_leaks() {
        let z = SqueezeParameter::new(1.2).unwrap();
        let err = squeeze_operator_oracle(z, &spec(8)).unwrap_err();
        assert!(err.is_leakage());
    }
}
