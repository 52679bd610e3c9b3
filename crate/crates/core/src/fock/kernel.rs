//! Transition probabilities `p(m|n) = <m|S|n>^2` of the squeeze operator.
//!
//! The alternating amplitude sum loses every significant digit once
//! `sinh^2 z` times the occupations reaches a few hundred, which happens
//! well inside the cutoffs needed at `z ~ 1`. Instead each column `S|n>` is
//! obtained as an eigenvector: conjugating the number operator gives
//!
//! ```text
//! J = S (N_a + N_b + 1) S^dagger = cosh 2z (N_a + N_b + 1) - sinh 2z (a b + a^dagger b^dagger)
//! ```
//!
//! which is tridiagonal in each difference sector and has `S|n>` as
//! eigenvector with the integer eigenvalue `total(n) + 1`. Inverse iteration
//! on a generously padded sector reproduces the untruncated amplitudes, so
//! the mass beyond the cutoff is a genuine leakage rather than an artefact
//! of a truncated exponential.

use alloc::vec;
use alloc::vec::Vec;

use super::{BlockOperator, JointFockIndex, SqueezeParameter, TruncationSpec};
use crate::linalg::{tridiagonal_eigenvector, Matrix};
use crate::math::{abs, cbrt, ceil, exp, log, sqrt};
use crate::{Error, Result};

/// Transition probabilities of the squeeze operator on a truncated space.
#[derive(Debug, Clone)]
pub struct TransitionKernel {
    squeeze: SqueezeParameter,
    amplitudes: BlockOperator,
    // leakage[d][q]: mass of column (q + d, q) beyond the cutoff
    leakage: Vec<Vec<f64>>,
}

/// Builds the kernel for `z` on `spec`.
///
/// Fails with a leakage error when the vacuum column loses more than the
/// tolerance. Columns further out leak more; their leakage is recorded for
/// the thermal averages, which apply their own budget.
pub fn transition_kernel(z: SqueezeParameter, spec: &TruncationSpec) -> Result<TransitionKernel> {
    let n = spec.cutoff();
    let layout = spec.layout();
    let mut blocks = Vec::with_capacity(n + 1);
    let mut leakage = Vec::with_capacity(n + 1);
    for d in 0..=n {
        let len = layout.block_len(d);
        if z.is_zero() {
            blocks.push(Matrix::identity(len));
            leakage.push(vec![0.0; len]);
        } else {
            let (block, leak) = sector_amplitudes(z, d, len)?;
            blocks.push(block);
            leakage.push(leak);
        }
    }
    let kernel = TransitionKernel {
        squeeze: z,
        amplitudes: BlockOperator::new(*spec, blocks),
        leakage,
    };
    let leaked = kernel.vacuum_leakage();
    if leaked > spec.leakage_tolerance() {
        return Err(Error::Leakage {
            what: "transition kernel vacuum column",
            column: Some(JointFockIndex::VACUUM),
            leaked,
            tolerance: spec.leakage_tolerance(),
            suggested_cutoff: Some(z.vacuum_cutoff(spec.leakage_tolerance())),
        });
    }
    Ok(kernel)
}

impl TransitionKernel {
    pub fn spec(&self) -> &TruncationSpec {
        self.amplitudes.spec()
    }

    pub fn squeeze(&self) -> SqueezeParameter {
        self.squeeze
    }

    /// Signed amplitudes `<m|S|n>` restricted to the space.
    pub fn amplitudes(&self) -> &BlockOperator {
        &self.amplitudes
    }

    pub fn amplitude(&self, m: JointFockIndex, n: JointFockIndex) -> f64 {
        self.amplitudes.get(m, n)
    }

    /// `p(m|n)`.
    pub fn prob(&self, m: JointFockIndex, n: JointFockIndex) -> f64 {
        let a = self.amplitude(m, n);
        a * a
    }

    /// `1 - sum_m p(m|n)`, the mass of column `n` beyond the cutoff.
    pub fn column_leakage(&self, n: JointFockIndex) -> f64 {
        let (d, q) = self.spec().layout().locate(n);
        self.leakage[d][q]
    }

    pub fn vacuum_leakage(&self) -> f64 {
        self.leakage[0][0]
    }

    /// Worst column leakage over initial states with `total(n) <= max_total`,
    /// with the column attaining it.
    pub fn max_leakage_up_to(&self, max_total: usize) -> (JointFockIndex, f64) {
        let layout = self.spec().layout();
        let mut worst = (JointFockIndex::VACUUM, 0.0);
        for (d, column) in self.leakage.iter().enumerate() {
            for (q, &leak) in column.iter().enumerate() {
                if 2 * q + d <= max_total && leak > worst.1 {
                    worst = (layout.state(d as i64, q), leak);
                }
            }
        }
        worst
    }

    /// Nonzero-sector entries `(m, p(m|n))` of column `n`, in increasing
    /// total of `m`.
    pub fn column(&self, n: JointFockIndex) -> impl Iterator<Item = (JointFockIndex, f64)> + '_ {
        let layout = self.spec().layout();
        let (d, qn) = layout.locate(n);
        let signed = n.difference();
        let block = self.amplitudes.block(d);
        (0..block.rows()).map(move |q| {
            let a = block[(q, qn)];
            (layout.state(signed, q), a * a)
        })
    }
}

/// Signed amplitude block and per-column leakage of sector `d >= 0`.
fn sector_amplitudes(z: SqueezeParameter, d: usize, len: usize) -> Result<(Matrix, Vec<f64>)> {
    let mut own = Matrix::zeros(len, len);
    let mut tails = vec![0.0; len];
    let mut previous: Vec<f64> = Vec::new();
    for p in 0..len {
        if let Some(column) = recurrence_column(z, d, p, len) {
            let kept: f64 = column.iter().map(|x| x * x).sum();
            for q in 0..len {
                own[(q, p)] = column[q];
            }
            tails[p] = 1.0 - kept;
            continue;
        }
        let column = if p == 0 {
            lowest_column(z, d, len)
        } else {
            let mut v = padded_column(z, d, p, len)?;
            if raising_overlap(z, d, &v, &previous) < 0.0 {
                for x in v.iter_mut() {
                    *x = -*x;
                }
            }
            v
        };
        for q in 0..len {
            own[(q, p)] = column[q];
        }
        tails[p] = column[len..].iter().map(|x| x * x).sum();
        previous = column;
    }

    // Entries above the diagonal are taken from the transposed position,
    // where they sit in the bulk of a lower column. This makes p(m|n) = p(n|m)
    // hold exactly.
    let mut block = own.clone();
    let mut leakage = tails;
    for p in 0..len {
        for q in 0..p {
            let sign = if (p - q) % 2 == 0 { 1.0 } else { -1.0 };
            let mirrored = sign * own[(p, q)];
            let direct = own[(q, p)];
            block[(q, p)] = mirrored;
            leakage[p] += direct * direct - mirrored * mirrored;
        }
        leakage[p] = leakage[p].max(0.0);
    }
    Ok((block, leakage))
}

/// Column `p` of sector `d` on the box alone, by running the eigenvalue
/// equation of `J` upwards in `q` from the exact first entry
/// `<d, 0|S|p + d, p> = (-1)^p tanh^p z cosh^{-(d+1)} z sqrt(C(p + d, p))`.
///
/// Upward recursion is stable as long as the box ends before the outer
/// turning point, where the column starts to decay; otherwise `None`.
fn recurrence_column(z: SqueezeParameter, d: usize, p: usize, len: usize) -> Option<Vec<f64>> {
    let lambda = (2 * p + d + 1) as f64;
    let outer_turn = (lambda * exp(2.0 * z.z()) - d as f64 - 1.0) / 2.0;
    if outer_turn < (len + RECURRENCE_MARGIN) as f64 {
        return None;
    }
    let t = z.tanh();
    let mut first = crate::math::powi(1.0 / z.cosh(), d as u32 + 1);
    for k in 0..p {
        first *= t * sqrt((k + d + 1) as f64 / (k + 1) as f64);
    }
    if p % 2 == 1 {
        first = -first;
    }
    if abs(first) < 1e-250 {
        return None;
    }
    let c2 = z.cosh() * z.cosh() + z.sinh() * z.sinh();
    let s2 = 2.0 * z.sinh() * z.cosh();
    let mut v = Vec::with_capacity(len);
    v.push(first);
    for q in 0..len - 1 {
        let below = if q > 0 {
            s2 * sqrt(((q + d) * q) as f64) * v[q - 1]
        } else {
            0.0
        };
        let next = ((c2 * (2 * q + d + 1) as f64 - lambda) * v[q] - below)
            / (s2 * sqrt(((q + d + 1) * (q + 1)) as f64));
        v.push(next);
    }
    Some(v)
}

const RECURRENCE_MARGIN: usize = 8;

/// `S|d, 0>` in closed form: `tanh^q z cosh^{-(d+1)} z sqrt(C(q + d, q))`,
/// continued past the cutoff until the remaining mass is negligible.
fn lowest_column(z: SqueezeParameter, d: usize, len: usize) -> Vec<f64> {
    let t = z.tanh();
    let mut a = crate::math::powi(1.0 / z.cosh(), d as u32 + 1);
    let mut out = Vec::with_capacity(len + 64);
    let mut q = 0usize;
    loop {
        out.push(a);
        let ratio = t * sqrt((q + d + 1) as f64 / (q + 1) as f64);
        a *= ratio;
        q += 1;
        if q >= len && ratio < 1.0 && a < 1e-20 {
            break;
        }
    }
    out
}

/// Column `p` of sector `d` by inverse iteration on the conjugated number
/// operator, padded until the eigenvector has decayed well past `len`.
fn padded_column(z: SqueezeParameter, d: usize, p: usize, len: usize) -> Result<Vec<f64>> {
    let t = z.tanh();
    let c2 = z.cosh() * z.cosh() + z.sinh() * z.sinh();
    let s2 = 2.0 * z.sinh() * z.cosh();
    let lambda = (2 * p + d + 1) as f64;

    // Past the classical turning point the eigenvector decays like tanh^q z.
    let q_turn = ((lambda * exp(2.0 * z.z()) - d as f64 - 1.0) / 2.0).max(0.0);
    let decay = 46.0 / -log(t);
    let mut size = ceil(q_turn * 1.1 + decay + 4.0 * cbrt(q_turn) + 16.0) as usize;
    size = size.max(len + ceil(decay) as usize + 16);

    for _ in 0..8 {
        let diag: Vec<f64> = (0..size).map(|q| c2 * (2 * q + d + 1) as f64).collect();
        let off: Vec<f64> = (0..size - 1)
            .map(|q| -s2 * sqrt(((q + d + 1) * (q + 1)) as f64))
            .collect();
        let v = tridiagonal_eigenvector(&diag, &off, lambda, 3);
        let peak = v.iter().fold(0.0f64, |m, x| m.max(abs(*x)));
        if peak.is_finite() && abs(v[size - 1]) < 1e-20 * peak {
            return Ok(v);
        }
        size *= 2;
    }
    Err(Error::NoConvergence {
        routine: "sector eigenvector padding",
    })
}

/// `<v, K w>` with `K = S a^dagger b^dagger S^dagger
/// = cosh^2 z a^dagger b^dagger + sinh^2 z a b - cosh z sinh z (N_a + N_b + 1)`.
/// For `v = S|p>` and `w = S|p - 1>` this equals `sqrt((p + d) p) > 0`.
fn raising_overlap(z: SqueezeParameter, d: usize, v: &[f64], w: &[f64]) -> f64 {
    let c = z.cosh();
    let s = z.sinh();
    let at = |q: usize| w.get(q).copied().unwrap_or(0.0);
    let mut acc = 0.0;
    for (q, &vq) in v.iter().enumerate().take(w.len() + 1) {
        let mut kw = -c * s * (2 * q + d + 1) as f64 * at(q);
        if q > 0 {
            kw += c * c * sqrt(((q + d) * q) as f64) * at(q - 1);
        }
        kw += s * s * sqrt(((q + d + 1) * (q + 1)) as f64) * at(q + 1);
        acc += vq * kw;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::squeeze_amplitude;

    fn spec(n: usize) -> TruncationSpec {
        TruncationSpec::new(n, 1e-8).unwrap()
    }

    #[test]
    fn zero_squeeze_is_identity() {
        let k = transition_kernel(SqueezeParameter::ZERO, &spec(10)).unwrap();
        let n = JointFockIndex::new(3, 5);
        assert_eq!(k.prob(n, n), 1.0);
        assert_eq!(k.prob(JointFockIndex::new(4, 6), n), 0.0);
        assert_eq!(k.max_leakage_up_to(20).1, 0.0);
    }

    #[test]
    fn vacuum_law_canonical() {
        let z = SqueezeParameter::from_tanh(0.5).unwrap();
        let k = transition_kernel(z, &spec(40)).unwrap();
        let expected = [0.75, 0.1875, 0.046875, 0.01171875];
        for (n, e) in expected.iter().enumerate() {
            let p = k.prob(JointFockIndex::new(n, n), JointFockIndex::VACUUM);
            assert!((p - e).abs() < 1e-15, "n {n}: {p}");
        }
        let up = k.prob(JointFockIndex::new(1, 1), JointFockIndex::VACUUM);
        let down = k.prob(JointFockIndex::VACUUM, JointFockIndex::new(1, 1));
        assert_eq!(up, down);
        assert!((up - 0.1875).abs() < 1e-15);
    }

    #[test]
    fn matches_closed_form_at_small_indices() {
        let z = SqueezeParameter::new(0.5).unwrap();
        let k = transition_kernel(z, &spec(30)).unwrap();
        let mut worst: f64 = 0.0;
        for na in 0..=8 {
            for nb in 0..=8 {
                for ma in 0..=8 {
                    for mb in 0..=8 {
                        let n = JointFockIndex::new(na, nb);
                        let m = JointFockIndex::new(ma, mb);
                        worst = worst.max((k.amplitude(m, n) - squeeze_amplitude(z, n, m)).abs());
                    }
                }
            }
        }
        assert!(worst < 1e-12, "worst {worst}");
    }

    #[test]
    fn leakage_grows_towards_the_cutoff() {
        let z = SqueezeParameter::new(0.8).unwrap();
        let k = transition_kernel(z, &spec(30)).unwrap();
        let exact = z.vacuum_tail(30);
        assert!((k.vacuum_leakage() - exact).abs() < 1e-12 * exact.max(1e-300) + 1e-300);
        let inner = k.column_leakage(JointFockIndex::new(2, 2));
        let outer = k.column_leakage(JointFockIndex::new(12, 12));
        assert!(inner < outer);
        for n in [JointFockIndex::new(5, 1), JointFockIndex::new(0, 7)] {
            let kept: f64 = k.column(n).map(|(_, p)| p).sum();
            assert!((kept + k.column_leakage(n) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn recurrence_and_inverse_iteration_agree() {
        for &(zv, d, len) in &[(0.5493, 0, 30), (1.0, 3, 60), (1.2, 10, 50)] {
            let z = SqueezeParameter::new(zv).unwrap();
            let mut checked = 0;
            let mut previous = lowest_column(z, d, len);
            for p in 1..len {
                let mut padded = padded_column(z, d, p, len).unwrap();
                if raising_overlap(z, d, &padded, &previous) < 0.0 {
                    padded.iter_mut().for_each(|x| *x = -*x);
                }
                if let Some(rec) = recurrence_column(z, d, p, len) {
                    for q in 0..len {
                        assert!((rec[q] - padded[q]).abs() < 1e-12, "z {zv} d {d} p {p} q {q}");
                    }
                    checked += 1;
                }
                previous = padded;
            }
            assert!(checked > 0);
        }
    }

    #[test]
    fn oversqueezed_vacuum_is_rejected() {
        let z = SqueezeParameter::new(1.2).unwrap();
        let err = transition_kernel(z, &spec(8)).unwrap_err();
        match err {
            Error::Leakage {
                leaked,
                suggested_cutoff,
                ..
            } => {
                assert!((leaked - z.vacuum_tail(8)).abs() < 1e-12);
                assert!(suggested_cutoff.unwrap() > 8);
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
