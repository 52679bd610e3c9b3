use super::{JointFockIndex, SqueezeParameter};
use crate::math::{powi, sqrt};

/// `<m| S |n>` from the normal-ordered disentangling
/// `S = exp(t a^dagger b^dagger) (cosh z)^{-(N_a + N_b + 1)} exp(-t a b)`,
/// `t = tanh z`, as a finite alternating sum over the number `j` of pairs
/// removed by the right factor.
///
/// The sum cancels catastrophically once `sinh^2 z` times the occupations is
/// large (roughly `z >= 1` with indices in the tens); [`transition_kernel`]
/// uses a spectral route instead and this function serves as the closed-form
/// reference for small indices.
///
/// [`transition_kernel`]: super::transition_kernel
pub fn squeeze_amplitude(z: SqueezeParameter, n: JointFockIndex, m: JointFockIndex) -> f64 {
    if m.difference() != n.difference() {
        return 0.0;
    }
    if z.is_zero() {
        return if m == n { 1.0 } else { 0.0 };
    }
    let (na, nb, ma, mb) = (n.n_a, n.n_b, m.n_a, m.n_b);
    // l = j + m_a - n_a pairs are created by the left factor.
    let j_min = na.saturating_sub(ma);
    let j_max = na.min(nb);
    if j_min > j_max {
        return 0.0;
    }
    let l_of = |j: usize| j + ma - na;

    let t = z.tanh();
    let inv_c = 1.0 / z.cosh();
    let s2 = z.sinh() * z.sinh();

    let j = j_min;
    let l = l_of(j);
    let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
    let mut term = sign
        * powi(t, (j + l) as u32)
        * powi(inv_c, (na + nb + 1 - 2 * j) as u32)
        * sqrt(binomial(na, j) * binomial(nb, j) * binomial(ma, l) * binomial(mb, l));

    let mut sum = term;
    for j in j_min..j_max {
        let l = l_of(j);
        let ratio = sqrt(((na - j) * (nb - j)) as f64 * ((ma - l) * (mb - l)) as f64)
            / ((j + 1) * (l + 1)) as f64;
        term *= -s2 * ratio;
        sum += term;
    }
    sum
}

fn binomial(n: usize, k: usize) -> f64 {
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}
