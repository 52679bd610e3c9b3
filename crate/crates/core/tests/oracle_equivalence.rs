use cosmoflux_core::fock::oracle_cutoff_for;
use cosmoflux_core::*;

fn worst_difference(z: SqueezeParameter, max_index: usize) -> (f64, f64) {
    let cutoff = oracle_cutoff_for(z, max_index, 1e-12);
    let spec = TruncationSpec::new(cutoff, 1e-2).unwrap();
    let oracle = squeeze_operator_oracle(z, &spec).unwrap();
    let kernel = transition_kernel(z, &spec).unwrap();
    let mut analytic: f64 = 0.0;
    let mut spectral: f64 = 0.0;
    for na in 0..=max_index {
        for nb in 0..=max_index {
            let n = JointFockIndex::new(na, nb);
            for ma in 0..=max_index {
                for mb in 0..=max_index {
                    let m = JointFockIndex::new(ma, mb);
                    let o = oracle.get(m, n);
                    analytic = analytic.max((squeeze_amplitude(z, n, m) - o).abs());
                    spectral = spectral.max((kernel.amplitude(m, n) - o).abs());
                }
            }
        }
    }
    (analytic, spectral)
}

#[test]
fn amplitudes_match_the_exponential_up_to_index_12() {
    for z in [0.25, 0.5493, 1.0] {
        let (analytic, spectral) = worst_difference(SqueezeParameter::new(z).unwrap(), 12);
        assert!(analytic <= 1e-10, "z = {z}: double sum off by {analytic:e}");
        assert!(spectral <= 1e-10, "z = {z}: kernel off by {spectral:e}");
    }
}

#[test]
fn exact_tanh_one_half_matches_too() {
    let (analytic, spectral) = worst_difference(SqueezeParameter::from_tanh(0.5).unwrap(), 12);
    assert!(analytic <= 1e-10 && spectral <= 1e-10);
}

#[test]
fn oracle_is_orthogonal_at_cutoff_40() {
    let spec = TruncationSpec::new(40, 1e-2).unwrap();
    for z in [0.25, 0.5493, 1.0, 1.2] {
        let z = SqueezeParameter::new(z).unwrap();
        let oracle = squeeze_operator_oracle(z, &spec).unwrap();
        let defect = oracle.orthogonality_defect();
        assert!(defect < 1e-10, "z = {}: {defect:e}", z.z());
    }
}

#[test]
fn oracle_reports_cutoff_leakage() {
    let spec = TruncationSpec::new(8, 1e-8).unwrap();
    let err = squeeze_operator_oracle(SqueezeParameter::new(1.2).unwrap(), &spec).unwrap_err();
    assert!(err.is_leakage());
}

#[test]
fn vacuum_law() {
    for t in [0.1, 0.5, 0.8] {
        let z = SqueezeParameter::from_tanh(t).unwrap();
        let kernel = transition_kernel(z, &TruncationSpec::new(120, 1e-8).unwrap()).unwrap();
        let c2 = z.cosh() * z.cosh();
        for n in 0..=10 {
            let expected = t.powi(2 * n as i32) / c2;
            let p = kernel.prob(JointFockIndex::new(n, n), JointFockIndex::VACUUM);
            assert!((p - expected).abs() <= 1e-9 * expected, "tanh {t}, n {n}");
        }
        // nothing leaves the diagonal sector
        assert_eq!(kernel.prob(JointFockIndex::new(2, 1), JointFockIndex::VACUUM), 0.0);
    }
}

#[test]
fn canonical_vacuum_masses() {
    let z = SqueezeParameter::from_tanh(0.5).unwrap();
    let kernel = transition_kernel(z, &TruncationSpec::new(40, 1e-8).unwrap()).unwrap();
    for (n, e) in [0.75, 0.1875, 0.046875, 0.01171875].into_iter().enumerate() {
        let p = kernel.prob(JointFockIndex::new(n, n), JointFockIndex::VACUUM);
        assert!((p - e).abs() <= 1e-12, "n = {n}: {p}");
    }
}
