use nalgebra::{Matrix4, Schur};
use num_complex::Complex64;
use proptest::prelude::*;
use tfd_core::metrics::full_system_proximity;
use tfd_core::qcore::hermitian_eig;
use tfd_core::tfim::reduced_density;
use tfd_core::{fidelity, subsystem_proximity, trace_distance, xi_metric, DenseMatrix, ProximityPair, StateVector};

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn state() -> impl Strategy<Value = StateVector> {
    prop::collection::vec(complex(), 16)
        .prop_filter("non-zero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
        .prop_map(|v| StateVector::from_slice(&v).unwrap().normalized())
}

/// Random 4x4 unitary as exp(iH) for a random Hermitian H.
fn unitary() -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(complex(), 16).prop_map(|v| {
        let m = DenseMatrix::from_row_major(v).unwrap();
        let h = (&m + &m.adjoint()).scale(0.5);
        hermitian_eig(&h).unwrap().map_complex(|l| Complex64::from_polar(1.0, 3.0 * l))
    })
}

/// F = (sum_i sqrt(lambda_i(rho sigma)))^2 from the Schur form of the
/// non-Hermitian product.
fn fidelity_via_product(rho: &DenseMatrix, sigma: &DenseMatrix) -> f64 {
    let p = rho.matmul(sigma);
    let m = Matrix4::from_fn(|i, j| p[(i, j)]);
    let eig = Schur::new(m).eigenvalues().expect("complex Schur form");
    let tr: f64 = eig.iter().map(|l| l.re.max(0.0).sqrt()).sum();
    tr * tr
}

fn refs(v: &[(StateVector, StateVector)]) -> Vec<(&StateVector, &StateVector)> {
    v.iter().map(|(x, y)| (x, y)).collect()
}

fn conjugate(u: &DenseMatrix, m: &DenseMatrix) -> DenseMatrix {
    u.matmul(m).matmul(&u.adjoint())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn fidelity_agrees_with_product_spectrum(a in state(), b in state()) {
        let (rho, sigma) = (reduced_density(&a), reduced_density(&b));
        prop_assert!((fidelity(&rho, &sigma).unwrap() - fidelity_via_product(&rho, &sigma)).abs() < 1e-8);
    }

    #[test]
    fn metrics_are_unitarily_invariant(a in state(), b in state(), u in unitary()) {
        let (rho, sigma) = (reduced_density(&a), reduced_density(&b));
        let (rho_u, sigma_u) = (conjugate(&u, &rho), conjugate(&u, &sigma));
        prop_assert!((fidelity(&rho, &sigma).unwrap() - fidelity(&rho_u, &sigma_u).unwrap()).abs() < 1e-9);
        prop_assert!((trace_distance(&rho, &sigma).unwrap() - trace_distance(&rho_u, &sigma_u).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn fuchs_van_de_graaf_holds(a in state(), b in state()) {
        let pair = subsystem_proximity(&a, &b).unwrap();
        prop_assert!(pair.fuchs_van_de_graaf_violation() < 1e-9);
        prop_assert!((0.0..=1.0).contains(&pair.fidelity));
        prop_assert!((0.0..=1.0).contains(&pair.trace_distance));
    }

    #[test]
    fn identical_states_are_indistinguishable(a in state()) {
        let pair = subsystem_proximity(&a, &a).unwrap();
        prop_assert!((pair.fidelity - 1.0).abs() < 1e-10);
        prop_assert!(pair.trace_distance < 1e-10);
        prop_assert!((full_system_proximity(&a, &a).fidelity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn xi_is_additive_over_disjoint_pairs(p in prop::collection::vec((state(), state()), 1..6), q in prop::collection::vec((state(), state()), 1..6)) {
        let joint: Vec<(StateVector, StateVector)> = p.iter().chain(&q).cloned().collect();
        let whole = xi_metric(refs(&joint));
        let parts = xi_metric(refs(&p)) + xi_metric(refs(&q));
        prop_assert!(whole <= parts + 1e-12);
        prop_assert!(whole >= 0.0);
    }
}

#[test]
fn fvdg_pair_construction() {
    let pair = ProximityPair {
        fidelity: 0.81,
        trace_distance: 0.5,
    };
    assert!(pair.fuchs_van_de_graaf_violation() > 0.0);
}
