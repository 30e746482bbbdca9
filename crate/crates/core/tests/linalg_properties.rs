use num_complex::Complex64;
use proptest::prelude::*;
use tfd_core::qcore::{
    expectation, hermitian_eig, kron, partial_trace_b, partial_trace_second, DenseMatrix, StateVector, FULL_DIM,
};

fn complex() -> impl Strategy<Value = Complex64> {
    (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(re, im)| Complex64::new(re, im))
}

fn square(n: usize) -> impl Strategy<Value = DenseMatrix> {
    prop::collection::vec(complex(), n * n).prop_map(|v| DenseMatrix::from_row_major(v).unwrap())
}

fn hermitian(n: usize) -> impl Strategy<Value = DenseMatrix> {
    square(n).prop_map(|m| (&m + &m.adjoint()).scale(0.5))
}

fn state() -> impl Strategy<Value = StateVector> {
    prop::collection::vec(complex(), FULL_DIM)
        .prop_filter("non-zero", |v| v.iter().map(|z| z.norm_sqr()).sum::<f64>() > 1e-3)
        .prop_map(|v| StateVector::from_slice(&v).unwrap().normalized())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn eigendecomposition_reconstructs(h in hermitian(16)) {
        let eig = hermitian_eig(&h).unwrap();
        prop_assert!(eig.reconstruct().max_abs_diff(&h) < 1e-10);
        let v = &eig.eigenvectors;
        prop_assert!(v.adjoint().matmul(v).max_abs_diff(&DenseMatrix::identity(16)) < 1e-10);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn unitary_exponentials_invert(h in hermitian(16), t in -5.0f64..5.0) {
        let eig = hermitian_eig(&h).unwrap();
        let u = eig.map_complex(|l| Complex64::from_polar(1.0, t * l));
        let u_inv = eig.map_complex(|l| Complex64::from_polar(1.0, -t * l));
        prop_assert!(u.matmul(&u_inv).max_abs_diff(&DenseMatrix::identity(16)) < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_trace_is_linear_and_trace_preserving(a in square(16), b in square(16), c in -2.0f64..2.0) {
        let combo = &a + &b.scale(c);
        let lhs = partial_trace_b(&combo).unwrap();
        let rhs = &partial_trace_b(&a).unwrap() + &partial_trace_b(&b).unwrap().scale(c);
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
        prop_assert!((lhs.trace() - combo.trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_matches_index_loops(a in square(16)) {
        // rho_A[a1 a2, a1' a2'] = sum_{b1 b2} rho[a1 a2 b1 b2, a1' a2' b1 b2]
        let reduced = partial_trace_b(&a).unwrap();
        for a1 in 0..2 { for a2 in 0..2 { for c1 in 0..2 { for c2 in 0..2 {
            let mut acc = Complex64::new(0.0, 0.0);
            for b1 in 0..2 { for b2 in 0..2 {
                let row = (a1 << 3) | (a2 << 2) | (b1 << 1) | b2;
                let col = (c1 << 3) | (c2 << 2) | (b1 << 1) | b2;
                acc += a[(row, col)];
            }}
            prop_assert!((reduced[((a1 << 1) | a2, (c1 << 1) | c2)] - acc).norm() < 1e-12);
        }}}}
    }

    #[test]
    fn partial_trace_of_product_operator(a in square(4), b in square(4)) {
        let reduced = partial_trace_second(&kron(&a, &b), 4, 4).unwrap();
        prop_assert!(reduced.max_abs_diff(&a.scale_complex(b.trace())) < 1e-12);
    }

    #[test]
    fn kron_is_associative(a in square(2), b in square(2), c in square(3)) {
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(left.max_abs_diff(&right) < 1e-12);
    }

    #[test]
    fn expectation_equals_trace_against_density(s in state(), h in hermitian(16)) {
        let rho = DenseMatrix::outer(s.amplitudes(), s.amplitudes());
        let via_trace = h.matmul(&rho).trace();
        prop_assert!((expectation(&s, &h).unwrap() - via_trace.re).abs() < 1e-12);
        prop_assert!(via_trace.im.abs() < 1e-12);
    }
}

#[test]
fn non_hermitian_input_rejected() {
    let mut m = DenseMatrix::identity(16);
    m[(0, 1)] = Complex64::new(1.0, 0.0);
    assert!(hermitian_eig(&m).is_err());
    assert!(expectation(&StateVector::basis(0), &m).is_err());
}

#[test]
fn partial_trace_rejects_wrong_dimension() {
    assert!(partial_trace_b(&DenseMatrix::identity(8)).is_err());
}
