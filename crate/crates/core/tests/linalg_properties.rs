use num_complex::Complex64;
use proptest::prelude::*;
use spinqcorr::linalg::{eigh, matrix_sqrt, ComplexMatrix, HermitianOperator};

fn hermitian(dim: usize) -> impl Strategy<Value = HermitianOperator> {
    prop::collection::vec(-1.0f64..1.0, 2 * dim * dim).prop_map(move |v| {
        let mut m = ComplexMatrix::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                let k = 2 * (i * dim + j);
                m[(i, j)] = Complex64::new(v[k], v[k + 1]);
            }
        }
        let h = &m + &m.adjoint();
        HermitianOperator::new(h).unwrap()
    })
}

fn density(dim: usize) -> impl Strategy<Value = HermitianOperator> {
    hermitian(dim).prop_map(|h| {
        let p = h.matrix() * h.matrix();
        let t = p.trace().re;
        HermitianOperator::new(p.scale(1.0 / t)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn eigh_reconstructs_and_is_orthonormal(h in prop_oneof![hermitian(2), hermitian(4)]) {
        let dec = eigh(&h);
        prop_assert!(dec.reconstruct().max_abs_diff(h.matrix()) < 1e-12);
        let v = &dec.eigenvectors;
        let gram = &v.adjoint() * v;
        prop_assert!(gram.max_abs_diff(&ComplexMatrix::identity(h.dim())) < 1e-12);
        prop_assert!(dec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn sqrt_squares_back(rho in density(4)) {
        let s = matrix_sqrt(&rho).unwrap();
        prop_assert!((s.matrix() * s.matrix()).max_abs_diff(rho.matrix()) < 1e-9);
    }

    #[test]
    fn sqrt_scales_with_root_of_factor(rho in density(4), c in 0.01f64..100.0) {
        let scaled = HermitianOperator::new(rho.matrix().scale(c)).unwrap();
        let lhs = matrix_sqrt(&scaled).unwrap();
        let rhs = matrix_sqrt(&rho).unwrap().matrix().scale(c.sqrt());
        prop_assert!(lhs.matrix().max_abs_diff(&rhs) < 1e-10);
    }
}
