use num_complex::Complex64;
use proptest::prelude::*;
use qwp_core::eigen::{herm_eigen, loewner_leq};
use qwp_core::random::Sampler;
use qwp_core::ComplexMatrix;

/// Reference product by the textbook triple loop.
fn naive_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let mut data = vec![Complex64::new(0.0, 0.0); a.rows() * b.cols()];
    for i in 0..a.rows() {
        for j in 0..b.cols() {
            for k in 0..a.cols() {
                data[i * b.cols() + j] += a.get(i, k) * b.get(k, j);
            }
        }
    }
    ComplexMatrix::new(a.rows(), b.cols(), data).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn adjoint_is_an_involution(seed in any::<u64>(), r in 1usize..=8, c in 1usize..=8) {
        let a = Sampler::seeded(seed).gaussian_matrix(r, c);
        prop_assert_eq!(a.adjoint().adjoint(), a);
    }

    #[test]
    fn product_matches_reference(seed in any::<u64>(), n in 1usize..=6, k in 1usize..=6, m in 1usize..=6) {
        let mut s = Sampler::seeded(seed);
        let (a, b) = (s.gaussian_matrix(n, k), s.gaussian_matrix(k, m));
        prop_assert!((&a * &b).max_distance(&naive_product(&a, &b)) <= 1e-12);
    }

    #[test]
    fn trace_is_cyclic(seed in any::<u64>(), n in 1usize..=8) {
        let mut s = Sampler::seeded(seed);
        let (a, b, c) = (s.gaussian_matrix(n, n), s.gaussian_matrix(n, n), s.gaussian_matrix(n, n));
        let abc = (&(&a * &b) * &c).trace().unwrap();
        let cab = (&(&c * &a) * &b).trace().unwrap();
        let scale = 1.0 + a.frobenius_norm() * b.frobenius_norm() * c.frobenius_norm();
        prop_assert!((abc - cab).norm() <= 1e-10 * scale);
    }

    #[test]
    fn tensor_associative_and_mixed_product(seed in any::<u64>(), d in 1usize..=3) {
        let mut s = Sampler::seeded(seed);
        let (a, b, c, e) = (
            s.gaussian_matrix(d, d),
            s.gaussian_matrix(2, 2),
            s.gaussian_matrix(d, d),
            s.gaussian_matrix(2, 2),
        );
        let f = s.gaussian_matrix(2, 3);
        let (l, r) = (a.tensor(&b).tensor(&f), a.tensor(&b.tensor(&f)));
        prop_assert!(l.max_distance(&r) <= 1e-15 * (1.0 + l.max_abs()));
        // products of small Gaussian integers are exact in floating point
        let round = |m: &ComplexMatrix| {
            let data = m.entries().iter().map(|z| Complex64::new((4.0 * z.re).round(), (4.0 * z.im).round())).collect();
            ComplexMatrix::new(m.rows(), m.cols(), data).unwrap()
        };
        let (ia, ib, ifm) = (round(&a), round(&b), round(&f));
        prop_assert_eq!(ia.tensor(&ib).tensor(&ifm), ia.tensor(&ib.tensor(&ifm)));
        let lhs = &a.tensor(&b) * &c.tensor(&e);
        let rhs = (&a * &c).tensor(&(&b * &e));
        prop_assert!(lhs.max_distance(&rhs) <= 1e-12 * (1.0 + lhs.max_abs()));
    }

    #[test]
    fn eigen_reconstructs(seed in any::<u64>(), n in 1usize..=8) {
        let a = Sampler::seeded(seed).hermitian(n);
        let eig = herm_eigen(&a).unwrap();
        prop_assert!(eig.reconstruct().max_distance(&a) <= 1e-9 * (1.0 + a.max_abs()));
        let v = &eig.eigenvectors;
        prop_assert!((&v.adjoint() * v).max_distance(&ComplexMatrix::identity(n)) <= 1e-10);
        prop_assert!(eig.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn loewner_order_axioms(seed in any::<u64>(), n in 1usize..=6) {
        let mut s = Sampler::seeded(seed);
        let m = s.psd(n);
        let n1 = &m + &s.psd(n);
        let n2 = &n1 + &s.psd(n);
        prop_assert!(loewner_leq(&m, &m, 1e-9).unwrap());
        prop_assert!(loewner_leq(&m, &n1, 1e-9).unwrap());
        prop_assert!(loewner_leq(&n1, &n2, 1e-9).unwrap());
        prop_assert!(loewner_leq(&m, &n2, 1e-9).unwrap());
        // antisymmetry: both directions only within roundoff of equality
        let near = &m + &ComplexMatrix::identity(n).scale_real(1e-12);
        prop_assert!(loewner_leq(&m, &near, 1e-9).unwrap() && loewner_leq(&near, &m, 1e-9).unwrap());
        prop_assert!(m.max_distance(&near) <= 1e-8);
        let other = s.psd(n);
        if loewner_leq(&m, &other, 1e-9).unwrap() && loewner_leq(&other, &m, 1e-9).unwrap() {
            prop_assert!(m.max_distance(&other) <= 1e-8);
        }
    }
}
