//! Property tests for the cross-module invariants: oracle equivalence on
//! random matrices, metric axioms of the Kolmogorov distance, the simplex
//! invariant of Dirichlet draws, and the Herglotz property of every
//! m-function route.

use num_complex::Complex64;
use proptest::prelude::*;

use jacobi_spectra::distributions::{sample_dirichlet_sym, RngStream};
use jacobi_spectra::spectral::{discrete_m_function, moment_oracle, spectral_measure};
use jacobi_spectra::stats::kolmogorov_distance;
use jacobi_spectra::{JacobiMatrix, SpectralMeasure};

fn jacobi_matrix_strategy(max_n: usize) -> impl Strategy<Value = JacobiMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        (
            proptest::collection::vec(-2.0..2.0f64, n),
            proptest::collection::vec(0.01..2.0f64, n - 1),
        )
            .prop_map(|(diag, offdiag)| JacobiMatrix::new(diag, offdiag).unwrap())
    })
}

fn measure_strategy(max_atoms: usize) -> impl Strategy<Value = SpectralMeasure> {
    (1..=max_atoms).prop_flat_map(|n| {
        (
            proptest::collection::btree_set(-10i32..10, n),
            proptest::collection::vec(0.05..1.0f64, n),
        )
            .prop_map(|(locations, raw)| {
                let total: f64 = raw.iter().sum();
                let atoms = locations
                    .into_iter()
                    .zip(raw)
                    .map(|(l, w)| (l as f64, w / total))
                    .collect();
                SpectralMeasure::new(atoms).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn oracle_equivalence_on_random_matrices(j in jacobi_matrix_strategy(12)) {
        let mu = spectral_measure(&j).unwrap();
        for k in 0..=(2 * j.size() as u32) {
            let oracle = moment_oracle(&j, k);
            let atoms = mu.moment(k);
            // corner inputs cancel odd moments by several orders of
            // magnitude; the honest error scale is the uncancelled mass
            // sum w |lambda|^k, which equals |moment| for even k
            let abs_moment: f64 = mu
                .atoms()
                .iter()
                .map(|&(l, w)| w * l.abs().powi(k as i32))
                .sum();
            let tol = 1e-10 * abs_moment.max(oracle.abs()).max(1.0);
            prop_assert!(
                (atoms - oracle).abs() <= tol,
                "k={k}: atoms {atoms} oracle {oracle}"
            );
        }
    }

    #[test]
    fn kolmogorov_is_a_metric(
        a in measure_strategy(6),
        b in measure_strategy(6),
        c in measure_strategy(6),
    ) {
        prop_assert_eq!(kolmogorov_distance(&a, &a), 0.0);
        let ab = kolmogorov_distance(&a, &b);
        prop_assert_eq!(ab, kolmogorov_distance(&b, &a));
        prop_assert!((0.0..=1.0).contains(&ab));
        let ac = kolmogorov_distance(&a, &c);
        let cb = kolmogorov_distance(&c, &b);
        prop_assert!(ab <= ac + cb + 1e-15, "triangle: {ab} > {ac} + {cb}");
    }

    #[test]
    fn dirichlet_stays_inside_simplex(
        seed in any::<u64>(),
        n in 1usize..40,
        alpha in 0.05f64..8.0,
    ) {
        let mut stream = RngStream::new(seed);
        let w = sample_dirichlet_sym(&mut stream, n, alpha).unwrap();
        prop_assert!(w.iter().all(|&x| x > 0.0));
        prop_assert_eq!(w.iter().sum::<f64>(), 1.0);
    }

    #[test]
    fn discrete_m_function_is_herglotz(
        mu in measure_strategy(8),
        re in -5.0f64..5.0,
        im in 0.001f64..4.0,
    ) {
        let z = Complex64::new(re, im);
        let m = discrete_m_function(&mu, z).unwrap();
        prop_assert!(m.im > 0.0, "Im m = {} at z = {z}", m.im);
        let conj = discrete_m_function(&mu, z.conj()).unwrap();
        prop_assert_eq!(m.conj(), conj);
    }

    #[test]
    fn truncation_recursion_residual_is_tiny(j in jacobi_matrix_strategy(10)) {
        prop_assume!(j.size() >= 2);
        let mu = spectral_measure(&j).unwrap();
        let mu1 = spectral_measure(&j.truncate_top().unwrap()).unwrap();
        let z = Complex64::new(0.7, 1.3);
        let m = discrete_m_function(&mu, z).unwrap();
        let m1 = discrete_m_function(&mu1, z).unwrap();
        let residual = (m * (z - j.diag()[0] + j.offdiag()[0].powi(2) * m1) + 1.0).norm();
        prop_assert!(residual < 1e-10, "residual {residual}");
    }
}
