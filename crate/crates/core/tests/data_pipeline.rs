mod common;

use glasso_knots_core::{
    correlation_matrix, knot_sequence, ordered_edges, p_values, standardize, test_statistics,
    DataMatrix,
};
use proptest::prelude::*;
use rand::Rng;

fn random_data(seed: u64, n: usize, p: usize) -> DataMatrix {
    let mut r = common::rng(seed);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| (0..p).map(|_| r.random_range(-3.0..3.0)).collect())
        .collect();
    DataMatrix::from_rows(&rows).unwrap()
}

/// Two-pass sample covariance divided by the product of sample sds.
fn naive_correlation(d: &DataMatrix, i: usize, j: usize) -> f64 {
    let n = d.n() as f64;
    let mi = (0..d.n()).map(|r| d.get(r, i)).sum::<f64>() / n;
    let mj = (0..d.n()).map(|r| d.get(r, j)).sum::<f64>() / n;
    let cov = (0..d.n())
        .map(|r| (d.get(r, i) - mi) * (d.get(r, j) - mj))
        .sum::<f64>()
        / (n - 1.0);
    let vi = (0..d.n()).map(|r| (d.get(r, i) - mi).powi(2)).sum::<f64>() / (n - 1.0);
    let vj = (0..d.n()).map(|r| (d.get(r, j) - mj).powi(2)).sum::<f64>() / (n - 1.0);
    cov / (vi.sqrt() * vj.sqrt())
}

#[test]
fn correlation_matches_two_pass_oracle() {
    let d = random_data(5, 10, 4);
    let c = correlation_matrix(&d).unwrap();
    for i in 0..4 {
        assert_eq!(c.get(i, i), 1.0);
        for j in 0..4 {
            if i != j {
                assert!((c.get(i, j) - naive_correlation(&d, i, j)).abs() < 1e-12);
                assert_eq!(c.get(i, j), c.get(j, i));
            }
        }
    }
}

#[test]
fn standardized_data_has_same_correlation() {
    let d = random_data(6, 30, 5);
    let a = correlation_matrix(&d).unwrap();
    let b = correlation_matrix(&standardize(&d).unwrap()).unwrap();
    for (x, y) in a.values().iter().zip(b.values()) {
        assert!((x - y).abs() < 1e-12);
    }
}

fn permute_columns(d: &DataMatrix, perm: &[usize], scale: &[f64]) -> DataMatrix {
    let rows: Vec<Vec<f64>> = (0..d.n())
        .map(|r| perm.iter().zip(scale).map(|(&j, s)| d.get(r, j) * s).collect())
        .collect();
    DataMatrix::from_rows(&rows).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn standardize_is_idempotent(seed in any::<u64>(), n in 3usize..40, p in 2usize..6) {
        let s = standardize(&random_data(seed, n, p)).unwrap();
        let t = standardize(&s).unwrap();
        for (a, b) in s.values().iter().zip(t.values()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        for j in 0..p {
            let col = s.column(j);
            let mean = col.iter().sum::<f64>() / n as f64;
            let var = col.iter().map(|v| v * v).sum::<f64>() / n as f64;
            prop_assert!(mean.abs() < 1e-12);
            prop_assert!((var - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn correlation_is_scale_free(seed in any::<u64>(), factor in prop_oneof![-1e3f64..-1e-3, 1e-3f64..1e3]) {
        let d = random_data(seed, 25, 4);
        let scale = [factor, 1.0, 1.0, 1.0];
        let e = permute_columns(&d, &[0, 1, 2, 3], &scale);
        let a = correlation_matrix(&d).unwrap();
        let b = correlation_matrix(&e).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                let want = if (i == 0) != (j == 0) && factor < 0.0 { -a.get(i, j) } else { a.get(i, j) };
                prop_assert!((b.get(i, j) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn statistics_invariant_under_relabel_and_binary_rescale(
        seed in any::<u64>(),
        shift in 0usize..6,
        pow in prop::collection::vec(-4i32..4, 6),
    ) {
        // Power-of-two scale factors are exact in floating point, so the
        // statistics must agree bit for bit.
        let d = random_data(seed, 40, 6);
        let perm: Vec<usize> = (0..6).map(|j| (j + shift) % 6).collect();
        let scale: Vec<f64> = pow.iter().map(|&e| 2f64.powi(e)).collect();
        let e = permute_columns(&d, &perm, &scale);
        let a = test_statistics(&knot_sequence(&ordered_edges(&correlation_matrix(&d).unwrap()))).unwrap();
        let b = test_statistics(&knot_sequence(&ordered_edges(&correlation_matrix(&e).unwrap()))).unwrap();
        prop_assert_eq!(a.statistics(), b.statistics());
    }

    #[test]
    fn report_invariants(seed in any::<u64>(), m in 0usize..4) {
        let d = random_data(seed, 30, 7);
        let r = test_statistics(&knot_sequence(&ordered_edges(&correlation_matrix(&d).unwrap()))).unwrap();
        let q = p_values(&r, Some(m)).unwrap();
        for s in &q.steps {
            prop_assert!(s.t >= 0.0);
            prop_assert_eq!(s.t, 30.0 * s.rho_k * (s.rho_k - s.rho_k1));
            prop_assert_eq!(s.p_conservative, libm::exp(-s.t));
            match s.p_exact_given_m {
                Some(pe) => {
                    prop_assert!(s.k > m);
                    prop_assert!(s.p_conservative >= pe);
                }
                None => prop_assert!(s.k <= m),
            }
        }
    }
}
