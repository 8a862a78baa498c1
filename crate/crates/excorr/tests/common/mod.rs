//! Helpers shared by the integration test suites: closed-form eigenvalue
//! oracles, seeded dataset builders, and rank statistics. Everything here is
//! independent of the library's own solver paths.

#![allow(dead_code)]

use excorr::rng::SplitMix64;
use excorr::DataMatrix;

/// Eigenvalues of `[[1, r], [r, 1]]`, descending: `1 ± |r|`.
pub fn analytic_eig2(r: f64) -> [f64; 2] {
    [1.0 + r.abs(), 1.0 - r.abs()]
}

/// Eigenvalues of the unit-diagonal symmetric 3x3 matrix
/// `[[1, a, b], [a, 1, c], [b, c, 1]]`, descending, via the trigonometric
/// solution of the characteristic cubic.
pub fn analytic_eig3(a: f64, b: f64, c: f64) -> [f64; 3] {
    let p1 = a * a + b * b + c * c;
    if p1 == 0.0 {
        return [1.0, 1.0, 1.0];
    }
    let q = 1.0; // trace / 3
    let p = (2.0 * p1 / 6.0).sqrt();
    // (A - qI) has zero diagonal, so det((A - qI)/p) = 2abc / p^3.
    let det_b = 2.0 * a * b * c / (p * p * p);
    let r = (det_b / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    let l1 = q + 2.0 * p * phi.cos();
    let l3 = q + 2.0 * p * (phi + 2.0 * std::f64::consts::PI / 3.0).cos();
    let l2 = 3.0 * q - l1 - l3;
    let mut out = [l1, l2, l3];
    out.sort_by(|x, y| y.total_cmp(x));
    out
}

/// Dataset of independent uniform draws on `[-10, 10)`.
pub fn random_dataset(rng: &mut SplitMix64, n: usize, m: usize) -> DataMatrix {
    let columns = (0..n)
        .map(|_| (0..m).map(|_| rng.uniform(-10.0, 10.0)).collect())
        .collect();
    DataMatrix::new(excorr::data::column_names(n), columns).expect("valid random dataset")
}

/// Average ranks, ties sharing the mean rank.
fn ranks(values: &[f64]) -> Vec<f64> {
    let m = values.len();
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut out = vec![0.0; m];
    let mut i = 0;
    while i < m {
        let mut j = i;
        while j + 1 < m && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            out[idx] = rank;
        }
        i = j + 1;
    }
    out
}

/// Spearman rank correlation.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    excorr::pearson(&ranks(x), &ranks(y)).expect("rank vectors are non-degenerate")
}

#[cfg(test)]
mod self_checks {
    use super::*;

    #[test]
    fn spearman_of_monotone_sequences() {
        let x = [1.0, 2.0, 3.0, 4.0];
        let up = [10.0, 20.0, 30.0, 40.0];
        let down = [4.0, 3.0, 2.0, 1.0];
        assert!((spearman(&x, &up) - 1.0).abs() < 1e-12);
        assert!((spearman(&x, &down) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn analytic_eig3_known_cases() {
        let all_ones = analytic_eig3(1.0, 1.0, 1.0);
        assert!((all_ones[0] - 3.0).abs() < 1e-12);
        assert!(all_ones[1].abs() < 1e-12);
        assert!(all_ones[2].abs() < 1e-12);
        assert_eq!(analytic_eig3(0.0, 0.0, 0.0), [1.0, 1.0, 1.0]);
        let block = analytic_eig3(0.5, 0.0, 0.0);
        assert!((block[0] - 1.5).abs() < 1e-12);
        assert!((block[1] - 1.0).abs() < 1e-12);
        assert!((block[2] - 0.5).abs() < 1e-12);
    }
}
