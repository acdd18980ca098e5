//! Helpers for the test suites. Not part of the public API surface.

use std::collections::HashMap;

/// Adjusted Rand index between two labelings of the same items, in
/// [-1, 1]; 1 means identical partitions up to label renaming.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> f64 {
    assert_eq!(a.len(), b.len(), "labelings must cover the same items");
    let n = a.len();
    if n < 2 {
        return 1.0;
    }
    let mut contingency: HashMap<(usize, usize), f64> = HashMap::new();
    let mut row: HashMap<usize, f64> = HashMap::new();
    let mut col: HashMap<usize, f64> = HashMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *contingency.entry((x, y)).or_default() += 1.0;
        *row.entry(x).or_default() += 1.0;
        *col.entry(y).or_default() += 1.0;
    }
    let choose2 = |m: f64| m * (m - 1.0) / 2.0;
    let sum_ij: f64 = contingency.values().map(|&m| choose2(m)).sum();
    let sum_a: f64 = row.values().map(|&m| choose2(m)).sum();
    let sum_b: f64 = col.values().map(|&m| choose2(m)).sum();
    let total = choose2(n as f64);
    let expected = sum_a * sum_b / total;
    let max_index = 0.5 * (sum_a + sum_b);
    if (max_index - expected).abs() < 1e-15 {
        return 1.0; // both partitions degenerate in the same way
    }
    (sum_ij - expected) / (max_index - expected)
}
