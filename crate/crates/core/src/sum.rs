//! Fixed-order summation.
//!
//! Values are summed left to right inside contiguous blocks of [`BLOCK`]
//! entries and the block totals are combined by a balanced binary tree, so
//! the rounding pattern depends only on the input length.

use num_complex::Complex64;
use std::ops::Add;

pub const BLOCK: usize = 1024;

pub fn tree_reduce<T: Copy + Add<Output = T>>(values: &mut Vec<T>, zero: T) -> T {
    if values.is_empty() {
        return zero;
    }
    while values.len() > 1 {
        let half = values.len().div_ceil(2);
        for i in 0..values.len() / 2 {
            values[i] = values[2 * i] + values[2 * i + 1];
        }
        if values.len() % 2 == 1 {
            values[half - 1] = values[values.len() - 1];
        }
        values.truncate(half);
    }
    values[0]
}

pub fn pairwise_sum<T: Copy + Add<Output = T>>(xs: &[T], zero: T) -> T {
    let mut blocks: Vec<T> = xs
        .chunks(BLOCK)
        .map(|c| c.iter().fold(zero, |a, &b| a + b))
        .collect();
    tree_reduce(&mut blocks, zero)
}

pub fn pairwise_sum_f64(xs: &[f64]) -> f64 {
    pairwise_sum(xs, 0.0)
}

pub fn pairwise_sum_c64(xs: &[Complex64]) -> Complex64 {
    pairwise_sum(xs, Complex64::new(0.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_exact_integer_sums() {
        for n in [0usize, 1, 2, 3, 1023, 1024, 1025, 5000] {
            let xs: Vec<f64> = (1..=n).map(|k| k as f64).collect();
            assert_eq!(pairwise_sum_f64(&xs), (n * (n + 1) / 2) as f64);
        }
    }
}
