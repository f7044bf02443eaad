// SPDX-License-Identifier: MIT OR Apache-2.0

//! Prefix sums shared by every window criterion.
//!
//! All window values (fast searches and exhaustive oracles alike) are taken as
//! differences `P[j] - P[i]` of one prefix array, so that competing routes agree
//! bit-for-bit and ties are resolved identically.

/// Returns `P` with `P[0] = 0` and `P[j] = Σ_{i<j} values[i]`.
pub(crate) fn prefix_sums(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let iter = values.into_iter();
    let mut out = Vec::with_capacity(iter.size_hint().0 + 1);
    let mut acc = 0.0;
    out.push(acc);
    for v in iter {
        acc += v;
        out.push(acc);
    }
    out
}

/// Prefix sums of the least-squares increments `2y - 1`.
pub(crate) fn lse_prefix(y: &[f64]) -> Vec<f64> {
    prefix_sums(y.iter().map(|&v| 2.0 * v - 1.0))
}

/// Prefix sums of the scan increments `(2y - 1) / 2`.
pub(crate) fn scan_prefix(y: &[f64]) -> Vec<f64> {
    prefix_sums(y.iter().map(|&v| 0.5 * (2.0 * v - 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn starts_at_zero_and_accumulates() {
        assert_eq!(prefix_sums([1.0, 2.0, 3.0]), vec![0.0, 1.0, 3.0, 6.0]);
        assert_eq!(prefix_sums(std::iter::empty()), vec![0.0]);
        assert_eq!(lse_prefix(&[1.0, 0.0]), vec![0.0, 1.0, 0.0]);
        assert_eq!(scan_prefix(&[1.0, 1.0]), vec![0.0, 0.5, 1.0]);
    }
}
