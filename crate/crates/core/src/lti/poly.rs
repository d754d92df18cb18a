//! Dense real polynomials stored highest degree first.

use nalgebra::{Complex, DMatrix};

/// Effective degree: leading zeros are ignored, the zero polynomial has degree 0.
pub fn degree(coeffs: &[f64]) -> usize {
    match coeffs.iter().position(|&c| c != 0.0) {
        Some(i) => coeffs.len() - 1 - i,
        None => 0,
    }
}

/// Drops leading zeros, keeping at least one coefficient.
pub fn trim(coeffs: &[f64]) -> Vec<f64> {
    match coeffs.iter().position(|&c| c != 0.0) {
        Some(i) => coeffs[i..].to_vec(),
        None => vec![0.0],
    }
}

pub fn mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    if a.is_empty() || b.is_empty() {
        return vec![0.0];
    }
    let mut out = vec![0.0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Sum aligned at the constant term.
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().max(b.len());
    let mut out = vec![0.0; n];
    for (k, &x) in a.iter().rev().enumerate() {
        out[n - 1 - k] += x;
    }
    for (k, &y) in b.iter().rev().enumerate() {
        out[n - 1 - k] += y;
    }
    out
}

pub fn scale(a: &[f64], factor: f64) -> Vec<f64> {
    a.iter().map(|&c| c * factor).collect()
}

/// Left-pads with zeros to `len` coefficients. `a` must not be longer than `len`.
pub fn pad_to(a: &[f64], len: usize) -> Vec<f64> {
    debug_assert!(a.len() <= len);
    let mut out = vec![0.0; len - a.len()];
    out.extend_from_slice(a);
    out
}

/// Roots as eigenvalues of the companion matrix of the monic polynomial.
///
/// Leading zeros are trimmed first; a constant polynomial has no roots.
pub fn roots(coeffs: &[f64]) -> Vec<Complex<f64>> {
    let p = trim(coeffs);
    let n = p.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = p[0];
    // First row holds -a_{n-1} .. -a_0, ones on the subdiagonal.
    let companion = DMatrix::from_fn(n, n, |i, j| {
        if i == 0 {
            -p[j + 1] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion.complex_eigenvalues().iter().copied().collect()
}

/// Horner evaluation at a complex point.
pub fn eval_complex(coeffs: &[f64], s: Complex<f64>) -> Complex<f64> {
    coeffs
        .iter()
        .fold(Complex::new(0.0, 0.0), |acc, &c| acc * s + c)
}
