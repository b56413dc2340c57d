//! Dense polynomial evaluation helpers.

use num_complex::Complex;
use num_traits::{Num, Zero};

use crate::hypermatrix::SignedHypermatrix;

/// Horner evaluation of `sum_i coeffs[i] z^i`.
pub fn horner<S: Num + Clone>(coeffs: &[Complex<S>], z: &Complex<S>) -> Complex<S> {
    coeffs
        .iter()
        .rev()
        .fold(Complex::zero(), |acc, c| acc * z.clone() + c.clone())
}

/// Nested Horner over a row-major coefficient block: axis 0 is outermost.
pub fn horner_nd<S: Num + Clone>(coeffs: &[Complex<S>], dims: &[usize], z: &[Complex<S>]) -> Complex<S> {
    match dims.split_first() {
        None => coeffs.first().cloned().unwrap_or_else(Complex::zero),
        Some((&n0, rest)) => {
            let chunk: usize = rest.iter().product();
            let inner: Vec<Complex<S>> = (0..n0)
                .map(|i| horner_nd(&coeffs[i * chunk..(i + 1) * chunk], rest, &z[1..]))
                .collect();
            horner(&inner, &z[0])
        }
    }
}

/// `sum_k a_k z_0^{k_0} ... z_{d-1}^{k_{d-1}}` by nested Horner.
pub fn eval_signed_horner(a: &SignedHypermatrix, z: &[Complex<f64>]) -> Complex<f64> {
    let coeffs: Vec<Complex<f64>> = a.entries().iter().map(|&c| Complex::new(c as f64, 0.0)).collect();
    horner_nd(&coeffs, a.dims(), z)
}

/// Same polynomial as a sum over the support with explicit powers.
pub fn eval_signed_sparse(a: &SignedHypermatrix, z: &[Complex<f64>]) -> Complex<f64> {
    a.indices()
        .zip(a.entries())
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| {
            let mono = k
                .iter()
                .zip(z)
                .fold(Complex::new(1.0, 0.0), |acc, (&e, zi)| acc * zi.powu(e as u32));
            mono * c as f64
        })
        .sum()
}
