//! Floating-point Fourier coefficients over the characters of `F*`.
//! Diagnostic only: nothing in the exact pipelines depends on these values.

use num_complex::Complex64;

use super::GAElem;

/// `χ(S) = Σ S_u χ(u)` for the character with `χ(g) = e^{2πi·k/(q-1)}`.
pub fn fourier_coefficient(s: &GAElem, chi_index: u64) -> Complex64 {
    let m = s.len() as u64;
    s.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let e = (chi_index % m) * i as u64 % m;
            let theta = 2.0 * std::f64::consts::PI * e as f64 / m as f64;
            c.to_complex() * Complex64::from_polar(1.0, theta)
        })
        .sum()
}

/// `S_{g^i} = (1/|F*|) Σ_χ χ(S)·conj(χ(g^i))`, given all `χ_k(S)` in order.
pub fn inverse_fourier(transform: &[Complex64]) -> Vec<Complex64> {
    let m = transform.len();
    (0..m)
        .map(|i| {
            transform
                .iter()
                .enumerate()
                .map(|(k, x)| {
                    let theta = -2.0 * std::f64::consts::PI * ((k * i) % m) as f64 / m as f64;
                    x * Complex64::from_polar(1.0, theta)
                })
                .sum::<Complex64>()
                / m as f64
        })
        .collect()
}
