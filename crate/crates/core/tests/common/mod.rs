#![allow(dead_code)]

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;

/// Dense two-qudit vector from `(left, right, sign, angle)` terms, each
/// weighted `sign·exp(i·angle)/√d`.
pub fn ket(d: usize, terms: &[(usize, usize, f64, f64)]) -> Vec<Complex64> {
    let mut v = vec![Complex64::new(0.0, 0.0); d * d];
    let w = 1.0 / (d as f64).sqrt();
    for &(l, r, sign, angle) in terms {
        v[l * d + r] += Complex64::from_polar(sign * w, angle);
    }
    v
}

pub fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn overlap(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Φ+, Φ-, Ψ+, Ψ- written out by hand, as 2×2 coefficient arrays.
pub fn qubit_bell_states() -> [[[f64; 2]; 2]; 4] {
    let h = FRAC_1_SQRT_2;
    [
        [[h, 0.0], [0.0, h]],
        [[h, 0.0], [0.0, -h]],
        [[0.0, h], [h, 0.0]],
        [[0.0, h], [-h, 0.0]],
    ]
}

/// Two qubit Bell states on the (high, low) bits of a ququart level.
pub fn qubit_pair_product(high: usize, low: usize) -> Vec<Complex64> {
    let b = qubit_bell_states();
    let mut v = vec![Complex64::new(0.0, 0.0); 16];
    for l in 0..4 {
        for r in 0..4 {
            let amp = b[high][l >> 1][r >> 1] * b[low][l & 1][r & 1];
            v[l * 4 + r] = Complex64::new(amp, 0.0);
        }
    }
    v
}

/// The four d = 6 states displayed for the symmetrized construction, tagged
/// `(c, p)`.
pub fn golden_d6() -> Vec<((usize, usize), Vec<Complex64>)> {
    let a = 4.0 * PI / 3.0;
    let b = 8.0 * PI / 3.0;
    vec![
        (
            (0, 4),
            ket(
                6,
                &[
                    (0, 0, 1., 0.),
                    (1, 1, 1., 0.),
                    (2, 2, 1., a),
                    (3, 3, 1., a),
                    (4, 4, 1., b),
                    (5, 5, 1., b),
                ],
            ),
        ),
        (
            (0, 5),
            ket(
                6,
                &[
                    (0, 0, 1., 0.),
                    (1, 1, -1., 0.),
                    (2, 2, 1., a),
                    (3, 3, -1., a),
                    (4, 4, 1., b),
                    (5, 5, -1., b),
                ],
            ),
        ),
        (
            (1, 1),
            ket(
                6,
                &[
                    (0, 1, 1., 0.),
                    (1, 0, -1., 0.),
                    (2, 5, 1., 0.),
                    (5, 2, -1., 0.),
                    (3, 4, 1., 0.),
                    (4, 3, -1., 0.),
                ],
            ),
        ),
        (
            (2, 5),
            ket(
                6,
                &[
                    (0, 2, 1., 0.),
                    (2, 0, -1., 0.),
                    (1, 3, 1., a),
                    (3, 1, -1., a),
                    (4, 5, 1., b),
                    (5, 4, -1., b),
                ],
            ),
        ),
    ]
}

/// Largest deviation of `χχ†` and `χᵀχ*` from `I/d`, via plain loops.
pub fn reduced_density_deviation(d: usize, amps: &[Complex64]) -> f64 {
    let mut worst: f64 = 0.0;
    for a in 0..d {
        for b in 0..d {
            let mut left = Complex64::new(0.0, 0.0);
            let mut right = Complex64::new(0.0, 0.0);
            for k in 0..d {
                left += amps[a * d + k] * amps[b * d + k].conj();
                right += amps[k * d + a] * amps[k * d + b].conj();
            }
            let target = if a == b { 1.0 / d as f64 } else { 0.0 };
            worst = worst
                .max((left - target).norm())
                .max((right - target).norm());
        }
    }
    worst
}
