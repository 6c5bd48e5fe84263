//! Exchange (SWAP) analysis, reduced density matrices and the odd-`d`
//! obstruction.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bell::BellState;
use crate::error::{check_even, Error, Result};
use crate::linalg::{self, ComplexMatrix, Tolerance};

/// `SWAP`: amplitude of `|i⟩|j⟩` becomes that of `|j⟩|i⟩`.
pub fn swap_amplitudes(d: usize, amplitudes: &[Complex64]) -> Vec<Complex64> {
    (0..d * d)
        .map(|idx| amplitudes[(idx % d) * d + idx / d])
        .collect()
}

pub fn swap_apply(state: &BellState) -> Vec<Complex64> {
    swap_amplitudes(state.d, &state.amplitudes)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryLabel {
    Symmetric,
    Antisymmetric,
    Neither,
}

impl SymmetryLabel {
    pub fn eigenvalue(self) -> Option<i8> {
        match self {
            SymmetryLabel::Symmetric => Some(1),
            SymmetryLabel::Antisymmetric => Some(-1),
            SymmetryLabel::Neither => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SymmetryClass {
    pub label: SymmetryLabel,
    /// `min over ± of ‖SWAP|ψ⟩ ∓ |ψ⟩‖`.
    pub residual: f64,
}

pub fn classify_amplitudes(d: usize, amplitudes: &[Complex64], tol: Tolerance) -> SymmetryClass {
    let swapped = swap_amplitudes(d, amplitudes);
    let dist = |sign: f64| {
        swapped
            .iter()
            .zip(amplitudes)
            .map(|(s, a)| (s - a * sign).norm_sqr())
            .sum::<f64>()
            .sqrt()
    };
    let (sym, anti) = (dist(1.0), dist(-1.0));
    let residual = sym.min(anti);
    let label = if !tol.accepts(residual) {
        SymmetryLabel::Neither
    } else if sym <= anti {
        SymmetryLabel::Symmetric
    } else {
        SymmetryLabel::Antisymmetric
    };
    SymmetryClass { label, residual }
}

pub fn classify_symmetry(state: &BellState, tol: Tolerance) -> SymmetryClass {
    classify_amplitudes(state.d, &state.amplitudes, tol)
}

/// SWAP eigenvalue of the constructed `|Ψ_c^p⟩`: every `c = 0` state is
/// symmetric since its terms are all `|k⟩|k⟩`; otherwise `(-1)^p`.
pub fn expected_eigenvalue(c: usize, p: usize) -> i8 {
    if c == 0 || p.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `(d(d+1)/2, d(d-1)/2)`: symmetric and antisymmetric state counts.
pub fn symmetry_counts(d: usize) -> Result<(usize, usize)> {
    check_even(d)?;
    Ok((d * (d + 1) / 2, d * (d - 1) / 2))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectorCounts {
    pub symmetric: usize,
    pub antisymmetric: usize,
    pub neither: usize,
}

pub fn count_sectors<'a>(
    states: impl IntoIterator<Item = &'a BellState>,
    tol: Tolerance,
) -> SectorCounts {
    let mut counts = SectorCounts::default();
    for state in states {
        match classify_symmetry(state, tol).label {
            SymmetryLabel::Symmetric => counts.symmetric += 1,
            SymmetryLabel::Antisymmetric => counts.antisymmetric += 1,
            SymmetryLabel::Neither => counts.neither += 1,
        }
    }
    counts
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Subsystem {
    Left,
    Right,
}

/// Partial trace over the other particle.
pub fn reduced_density(state: &BellState, subsystem: Subsystem) -> ComplexMatrix {
    let d = state.d;
    let chi = |l: usize, r: usize| state.amplitudes[l * d + r];
    ComplexMatrix::from_fn(d, d, |a, b| match subsystem {
        Subsystem::Left => (0..d).map(|r| chi(a, r) * chi(b, r).conj()).sum(),
        Subsystem::Right => (0..d).map(|l| chi(l, a) * chi(l, b).conj()).sum(),
    })
}

/// Largest entrywise deviation of either reduced density matrix from `I/d`.
pub fn entanglement_residual(state: &BellState) -> f64 {
    let target = ComplexMatrix::identity(state.d).scale(Complex64::new(1.0 / state.d as f64, 0.0));
    [Subsystem::Left, Subsystem::Right]
        .into_iter()
        .map(|s| reduced_density(state, s).max_abs_diff(&target))
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub d: usize,
    /// Dimension of the space of symmetric `d × d` coefficient matrices.
    pub sym_dim: usize,
    /// Number of linearly independent states a complete basis needs.
    pub needed: usize,
    /// `(sample index, |det|)` for each random skew-symmetric matrix.
    pub skew_det_samples: Vec<(u64, f64)>,
}

impl ObstructionReport {
    pub fn max_abs_det(&self) -> f64 {
        self.skew_det_samples
            .iter()
            .map(|&(_, x)| x)
            .fold(0.0, f64::max)
    }

    pub fn holds(&self, det_tol: f64) -> bool {
        self.sym_dim < self.needed && self.skew_det_samples.iter().all(|&(_, x)| x < det_tol)
    }
}

pub const SKEW_DET_TOLERANCE: f64 = 1e-8;

/// Random real skew-symmetric matrix, upper entries uniform in `[-1, 1]`.
#[allow(clippy::needless_range_loop)]
pub fn random_skew_symmetric(d: usize, rng: &mut impl Rng) -> Vec<Vec<f64>> {
    let mut m = vec![vec![0.0; d]; d];
    for i in 0..d {
        for j in i + 1..d {
            let x: f64 = rng.gen_range(-1.0..=1.0);
            m[i][j] = x;
            m[j][i] = -x;
        }
    }
    m
}

/// Numerical illustration that odd `d` admits no symmetrized Bell basis:
/// symmetric coefficient matrices span only `d(d+1)/2 < d²` dimensions and an
/// antisymmetric one is always singular, hence never unitary.
pub fn odd_d_obstruction(d: usize, n_samples: usize, rng_seed: u64) -> Result<ObstructionReport> {
    if d.is_multiple_of(2) {
        return Err(Error::InvalidDimension(format!(
            "d = {d} is even; the odd-dimension obstruction does not apply"
        )));
    }
    if d < 3 {
        return Err(Error::InvalidDimension(format!("d = {d}; need odd d >= 3")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let skew_det_samples = (0..n_samples as u64)
        .map(|i| {
            let m = random_skew_symmetric(d, &mut rng);
            let det = linalg::real_determinant(&m).expect("square by construction");
            (i, det.abs())
        })
        .collect();
    Ok(ObstructionReport {
        d,
        sym_dim: d * (d + 1) / 2,
        needed: d * d,
        skew_det_samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{bell_state, canonical_bell_state, full_basis, Construction, PhaseMode};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn swap_is_an_involution() {
        let st = canonical_bell_state(5, 2, 3).unwrap();
        let twice = swap_amplitudes(5, &swap_apply(&st));
        assert_eq!(twice, st.amplitudes);
    }

    #[test]
    fn singlet_flips_sign() {
        let singlet = bell_state(2, 1, 1, PhaseMode::Dft).unwrap();
        let swapped = swap_apply(&singlet);
        for (a, b) in swapped.iter().zip(&singlet.amplitudes) {
            assert!((a + b).norm() < 1e-15);
        }
    }

    #[test]
    fn canonical_d6_is_not_an_eigenstate() {
        let st = canonical_bell_state(6, 1, 1).unwrap();
        let ov = linalg::inner_product(&st.amplitudes, &swap_apply(&st));
        assert!(ov.norm() < 1.0 - 1e-6);
        assert_eq!(classify_symmetry(&st, tol()).label, SymmetryLabel::Neither);
    }

    #[test]
    fn qubit_triplet_and_singlet() {
        let labels: Vec<_> = full_basis(2, PhaseMode::Dft)
            .unwrap()
            .iter()
            .map(|s| classify_symmetry(s, tol()).label)
            .collect();
        use SymmetryLabel::*;
        assert_eq!(labels, vec![Symmetric, Symmetric, Symmetric, Antisymmetric]);
    }

    #[test]
    fn d6_example_antisymmetric() {
        let st = bell_state(6, 2, 5, PhaseMode::Dft).unwrap();
        let class = classify_symmetry(&st, tol());
        assert_eq!(class.label, SymmetryLabel::Antisymmetric);
        assert!(class.residual < 1e-10);
    }

    #[test]
    fn non_eigenstate_is_neither() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let mut amps = vec![Complex64::new(0.0, 0.0); 4];
        amps[0] = Complex64::new(h, 0.0);
        amps[1] = Complex64::new(h, 0.0);
        let class = classify_amplitudes(2, &amps, tol());
        assert_eq!(class.label, SymmetryLabel::Neither);
        assert!(class.residual > 0.5);
    }

    #[test]
    fn counts_formula() {
        assert_eq!(symmetry_counts(2).unwrap(), (3, 1));
        assert_eq!(symmetry_counts(6).unwrap(), (21, 15));
        assert_eq!(symmetry_counts(12).unwrap(), (78, 66));
        assert!(symmetry_counts(5).is_err());
    }

    #[test]
    fn counts_by_classification_d12() {
        let basis = full_basis(12, PhaseMode::Dft).unwrap();
        let counts = count_sectors(&basis, tol());
        assert_eq!(
            (counts.symmetric, counts.antisymmetric, counts.neither),
            (78, 66, 0)
        );
    }

    #[test]
    fn reduced_density_examples() {
        let phi = bell_state(2, 0, 0, PhaseMode::Dft).unwrap();
        let half = ComplexMatrix::identity(2).scale(Complex64::new(0.5, 0.0));
        assert!(reduced_density(&phi, Subsystem::Left).max_abs_diff(&half) < 1e-15);

        let st = bell_state(6, 2, 5, PhaseMode::Dft).unwrap();
        assert!(entanglement_residual(&st) < 1e-10);

        let mut amps = vec![Complex64::new(0.0, 0.0); 9];
        amps[0] = Complex64::new(1.0, 0.0);
        let product = BellState::from_amplitudes(3, 0, 0, Construction::Canonical, amps).unwrap();
        let rho = reduced_density(&product, Subsystem::Right);
        let mut want = ComplexMatrix::zeros(3, 3);
        want[(0, 0)] = Complex64::new(1.0, 0.0);
        assert_eq!(rho, want);
        assert!(entanglement_residual(&product) > 0.5);
    }

    #[test]
    fn obstruction_reports() {
        for (d, sym) in [(3, 6), (5, 15)] {
            let r = odd_d_obstruction(d, 100, 42).unwrap();
            assert_eq!((r.sym_dim, r.needed), (sym, d * d));
            assert_eq!(r.skew_det_samples.len(), 100);
            assert!(r.holds(SKEW_DET_TOLERANCE), "max |det| {}", r.max_abs_det());
        }
        assert!(odd_d_obstruction(2, 10, 0).is_err());
        assert!(odd_d_obstruction(1, 10, 0).is_err());
        // even-d control: a skew matrix can be invertible
        let det = linalg::real_determinant(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        assert_eq!(det, 1.0);
    }

    #[test]
    fn obstruction_is_seeded() {
        assert_eq!(
            odd_d_obstruction(7, 20, 9).unwrap(),
            odd_d_obstruction(7, 20, 9).unwrap()
        );
    }
}
