//! Exchange-symmetrized Bell bases for a pair of qudits of even dimension `d`,
//! and the usual shift-and-phase ("canonical") basis for comparison.
//!
//! A symmetrized state `|Ψ_c^p⟩` is labelled by a correlation class `c` and a
//! phase class `p`, both in `0..d`:
//!
//! * `c = 0` pairs every level with itself, `|k⟩|k⟩`. Levels are grouped as
//!   `(2j, 2j+1)` and the second member of each group carries `(-1)^p`.
//! * `c >= 1` uses round `c - 1` of a round-robin tournament on the `d`
//!   levels. Each match `(s, t)` contributes `|s⟩|t⟩ + (-1)^p |t⟩|s⟩`.
//!
//! Group `j` of every class is weighted by the phase `phase(j, p)`, which
//! depends on `p` only through `⌊p/2⌋` and is read from a `(d/2) × (d/2)`
//! matrix with orthogonal columns (DFT, or Walsh when `d/2` is a power of two).
//!
//! Pair orientation: within a match the smaller level is `s`. This is a gauge
//! choice; it only decides which member of a `±` partner pair gets which sign.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_even, Error, Result};
use crate::linalg::{self, root_of_unity, walsh_signs, ComplexMatrix};

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum PhaseMode {
    #[default]
    Dft,
    Walsh,
}

impl PhaseMode {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseMode::Dft => "dft",
            PhaseMode::Walsh => "walsh",
        }
    }

    /// Whether this mode can be used at dimension `d` (assumed even).
    pub fn supports(self, d: usize) -> bool {
        match self {
            PhaseMode::Dft => true,
            PhaseMode::Walsh => (d / 2).is_power_of_two(),
        }
    }

    fn check(self, d: usize) -> Result<()> {
        if self.supports(d) {
            Ok(())
        } else {
            Err(Error::UnsupportedMode(format!(
                "walsh phases need d/2 to be a power of two (d = {d})"
            )))
        }
    }
}

impl fmt::Display for PhaseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PhaseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dft" => Ok(PhaseMode::Dft),
            "walsh" => Ok(PhaseMode::Walsh),
            other => Err(Error::UnsupportedMode(other.to_string())),
        }
    }
}

/// How a [`BellState`] was produced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Construction {
    Symmetrized(PhaseMode),
    /// `(1/√d) Σ_k exp(2πi·n·k/d) |k⟩|k+m mod d⟩`, with `(c, p) = (m, n)`.
    Canonical,
}

/// Round-robin pairing of `d` players: `d - 1` rounds of `d / 2` matches, each
/// unordered pair meeting exactly once.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairingSchedule {
    d: usize,
    rounds: Vec<Vec<(usize, usize)>>,
}

impl PairingSchedule {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn rounds(&self) -> &[Vec<(usize, usize)>] {
        &self.rounds
    }

    /// Pairs of correlation class `c` (`1..d`), in generation order and with
    /// the generated orientation.
    pub fn class_pairs(&self, c: usize) -> &[(usize, usize)] {
        &self.rounds[c - 1]
    }
}

/// Circle method: player 0 stays put, players `1..d` sit on a circle.
/// Round `r` (1-based) pairs `0` with `r`, then `r + k` with `r - k` for
/// `k = 1..d/2`, positions taken cyclically in `1..d`.
pub fn round_robin_schedule(d: usize) -> Result<PairingSchedule> {
    check_even(d)?;
    let n = d - 1;
    let wrap = |x: usize| (x - 1) % n + 1;
    let rounds = (1..d)
        .map(|r| {
            let mut round = Vec::with_capacity(d / 2);
            round.push((0, r));
            for k in 1..d / 2 {
                round.push((wrap(r + k), wrap(r + n - k)));
            }
            round
        })
        .collect();
    Ok(PairingSchedule { d, rounds })
}

/// The `(d/2) × (d/2)` unit-modulus matrix supplying phase classes; column
/// `⌊p/2⌋` gives the phases of the pairs `j = 0..d/2`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseAssignment {
    d: usize,
    mode: PhaseMode,
    matrix: ComplexMatrix,
}

impl PhaseAssignment {
    pub fn new(d: usize, mode: PhaseMode) -> Result<Self> {
        check_even(d)?;
        mode.check(d)?;
        let half = d / 2;
        let matrix = match mode {
            PhaseMode::Dft => linalg::dft_matrix(half)?,
            PhaseMode::Walsh => linalg::walsh_matrix(half)?,
        };
        Ok(PhaseAssignment { d, mode, matrix })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> PhaseMode {
        self.mode
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn phase(&self, j: usize, p: usize) -> Complex64 {
        self.matrix[(j, p / 2)]
    }
}

/// The phase `exp(iφ_{j,p})` attached to pair `j` in phase class `p`.
///
/// DFT mode gives `exp(i·⌊p/2⌋·4πj/d)`; Walsh mode gives `H(d/2)[j, ⌊p/2⌋]`.
pub fn phase(j: usize, p: usize, d: usize, mode: PhaseMode) -> Result<Complex64> {
    check_even(d)?;
    check_range("j", j, d / 2)?;
    check_range("p", p, d)?;
    mode.check(d)?;
    Ok(match mode {
        PhaseMode::Dft => root_of_unity((p / 2) * j, d / 2),
        PhaseMode::Walsh => {
            let h = walsh_signs(d / 2)?;
            Complex64::new(f64::from(h[j][p / 2]), 0.0)
        }
    })
}

fn check_range(what: &'static str, value: usize, bound: usize) -> Result<()> {
    if value < bound {
        Ok(())
    } else {
        Err(Error::OutOfRange { what, value, bound })
    }
}

/// A two-qudit pure state stored densely: amplitude of `|left⟩|right⟩` at
/// index `left·d + right`.
#[derive(Clone, Debug, PartialEq)]
pub struct BellState {
    pub d: usize,
    pub c: usize,
    pub p: usize,
    pub construction: Construction,
    pub amplitudes: Vec<Complex64>,
}

impl BellState {
    /// Wraps raw amplitudes; only the length is checked.
    pub fn from_amplitudes(
        d: usize,
        c: usize,
        p: usize,
        construction: Construction,
        amplitudes: Vec<Complex64>,
    ) -> Result<Self> {
        if amplitudes.len() != d * d {
            return Err(Error::DimensionMismatch {
                expected: d * d,
                found: amplitudes.len(),
            });
        }
        Ok(BellState {
            d,
            c,
            p,
            construction,
            amplitudes,
        })
    }

    pub fn amplitude(&self, left: usize, right: usize) -> Complex64 {
        self.amplitudes[left * self.d + right]
    }

    /// The `d × d` coefficient matrix `χ` with `χ[left, right]`.
    pub fn coefficients(&self) -> ComplexMatrix {
        ComplexMatrix::from_row_major(self.d, self.d, self.amplitudes.clone())
            .expect("amplitude length checked at construction")
    }

    pub fn inner(&self, other: &BellState) -> Complex64 {
        linalg::inner_product(&self.amplitudes, &other.amplitudes)
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.amplitudes)
    }

    /// Indices `left·d + right` with modulus above `threshold`.
    pub fn support(&self, threshold: f64) -> Vec<usize> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > threshold)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn tag(&self) -> (usize, usize) {
        (self.c, self.p)
    }
}

/// Builds individual states and whole bases for one `(d, mode)`, sharing the
/// schedule and phase matrix.
#[derive(Clone, Debug)]
pub struct SymmetrizedBasis {
    schedule: PairingSchedule,
    phases: PhaseAssignment,
}

impl SymmetrizedBasis {
    pub fn new(d: usize, mode: PhaseMode) -> Result<Self> {
        Ok(SymmetrizedBasis {
            schedule: round_robin_schedule(d)?,
            phases: PhaseAssignment::new(d, mode)?,
        })
    }

    pub fn d(&self) -> usize {
        self.schedule.d
    }

    pub fn mode(&self) -> PhaseMode {
        self.phases.mode
    }

    pub fn schedule(&self) -> &PairingSchedule {
        &self.schedule
    }

    pub fn phases(&self) -> &PhaseAssignment {
        &self.phases
    }

    /// Pairs `(s, t)` of class `c` in the orientation used for amplitudes:
    /// `(2j, 2j+1)` for `c = 0`, otherwise the round's matches with `s < t`.
    pub fn oriented_pairs(&self, c: usize) -> Vec<(usize, usize)> {
        if c == 0 {
            (0..self.d() / 2).map(|j| (2 * j, 2 * j + 1)).collect()
        } else {
            self.schedule
                .class_pairs(c)
                .iter()
                .map(|&(a, b)| (a.min(b), a.max(b)))
                .collect()
        }
    }

    pub fn state(&self, c: usize, p: usize) -> Result<BellState> {
        let d = self.d();
        check_range("c", c, d)?;
        check_range("p", p, d)?;
        let scale = 1.0 / (d as f64).sqrt();
        let sign = if p.is_multiple_of(2) { 1.0 } else { -1.0 };
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); d * d];
        for (j, (s, t)) in self.oriented_pairs(c).into_iter().enumerate() {
            let w = self.phases.phase(j, p) * scale;
            if c == 0 {
                amplitudes[s * d + s] = w;
                amplitudes[t * d + t] = w * sign;
            } else {
                amplitudes[s * d + t] = w;
                amplitudes[t * d + s] = w * sign;
            }
        }
        BellState::from_amplitudes(d, c, p, Construction::Symmetrized(self.mode()), amplitudes)
    }

    /// All `d²` states ordered by `(c, p)`.
    pub fn states(&self) -> Vec<BellState> {
        let d = self.d();
        (0..d)
            .flat_map(|c| (0..d).map(move |p| (c, p)))
            .map(|(c, p)| self.state(c, p).expect("indices in range"))
            .collect()
    }
}

pub fn bell_state(d: usize, c: usize, p: usize, mode: PhaseMode) -> Result<BellState> {
    SymmetrizedBasis::new(d, mode)?.state(c, p)
}

pub fn full_basis(d: usize, mode: PhaseMode) -> Result<Vec<BellState>> {
    Ok(SymmetrizedBasis::new(d, mode)?.states())
}

/// `(1/√d) Σ_k exp(2πi·n·k/d) |k⟩|(k + m) mod d⟩`; any `d >= 2`, odd allowed.
pub fn canonical_bell_state(d: usize, n: usize, m: usize) -> Result<BellState> {
    if d < 2 {
        return Err(Error::InvalidDimension(format!("d = {d}; need d >= 2")));
    }
    check_range("n", n, d)?;
    check_range("m", m, d)?;
    let scale = 1.0 / (d as f64).sqrt();
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); d * d];
    for k in 0..d {
        amplitudes[k * d + (k + m) % d] = root_of_unity(n * k, d) * scale;
    }
    BellState::from_amplitudes(d, m, n, Construction::Canonical, amplitudes)
}

/// All canonical states, ordered by `(m, n)` so that tags sort like the
/// symmetrized basis.
pub fn canonical_basis(d: usize) -> Result<Vec<BellState>> {
    let mut out = Vec::with_capacity(d * d);
    for m in 0..d {
        for n in 0..d {
            out.push(canonical_bell_state(d, n, m)?);
        }
    }
    Ok(out)
}

/// Gram matrix `G[a, b] = ⟨ψ_a|ψ_b⟩`.
pub fn gram_matrix(states: &[BellState]) -> ComplexMatrix {
    ComplexMatrix::from_fn(states.len(), states.len(), |a, b| {
        states[a].inner(&states[b])
    })
}

/// `max |G - I|` over the Gram matrix of `states`.
pub fn orthonormality_residual(states: &[BellState]) -> f64 {
    gram_matrix(states).max_abs_diff(&ComplexMatrix::identity(states.len()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;
    use std::f64::consts::{FRAC_1_SQRT_2, PI};

    fn unordered(round: &[(usize, usize)]) -> Vec<(usize, usize)> {
        round.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect()
    }

    // Independent checker: every round a perfect matching, every pair once.
    fn check_schedule(s: &PairingSchedule) {
        let d = s.d();
        assert_eq!(s.rounds().len(), d - 1);
        let mut seen = BTreeSet::new();
        for round in s.rounds() {
            assert_eq!(round.len(), d / 2);
            let mut players: Vec<usize> = round.iter().flat_map(|&(a, b)| [a, b]).collect();
            players.sort_unstable();
            assert_eq!(players, (0..d).collect::<Vec<_>>());
            for pair in unordered(round) {
                assert!(seen.insert(pair), "pair {pair:?} repeated");
            }
        }
        assert_eq!(seen.len(), d * (d - 1) / 2);
    }

    #[test]
    fn schedule_d6_matches_published_rounds() {
        let s = round_robin_schedule(6).unwrap();
        let expected = vec![
            vec![(0, 1), (2, 5), (3, 4)],
            vec![(0, 2), (3, 1), (4, 5)],
            vec![(0, 3), (4, 2), (5, 1)],
            vec![(0, 4), (5, 3), (1, 2)],
            vec![(0, 5), (1, 4), (2, 3)],
        ];
        assert_eq!(s.rounds(), expected.as_slice());
        check_schedule(&s);
    }

    #[test]
    fn schedule_small_and_invalid() {
        assert_eq!(round_robin_schedule(2).unwrap().rounds(), &[vec![(0, 1)]]);
        for d in [0, 1, 3, 7] {
            assert!(matches!(
                round_robin_schedule(d),
                Err(Error::InvalidDimension(_))
            ));
        }
        for d in (2..=16).step_by(2) {
            check_schedule(&round_robin_schedule(d).unwrap());
        }
    }

    #[test]
    fn phase_examples() {
        for j in 0..3 {
            for p in 0..2 {
                assert_eq!(
                    phase(j, p, 6, PhaseMode::Dft).unwrap(),
                    Complex64::new(1.0, 0.0)
                );
            }
        }
        let z = phase(1, 4, 6, PhaseMode::Dft).unwrap();
        assert!((z - Complex64::from_polar(1.0, 4.0 * PI / 3.0)).norm() < 1e-15);
        assert_eq!(
            phase(3, 5, 8, PhaseMode::Walsh).unwrap(),
            Complex64::new(-1.0, 0.0)
        );
    }

    #[test]
    fn phase_errors() {
        assert!(matches!(
            phase(0, 0, 6, PhaseMode::Walsh),
            Err(Error::UnsupportedMode(_))
        ));
        assert!(matches!(
            phase(3, 0, 6, PhaseMode::Dft),
            Err(Error::OutOfRange { .. })
        ));
        assert!(matches!(
            phase(0, 6, 6, PhaseMode::Dft),
            Err(Error::OutOfRange { .. })
        ));
        assert!(phase(0, 0, 5, PhaseMode::Dft).is_err());
    }

    #[test]
    fn qubit_bell_states() {
        let h = FRAC_1_SQRT_2;
        let basis = full_basis(2, PhaseMode::Dft).unwrap();
        let expect = [
            [h, 0., 0., h],  // Φ+
            [h, 0., 0., -h], // Φ-
            [0., h, h, 0.],  // Ψ+
            [0., h, -h, 0.], // Ψ-
        ];
        for (state, want) in basis.iter().zip(expect) {
            for (z, w) in state.amplitudes.iter().zip(want) {
                assert!((z - Complex64::new(w, 0.0)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn state_support_matches_permutation() {
        let basis = SymmetrizedBasis::new(8, PhaseMode::Dft).unwrap();
        for c in 0..8 {
            let mut perm = [usize::MAX; 8];
            for (s, t) in basis.oriented_pairs(c) {
                if c == 0 {
                    perm[s] = s;
                    perm[t] = t;
                } else {
                    perm[s] = t;
                    perm[t] = s;
                }
            }
            let want: Vec<usize> = (0..8).map(|k| k * 8 + perm[k]).collect();
            for p in 0..8 {
                let st = basis.state(c, p).unwrap();
                assert_eq!(st.support(1e-12), want);
                for &i in &want {
                    assert!((st.amplitudes[i].norm() - 1.0 / 8f64.sqrt()).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn bell_state_range_errors() {
        assert!(bell_state(6, 6, 0, PhaseMode::Dft).is_err());
        assert!(bell_state(6, 0, 6, PhaseMode::Dft).is_err());
        assert!(bell_state(5, 0, 0, PhaseMode::Dft).is_err());
        assert!(bell_state(6, 0, 0, PhaseMode::Walsh).is_err());
        assert!(canonical_bell_state(3, 3, 0).is_err());
        assert!(canonical_bell_state(1, 0, 0).is_err());
    }

    #[test]
    fn canonical_d6_example() {
        let st = canonical_bell_state(6, 1, 1).unwrap();
        let s = 1.0 / 6f64.sqrt();
        let terms = [
            (0, 1, 0.0),
            (1, 2, PI / 3.),
            (2, 3, 2. * PI / 3.),
            (3, 4, PI),
            (4, 5, 4. * PI / 3.),
            (5, 0, 5. * PI / 3.),
        ];
        let mut want = vec![Complex64::new(0.0, 0.0); 36];
        for (l, r, angle) in terms {
            want[l * 6 + r] = Complex64::from_polar(s, angle);
        }
        for (z, w) in st.amplitudes.iter().zip(&want) {
            assert!((z - w).norm() < 1e-12);
        }
        assert_eq!(st.tag(), (1, 1));
    }

    #[test]
    fn canonical_odd_basis_orthonormal() {
        let basis = canonical_basis(3).unwrap();
        assert_eq!(basis.len(), 9);
        assert!(orthonormality_residual(&basis) < 1e-10);
    }

    #[test]
    fn partner_states_differ_by_sign_pattern() {
        let basis = SymmetrizedBasis::new(6, PhaseMode::Dft).unwrap();
        for c in 1..6 {
            for l in 0..3 {
                let even = basis.state(c, 2 * l).unwrap();
                let odd = basis.state(c, 2 * l + 1).unwrap();
                for (s, t) in basis.oriented_pairs(c) {
                    assert_eq!(even.amplitude(s, t), odd.amplitude(s, t));
                    assert_eq!(even.amplitude(t, s), -odd.amplitude(t, s));
                }
            }
        }
    }
}
