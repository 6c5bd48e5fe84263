//! Linear-evolution / local-measurement Bell analyzer.
//!
//! The two particles enter on the left (`L`) and right (`R`) input ports with
//! internal levels `0..d`. A 50/50 beam splitter mixes the ports, then a
//! level-resolving splitter on each output side routes level `k` of side `A`
//! to detector `k` and of side `B` to detector `d + k`. Detectors resolve
//! particle number, so a run yields an unordered pair of channels.
//!
//! Beam-splitter convention: `a†_{L,k} → (b†_{A,k} + b†_{B,k})/√2` and
//! `a†_{R,k} → (b†_{A,k} - b†_{B,k})/√2`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bell::{full_basis, BellState, PhaseMode};
use crate::error::{check_even, Error, Result};
use crate::linalg::{kron, walsh_matrix, ComplexMatrix};
use crate::mis::{maximum_independent_set, ConflictGraph};

/// Probabilities at or below this are treated as exact interference zeros.
pub const SUPPORT_TOLERANCE: f64 = 1e-12;

#[derive(
    Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize,
)]
#[serde(rename_all = "lowercase")]
pub enum Statistics {
    #[default]
    Boson,
    Fermion,
}

impl Statistics {
    pub fn as_str(self) -> &'static str {
        match self {
            Statistics::Boson => "boson",
            Statistics::Fermion => "fermion",
        }
    }
}

impl fmt::Display for Statistics {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Statistics {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boson" => Ok(Statistics::Boson),
            "fermion" => Ok(Statistics::Fermion),
            other => Err(Error::Format(format!("unknown statistics {other:?}"))),
        }
    }
}

/// Single-particle mode transformation, `matrix[output, input]`.
///
/// Inputs are indexed `side·d + level` with `L = 0, R = 1`; outputs are the
/// `2d` detector channels.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeUnitary {
    d: usize,
    matrix: ComplexMatrix,
}

impl ModeUnitary {
    pub fn new(d: usize, matrix: ComplexMatrix) -> Result<Self> {
        if matrix.rows() != 2 * d || matrix.cols() != 2 * d {
            return Err(Error::DimensionMismatch {
                expected: 2 * d,
                found: matrix.rows().max(matrix.cols()),
            });
        }
        Ok(ModeUnitary { d, matrix })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }
}

/// The beam splitter plus level-resolving splitters: `(H(2)/√2) ⊗ I_d`.
pub fn device_unitary(d: usize) -> Result<ModeUnitary> {
    check_even(d)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let matrix = ComplexMatrix::from_fn(2 * d, 2 * d, |out, input| {
        let (out_side, out_level) = (out / d, out % d);
        let (in_side, in_level) = (input / d, input % d);
        if out_level != in_level {
            Complex64::new(0.0, 0.0)
        } else if in_side == 1 && out_side == 1 {
            Complex64::new(-s, 0.0)
        } else {
            Complex64::new(s, 0.0)
        }
    });
    ModeUnitary::new(d, matrix)
}

/// Same device assembled as a Kronecker product; used to cross-check
/// [`device_unitary`].
pub fn device_unitary_by_kron(d: usize) -> Result<ModeUnitary> {
    check_even(d)?;
    let bs = walsh_matrix(2)?.scale(Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
    ModeUnitary::new(d, kron(&bs, &ComplexMatrix::identity(d)))
}

/// Unordered pair of fired detector channels, stored with `first <= second`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DetectionSignature {
    first: usize,
    second: usize,
}

impl DetectionSignature {
    pub fn new(a: usize, b: usize) -> Self {
        DetectionSignature {
            first: a.min(b),
            second: a.max(b),
        }
    }

    pub fn channels(self) -> (usize, usize) {
        (self.first, self.second)
    }

    /// True when the channels sit on different beam-splitter output sides.
    pub fn is_cross_side(self, d: usize) -> bool {
        self.first / d != self.second / d
    }

    pub fn is_double(self) -> bool {
        self.first == self.second
    }

    /// Whether the pair can occur at all under the given statistics.
    pub fn allowed(self, statistics: Statistics) -> bool {
        statistics == Statistics::Boson || !self.is_double()
    }
}

impl fmt::Display for DetectionSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

/// Every signature allowed under `statistics` for `2d` channels.
pub fn all_signatures(d: usize, statistics: Statistics) -> Vec<DetectionSignature> {
    let n = 2 * d;
    (0..n)
        .flat_map(|a| (a..n).map(move |b| DetectionSignature::new(a, b)))
        .filter(|s| s.allowed(statistics))
        .collect()
}

/// Outcome probabilities, one entry per allowed signature (zeros included).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SignatureDistribution {
    pub entries: BTreeMap<DetectionSignature, f64>,
}

impl SignatureDistribution {
    pub fn total(&self) -> f64 {
        self.entries.values().sum()
    }

    pub fn probability(&self, sig: DetectionSignature) -> f64 {
        self.entries.get(&sig).copied().unwrap_or(0.0)
    }

    pub fn support(&self) -> BTreeSet<DetectionSignature> {
        self.entries
            .iter()
            .filter(|(_, &p)| p > SUPPORT_TOLERANCE)
            .map(|(&s, _)| s)
            .collect()
    }

    /// Support entries with their probabilities, in signature order.
    pub fn nonzero(&self) -> impl Iterator<Item = (DetectionSignature, f64)> + '_ {
        self.entries
            .iter()
            .filter(|(_, &p)| p > SUPPORT_TOLERANCE)
            .map(|(&s, &p)| (s, p))
    }
}

/// Output amplitude tensor `C[n1, n2] = Σ χ[l, r]·M[n1, l]·M[n2, d + r]`.
fn output_tensor(state: &BellState, device: &ModeUnitary) -> ComplexMatrix {
    let d = state.d;
    let m = device.matrix();
    let n = 2 * d;
    let mut out = ComplexMatrix::zeros(n, n);
    for l in 0..d {
        for r in 0..d {
            let chi = state.amplitude(l, r);
            if chi.norm() == 0.0 {
                continue;
            }
            for n1 in 0..n {
                let a = m[(n1, l)];
                if a.norm() == 0.0 {
                    continue;
                }
                for n2 in 0..n {
                    out[(n1, n2)] += chi * a * m[(n2, d + r)];
                }
            }
        }
    }
    out
}

/// Detection statistics of a two-particle input.
///
/// The output state is `Σ C[n1, n2] b†_{n1} b†_{n2} |0⟩`. For bosons the
/// probability of `{n1, n2}` is `|C12 + C21|²` off the diagonal and
/// `2|C11|²` on it; for fermions it is `|C12 - C21|²`. With a unitary device
/// these sum to one; nothing is renormalized.
pub fn detection_distribution(
    state: &BellState,
    device: &ModeUnitary,
    statistics: Statistics,
) -> Result<SignatureDistribution> {
    if state.d != device.d() {
        return Err(Error::DimensionMismatch {
            expected: device.d(),
            found: state.d,
        });
    }
    let c = output_tensor(state, device);
    let entries = all_signatures(state.d, statistics)
        .into_iter()
        .map(|sig| {
            let (a, b) = sig.channels();
            let p = match statistics {
                Statistics::Boson if a == b => 2.0 * c[(a, a)].norm_sqr(),
                Statistics::Boson => (c[(a, b)] + c[(b, a)]).norm_sqr(),
                Statistics::Fermion => (c[(a, b)] - c[(b, a)]).norm_sqr(),
            };
            (sig, p)
        })
        .collect();
    Ok(SignatureDistribution { entries })
}

pub fn signature_support(
    state: &BellState,
    device: &ModeUnitary,
    statistics: Statistics,
) -> Result<BTreeSet<DetectionSignature>> {
    Ok(detection_distribution(state, device, statistics)?.support())
}

/// Result of checking whether a list of states can be told apart.
#[derive(Clone, Debug, PartialEq)]
pub struct Distinguishability {
    pub distinguishable: bool,
    /// Owner (index into the input list) of every support signature. When two
    /// states share a signature the lower index is kept.
    pub certificate: BTreeMap<DetectionSignature, usize>,
    /// Index pairs whose supports overlap.
    pub conflicts: Vec<(usize, usize)>,
}

/// States are unambiguously distinguishable iff their supports are pairwise
/// disjoint.
pub fn distinguishable(
    states: &[BellState],
    device: &ModeUnitary,
    statistics: Statistics,
) -> Result<Distinguishability> {
    let supports = states
        .iter()
        .map(|s| signature_support(s, device, statistics))
        .collect::<Result<Vec<_>>>()?;
    Ok(check_supports(&supports))
}

fn check_supports(supports: &[BTreeSet<DetectionSignature>]) -> Distinguishability {
    let mut certificate = BTreeMap::new();
    let mut conflicts = BTreeSet::new();
    for (i, support) in supports.iter().enumerate() {
        for &sig in support {
            if let Some(&owner) = certificate.get(&sig) {
                conflicts.insert((owner, i));
            } else {
                certificate.insert(sig, i);
            }
        }
    }
    Distinguishability {
        distinguishable: conflicts.is_empty(),
        certificate,
        conflicts: conflicts.into_iter().collect(),
    }
}

/// Tags of the dense-coding codewords: `(0, 0)` then `(c, 0), (c, 1)` for
/// `c = 1..d`.
pub fn codeword_tags(d: usize) -> Result<Vec<(usize, usize)>> {
    check_even(d)?;
    let mut tags = vec![(0, 0)];
    for c in 1..d {
        tags.push((c, 0));
        tags.push((c, 1));
    }
    Ok(tags)
}

pub fn codeword_set(d: usize, mode: PhaseMode) -> Result<Vec<BellState>> {
    let basis = crate::bell::SymmetrizedBasis::new(d, mode)?;
    codeword_tags(d)?
        .into_iter()
        .map(|(c, p)| basis.state(c, p))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistinguishabilityResult {
    /// `(c, p)` tags of the chosen states, in basis order.
    pub states: Vec<(usize, usize)>,
    pub size: usize,
    pub conflict_graph_edges: usize,
    pub certificate: BTreeMap<DetectionSignature, (usize, usize)>,
    /// False if the search budget ran out.
    pub optimal: bool,
    pub nodes_explored: u64,
}

/// Largest subset of `states` with pairwise disjoint supports.
pub fn max_distinguishable_subset(
    states: &[BellState],
    device: &ModeUnitary,
    statistics: Statistics,
    search_budget: Option<u64>,
) -> Result<DistinguishabilityResult> {
    let supports = states
        .iter()
        .map(|s| signature_support(s, device, statistics))
        .collect::<Result<Vec<_>>>()?;
    let mut graph = ConflictGraph::new(states.len());
    for a in 0..states.len() {
        for b in a + 1..states.len() {
            if !supports[a].is_disjoint(&supports[b]) {
                graph.add_edge(a, b);
            }
        }
    }
    let outcome = maximum_independent_set(&graph, search_budget);
    let chosen: Vec<BTreeSet<DetectionSignature>> = outcome
        .vertices
        .iter()
        .map(|&v| supports[v].clone())
        .collect();
    let check = check_supports(&chosen);
    debug_assert!(check.distinguishable);
    let certificate = check
        .certificate
        .into_iter()
        .map(|(sig, i)| (sig, states[outcome.vertices[i]].tag()))
        .collect();
    Ok(DistinguishabilityResult {
        states: outcome.vertices.iter().map(|&v| states[v].tag()).collect(),
        size: outcome.vertices.len(),
        conflict_graph_edges: graph.edge_count(),
        certificate,
        optimal: outcome.optimal,
        nodes_explored: outcome.nodes,
    })
}

/// Maximum distinguishable subset of the full symmetrized basis.
pub fn max_distinguishable_set(
    d: usize,
    mode: PhaseMode,
    device: &ModeUnitary,
    statistics: Statistics,
    search_budget: Option<u64>,
) -> Result<DistinguishabilityResult> {
    let basis = full_basis(d, mode)?;
    max_distinguishable_subset(&basis, device, statistics, search_budget)
}
