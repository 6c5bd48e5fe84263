//! Noiseless dense coding over the symmetrized basis.
//!
//! Alice and Bob share `|Ψ_0^0⟩`. Alice encodes one of `2d - 1` messages by a
//! signed permutation on her qudit, sends it to Bob, and Bob reads a detection
//! signature from the linear-optics analyzer. Messages map to codewords as
//! `0 → (0, 0)` and `m → (⌈m/2⌉, (m - 1) mod 2)` for `m >= 1`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bell::{BellState, PhaseMode, SymmetrizedBasis};
use crate::error::{check_even, Error, Result};
use crate::lelm::{
    detection_distribution, device_unitary, distinguishable, DetectionSignature, ModeUnitary,
    SignatureDistribution, Statistics,
};
use crate::linalg::ComplexMatrix;

pub fn message_count(d: usize) -> usize {
    2 * d - 1
}

pub fn message_to_tag(d: usize, message: usize) -> Result<(usize, usize)> {
    check_even(d)?;
    if message >= message_count(d) {
        return Err(Error::OutOfRange {
            what: "message",
            value: message,
            bound: message_count(d),
        });
    }
    Ok(if message == 0 {
        (0, 0)
    } else {
        (message.div_ceil(2), (message - 1) % 2)
    })
}

pub fn tag_to_message(d: usize, (c, p): (usize, usize)) -> Option<usize> {
    match (c, p) {
        (0, 0) => Some(0),
        (c, p) if c > 0 && c < d && p < 2 => Some(2 * c - 1 + p),
        _ => None,
    }
}

/// `(U ⊗ I)|ψ⟩`.
pub fn apply_local(unitary: &ComplexMatrix, state: &BellState) -> Result<Vec<Complex64>> {
    let d = state.d;
    if unitary.rows() != d || unitary.cols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: unitary.rows(),
        });
    }
    let mut out = vec![Complex64::new(0.0, 0.0); d * d];
    for i in 0..d {
        for k in 0..d {
            let u = unitary[(i, k)];
            if u.norm() == 0.0 {
                continue;
            }
            for r in 0..d {
                out[i * d + r] += u * state.amplitude(k, r);
            }
        }
    }
    Ok(out)
}

/// Alice's signed permutation taking `|Ψ_0^0⟩` to `|Ψ_c^p⟩`, `p ∈ {0, 1}`.
pub fn alice_unitary(d: usize, c: usize, p: usize) -> Result<ComplexMatrix> {
    alice_unitary_for(&SymmetrizedBasis::new(d, PhaseMode::Dft)?, c, p)
}

/// As [`alice_unitary`], for the schedule of an existing basis.
///
/// For `c != 0` each pair `(s, t)` is swapped, and for `p = 1` the `s → t`
/// direction picks up a minus sign. For `c = 0` the matrix is diagonal with
/// `-1` on odd levels when `p = 1`. Since `(U ⊗ I)|Ψ_0^0⟩` has coefficient
/// matrix `U/√d`, each sign is then checked against the target state and
/// flipped if the basis gauge disagrees.
pub fn alice_unitary_for(basis: &SymmetrizedBasis, c: usize, p: usize) -> Result<ComplexMatrix> {
    let d = basis.d();
    if p > 1 {
        return Err(Error::OutOfRange {
            what: "p",
            value: p,
            bound: 2,
        });
    }
    let target = basis.state(c, p)?;
    let one = Complex64::new(1.0, 0.0);
    let mut u = ComplexMatrix::zeros(d, d);
    if c == 0 {
        for k in 0..d {
            u[(k, k)] = if p == 1 && k % 2 == 1 { -one } else { one };
        }
    } else {
        for (s, t) in basis.oriented_pairs(c) {
            u[(t, s)] = if p == 1 { -one } else { one };
            u[(s, t)] = one;
        }
    }
    // U/√d must match the target coefficients up to the global phase taken
    // from the first nonzero entry.
    let sqrt_d = (d as f64).sqrt();
    let reference = target
        .amplitudes
        .iter()
        .zip(u.entries())
        .find_map(|(t, x)| (x.norm() > 0.5).then(|| t * sqrt_d / x));
    let global = reference.unwrap_or(one);
    for i in 0..d {
        for k in 0..d {
            let want = target.amplitude(i, k) * sqrt_d / global;
            if u[(i, k)].norm() > 0.5 && (u[(i, k)] - want).norm() > 1e-9 {
                u[(i, k)] = -u[(i, k)];
            }
        }
    }
    Ok(u)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Codeword {
    pub message: usize,
    pub c: usize,
    pub p: usize,
    pub alice_unitary: ComplexMatrix,
}

/// Codewords, their analyzer supports and the signature → message table.
#[derive(Clone, Debug)]
pub struct Codebook {
    d: usize,
    mode: PhaseMode,
    statistics: Statistics,
    device: ModeUnitary,
    shared: BellState,
    codewords: Vec<Codeword>,
    distributions: Vec<SignatureDistribution>,
    certificate: BTreeMap<DetectionSignature, usize>,
}

impl Codebook {
    pub fn new(d: usize, mode: PhaseMode, statistics: Statistics) -> Result<Self> {
        let basis = SymmetrizedBasis::new(d, mode)?;
        let device = device_unitary(d)?;
        let shared = basis.state(0, 0)?;
        let codewords = (0..message_count(d))
            .map(|message| {
                let (c, p) = message_to_tag(d, message)?;
                Ok(Codeword {
                    message,
                    c,
                    p,
                    alice_unitary: alice_unitary_for(&basis, c, p)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let states = codewords
            .iter()
            .map(|cw| encode_with(&shared, cw))
            .collect::<Result<Vec<_>>>()?;
        let check = distinguishable(&states, &device, statistics)?;
        if !check.distinguishable {
            return Err(Error::Inconsistent(format!(
                "codewords are not distinguishable: conflicts {:?}",
                check.conflicts
            )));
        }
        let distributions = states
            .iter()
            .map(|s| detection_distribution(s, &device, statistics))
            .collect::<Result<Vec<_>>>()?;
        Ok(Codebook {
            d,
            mode,
            statistics,
            device,
            shared,
            codewords,
            distributions,
            certificate: check.certificate,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn mode(&self) -> PhaseMode {
        self.mode
    }

    pub fn statistics(&self) -> Statistics {
        self.statistics
    }

    pub fn device(&self) -> &ModeUnitary {
        &self.device
    }

    pub fn codewords(&self) -> &[Codeword] {
        &self.codewords
    }

    pub fn certificate(&self) -> &BTreeMap<DetectionSignature, usize> {
        &self.certificate
    }

    pub fn distribution(&self, message: usize) -> Option<&SignatureDistribution> {
        self.distributions.get(message)
    }

    pub fn encode(&self, message: usize) -> Result<BellState> {
        let cw = self.codewords.get(message).ok_or(Error::OutOfRange {
            what: "message",
            value: message,
            bound: self.codewords.len(),
        })?;
        encode_with(&self.shared, cw)
    }

    pub fn decode(&self, signature: DetectionSignature) -> Result<usize> {
        self.certificate.get(&signature).copied().ok_or_else(|| {
            let (a, b) = signature.channels();
            Error::UndecodableSignature(a, b)
        })
    }

    /// Sends each message once, drawing the analyzer outcome from its exact
    /// distribution.
    pub fn roundtrip(&self, messages: &[usize], rng_seed: u64) -> Result<Vec<TranscriptEntry>> {
        let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
        let samplers = self
            .distributions
            .iter()
            .map(|dist| {
                let support: Vec<(DetectionSignature, f64)> = dist.nonzero().collect();
                let weights = WeightedIndex::new(support.iter().map(|&(_, p)| p))
                    .map_err(|e| Error::Inconsistent(format!("bad distribution: {e}")))?;
                Ok((support, weights))
            })
            .collect::<Result<Vec<_>>>()?;
        messages
            .iter()
            .map(|&message| {
                let (support, weights) = samplers.get(message).ok_or(Error::OutOfRange {
                    what: "message",
                    value: message,
                    bound: self.codewords.len(),
                })?;
                let signature = support[weights.sample(&mut rng)].0;
                Ok(TranscriptEntry {
                    sent: message,
                    signature,
                    decoded: self.decode(signature)?,
                })
            })
            .collect()
    }
}

fn encode_with(shared: &BellState, cw: &Codeword) -> Result<BellState> {
    let amplitudes = apply_local(&cw.alice_unitary, shared)?;
    BellState::from_amplitudes(shared.d, cw.c, cw.p, shared.construction, amplitudes)
}

pub fn encode(d: usize, message: usize) -> Result<BellState> {
    Codebook::new(d, PhaseMode::Dft, Statistics::Boson)?.encode(message)
}

pub fn decode(signature: DetectionSignature, d: usize, statistics: Statistics) -> Result<usize> {
    Codebook::new(d, PhaseMode::Dft, statistics)?.decode(signature)
}

pub fn roundtrip(
    d: usize,
    messages: &[usize],
    statistics: Statistics,
    rng_seed: u64,
) -> Result<Vec<TranscriptEntry>> {
    Codebook::new(d, PhaseMode::Dft, statistics)?.roundtrip(messages, rng_seed)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptEntry {
    pub sent: usize,
    #[serde(with = "signature_pair")]
    pub signature: DetectionSignature,
    pub decoded: usize,
}

/// Serializes a signature as `[n1, n2]`.
pub(crate) mod signature_pair {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::lelm::DetectionSignature;

    pub fn serialize<S: Serializer>(sig: &DetectionSignature, s: S) -> Result<S::Ok, S::Error> {
        let (a, b) = sig.channels();
        [a, b].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DetectionSignature, D::Error> {
        let [a, b] = <[usize; 2]>::deserialize(d)?;
        Ok(DetectionSignature::new(a, b))
    }
}
