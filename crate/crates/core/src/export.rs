//! JSON interchange formats: basis export and the detection-signature report.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bell::{BellState, Construction, PhaseMode};
use crate::error::{Error, Result};
use crate::lelm::{DetectionSignature, SignatureDistribution, Statistics};

/// Amplitudes of a file-loaded basis must agree with regenerated ones to this.
pub const EXPORT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateExport {
    pub c: usize,
    pub p: usize,
    /// `[re, im]` pairs in `left·d + right` order.
    pub amplitudes: Vec<[f64; 2]>,
}

/// `{d, mode, states: [{c, p, amplitudes}]}`; `mode` is `dft`, `walsh` or
/// `canonical`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BasisExport {
    pub d: usize,
    pub mode: String,
    pub states: Vec<StateExport>,
}

pub fn construction_label(construction: Construction) -> &'static str {
    match construction {
        Construction::Symmetrized(mode) => mode.as_str(),
        Construction::Canonical => "canonical",
    }
}

pub fn parse_construction(label: &str) -> Result<Construction> {
    match label {
        "canonical" => Ok(Construction::Canonical),
        other => other.parse::<PhaseMode>().map(Construction::Symmetrized),
    }
}

impl BasisExport {
    pub fn from_states(d: usize, construction: Construction, states: &[BellState]) -> Self {
        BasisExport {
            d,
            mode: construction_label(construction).to_string(),
            states: states
                .iter()
                .map(|s| StateExport {
                    c: s.c,
                    p: s.p,
                    amplitudes: s.amplitudes.iter().map(|z| [z.re, z.im]).collect(),
                })
                .collect(),
        }
    }

    pub fn construction(&self) -> Result<Construction> {
        parse_construction(&self.mode)
    }

    /// Converts back to states, checking shapes and tags.
    pub fn to_states(&self) -> Result<Vec<BellState>> {
        let construction = self.construction()?;
        if self.d < 2 {
            return Err(Error::Format(format!("d = {} is too small", self.d)));
        }
        self.states
            .iter()
            .map(|s| {
                if s.c >= self.d || s.p >= self.d {
                    return Err(Error::Format(format!(
                        "state tag ({}, {}) out of range for d = {}",
                        s.c, s.p, self.d
                    )));
                }
                let amps = s
                    .amplitudes
                    .iter()
                    .map(|&[re, im]| Complex64::new(re, im))
                    .collect();
                BellState::from_amplitudes(self.d, s.c, s.p, construction, amps).map_err(|_| {
                    Error::Format(format!(
                        "state ({}, {}) has {} amplitudes, expected {}",
                        s.c,
                        s.p,
                        s.amplitudes.len(),
                        self.d * self.d
                    ))
                })
            })
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}

/// Largest amplitude difference between two state lists with matching tags,
/// or `None` when the lists do not line up.
pub fn max_amplitude_deviation(a: &[BellState], b: &[BellState]) -> Option<f64> {
    if a.len() != b.len() {
        return None;
    }
    let mut worst: f64 = 0.0;
    for (x, y) in a.iter().zip(b) {
        if x.tag() != y.tag() || x.amplitudes.len() != y.amplitudes.len() {
            return None;
        }
        for (u, v) in x.amplitudes.iter().zip(&y.amplitudes) {
            worst = worst.max((u - v).norm());
        }
    }
    Some(worst)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StateSignatures {
    pub c: usize,
    pub p: usize,
    pub support: Vec<[usize; 2]>,
    /// `[n1, n2, probability]` for every support signature.
    pub distribution: Vec<(usize, usize, f64)>,
}

impl StateSignatures {
    pub fn new(tag: (usize, usize), dist: &SignatureDistribution) -> Self {
        let support = dist.support().into_iter().map(pair).collect();
        let distribution = dist
            .nonzero()
            .map(|(sig, prob)| {
                let (a, b) = sig.channels();
                (a, b, prob)
            })
            .collect();
        StateSignatures {
            c: tag.0,
            p: tag.1,
            support,
            distribution,
        }
    }
}

/// `{d, statistics, device: "fig1", states: [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SignatureReport {
    pub d: usize,
    pub statistics: Statistics,
    pub device: String,
    pub states: Vec<StateSignatures>,
}

pub const DEVICE_NAME: &str = "fig1";

pub fn pair(sig: DetectionSignature) -> [usize; 2] {
    let (a, b) = sig.channels();
    [a, b]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::{canonical_basis, full_basis};
    use proptest::prelude::*;

    #[test]
    fn rejects_malformed_files() {
        assert!(BasisExport::from_json("{").is_err());
        let bad_mode = r#"{"d": 2, "mode": "fourier", "states": []}"#;
        assert!(BasisExport::from_json(bad_mode)
            .unwrap()
            .to_states()
            .is_err());
        let short =
            r#"{"d": 2, "mode": "dft", "states": [{"c": 0, "p": 0, "amplitudes": [[1, 0]]}]}"#;
        assert!(matches!(
            BasisExport::from_json(short).unwrap().to_states(),
            Err(Error::Format(_))
        ));
        let tag = r#"{"d": 2, "mode": "dft", "states": [{"c": 2, "p": 0, "amplitudes": [[1,0],[0,0],[0,0],[0,0]]}]}"#;
        assert!(BasisExport::from_json(tag).unwrap().to_states().is_err());
    }

    #[test]
    fn canonical_label_roundtrips() {
        let states = canonical_basis(3).unwrap();
        let export = BasisExport::from_states(3, Construction::Canonical, &states);
        assert_eq!(export.mode, "canonical");
        assert_eq!(export.to_states().unwrap(), states);
    }

    proptest! {
        #[test]
        fn export_roundtrip_through_json(half in 1usize..7, walsh in any::<bool>()) {
            let d = 2 * half;
            let mode = if walsh && half.is_power_of_two() { PhaseMode::Walsh } else { PhaseMode::Dft };
            let states = full_basis(d, mode).unwrap();
            let export = BasisExport::from_states(d, Construction::Symmetrized(mode), &states);
            let text = serde_json::to_string(&export).unwrap();
            let back = BasisExport::from_json(&text).unwrap().to_states().unwrap();
            prop_assert_eq!(max_amplitude_deviation(&states, &back), Some(0.0));
        }
    }
}
