use serde::{Deserialize, Serialize};

use super::transcript::{all_hold, InequalityLine};
use super::CertifyError;

/// Version of the certificate layout in `schema/certificate.schema.json`.
pub const SCHEMA_VERSION: &str = "1.0.0";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Subject {
    Cycle,
    Neighborhood,
    Index,
    Budget,
    RandomIsolating,
    DeltaKOrbit,
    TailRealization,
}

/// Everything needed to recompute a certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seeds: Vec<u64>,
    /// JSON description of the base map.
    pub map: String,
    /// JSON description of the noise model, if any.
    pub noise: Option<String>,
    pub tool_version: String,
    /// Inputs of the command that produced the certificate.
    pub parameters: serde_json::Value,
}

impl Provenance {
    pub fn new(map: impl Into<String>, parameters: serde_json::Value) -> Self {
        Provenance {
            seeds: Vec::new(),
            map: map.into(),
            noise: None,
            tool_version: crate::TOOL_VERSION.to_string(),
            parameters,
        }
    }
}

/// A self-contained JSON record of a verified claim.
///
/// `passed` is `true` iff every transcript line holds and every verdict in the
/// payload is a pass. There is no timestamp, so re-running the provenance
/// reproduces the certificate byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema_version: String,
    pub subject: Subject,
    pub passed: bool,
    pub payload: serde_json::Value,
    pub inequality_transcript: Vec<InequalityLine>,
    pub provenance: Provenance,
}

impl Certificate {
    /// `verdicts_pass` covers verdicts carried by the payload.
    pub fn new(
        subject: Subject,
        payload: &impl Serialize,
        inequality_transcript: Vec<InequalityLine>,
        provenance: Provenance,
        verdicts_pass: bool,
    ) -> Result<Self, CertifyError> {
        let payload = serde_json::to_value(payload).map_err(|e| CertifyError::Serialize(e.to_string()))?;
        let passed = verdicts_pass && all_hold(&inequality_transcript);
        Ok(Certificate {
            schema_version: SCHEMA_VERSION.to_string(),
            subject,
            passed,
            payload,
            inequality_transcript,
            provenance,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, CertifyError> {
        serde_json::from_str(s).map_err(|e| CertifyError::Serialize(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_and_pass_flag() {
        let lines = vec![InequalityLine::new("1 < 2", 1, 2, true)];
        let prov = Provenance::new("tent", serde_json::json!({"k": 3}));
        let c = Certificate::new(Subject::Cycle, &vec![1, 2, 3], lines.clone(), prov.clone(), true).unwrap();
        assert!(c.passed);
        assert_eq!(Certificate::from_json(&c.to_json()).unwrap(), c);
        let bad = vec![InequalityLine::new("2 < 1", 2, 1, false)];
        assert!(!Certificate::new(Subject::Cycle, &0, bad, prov.clone(), true).unwrap().passed);
        assert!(!Certificate::new(Subject::Cycle, &0, lines, prov, false).unwrap().passed);
        assert!(c.to_json().contains("\"subject\": \"cycle\""));
    }
}
