//! JSON documents: forms and sealed certificates.
//!
//! Every rational is a `"p/q"` string in lowest terms. A certificate
//! document carries a schema version and a sha256 digest over the canonical
//! JSON (sorted keys, no whitespace) of its other fields.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::decompose::Decomposition;
use crate::parse::parse_form;
use crate::poly::BinaryForm;
use crate::rank::{PerturbationReport, RankCertificate, TypicalityCertificate};
use crate::rat::{format_rat, parse_reduced_rat};
use crate::verify::{verify_chain, verify_decomposition, verify_perturbation, verify_rank_certificate, verify_typicality};
use crate::witness::CertificateChain;
use crate::{Error, Result};

pub const SCHEMA_VERSION: &str = "1.0";
pub const SCHEMA_MAJOR: u64 = 1;
pub const GENERATOR: &str = concat!("waring ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub generator: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDocument {
    pub degree: usize,
    /// Index `i` is the coefficient of `x^i y^(d-i)`.
    pub coefficients: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl FormDocument {
    pub fn new(f: &BinaryForm, seed: Option<u64>) -> Self {
        FormDocument {
            degree: f.degree(),
            coefficients: f.coeffs().iter().map(format_rat).collect(),
            provenance: Some(Provenance {
                seed,
                generator: GENERATOR.to_string(),
            }),
        }
    }

    pub fn to_form(&self) -> Result<BinaryForm> {
        if self.coefficients.len() != self.degree + 1 {
            return Err(Error::Parse(format!(
                "degree {} needs {} coefficients, found {}",
                self.degree,
                self.degree + 1,
                self.coefficients.len()
            )));
        }
        let coeffs = self
            .coefficients
            .iter()
            .map(|s| parse_reduced_rat(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(BinaryForm::new(coeffs))
    }
}

/// Reads a form from a JSON [`FormDocument`] or an expression such as
/// `(x-2y)^3*(x+y)`.
pub fn form_from_text(text: &str) -> Result<BinaryForm> {
    let t = text.trim();
    if t.starts_with('{') {
        let doc: FormDocument = serde_json::from_str(t).map_err(|e| Error::Parse(e.to_string()))?;
        doc.to_form()
    } else {
        parse_form(t)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "body", rename_all = "snake_case")]
pub enum Payload {
    Rank(RankCertificate),
    Chain(Box<CertificateChain>),
    Typicality(TypicalityCertificate),
    Perturbation(PerturbationReport),
    Decomposition {
        witness: BinaryForm,
        decomposition: Decomposition,
    },
}

impl Payload {
    pub fn kind(&self) -> &'static str {
        match self {
            Payload::Rank(_) => "rank",
            Payload::Chain(_) => "chain",
            Payload::Typicality(_) => "typicality",
            Payload::Perturbation(_) => "perturbation",
            Payload::Decomposition { .. } => "decomposition",
        }
    }

    /// The form the payload is about, when it records one.
    fn form(&self) -> Option<&BinaryForm> {
        match self {
            Payload::Rank(c) => Some(&c.form),
            Payload::Chain(c) => Some(c.form()),
            Payload::Typicality(t) => Some(&t.form),
            Payload::Perturbation(r) => Some(&r.form),
            Payload::Decomposition { .. } => None,
        }
    }
}

#[derive(Serialize)]
struct Unsealed<'a> {
    schema_version: &'a str,
    subject: &'a FormDocument,
    payload: &'a Payload,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub schema_version: String,
    pub subject: FormDocument,
    pub payload: Payload,
    /// Hex sha256 of the canonical JSON of the other three fields.
    pub digest: String,
}

fn canonical_digest(schema_version: &str, subject: &FormDocument, payload: &Payload) -> String {
    let value = serde_json::to_value(Unsealed {
        schema_version,
        subject,
        payload,
    })
    .expect("documents serialize");
    // `Value` objects keep keys sorted, so this text is canonical.
    let text = value.to_string();
    Sha256::digest(text.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

impl CertificateDocument {
    pub fn seal(subject: FormDocument, payload: Payload) -> Self {
        let digest = canonical_digest(SCHEMA_VERSION, &subject, &payload);
        CertificateDocument {
            schema_version: SCHEMA_VERSION.to_string(),
            subject,
            payload,
            digest,
        }
    }

    /// Recomputes the digest, e.g. after a deliberate edit.
    pub fn reseal(&mut self) {
        self.digest = canonical_digest(&self.schema_version, &self.subject, &self.payload);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }

    /// Parses a document. An unknown schema major is a verification
    /// failure; anything unreadable is a parse error.
    pub fn from_json(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let version = value
            .get("schema_version")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse("missing schema_version".into()))?;
        check_version(version)?;
        // from the text, not the value: integer map keys only parse from text
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }
}

fn check_version(version: &str) -> Result<()> {
    let major = version.split('.').next().and_then(|m| m.parse::<u64>().ok());
    match major {
        Some(SCHEMA_MAJOR) => Ok(()),
        _ => Err(Error::Verification(format!("schema: unsupported version {version:?}"))),
    }
}

/// Replays the payload against the subject, then checks the digest.
///
/// Content checks run first so that an edited claim is reported by the
/// invariant it breaks; the digest catches edits no invariant depends on.
pub fn verify_document(doc: &CertificateDocument) -> Result<()> {
    check_version(&doc.schema_version)?;
    let subject = doc
        .subject
        .to_form()
        .map_err(|e| Error::Verification(format!("subject: {e}")))?;
    if let Some(f) = doc.payload.form() {
        if *f != subject {
            return Err(Error::Verification(format!("subject: payload is about {f}, not {subject}")));
        }
    }
    match &doc.payload {
        Payload::Rank(c) => verify_rank_certificate(c),
        Payload::Chain(c) => verify_chain(c),
        Payload::Typicality(t) => verify_typicality(t),
        Payload::Perturbation(r) => verify_perturbation(r),
        Payload::Decomposition { witness, decomposition } => verify_decomposition(&subject, witness, decomposition),
    }?;
    if canonical_digest(&doc.schema_version, &doc.subject, &doc.payload) != doc.digest {
        return Err(Error::Verification("digest: document contents do not match the recorded digest".into()));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rank::real_rank_search;

    fn rank_doc(c: &[i64]) -> CertificateDocument {
        let f = BinaryForm::from_ints(c);
        let cert = real_rank_search(&f).unwrap();
        CertificateDocument::seal(FormDocument::new(&f, None), Payload::Rank(cert))
    }

    #[test]
    fn round_trip_and_verify() {
        let doc = rank_doc(&[0, 0, 1, 0, 0]);
        let back = CertificateDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(back, doc);
        verify_document(&back).unwrap();
    }

    #[test]
    fn digest_catches_edits() {
        let mut doc = rank_doc(&[0, 1, 0]);
        doc.subject.provenance.as_mut().unwrap().generator = "other".into();
        assert!(matches!(verify_document(&doc), Err(Error::Verification(m)) if m.starts_with("digest")));
        doc.reseal();
        verify_document(&doc).unwrap();
        doc.subject.coefficients[0] = "1/1".into();
        doc.reseal();
        assert!(matches!(verify_document(&doc), Err(Error::Verification(m)) if m.starts_with("subject")));
    }

    #[test]
    fn unknown_major_rejected() {
        let doc = rank_doc(&[0, 1, 0]);
        let text = doc.to_json().replacen("\"1.0\"", "\"2.0\"", 1);
        assert!(matches!(CertificateDocument::from_json(&text), Err(Error::Verification(_))));
        let text = doc.to_json().replacen("\"1.0\"", "\"1.7\"", 1);
        assert!(CertificateDocument::from_json(&text).is_ok());
    }

    #[test]
    fn perturbation_documents_round_trip() {
        let f = BinaryForm::from_ints(&[1, 0, -3, 0, 1]);
        let report = crate::rank::perturbation_stability_test(&f, &crate::rat::ratio(1, 100), 2, 4).unwrap();
        let doc = CertificateDocument::seal(FormDocument::new(&f, Some(4)), Payload::Perturbation(report));
        assert_eq!(CertificateDocument::from_json(&doc.to_json()).unwrap(), doc);
    }

    #[test]
    fn form_input() {
        let f = form_from_text(r#"{"degree": 2, "coefficients": ["0/1", "1/1", "0/1"]}"#).unwrap();
        assert_eq!(f, BinaryForm::from_ints(&[0, 1, 0]));
        assert_eq!(form_from_text("x*y\n").unwrap(), f);
        assert!(form_from_text(r#"{"degree": 2, "coefficients": ["0", "1/0", "0"]}"#).is_err());
        assert!(form_from_text(r#"{"degree": 2, "coefficients": ["2/4", "1", "0"]}"#).is_err());
        assert!(form_from_text(r#"{"degree": 3, "coefficients": ["0", "1", "0"]}"#).is_err());
    }
}
