//! JSON documents for models and certificates.
//!
//! Output is canonical: object keys sorted, two-space indentation, a
//! trailing newline, and every rational written as a `"p/q"` string.
//! Parsing a canonical document and emitting it again is byte-identical.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::chambers::{CurveData, CurveModel};
use crate::error::{Error, Result};
use crate::lattice::{ClassVector, IntersectionLattice};
use crate::moves::{Certificate, ModelRef, Move};
use crate::rational::{format_rational, parse_rational, to_i64};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDocument {
    pub label: String,
    pub class: Vec<i64>,
    pub genus: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub rank: usize,
    pub gram: Vec<Vec<i64>>,
    pub labels: Vec<String>,
    pub curves: Vec<CurveDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub canonical: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Vec<String>>,
    pub completeness_assumed: bool,
    #[serde(default, skip_serializing_if = "std::collections::BTreeMap::is_empty")]
    pub metadata: std::collections::BTreeMap<String, String>,
}

fn parse_class(field: &str, coords: &[String]) -> Result<ClassVector> {
    coords
        .iter()
        .enumerate()
        .map(|(i, s)| parse_rational(s).map_err(|e| Error::Malformed(format!("{field}[{i}]: {e}"))))
        .collect::<Result<Vec<_>>>()
        .map(ClassVector::new)
}

fn parse_json<T: for<'de> Deserialize<'de>>(text: &str) -> Result<T> {
    // serde_json messages already carry "at line L column C"
    serde_json::from_str(text).map_err(|e| Error::Malformed(e.to_string()))
}

/// Pretty JSON with sorted keys and a trailing newline.
pub fn to_canonical_json<T: Serialize>(value: &T) -> String {
    // serde_json's Map is ordered by key without the preserve_order feature
    let v: Value = serde_json::to_value(value).expect("documents serialize");
    let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
    s.push('\n');
    s
}

impl ModelDocument {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn from_model(model: &CurveModel) -> Self {
        let l = model.lattice();
        ModelDocument {
            rank: l.rank(),
            gram: l.gram().to_vec(),
            labels: l.labels().to_vec(),
            curves: model
                .curves()
                .iter()
                .map(|c| CurveDocument {
                    label: c.label.clone(),
                    class: c.class.coords().iter().map(|x| to_i64(x).expect("integral curve")).collect(),
                    genus: c.genus,
                })
                .collect(),
            canonical: l.canonical_class().map(ClassVector::to_strings),
            reference: l.reference_class().map(ClassVector::to_strings),
            completeness_assumed: model.completeness_assumed(),
            metadata: model.metadata().clone(),
        }
    }

    pub fn to_model(&self) -> Result<CurveModel> {
        if self.gram.len() != self.rank {
            return Err(Error::Malformed(format!(
                "gram: {} rows but rank is {}",
                self.gram.len(),
                self.rank
            )));
        }
        let mut l = IntersectionLattice::new(self.gram.clone(), self.labels.clone())?;
        if let Some(k) = &self.canonical {
            l = l.with_canonical_class(parse_class("canonical", k)?)?;
        }
        if let Some(w) = &self.reference {
            l = l.with_reference_class(parse_class("reference", w)?)?;
        }
        let curves = self
            .curves
            .iter()
            .map(|c| CurveData::new(c.label.clone(), ClassVector::from_ints(&c.class), c.genus))
            .collect();
        let mut m = CurveModel::new(l, curves, self.completeness_assumed)?;
        for (k, v) in &self.metadata {
            m = m.with_metadata(k, v);
        }
        Ok(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModelField {
    Name(String),
    Inline(Box<ModelDocument>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case", deny_unknown_fields)]
pub enum MoveDocument {
    Inflate {
        object: String,
        t: String,
    },
    InflateNonneg {
        object: String,
        t: String,
    },
    Smooth {
        constituents: Vec<String>,
        reinstate: Vec<String>,
        new_id: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateDocument {
    pub model: ModelField,
    pub base_class: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_objects: Option<Vec<String>>,
    pub moves: Vec<MoveDocument>,
    pub target_class: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub annotations: Vec<String>,
}

impl CertificateDocument {
    pub fn parse(text: &str) -> Result<Self> {
        parse_json(text)
    }

    pub fn to_json(&self) -> String {
        to_canonical_json(self)
    }

    pub fn from_certificate(cert: &Certificate) -> Self {
        let model = match &cert.model {
            ModelRef::Builtin(n) | ModelRef::Path(n) => ModelField::Name(n.clone()),
            ModelRef::Inline(doc) => ModelField::Inline(doc.clone()),
        };
        let moves = cert
            .moves
            .iter()
            .map(|m| match m {
                Move::Inflate { object, t } => MoveDocument::Inflate {
                    object: object.clone(),
                    t: format_rational(t),
                },
                Move::InflateNonneg { object, t } => MoveDocument::InflateNonneg {
                    object: object.clone(),
                    t: format_rational(t),
                },
                Move::Smooth {
                    constituents,
                    reinstate,
                    new_id,
                } => MoveDocument::Smooth {
                    constituents: constituents.clone(),
                    reinstate: reinstate.clone(),
                    new_id: new_id.clone(),
                },
            })
            .collect();
        CertificateDocument {
            model,
            base_class: cert.base_class.to_strings(),
            initial_objects: cert.initial_objects.clone(),
            moves,
            target_class: cert.target_class.to_strings(),
            annotations: cert.annotations.clone(),
        }
    }

    /// A bare model string names a built-in when it is one, else a path.
    pub fn to_certificate(&self) -> Result<Certificate> {
        let model = match &self.model {
            ModelField::Name(n) if is_builtin_name(n) => ModelRef::Builtin(n.clone()),
            ModelField::Name(n) => ModelRef::Path(n.clone()),
            ModelField::Inline(doc) => ModelRef::Inline(doc.clone()),
        };
        let moves = self
            .moves
            .iter()
            .enumerate()
            .map(|(i, m)| {
                let t = |s: &str| {
                    parse_rational(s).map_err(|e| Error::Malformed(format!("moves[{i}].t: {e}")))
                };
                Ok(match m {
                    MoveDocument::Inflate { object, t: s } => Move::Inflate {
                        object: object.clone(),
                        t: t(s)?,
                    },
                    MoveDocument::InflateNonneg { object, t: s } => Move::InflateNonneg {
                        object: object.clone(),
                        t: t(s)?,
                    },
                    MoveDocument::Smooth {
                        constituents,
                        reinstate,
                        new_id,
                    } => Move::Smooth {
                        constituents: constituents.clone(),
                        reinstate: reinstate.clone(),
                        new_id: new_id.clone(),
                    },
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Certificate {
            model,
            base_class: parse_class("base_class", &self.base_class)?,
            initial_objects: self.initial_objects.clone(),
            moves,
            target_class: parse_class("target_class", &self.target_class)?,
            annotations: self.annotations.clone(),
        })
    }
}

pub fn is_builtin_name(name: &str) -> bool {
    crate::models::BUILTIN_NAMES.contains(&name) || name.starts_with("ruled-")
}

pub fn certificate_to_json(cert: &Certificate) -> String {
    CertificateDocument::from_certificate(cert).to_json()
}

pub fn certificate_from_json(text: &str) -> Result<Certificate> {
    CertificateDocument::parse(text)?.to_certificate()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{build_kk_model, kk_gamma0_certificate};
    use crate::rational::int;

    #[test]
    fn certificate_round_trip_is_byte_identical() {
        let cert = kk_gamma0_certificate(&int(1)).unwrap();
        let text = certificate_to_json(&cert);
        let again = certificate_to_json(&certificate_from_json(&text).unwrap());
        assert_eq!(text, again);
        assert!(text.ends_with("}\n"));
        // keys are sorted
        let a = text.find("\"annotations\"").unwrap();
        let b = text.find("\"base_class\"").unwrap();
        assert!(a < b);
    }

    #[test]
    fn model_round_trip() {
        let m = build_kk_model(true).unwrap();
        let doc = ModelDocument::from_model(&m);
        let text = doc.to_json();
        let back = ModelDocument::parse(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_model().unwrap().curves(), m.curves());
    }

    #[test]
    fn floats_are_rejected() {
        let text = certificate_to_json(&kk_gamma0_certificate(&int(1)).unwrap());
        let bad = text.replacen("\"t\": \"8\"", "\"t\": 8.0", 1);
        assert!(certificate_from_json(&bad).is_err());
        let bad = text.replacen("\"t\": \"8\"", "\"t\": \"8.0\"", 1);
        assert!(certificate_from_json(&bad).is_err());
    }

    #[test]
    fn truncated_json_reports_position() {
        let text = certificate_to_json(&kk_gamma0_certificate(&int(1)).unwrap());
        let err = certificate_from_json(&text[..text.len() / 2]).unwrap_err();
        assert!(matches!(err, Error::Malformed(ref s) if s.contains("line")));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = r#"{"rank":1,"gram":[[1]],"labels":["h"],"curves":[],"completeness_assumed":true,"extra":1}"#;
        assert!(ModelDocument::parse(text).is_err());
    }
}
