//! Versioned JSON input files.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::actions::BracketTerm;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::exactnum::rational::Q;
use crate::linalg::{IntMatrix, QMat};
use crate::normalforms::Convention;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionKind {
    Torus,
    Graded,
}

/// Per-file overrides of the analysis configuration.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileOptions {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_den: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision_cap_bits: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_cap: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl FileOptions {
    pub fn apply(&self, cfg: &mut Config) {
        if let Some(v) = self.max_den {
            cfg.max_den = v;
        }
        if let Some(v) = self.precision_cap_bits {
            cfg.precision_cap_bits = v;
        }
        if let Some(v) = self.witness_cap {
            cfg.witness_cap = v;
        }
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusPayload {
    pub dim: usize,
    pub rank: usize,
    pub generators: Vec<IntMatrix>,
}

/// Row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RationalMatrix(#[serde(with = "crate::exactnum::serde_num::rational_mat")] pub Vec<Vec<Q>>);

impl RationalMatrix {
    pub fn to_qmat(&self) -> Result<QMat> {
        let n = self.0.len();
        if n == 0 || self.0.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("generator matrices must be square and nonempty".into()));
        }
        Ok(QMat::from_rows(self.0.clone()))
    }

    pub fn from_int(m: &IntMatrix) -> Self {
        RationalMatrix(m.rows().iter().map(|r| r.iter().map(|x| Q::from(x.clone())).collect()).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GradedPayload {
    pub grading: Vec<usize>,
    pub structure_constants: Vec<BracketTerm>,
    pub generators: Vec<RationalMatrix>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Payload {
    Torus(TorusPayload),
    Graded(GradedPayload),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    schema_version: u32,
    name: String,
    kind: ActionKind,
    payload: serde_json::Value,
    #[serde(default, skip_serializing_if = "is_default")]
    options: FileOptions,
}

fn is_default(o: &FileOptions) -> bool {
    *o == FileOptions::default()
}

/// A parsed action file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionFile {
    pub name: String,
    pub payload: Payload,
    pub options: FileOptions,
}

fn parse_with_path<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse(format!("line {}, column {}, at `{}`: {}", inner.line(), inner.column(), path, inner))
    })
}

fn payload_from_value<T: DeserializeOwned>(v: serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(v).map_err(|e| {
        let path = e.path().to_string();
        Error::Parse(format!("at `payload.{}`: {}", path, e.into_inner()))
    })
}

impl ActionFile {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawFile = parse_with_path(text)?;
        if raw.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema_version {}, expected {SCHEMA_VERSION}",
                raw.schema_version
            )));
        }
        let payload = match raw.kind {
            ActionKind::Torus => {
                let p: TorusPayload = payload_from_value(raw.payload)?;
                if p.generators.len() != p.rank {
                    return Err(Error::ShapeMismatch(format!(
                        "rank is {} but {} generators are given",
                        p.rank,
                        p.generators.len()
                    )));
                }
                for (i, g) in p.generators.iter().enumerate() {
                    if g.nrows() != p.dim || g.rows().iter().any(|r| r.len() != p.dim) {
                        return Err(Error::ShapeMismatch(format!("generator {i} is not {0}x{0}", p.dim)));
                    }
                }
                Payload::Torus(p)
            }
            ActionKind::Graded => Payload::Graded(payload_from_value(raw.payload)?),
        };
        Ok(ActionFile {
            name: raw.name,
            payload,
            options: raw.options,
        })
    }

    pub fn kind(&self) -> ActionKind {
        match self.payload {
            Payload::Torus(_) => ActionKind::Torus,
            Payload::Graded(_) => ActionKind::Graded,
        }
    }

    pub fn to_json(&self) -> String {
        let payload = match &self.payload {
            Payload::Torus(p) => serde_json::to_value(p),
            Payload::Graded(p) => serde_json::to_value(p),
        }
        .expect("payload serializes");
        let raw = RawFile {
            schema_version: SCHEMA_VERSION,
            name: self.name.clone(),
            kind: self.kind(),
            payload,
            options: self.options.clone(),
        };
        let mut s = serde_json::to_string_pretty(&raw).expect("file serializes");
        s.push('\n');
        s
    }

    pub fn torus(name: &str, generators: Vec<IntMatrix>) -> Self {
        let dim = generators.first().map_or(0, |g| g.nrows());
        ActionFile {
            name: name.to_string(),
            payload: Payload::Torus(TorusPayload {
                dim,
                rank: generators.len(),
                generators,
            }),
            options: FileOptions::default(),
        }
    }
}

/// A spectrum for the subresonance commands.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumFile {
    pub schema_version: u32,
    #[serde(with = "crate::exactnum::serde_num::rational_vec")]
    pub exponents: Vec<Q>,
    pub multiplicities: Vec<usize>,
    #[serde(default)]
    pub convention: Option<Convention>,
}

impl SpectrumFile {
    pub fn parse(text: &str) -> Result<Self> {
        let f: SpectrumFile = parse_with_path(text)?;
        if f.schema_version != SCHEMA_VERSION {
            return Err(Error::Parse(format!(
                "unsupported schema_version {}, expected {SCHEMA_VERSION}",
                f.schema_version
            )));
        }
        Ok(f)
    }
}

/// Whether a JSON document looks like a spectrum file rather than an
/// action file.
pub fn is_spectrum_document(text: &str) -> bool {
    serde_json::from_str::<serde_json::Value>(text)
        .ok()
        .and_then(|v| v.as_object().map(|o| o.contains_key("exponents")))
        .unwrap_or(false)
}
