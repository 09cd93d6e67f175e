//! Subresonance data for a spectrum file or a chamber witness.

use serde::Serialize;

use super::file::{ActionFile, SpectrumFile, SCHEMA_VERSION};
use crate::actions::validate_named;
use crate::config::Config;
use crate::error::{Error, Result};
use crate::exactnum::rational::format_rational;
use crate::normalforms::{sr_group_dimension, subresonance_indices, ContractionSpectrum, Convention, Exponent, SubresonanceIndex};
use crate::weyl::{lyapunov_data, weyl_chambers, LyapunovFunctional};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalFormsReport {
    pub schema_version: u32,
    pub source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<Vec<i64>>,
    /// Exact rationals, or 12-decimal approximations of evaluated exponents.
    pub exponents: Vec<String>,
    pub multiplicities: Vec<usize>,
    pub convention: Convention,
    pub indices: Vec<SubresonanceIndex>,
    pub dimension: String,
}

impl NormalFormsReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn build(
    spec: &ContractionSpectrum,
    convention: Convention,
    source: String,
    element: Option<Vec<i64>>,
    cfg: &Config,
) -> Result<NormalFormsReport> {
    let indices = subresonance_indices(spec, convention, cfg)?;
    let dimension = sr_group_dimension(spec, convention, cfg)?;
    Ok(NormalFormsReport {
        schema_version: SCHEMA_VERSION,
        source,
        element,
        exponents: spec
            .exponents()
            .iter()
            .map(|e| match e {
                Exponent::Exact(v) => format_rational(v),
                other => format!("{:.12}", other.approx()),
            })
            .collect(),
        multiplicities: spec.multiplicities().to_vec(),
        convention,
        indices,
        dimension: dimension.to_string(),
    })
}

pub fn normal_forms_from_spectrum(file: &SpectrumFile, convention: Option<Convention>, cfg: &Config) -> Result<NormalFormsReport> {
    let spec = ContractionSpectrum::exact(&file.exponents, &file.multiplicities)?;
    let conv = convention.or(file.convention).unwrap_or_default();
    build(&spec, conv, "spectrum".into(), None, cfg)
}

/// Contracting spectrum at `element`, or at the witness of chamber
/// `chamber` when no element is given.
pub fn normal_forms_at_element(
    file: &ActionFile,
    chamber: usize,
    element: Option<Vec<i64>>,
    convention: Option<Convention>,
    cfg: &Config,
) -> Result<NormalFormsReport> {
    let gens = super::audit::integer_generators(file)?;
    let action = validate_named(gens, &file.name)?;
    let data = lyapunov_data(&action.rational_generators(), cfg.precision_cap_bits);
    let nonzero: Vec<LyapunovFunctional> = data.functionals.into_iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::InvalidInput("every Lyapunov functional vanishes".into()));
    }
    let (b, source) = match element {
        Some(b) => {
            if b.len() != action.rank() {
                return Err(Error::ShapeMismatch(format!("element has length {}, rank is {}", b.len(), action.rank())));
            }
            (b, "element".to_string())
        }
        None => {
            let dec = weyl_chambers(&nonzero, cfg)?;
            let c = dec.chambers.get(chamber).ok_or_else(|| {
                Error::InvalidInput(format!("chamber {chamber} does not exist ({} chambers)", dec.chambers.len()))
            })?;
            (c.witness.clone(), format!("chamber {chamber}"))
        }
    };
    let spec = ContractionSpectrum::at_element(&nonzero, &b, cfg)?;
    build(&spec, convention.unwrap_or_default(), source, Some(b), cfg)
}
