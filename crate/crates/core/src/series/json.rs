//! JSON interchange for series.
//!
//! An [`MSeries`] is written as `{"nvars", "trunc_deg", "terms"}` with terms
//! `[[e1, ..., en], "p/q"]` in lexicographic exponent order. A [`TSeries`]
//! adds `order_t`, `ncomponents` and the per-coefficient valid degrees; each
//! `coeffs[k]` is a list of component term lists.

use serde::{Deserialize, Serialize};

use super::{coeff_from_str, coeff_to_string, MIndex, MSeries, TSeries, VSeries};
use crate::error::{Error, Result};

pub type TermJson = (Vec<u32>, String);

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct MSeriesJson {
    pub nvars: usize,
    pub trunc_deg: u32,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct TSeriesJson {
    pub nvars: usize,
    pub trunc_deg: u32,
    pub order_t: usize,
    pub ncomponents: usize,
    pub valid_deg: Vec<u32>,
    pub coeffs: Vec<Vec<Vec<TermJson>>>,
}

fn terms_of(s: &MSeries) -> Vec<TermJson> {
    s.terms().map(|(i, c)| (i.exponents().to_vec(), coeff_to_string(c))).collect()
}

fn series_from(nvars: usize, trunc_deg: u32, terms: &[TermJson]) -> Result<MSeries> {
    let parsed = terms
        .iter()
        .map(|(e, c)| Ok((MIndex::new(e.clone()), coeff_from_str(c)?)))
        .collect::<Result<Vec<_>>>()?;
    for (i, _) in &parsed {
        if i.degree() > trunc_deg {
            return Err(Error::Json(format!(
                "term of degree {} above truncation {trunc_deg}",
                i.degree()
            )));
        }
    }
    MSeries::from_terms(nvars, trunc_deg, parsed)
}

impl From<&MSeries> for MSeriesJson {
    fn from(s: &MSeries) -> Self {
        MSeriesJson { nvars: s.nvars(), trunc_deg: s.trunc_deg(), terms: terms_of(s) }
    }
}

impl TryFrom<&MSeriesJson> for MSeries {
    type Error = Error;
    fn try_from(j: &MSeriesJson) -> Result<Self> {
        if j.nvars == 0 {
            return Err(Error::Json("nvars must be positive".into()));
        }
        series_from(j.nvars, j.trunc_deg, &j.terms)
    }
}

impl From<&TSeries> for TSeriesJson {
    fn from(t: &TSeries) -> Self {
        TSeriesJson {
            nvars: t.nvars(),
            trunc_deg: t.trunc_deg(),
            order_t: t.order_t(),
            ncomponents: t.ncomponents(),
            valid_deg: t.valid_degrees(),
            coeffs: t
                .coeffs()
                .iter()
                .map(|v| v.components().iter().map(terms_of).collect())
                .collect(),
        }
    }
}

impl TryFrom<&TSeriesJson> for TSeries {
    type Error = Error;
    fn try_from(j: &TSeriesJson) -> Result<Self> {
        if j.nvars == 0 || j.ncomponents == 0 {
            return Err(Error::Json("nvars and ncomponents must be positive".into()));
        }
        if j.coeffs.len() != j.order_t + 1 || j.valid_deg.len() != j.coeffs.len() {
            return Err(Error::Json(format!(
                "order_t {} needs {} coefficients and valid degrees",
                j.order_t,
                j.order_t + 1
            )));
        }
        let coeffs = j
            .coeffs
            .iter()
            .zip(&j.valid_deg)
            .map(|(comps, &d)| {
                if comps.len() != j.ncomponents {
                    return Err(Error::Json("component count mismatch".into()));
                }
                let comps = comps
                    .iter()
                    .map(|terms| series_from(j.nvars, d, terms))
                    .collect::<Result<Vec<_>>>()?;
                VSeries::new(comps)
            })
            .collect::<Result<Vec<_>>>()?;
        TSeries::new(coeffs)
    }
}

/// Serialize with object keys sorted, independent of struct field order.
pub fn to_canonical_string<T: Serialize>(value: &T) -> Result<String> {
    let v = serde_json::to_value(value)?;
    Ok(serde_json::to_string_pretty(&v)?)
}

pub fn mseries_to_json(s: &MSeries) -> Result<String> {
    to_canonical_string(&MSeriesJson::from(s))
}

pub fn mseries_from_json(text: &str) -> Result<MSeries> {
    let j: MSeriesJson = serde_json::from_str(text)?;
    MSeries::try_from(&j)
}

pub fn tseries_to_json(t: &TSeries) -> Result<String> {
    to_canonical_string(&TSeriesJson::from(t))
}

/// Accepts a bare TSeries document or any object embedding its fields
/// (such as a flow report); unknown keys are ignored.
pub fn tseries_from_json(text: &str) -> Result<TSeries> {
    let j: TSeriesJson = serde_json::from_str(text)?;
    TSeries::try_from(&j)
}
