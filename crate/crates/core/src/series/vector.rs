use super::coeff::Coeff;
use super::mseries::MSeries;
use crate::error::{Error, Result};

/// An `m`-tuple of series `(u_1, ..., u_m)` over one ring.
///
/// Components share `nvars`; on construction they are cut to the smallest
/// component truncation so the vector carries a single valid degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VSeries {
    components: Vec<MSeries>,
}

impl VSeries {
    pub fn new(components: Vec<MSeries>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::ShapeMismatch("a vector series needs at least one component".into()))?;
        let nvars = first.nvars();
        if let Some(bad) = components.iter().find(|c| c.nvars() != nvars) {
            return Err(Error::VarCountMismatch { left: nvars, right: bad.nvars() });
        }
        let d = components.iter().map(MSeries::trunc_deg).min().unwrap_or(0);
        let components =
            components.into_iter().map(|c| if c.trunc_deg() == d { c } else { c.truncate(d) }).collect();
        Ok(VSeries { components })
    }

    pub fn scalar(u: MSeries) -> Self {
        VSeries { components: vec![u] }
    }

    pub fn components(&self) -> &[MSeries] {
        &self.components
    }

    pub fn component(&self, l: usize) -> &MSeries {
        &self.components[l]
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.components[0].nvars()
    }

    pub fn trunc_deg(&self) -> u32 {
        self.components[0].trunc_deg()
    }

    pub fn zero(m: usize, nvars: usize, trunc_deg: u32) -> Self {
        VSeries { components: vec![MSeries::zero(nvars, trunc_deg); m] }
    }

    pub fn scale(&self, k: &Coeff) -> VSeries {
        VSeries { components: self.components.iter().map(|c| c.scale(k)).collect() }
    }

    pub fn abs(&self) -> VSeries {
        VSeries { components: self.components.iter().map(MSeries::abs).collect() }
    }

    pub fn add(&self, other: &VSeries) -> Result<VSeries> {
        self.check_shape(other)?;
        let comps = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.add(b))
            .collect::<Result<Vec<_>>>()?;
        VSeries::new(comps)
    }

    /// The map `ψ(u_1, ..., u_m) = u_1 + ... + u_m`.
    pub fn component_sum(&self) -> MSeries {
        let mut acc = self.components[0].clone();
        for c in &self.components[1..] {
            acc = acc.add(c).expect("components share nvars");
        }
        acc
    }

    /// Componentwise `self ≪ other` at the shared truncation.
    pub fn majorized_by(&self, other: &VSeries) -> Result<bool> {
        self.check_shape(other)?;
        for (a, b) in self.components.iter().zip(&other.components) {
            if !a.majorized_by(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_nonnegative(&self) -> bool {
        self.components.iter().all(MSeries::is_nonnegative)
    }

    fn check_shape(&self, other: &VSeries) -> Result<()> {
        if self.len() != other.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} components vs {} components",
                self.len(),
                other.len()
            )));
        }
        if self.nvars() != other.nvars() {
            return Err(Error::VarCountMismatch { left: self.nvars(), right: other.nvars() });
        }
        Ok(())
    }
}

/// Truncated series `Σ_{k<=K} v_k t^k` with vector-series coefficients.
///
/// All `v_k` share the component count and `nvars`. Each `v_k` keeps its own
/// valid z-degree, which is non-increasing in `k` for flows computed here;
/// [`TSeries::trunc_deg`] is the degree of `v_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSeries {
    coeffs: Vec<VSeries>,
}

impl TSeries {
    pub fn new(coeffs: Vec<VSeries>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::ShapeMismatch("a t-series needs at least the t^0 coefficient".into()))?;
        let (m, n) = (first.len(), first.nvars());
        for (k, v) in coeffs.iter().enumerate() {
            if v.len() != m || v.nvars() != n {
                return Err(Error::ShapeMismatch(format!(
                    "t^{k} coefficient has shape ({}, {}), expected ({m}, {n})",
                    v.len(),
                    v.nvars()
                )));
            }
        }
        Ok(TSeries { coeffs })
    }

    pub fn order_t(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[VSeries] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &VSeries {
        &self.coeffs[k]
    }

    pub fn ncomponents(&self) -> usize {
        self.coeffs[0].len()
    }

    pub fn nvars(&self) -> usize {
        self.coeffs[0].nvars()
    }

    pub fn trunc_deg(&self) -> u32 {
        self.coeffs[0].trunc_deg()
    }

    /// Valid z-degree `D_k` of each t-coefficient.
    pub fn valid_degrees(&self) -> Vec<u32> {
        self.coeffs.iter().map(VSeries::trunc_deg).collect()
    }

    /// Order-by-order `self ≪ other` up to the shorter t-order.
    pub fn majorized_by(&self, other: &TSeries) -> Result<bool> {
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            if !a.majorized_by(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Apply a map to every t-coefficient (e.g. ψ or the diagonal restriction).
    pub fn map_scalar(&self, f: impl Fn(&VSeries) -> MSeries) -> TSeries {
        TSeries { coeffs: self.coeffs.iter().map(|v| VSeries::scalar(f(v))).collect() }
    }
}
