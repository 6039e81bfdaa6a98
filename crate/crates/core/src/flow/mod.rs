//! Formal flows `u = Σ_k v_k t^k` of `∂_t u = X(u)`, `u(0) = u_0`.
//!
//! Two routes are provided. [`flow_recurrence`] works for any field: the
//! coefficient of `t^k` in `X(Σ_{i<=k} v_i t^i)` is `(k+1) v_{k+1}`, and the
//! left side only involves already known coefficients. [`flow_linear_exp`]
//! applies to fields that are linear in the jets and computes
//! `v_k = X^k(u_0) / k!` directly. Both are exact.

mod closed_form;
mod tpoly;

use serde::{Deserialize, Serialize};

pub use closed_form::{closed_form_coeff, closed_form_term, model_growth_coeffs, model_problem};

use crate::dsl::{eval_field, evaluate, JetDependence, ProblemSpec};
use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::series::json::{to_canonical_string, TSeriesJson};
use crate::series::{Coeff, TSeries, VSeries};
use tpoly::TPolyAlgebra;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FlowMethod {
    Recurrence,
    LinearExp,
}

impl FlowMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            FlowMethod::Recurrence => "recurrence",
            FlowMethod::LinearExp => "linear_exp",
        }
    }
}

/// A computed flow together with the problem it solves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowResult {
    pub series: TSeries,
    pub problem: ProblemSpec,
    pub method: FlowMethod,
}

impl FlowResult {
    /// Order `s` of the field.
    pub fn jet_order(&self) -> u32 {
        self.problem.jet_order()
    }

    /// Valid z-degree `D_k` of each `v_k`.
    pub fn valid_degrees(&self) -> Vec<u32> {
        self.series.valid_degrees()
    }

    pub fn to_report(&self) -> FlowReport {
        FlowReport {
            series: TSeriesJson::from(&self.series),
            method: self.method,
            s: self.jet_order(),
            k: self.series.order_t(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        to_canonical_string(&self.to_report())
    }
}

/// Serialized flow: the t-series fields plus method metadata.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct FlowReport {
    #[serde(flatten)]
    pub series: TSeriesJson,
    pub method: FlowMethod,
    pub s: u32,
    #[serde(rename = "K")]
    pub k: usize,
}

fn inverse_of(n: usize) -> Coeff {
    Coeff::new(1.into(), n.into())
}

/// General flow by coefficient extraction in `t`.
pub fn flow_recurrence(p: &ProblemSpec) -> Result<FlowResult> {
    let mut coeffs = vec![p.initial_series()?];
    for k in 0..p.order_t() {
        let alg = TPolyAlgebra::new(&coeffs, p.trunc_deg());
        let scale = inverse_of(k + 1);
        let next = p
            .field()
            .iter()
            .enumerate()
            .map(|(l, f)| {
                let value = evaluate(f, &alg).map_err(|e| e.located(format!("field[{l}] at t^{k}")))?;
                Ok(value.coeffs[k].scale(&scale))
            })
            .collect::<Result<Vec<_>>>()?;
        coeffs.push(VSeries::new(next)?);
    }
    Ok(FlowResult { series: TSeries::new(coeffs)?, problem: p.clone(), method: FlowMethod::Recurrence })
}

/// The exponential form `Σ_k t^k X^k(u_0)/k!`, for fields linear in the jets.
pub fn flow_linear_exp(p: &ProblemSpec) -> Result<FlowResult> {
    for (l, f) in p.field().iter().enumerate() {
        if f.dependence() != JetDependence::Linear {
            return Err(Error::NonLinearField(format!(
                "field[{l}] = `{}` is not homogeneous linear in the jets",
                f.print(p.names())
            )));
        }
    }
    let mut coeffs = vec![p.initial_series()?];
    for k in 1..=p.order_t() {
        let prev = &coeffs[k - 1];
        let scale = inverse_of(k);
        let next = p
            .field()
            .iter()
            .enumerate()
            .map(|(l, f)| {
                let v = eval_field(f, prev).map_err(|e| e.located(format!("field[{l}] at t^{k}")))?;
                Ok(v.scale(&scale))
            })
            .collect::<Result<Vec<_>>>()?;
        coeffs.push(VSeries::new(next)?);
    }
    Ok(FlowResult { series: TSeries::new(coeffs)?, problem: p.clone(), method: FlowMethod::LinearExp })
}

/// Substitute the flow back: the `t^k` coefficient of `X(u)` must equal
/// `(k+1) v_{k+1}` for every `k < K`, at the valid degree of `v_{k+1}`.
pub fn flow_is_consistent(fr: &FlowResult) -> Result<bool> {
    let coeffs = fr.series.coeffs();
    let k_max = fr.series.order_t();
    if k_max == 0 {
        return Ok(true);
    }
    for k in 0..k_max {
        let alg = TPolyAlgebra::new(&coeffs[..=k], fr.problem.trunc_deg());
        for (l, f) in fr.problem.field().iter().enumerate() {
            let lhs = evaluate(f, &alg)?.coeffs[k].clone();
            let rhs = coeffs[k + 1].component(l).scale(&Coeff::from_integer((k + 1).into()));
            let d = rhs.trunc_deg();
            if lhs.truncate(d) != rhs || lhs.trunc_deg() < d {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Flows of independent problems, fanned out according to `exec`.
pub fn flow_batch(problems: &[ProblemSpec], method: FlowMethod, exec: Exec) -> Vec<Result<FlowResult>> {
    par::map(exec, problems, |p| match method {
        FlowMethod::Recurrence => flow_recurrence(p),
        FlowMethod::LinearExp => flow_linear_exp(p),
    })
}
