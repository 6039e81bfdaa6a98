use super::ast::JetExpr;
use crate::error::{Error, Result};
use crate::series::{Coeff, MIndex, MSeries, VSeries};

/// A truncated ring in which jet expressions can be evaluated.
///
/// Implemented for plain series ([`SeriesAlgebra`]) and, in the flow engine,
/// for series in `t` whose coefficients are series in `z`.
pub trait JetAlgebra {
    type Value: Clone;

    fn constant(&self, c: &Coeff) -> Self::Value;
    fn space_var(&self, i: usize) -> Result<Self::Value>;
    fn jet(&self, component: usize, index: &MIndex) -> Result<Self::Value>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value>;
    fn neg(&self, a: &Self::Value) -> Self::Value;
    fn inv(&self, a: &Self::Value) -> Result<Self::Value>;
}

pub fn evaluate<A: JetAlgebra>(e: &JetExpr, alg: &A) -> Result<A::Value> {
    match e {
        JetExpr::Const(c) => Ok(alg.constant(c)),
        JetExpr::SpaceVar(i) => alg.space_var(*i),
        JetExpr::Jet { component, index } => alg.jet(*component, index),
        JetExpr::Add(cs) => fold(cs, alg, A::add),
        JetExpr::Mul(cs) => fold(cs, alg, A::mul),
        JetExpr::Neg(c) => Ok(alg.neg(&evaluate(c, alg)?)),
        JetExpr::Inv(c) => alg.inv(&evaluate(c, alg)?),
        JetExpr::Pow(b, n) => {
            let base = evaluate(b, alg)?;
            let mut result = alg.constant(&Coeff::from_integer(1.into()));
            let mut sq = base;
            let mut n = *n;
            while n > 0 {
                if n & 1 == 1 {
                    result = alg.mul(&result, &sq)?;
                }
                n >>= 1;
                if n > 0 {
                    sq = alg.mul(&sq, &sq)?;
                }
            }
            Ok(result)
        }
    }
}

fn fold<A: JetAlgebra>(
    cs: &[JetExpr],
    alg: &A,
    op: fn(&A, &A::Value, &A::Value) -> Result<A::Value>,
) -> Result<A::Value> {
    let mut it = cs.iter();
    let first = it.next().ok_or_else(|| Error::InvalidProblem("empty sum or product".into()))?;
    let mut acc = evaluate(first, alg)?;
    for c in it {
        acc = op(alg, &acc, &evaluate(c, alg)?)?;
    }
    Ok(acc)
}

/// Evaluation in the truncated ring of series in `z`, with jets taken from a
/// fixed vector series `u` (or no jets at all, for initial data).
pub struct SeriesAlgebra<'a> {
    nvars: usize,
    trunc_deg: u32,
    u: Option<&'a VSeries>,
}

impl<'a> SeriesAlgebra<'a> {
    pub fn at(u: &'a VSeries) -> Self {
        SeriesAlgebra { nvars: u.nvars(), trunc_deg: u.trunc_deg(), u: Some(u) }
    }

    /// For jet-free expressions such as initial data.
    pub fn jet_free(nvars: usize, trunc_deg: u32) -> Self {
        SeriesAlgebra { nvars, trunc_deg, u: None }
    }
}

/// Checks shared by every algebra before differentiating a component.
pub(crate) fn check_jet(component: usize, index: &MIndex, ncomponents: usize, nvars: usize, budget: u32) -> Result<()> {
    if component >= ncomponents {
        return Err(Error::ShapeMismatch(format!("component {component} of {ncomponents}")));
    }
    if index.len() != nvars {
        return Err(Error::ShapeMismatch(format!(
            "jet index of length {} in {} variables",
            index.len(),
            nvars
        )));
    }
    if index.degree() > budget {
        return Err(Error::TruncationExhausted { order: index.degree(), available: budget });
    }
    Ok(())
}

impl JetAlgebra for SeriesAlgebra<'_> {
    type Value = MSeries;

    fn constant(&self, c: &Coeff) -> MSeries {
        MSeries::constant(self.nvars, self.trunc_deg, c.clone())
    }

    fn space_var(&self, i: usize) -> Result<MSeries> {
        MSeries::var(self.nvars, self.trunc_deg, i)
    }

    fn jet(&self, component: usize, index: &MIndex) -> Result<MSeries> {
        let u = self
            .u
            .ok_or_else(|| Error::InvalidProblem("jet coordinate in a jet-free expression".into()))?;
        check_jet(component, index, u.len(), u.nvars(), u.trunc_deg())?;
        u.component(component).derive_multi(index)
    }

    fn add(&self, a: &MSeries, b: &MSeries) -> Result<MSeries> {
        a.add(b)
    }

    fn mul(&self, a: &MSeries, b: &MSeries) -> Result<MSeries> {
        a.mul(b)
    }

    fn neg(&self, a: &MSeries) -> MSeries {
        a.neg()
    }

    fn inv(&self, a: &MSeries) -> Result<MSeries> {
        a.invert()
    }
}

/// `f(z, u, ∂u, ...)` evaluated at the vector series `u`.
pub fn eval_field(e: &JetExpr, u: &VSeries) -> Result<MSeries> {
    evaluate(e, &SeriesAlgebra::at(u))
}

/// A jet-free expression expanded to degree `trunc_deg`.
pub fn eval_initial(e: &JetExpr, nvars: usize, trunc_deg: u32) -> Result<MSeries> {
    evaluate(e, &SeriesAlgebra::jet_free(nvars, trunc_deg))
}
