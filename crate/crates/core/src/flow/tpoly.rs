use crate::dsl::{check_jet, JetAlgebra};
use crate::error::Result;
use crate::series::{Coeff, MIndex, MSeries, VSeries};

/// Truncated polynomial in `t` with series coefficients, `Σ_{i<=k} c_i t^i`.
///
/// Each coefficient keeps its own z-truncation; products combine them with
/// the usual min rule, so the `t^i` coefficient's truncation records exactly
/// how much z-precision survived.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct TPoly {
    pub(crate) coeffs: Vec<MSeries>,
}

/// Evaluates jet expressions on the partial flow `Σ_{i<=k} v_i t^i`.
pub(crate) struct TPolyAlgebra<'a> {
    partial: &'a [VSeries],
    nvars: usize,
    trunc_deg: u32,
}

impl<'a> TPolyAlgebra<'a> {
    /// `partial[i]` is `v_i`; the t-order is `partial.len() - 1`.
    pub(crate) fn new(partial: &'a [VSeries], trunc_deg: u32) -> Self {
        TPolyAlgebra { partial, nvars: partial[0].nvars(), trunc_deg }
    }

    fn order(&self) -> usize {
        self.partial.len() - 1
    }

    fn lift(&self, c0: MSeries) -> TPoly {
        let mut coeffs = Vec::with_capacity(self.order() + 1);
        coeffs.push(c0);
        coeffs.extend((0..self.order()).map(|_| MSeries::zero(self.nvars, self.trunc_deg)));
        TPoly { coeffs }
    }
}

impl JetAlgebra for TPolyAlgebra<'_> {
    type Value = TPoly;

    fn constant(&self, c: &Coeff) -> TPoly {
        self.lift(MSeries::constant(self.nvars, self.trunc_deg, c.clone()))
    }

    fn space_var(&self, i: usize) -> Result<TPoly> {
        Ok(self.lift(MSeries::var(self.nvars, self.trunc_deg, i)?))
    }

    fn jet(&self, component: usize, index: &MIndex) -> Result<TPoly> {
        let coeffs = self
            .partial
            .iter()
            .map(|v| {
                check_jet(component, index, v.len(), v.nvars(), v.trunc_deg())?;
                v.component(component).derive_multi(index)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TPoly { coeffs })
    }

    fn add(&self, a: &TPoly, b: &TPoly) -> Result<TPoly> {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x.add(y)).collect::<Result<_>>()?;
        Ok(TPoly { coeffs })
    }

    fn mul(&self, a: &TPoly, b: &TPoly) -> Result<TPoly> {
        let k = self.order();
        let mut coeffs = Vec::with_capacity(k + 1);
        for n in 0..=k {
            let mut acc = a.coeffs[0].mul(&b.coeffs[n])?;
            for i in 1..=n {
                if a.coeffs[i].is_zero() || b.coeffs[n - i].is_zero() {
                    // still contributes its truncation to the min rule
                    let d = a.coeffs[i].trunc_deg().min(b.coeffs[n - i].trunc_deg());
                    if d < acc.trunc_deg() {
                        acc = acc.truncate(d);
                    }
                    continue;
                }
                acc = acc.add(&a.coeffs[i].mul(&b.coeffs[n - i])?)?;
            }
            coeffs.push(acc);
        }
        Ok(TPoly { coeffs })
    }

    fn neg(&self, a: &TPoly) -> TPoly {
        TPoly { coeffs: a.coeffs.iter().map(MSeries::neg).collect() }
    }

    /// `b_0 = 1/a_0`, `b_n = -b_0 Σ_{i=1..n} a_i b_{n-i}`.
    fn inv(&self, a: &TPoly) -> Result<TPoly> {
        let b0 = a.coeffs[0].invert()?;
        let mut coeffs = vec![b0.clone()];
        for n in 1..a.coeffs.len() {
            let mut acc = a.coeffs[1].mul(&coeffs[n - 1])?;
            for i in 2..=n {
                acc = acc.add(&a.coeffs[i].mul(&coeffs[n - i])?)?;
            }
            coeffs.push(b0.mul(&acc)?.neg());
        }
        Ok(TPoly { coeffs })
    }
}
