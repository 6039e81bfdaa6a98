use num_bigint::BigUint;

use super::flow_linear_exp;
use crate::dsl::{JetExpr, Names, ProblemSpec};
use crate::error::{Error, Result};
use crate::series::{factorial, Coeff, MIndex, MSeries};

/// `u_j = j((s+1)j - 1)! / ((s+1)^{j-1} (j!)^2)`, the coefficient of
/// `t^j (1-z)^{-(js+j+1)}` in the flow of `(1/(1-z)) d^s/dz^s` at `1/(1-z)`.
pub fn closed_form_coeff(s: u32, j: u32) -> Result<Coeff> {
    if s == 0 || j == 0 {
        return Err(Error::InvalidArgument(format!("closed form needs s >= 1 and j >= 1, got s={s}, j={j}")));
    }
    let (s, j) = (s as u64, j as u64);
    let num = BigUint::from(j) * factorial((s + 1) * j - 1);
    let jf = factorial(j);
    let den = BigUint::from(s + 1).pow((j - 1) as u32) * &jf * &jf;
    Ok(Coeff::new(num.into(), den.into()))
}

/// `u_j t^j`-coefficient as a series: `u_j (1-z)^{-(js+j+1)}` truncated at
/// degree `trunc_deg`.
pub fn closed_form_term(s: u32, j: u32, trunc_deg: u32) -> Result<MSeries> {
    let exponent = j * s + j + 1;
    Ok(MSeries::geometric(trunc_deg).pow(exponent)?.scale(&closed_form_coeff(s, j)?))
}

/// The problem `∂_t u = z^α ∂^j u` with `u_0 = z^N Π_{i: j_i>0} 1/(1-z_i)`.
///
/// The truncation is `K(|j| + |α|) + |N|` so that every `v_k` stays valid up
/// to degree at least `K|α| + |N|`.
pub fn model_problem(alpha: &MIndex, j: &MIndex, n: &MIndex, order_t: usize) -> Result<ProblemSpec> {
    let nvars = j.len();
    if nvars == 0 || alpha.len() != nvars || n.len() != nvars {
        return Err(Error::ShapeMismatch("alpha, j and N must have the same positive length".into()));
    }
    if j.degree() == 0 {
        return Err(Error::InvalidArgument("model operator needs |j| >= 1".into()));
    }
    let names = if nvars == 1 {
        Names::new(["z".to_string()], ["u".to_string()])
    } else {
        Names::new((1..=nvars).map(|i| format!("z{i}")), ["u".to_string()])
    };
    let monomial = |e: &MIndex| -> Vec<JetExpr> {
        e.exponents()
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0)
            .map(|(i, &p)| JetExpr::Pow(Box::new(JetExpr::SpaceVar(i)), p))
            .collect()
    };
    let mut field = monomial(alpha);
    field.push(JetExpr::Jet { component: 0, index: j.clone() });
    let mut initial = monomial(n);
    for (i, &ji) in j.exponents().iter().enumerate() {
        if ji > 0 {
            let one_minus = JetExpr::Add(vec![JetExpr::int(1), JetExpr::Neg(Box::new(JetExpr::SpaceVar(i)))]);
            initial.push(JetExpr::Inv(Box::new(one_minus)));
        }
    }
    let trunc_deg = order_t as u32 * (j.degree() + alpha.degree()) + n.degree();
    ProblemSpec::new(
        names,
        vec![JetExpr::Mul(field).normalize()],
        vec![JetExpr::Mul(initial).normalize()],
        order_t,
        trunc_deg,
    )
}

/// Flow coefficients `L^k u_0 / k!`, `k = 0..=K`, of the model problem.
pub fn model_growth_coeffs(alpha: &MIndex, j: &MIndex, n: &MIndex, order_t: usize) -> Result<Vec<MSeries>> {
    let p = model_problem(alpha, j, n, order_t)?;
    let fr = flow_linear_exp(&p)?;
    Ok(fr.series.coeffs().iter().map(|v| v.component(0).clone()).collect())
}
