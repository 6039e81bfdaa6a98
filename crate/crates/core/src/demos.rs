//! Built-in problems and end-to-end demonstrations.
//!
//! The problem files under `problems/` are compiled into the crate, so the
//! demos and tests need no data on disk.

use serde::Serialize;
use serde_json::{json, Value};

use crate::borel::{
    borel_series_check, central_binomials, flat_difference, flat_difference_closed_form, laplace_ray, stokes_jump,
    QuadParams, BRANCH,
};
use crate::dsl::ProblemSpec;
use crate::error::{Error, Result};
use crate::flow::{closed_form_coeff, closed_form_term, flow_linear_exp, flow_recurrence, FlowResult};
use crate::gevrey::{borel_transform, estimate_order, flow_norm_sequence, min_r_for_s, NormMode};
use crate::series::{coeff_to_string, factorial, Coeff, MIndex, MSeries};
use num_complex::Complex64;

/// `(name, problem JSON)` for every shipped problem.
pub const PROBLEMS: &[(&str, &str)] = &[
    ("taylor-shift", include_str!("../problems/taylor-shift.json")),
    ("exp", include_str!("../problems/exp.json")),
    ("burgers", include_str!("../problems/burgers.json")),
    ("closed-form-s1", include_str!("../problems/closed-form-s1.json")),
    ("closed-form-s2", include_str!("../problems/closed-form-s2.json")),
    ("closed-form-s3", include_str!("../problems/closed-form-s3.json")),
    ("heat", include_str!("../problems/heat.json")),
    ("kdv", include_str!("../problems/kdv.json")),
    ("model-growth", include_str!("../problems/model-growth.json")),
    ("linear-system", include_str!("../problems/linear-system.json")),
];

/// Shipped problems whose fields are linear in the jets.
pub const LINEAR_PROBLEMS: &[&str] = &[
    "taylor-shift",
    "exp",
    "closed-form-s1",
    "closed-form-s2",
    "closed-form-s3",
    "heat",
    "model-growth",
    "linear-system",
];

/// Names accepted by [`run_demo`].
pub const DEMOS: &[&str] = &["taylor-shift", "exp", "burgers", "closed-form", "kovalevskaia", "kdv", "model-growth"];

pub fn problem_json(name: &str) -> Result<&'static str> {
    PROBLEMS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, j)| *j)
        .ok_or_else(|| Error::InvalidArgument(format!("no built-in problem `{name}`")))
}

pub fn problem(name: &str) -> Result<ProblemSpec> {
    ProblemSpec::from_json(problem_json(name)?).map_err(|e| e.located(format!("built-in problem {name}")))
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DemoReport {
    pub name: String,
    pub summary: String,
    pub checks: Vec<Check>,
    pub data: Value,
}

impl DemoReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

struct Builder {
    name: &'static str,
    summary: &'static str,
    checks: Vec<Check>,
}

impl Builder {
    fn new(name: &'static str, summary: &'static str) -> Self {
        Builder { name, summary, checks: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, pass: bool) -> &mut Self {
        self.checks.push(Check { name: name.into(), pass });
        self
    }

    fn finish(self, data: Value) -> DemoReport {
        DemoReport { name: self.name.into(), summary: self.summary.into(), checks: self.checks, data }
    }
}

fn int(n: i64) -> Coeff {
    Coeff::from_integer(n.into())
}

fn strings(cs: &[Coeff]) -> Vec<String> {
    cs.iter().map(coeff_to_string).collect()
}

fn binomial(n: u64, k: u64) -> Coeff {
    Coeff::new(factorial(n).into(), (factorial(k) * factorial(n - k)).into())
}

/// `(z+t)^d` coefficient check for the flow of `∂_z` at `z^d`.
pub fn is_taylor_shift(fr: &FlowResult, d: u32) -> Result<bool> {
    for (k, v) in fr.series.coeffs().iter().enumerate() {
        let expect = if k as u32 <= d {
            MSeries::monomial(1, v.trunc_deg(), MIndex::new(vec![d - k as u32]), binomial(d as u64, k as u64))
        } else {
            MSeries::zero(1, v.trunc_deg())
        };
        if v.component(0) != &expect {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `(1/2)(2 u_0 u_0'^2 + u_0^2 u_0'')` at `u_0 = 1/(1-z)`, truncated at `D - 2`.
pub fn burgers_second_term(trunc_deg: u32) -> Result<MSeries> {
    let u0 = MSeries::geometric(trunc_deg);
    let u1 = u0.derive(0)?;
    let u2 = u1.derive(0)?;
    let a = u0.mul(&u1.mul(&u1)?)?.scale(&int(2));
    let b = u0.mul(&u0)?.mul(&u2)?;
    Ok(a.add(&b)?.scale(&Coeff::new(1.into(), 2.into())))
}

/// Whether `v_j = u_j (1-z)^{-(js+j+1)}` at the valid degree of each `v_j`.
pub fn matches_closed_form(fr: &FlowResult, s: u32) -> Result<bool> {
    for (j, v) in fr.series.coeffs().iter().enumerate().skip(1) {
        if v.component(0) != &closed_form_term(s, j as u32, v.trunc_deg())? {
            return Ok(false);
        }
    }
    Ok(fr.series.coeff(0).component(0) == &MSeries::geometric(fr.series.trunc_deg()))
}

/// `(2k)!/k!` for `k = 0..=K`.
pub fn kovalevskaia_sequence(k_max: usize) -> Vec<Coeff> {
    (0..=k_max as u64).map(|k| Coeff::from_integer((factorial(2 * k) / factorial(k)).into())).collect()
}

fn taylor_shift() -> Result<DemoReport> {
    let p = problem("taylor-shift")?;
    let rec = flow_recurrence(&p)?;
    let exp = flow_linear_exp(&p)?;
    let mut b = Builder::new("taylor-shift", "∂_t u = ∂_z u at u_0 = z^3 is u_0(z+t)");
    b.check("recurrence equals (z+t)^3", is_taylor_shift(&rec, 3)?);
    b.check("exponential form agrees", exp.series == rec.series);
    let coeffs: Vec<String> = rec.series.coeffs().iter().map(|v| v.component(0).to_string()).collect();
    Ok(b.finish(json!({ "coefficients": coeffs, "valid_deg": rec.valid_degrees() })))
}

fn exponential() -> Result<DemoReport> {
    let fr = flow_linear_exp(&problem("exp")?)?;
    let got: Vec<Coeff> = fr.series.coeffs().iter().map(|v| v.component(0).constant_term()).collect();
    let expect: Vec<Coeff> = (0..got.len() as u64).map(|k| Coeff::new(1.into(), factorial(k).into())).collect();
    let mut b = Builder::new("exp", "ẋ = x at x_0 = 1 is e^t");
    b.check("coefficients are 1/k!", got == expect);
    Ok(b.finish(json!({ "coefficients": strings(&got) })))
}

fn burgers() -> Result<DemoReport> {
    let p = problem("burgers")?;
    let fr = flow_recurrence(&p)?;
    let oracle = burgers_second_term(p.trunc_deg())?;
    let mut b = Builder::new("burgers", "second-order term of ∂_t u = u ∂_z u at 1/(1-z)");
    b.check("v_2 = (2 u0 u0'^2 + u0^2 u0'')/2", fr.series.coeff(2).component(0) == &oracle);
    b.check("valid degrees D - k", fr.valid_degrees() == vec![10, 9, 8]);
    Ok(b.finish(json!({ "v2": fr.series.coeff(2).component(0).to_string(), "valid_deg": fr.valid_degrees() })))
}

fn closed_form() -> Result<DemoReport> {
    let mut b = Builder::new("closed-form", "flow of (1/(1-z)) ∂_z^s at 1/(1-z), s = 1, 2, 3");
    let mut data = serde_json::Map::new();
    for s in 1..=3u32 {
        let fr = flow_linear_exp(&problem(&format!("closed-form-s{s}"))?)?;
        b.check(format!("s={s}: v_j = u_j (1-z)^-(js+j+1)"), matches_closed_form(&fr, s)?);
        let u: Vec<Coeff> = (1..=8).map(|j| closed_form_coeff(s, j)).collect::<Result<_>>()?;
        data.insert(format!("s{s}"), json!(strings(&u)));
    }
    Ok(b.finish(Value::Object(data)))
}

fn kovalevskaia() -> Result<DemoReport> {
    let fr = flow_recurrence(&problem("heat")?)?;
    let seq = flow_norm_sequence(&fr, NormMode::AbsAtOrigin)?;
    let k_max = seq.order();
    let borel = borel_transform(&seq, 2)?;
    let two = min_r_for_s(&seq, 2, (6, 12))?;
    let one = min_r_for_s(&seq, 1, (6, 12))?;
    let q = QuadParams::default();
    let w = Complex64::new(10.0, 0.0);
    let a = flat_difference(w, &q)?;
    let closed = flat_difference_closed_form(w);
    let fp = laplace_ray(w, std::f64::consts::FRAC_PI_4, &q)?;
    let jump = stokes_jump(w, &q)?;

    let mut b = Builder::new("kovalevskaia", "heat equation at 1/(1-z): divergent series, Borel sum and Laplace integrals");
    b.check("a_k = (2k)!/k!", seq.values == kovalevskaia_sequence(k_max));
    b.check("2-Borel transform = (2k)!/(k!)^2", borel.values == central_binomials(k_max));
    b.check("(2k)!/(k!)^2 are the coefficients of (1-4ξ)^{-1/2}", borel_series_check(k_max));
    b.check("min R for s=2 on [6,12] in [3, 4.5]", (3.0..=4.5).contains(&two.bound_f64()) && !two.divergent);
    b.check("s=1 flagged divergent", one.divergent);
    b.check("a(10) matches -(i/2)√(π/w)e^{-w/4}", (a.value - closed).norm() <= 1e-8 * closed.norm());
    b.check("f_+ - f_- = -2 a(10)", (jump.value + a.value * 2.0).norm() <= 1e-8 * a.value.norm());
    Ok(b.finish(json!({
        "sequence": seq.strings(),
        "borel": borel.strings(),
        "min_R": { "s2": two.bound_f64(), "s1_divergent": one.divergent },
        "w": [10.0, 0.0],
        "a": [a.value.re, a.value.im],
        "a_closed_form": [closed.re, closed.im],
        "f_plus": fp.pair(),
        "f_plus_minus_f_minus": jump.pair(),
        "branch": BRANCH,
    })))
}

fn kdv() -> Result<DemoReport> {
    let fr = flow_recurrence(&problem("kdv")?)?;
    let seq = flow_norm_sequence(&fr, NormMode::AbsAtOrigin)?;
    let window = (5, 12);
    let est = estimate_order(&seq, window)?;
    let three = min_r_for_s(&seq, 3, window)?;
    let two = min_r_for_s(&seq, 2, window)?;
    let mut b = Builder::new("kdv", "∂_t u = ∂_z^3 u + u ∂_z u at 1/(1-z^2): Gevrey 3, not 2");
    b.check("s_hat in [2.5, 3.5]", (2.5..=3.5).contains(&est.s_hat));
    b.check("bounded R for s=3", !three.divergent);
    b.check("s=2 flagged divergent", two.divergent);
    Ok(b.finish(json!({
        "sequence": seq.strings(),
        "s_hat": est.s_hat,
        "R_hat": est.r_hat,
        "min_R_s3": three.bound_f64(),
        "s2_upper_slope": two.upper_slope,
    })))
}

fn model_growth() -> Result<DemoReport> {
    let fr = flow_linear_exp(&problem("model-growth")?)?;
    let seq = flow_norm_sequence(&fr, NormMode::AtOrigin)?;
    // L = ∂_{z1} ∂_{z2}^2: L^k u_0 (0) = k! (2k)!, so a_k = (2k)!
    let expect: Vec<Coeff> = (0..=seq.order() as u64).map(|k| Coeff::from_integer(factorial(2 * k).into())).collect();
    let order = fr.jet_order();
    let at_s = min_r_for_s(&seq, order, (1, seq.order()))?;
    let below = min_r_for_s(&seq, order - 1, (1, seq.order()))?;
    let mut b = Builder::new("model-growth", "L = ∂_{z1}∂_{z2}^2 at 1/((1-z1)(1-z2)): growth (k j_1)!(k j_2)!");
    b.check("L^k u_0(0) = prod (k j_i)!", seq.values == expect);
    b.check("bounded R at s = |j|", !at_s.divergent);
    b.check("s = |j| - 1 flagged divergent", below.divergent);
    Ok(b.finish(json!({ "sequence": seq.strings(), "s": order })))
}

pub fn run_demo(name: &str) -> Result<DemoReport> {
    match name {
        "taylor-shift" => taylor_shift(),
        "exp" => exponential(),
        "burgers" => burgers(),
        "closed-form" => closed_form(),
        "kovalevskaia" | "heat" => kovalevskaia(),
        "kdv" => kdv(),
        "model-growth" => model_growth(),
        _ => Err(Error::InvalidArgument(format!("unknown demo `{name}`; available: {}", DEMOS.join(", ")))),
    }
}

pub fn run_all() -> Result<Vec<DemoReport>> {
    DEMOS.iter().map(|d| run_demo(d)).collect()
}
