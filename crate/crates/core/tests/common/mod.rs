#![allow(dead_code)]

use gevrey_core::dsl::{ProblemFile, ProblemSpec};
use gevrey_core::flow::{flow_recurrence, FlowResult};
use rand::seq::SliceRandom;
use rand::Rng;

/// A field `Y ≫ 0`, a field `X ≪ Y`, and initial data `u_0 ≪ v_0`, all with
/// nonnegative initial data.
#[derive(Clone, Debug)]
pub struct MajorantCase {
    pub x: ProblemSpec,
    pub y: ProblemSpec,
    pub y_at_v: ProblemSpec,
    pub text: String,
}

pub fn names(n: usize, m: usize) -> (Vec<String>, Vec<String>) {
    let z = if n == 1 { vec!["z".to_string()] } else { (1..=n).map(|i| format!("z{i}")).collect() };
    let u = ["u", "v"][..m].iter().map(|s| s.to_string()).collect();
    (z, u)
}

pub fn small_positive<R: Rng>(rng: &mut R) -> (i64, i64) {
    (rng.gen_range(1..=3), rng.gen_range(1..=3))
}

pub fn monomial<R: Rng>(rng: &mut R, z: &[String], max_deg: u32) -> Option<String> {
    let mut parts = Vec::new();
    for v in z {
        let e = rng.gen_range(0..=max_deg);
        match e {
            0 => {}
            1 => parts.push(v.clone()),
            _ => parts.push(format!("{v}^{e}")),
        }
    }
    (!parts.is_empty()).then(|| parts.join("*"))
}

fn jet<R: Rng>(rng: &mut R, n: usize, u: &[String], s: u32) -> String {
    let c = u.choose(rng).unwrap();
    let mut idx = vec![0u32; n];
    let order = rng.gen_range(0..=s);
    for _ in 0..order {
        idx[rng.gen_range(0..n)] += 1;
    }
    let list: Vec<String> = idx.iter().map(u32::to_string).collect();
    format!("D({c},[{}])", list.join(","))
}

/// Random case with `n, m <= 2`, order `s <= 2`, `K <= 4`.
pub fn majorant_case<R: Rng>(rng: &mut R) -> MajorantCase {
    majorant_case_up_to(rng, 4)
}

pub fn majorant_case_up_to<R: Rng>(rng: &mut R, max_k: usize) -> MajorantCase {
    let n = rng.gen_range(1..=2);
    let m = rng.gen_range(1..=2);
    let s = rng.gen_range(0..=2u32);
    let k = rng.gen_range(1..=max_k);
    let (z, u) = names(n, m);

    let mut fx = Vec::new();
    let mut fy = Vec::new();
    for _ in 0..m {
        let mut tx = Vec::new();
        let mut ty = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            let (p, q) = small_positive(rng);
            let mut common = Vec::new();
            if let Some(mono) = monomial(rng, &z, 1) {
                common.push(mono);
            }
            for _ in 0..rng.gen_range(0..=2) {
                common.push(jet(rng, n, &u, s));
            }
            let (mut px, mut py) = (common.clone(), common);
            if rng.gen_bool(0.3) {
                let v = z.choose(rng).unwrap();
                py.push(format!("inv(1-{v})"));
                px.push(if rng.gen_bool(0.5) { format!("inv(1+{v})") } else { format!("inv(1-{v})") });
            }
            // |c_X| <= c_Y
            let (a, b) = *[(1, 1), (1, 2), (0, 1), (-1, 2), (-1, 1)].choose(rng).unwrap();
            ty.push(std::iter::once(format!("{p}/{q}")).chain(py).collect::<Vec<_>>().join("*"));
            if a != 0 {
                tx.push(std::iter::once(format!("{}/{}", a * p, b * q)).chain(px).collect::<Vec<_>>().join("*"));
            }
        }
        fy.push(ty.join(" + "));
        fx.push(if tx.is_empty() { "0".to_string() } else { tx.join(" + ").replace("+ -", "- ") });
    }

    let mut u0 = Vec::new();
    let mut v0 = Vec::new();
    for _ in 0..m {
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(1..=2) {
            let (p, q) = small_positive(rng);
            terms.push(match monomial(rng, &z, 2) {
                Some(mono) => format!("{p}/{q}*{mono}"),
                None => format!("{p}/{q}"),
            });
        }
        let mut base = terms.join(" + ");
        if rng.gen_bool(0.5) {
            base = format!("({base})*inv(1-{})", z.choose(rng).unwrap());
        }
        let (p, q) = small_positive(rng);
        let extra = match monomial(rng, &z, 2) {
            Some(mono) => format!("{p}/{q}*{mono}"),
            None => format!("{p}/{q}"),
        };
        v0.push(format!("{base} + {extra}"));
        u0.push(base);
    }

    let trunc_deg = s * k as u32 + 3;
    let file = |field: &[String], initial: &[String]| ProblemFile {
        space_vars: z.clone(),
        components: u.clone(),
        field: field.to_vec(),
        initial: initial.to_vec(),
        order_t: k,
        trunc_deg,
    };
    let build = |f: &ProblemFile| ProblemSpec::from_file(f).unwrap_or_else(|e| panic!("{e}: {f:?}"));
    let text = format!("X = {fx:?}, Y = {fy:?}, u0 = {u0:?}, v0 = {v0:?}, K = {k}, D = {trunc_deg}");
    MajorantCase {
        x: build(&file(&fx, &u0)),
        y: build(&file(&fy, &u0)),
        y_at_v: build(&file(&fy, &v0)),
        text,
    }
}

/// Both clauses of the majorant principle for flows:
/// `X ≪ Y, u_0 ≫ 0 ⇒ flow(X, u_0) ≪ flow(Y, u_0)` and
/// `Y ≫ 0, u_0 ≪ v_0 ⇒ flow(Y, u_0) ≪ flow(Y, v_0)`.
pub fn check_majorant_case(c: &MajorantCase) -> Result<(bool, bool), String> {
    let flow = |p: &ProblemSpec| -> Result<FlowResult, String> { flow_recurrence(p).map_err(|e| format!("{e}: {}", c.text)) };
    let fx = flow(&c.x)?;
    let fy = flow(&c.y)?;
    let fv = flow(&c.y_at_v)?;
    let one = fx.series.majorized_by(&fy.series).map_err(|e| e.to_string())?;
    let two = fy.series.majorized_by(&fv.series).map_err(|e| e.to_string())?;
    Ok((one, two))
}
