//! Borel-Laplace numerics for the heat equation `∂_t u = ∂_z^2 u`,
//! `u_0 = 1/(1-z)`.
//!
//! At `z = 0` the formal solution is `Σ (2k)!/k! t^k`, of Gevrey class 2. Its
//! Borel transform `Σ (2k)!/(k!)^2 ξ^k = (1-4ξ)^{-1/2}` has a single branch
//! point at `ξ = 1/4`, and the Laplace integrals
//!
//! ```text
//! f_Γ(w) = ∫_Γ e^{-ξw} (1-4ξ)^{-1/2} dξ
//! ```
//!
//! along paths `Γ` from `0` to infinity in `Re ξ > 0` give actual functions
//! with the formal series as asymptotic expansion in `1/w`. Paths that pass
//! on different sides of `ξ = 1/4` differ by a flat function.
//!
//! Branch convention: `(1-4ξ)^{1/2}` is the principal root, cut along
//! `[1/4, ∞)`. [`flat_difference`] integrates `-i (4ξ-1)^{-1/2}` along the
//! cut, which is the boundary value of `(1-4ξ)^{-1/2}` from below the cut.

use std::f64::consts::{FRAC_PI_4, PI};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::par::{self, Exec};
use crate::quad::{integrate, integrate_pieces, QuadResult, Tolerance};
use crate::series::{factorial, Coeff};

pub type ComplexVal = Complex64;

/// Label written into reports for the convention used by [`flat_difference`].
pub const BRANCH: &str = "lower";

/// Integration paths from `0` to infinity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PathSpec {
    /// The ray `r e^{iθ}`, `θ ∈ (-π/2, π/2) \ {0}`.
    Ray { angle: f64 },
    /// Along the cut `[1/4, ∞)`: the flat difference.
    RealCut,
    /// `0 → 1/8`, `k` turns around `1/4` on the circle of radius `1/8`, then
    /// the ray from `1/8` at `base_angle`.
    Winding { k: i64, base_angle: f64 },
}

impl PathSpec {
    /// `L_+`, the ray with `Re ξ = Im ξ`.
    pub fn upper() -> Self {
        PathSpec::Ray { angle: FRAC_PI_4 }
    }

    /// `L_-`, the ray with `Re ξ = -Im ξ`.
    pub fn lower() -> Self {
        PathSpec::Ray { angle: -FRAC_PI_4 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadParams {
    pub rel_tol: f64,
    pub max_subdiv: usize,
    /// Ray length; by default chosen so that `e^{-T Re(w e^{iθ})} = 1e-3 rel_tol`.
    pub cutoff: Option<f64>,
}

impl Default for QuadParams {
    fn default() -> Self {
        QuadParams { rel_tol: 1e-10, max_subdiv: 1 << 16, cutoff: None }
    }
}

impl QuadParams {
    pub fn with_rel_tol(rel_tol: f64) -> Self {
        QuadParams { rel_tol, ..QuadParams::default() }
    }

    fn check(&self) -> Result<()> {
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidArgument(format!("rel_tol must be positive, got {}", self.rel_tol)));
        }
        if let Some(t) = self.cutoff {
            if !(t > 0.0) {
                return Err(Error::InvalidArgument(format!("cutoff must be positive, got {t}")));
            }
        }
        Ok(())
    }

    fn tolerance(&self) -> Tolerance {
        Tolerance { rel: self.rel_tol, abs: 0.0, max_subdiv: self.max_subdiv }
    }

    fn length(&self, decay: f64) -> f64 {
        self.cutoff.unwrap_or_else(|| (1e3 / self.rel_tol).ln() / decay)
    }
}

/// A Laplace value with its error estimate (quadrature plus tail bound).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: ComplexVal,
    pub error: f64,
    pub subdivisions: usize,
}

impl Integral {
    fn from_quad(q: QuadResult, scale: Complex64, tail: f64) -> Result<Self> {
        let value = q.value * scale;
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::NonFinite("Laplace integral".into()));
        }
        Ok(Integral { value, error: q.error * scale.norm() + tail, subdivisions: q.subdivisions })
    }

    /// `[re, im]`.
    pub fn pair(&self) -> [f64; 2] {
        [self.value.re, self.value.im]
    }
}

/// `(2k)!/(k!)^2` for `k = 0..=K`.
pub fn central_binomials(k_max: usize) -> Vec<Coeff> {
    (0..=k_max as u64)
        .map(|k| {
            let f = factorial(k);
            Coeff::new(factorial(2 * k).into(), (&f * &f).into())
        })
        .collect()
}

/// Coefficients `(-4)^k binom(-1/2, k)` of `(1-4ξ)^{-1/2}`, `k = 0..=K`.
pub fn inv_sqrt_coeffs(k_max: usize) -> Vec<Coeff> {
    let half = Coeff::new((-1).into(), 2.into());
    let mut out = Vec::with_capacity(k_max + 1);
    let mut binom = Coeff::one();
    let mut pow = Coeff::one();
    for k in 0..=k_max {
        out.push(&binom * &pow);
        // binom(-1/2, k+1) = binom(-1/2, k) (-1/2 - k) / (k+1)
        let kk = Coeff::from_integer(BigInt::from(k));
        binom = binom * (&half - &kk) / (kk + Coeff::one());
        pow *= Coeff::from_integer((-4).into());
    }
    out
}

/// `(2k)!/(k!)^2` agrees with the coefficients of `(1-4ξ)^{-1/2}` for
/// `k <= K`.
pub fn borel_series_check(k_max: usize) -> bool {
    central_binomials(k_max) == inv_sqrt_coeffs(k_max)
}

/// `e^{-ξw} (1-4ξ)^{-1/2}` with the principal root.
fn borel_integrand(xi: Complex64, w: Complex64) -> Complex64 {
    (-xi * w).exp() / (Complex64::one() - xi * 4.0).sqrt()
}

fn decay_rate(w: ComplexVal, angle: f64) -> f64 {
    (w * Complex64::from_polar(1.0, angle)).re
}

/// Integral over the ray `ξ_0 + r e^{iθ}`, `r ∈ [0, T]`, with `sheet = ±1`
/// multiplying the principal root. The tail uses `|1-4ξ| >= 4r - 4|ξ_0| - 1`.
fn ray_from(start: Complex64, angle: f64, sheet: f64, w: ComplexVal, q: &QuadParams) -> Result<Integral> {
    let c = decay_rate(w, angle);
    if !(c > 0.0) {
        return Err(Error::NonDecaying(format!("Re(w e^(i{angle})) = {c} <= 0")));
    }
    let dir = Complex64::from_polar(1.0, angle);
    let offset = 4.0 * start.norm() + 1.0;
    let t = q.length(c).max(offset);
    let f = |r: f64| borel_integrand(start + dir * r, w) * sheet;
    // seed near the closest approach to 1/4 and in scale of the decay length
    let mut breaks = vec![0.0];
    let closest = ((Complex64::new(0.25, 0.0) - start) * dir.conj()).re;
    for p in [closest, 1.0 / c, 4.0 / c] {
        if p > breaks[breaks.len() - 1] + 1e-12 && p < t {
            breaks.push(p);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks.push(t);
    let r = integrate_pieces(f, &breaks, &q.tolerance())?;
    let tail = (-(start * w).re).exp() * (-t * c).exp() / (c * (4.0 * t - offset + 1.0).max(1.0).sqrt());
    Integral::from_quad(r, dir, tail)
}

/// `f_Γ(w)` along the ray of angle `θ` from the origin.
pub fn laplace_ray(w: ComplexVal, angle: f64, q: &QuadParams) -> Result<Integral> {
    q.check()?;
    if !(angle.abs() < PI / 2.0) {
        return Err(Error::InvalidPath(format!("ray angle {angle} must lie in (-π/2, π/2)")));
    }
    if angle == 0.0 {
        return Err(Error::InvalidPath("the ray at angle 0 runs along the cut through ξ = 1/4".into()));
    }
    ray_from(Complex64::zero(), angle, 1.0, w, q)
}

/// `a(w) = ∫_{1/4}^∞ e^{-ξw} (-i) (4ξ-1)^{-1/2} dξ`, computed as
/// `-i e^{-w/4} ∫_0^∞ e^{-σ^2 w} dσ` after `ξ = 1/4 + σ^2`.
pub fn flat_difference(w: ComplexVal, q: &QuadParams) -> Result<Integral> {
    q.check()?;
    if !(w.re > 0.0) {
        return Err(Error::NonDecaying(format!("flat difference needs Re w > 0, got {w}")));
    }
    let s_max = q.cutoff.unwrap_or_else(|| ((1e3 / q.rel_tol).ln() / w.re).sqrt());
    let bump = (1.0 / w.re).sqrt();
    let mut breaks = vec![0.0];
    if bump < s_max {
        breaks.push(bump);
    }
    breaks.push(s_max);
    let r = integrate_pieces(|s: f64| (-w * s * s).exp(), &breaks, &q.tolerance())?;
    let tail = (-s_max * s_max * w.re).exp() / (2.0 * s_max * w.re);
    let scale = Complex64::new(0.0, -1.0) * (-w / 4.0).exp();
    Integral::from_quad(r, scale, tail * scale.norm())
}

/// `-(i/2) sqrt(π/w) e^{-w/4}`, the value of [`flat_difference`].
pub fn flat_difference_closed_form(w: ComplexVal) -> ComplexVal {
    Complex64::new(0.0, -0.5) * (Complex64::new(PI, 0.0) / w).sqrt() * (-w / 4.0).exp()
}

/// Direct integral along the [`PathSpec::Winding`] path with `turns` turns
/// (counterclockwise for positive `turns`) around `ξ = 1/4`.
///
/// On the circle `ξ = 1/4 + e^{iφ}/8`, `φ` running from `π` to
/// `π + 2π turns`, the root is continued as `(1-4ξ)^{1/2} = e^{i(φ-π)/2}/√2`,
/// so the outgoing ray carries the sign `(-1)^turns`.
pub fn winding_integral(w: ComplexVal, turns: i64, base_angle: f64, q: &QuadParams) -> Result<Integral> {
    q.check()?;
    if !(base_angle > 0.0 && base_angle < PI / 2.0) {
        return Err(Error::InvalidPath(format!("winding base angle {base_angle} must lie in (0, π/2)")));
    }
    let tol = q.tolerance();
    let start = Complex64::new(0.125, 0.0);
    let seg = integrate(|x: f64| borel_integrand(Complex64::new(x, 0.0), w), 0.0, 0.125, &tol)?;
    let sheet = if turns % 2 == 0 { 1.0 } else { -1.0 };
    let ray = ray_from(start, base_angle, sheet, w, q)?;
    // an even number of turns closes up on the Riemann surface and the arc
    // integral is near zero, so it gets an absolute floor
    let arc_tol = Tolerance { abs: q.rel_tol * (seg.value.norm() + ray.value.norm()), ..tol };
    let phi_end = PI + 2.0 * PI * turns as f64;
    let circle = |phi: f64| {
        let e = Complex64::from_polar(1.0, phi);
        let xi = Complex64::new(0.25, 0.0) + e * 0.125;
        let root = Complex64::from_polar(std::f64::consts::FRAC_1_SQRT_2, 0.5 * (phi - PI));
        (-xi * w).exp() / root * e * Complex64::new(0.0, 0.125)
    };
    let arc = if turns == 0 {
        QuadResult { value: Complex64::zero(), error: 0.0, subdivisions: 0, evaluations: 0 }
    } else {
        // one seed interval per quarter turn
        let n = 4 * turns.unsigned_abs() as usize;
        let (lo, hi) = if turns > 0 { (PI, phi_end) } else { (phi_end, PI) };
        let breaks: Vec<f64> = (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect();
        let r = integrate_pieces(circle, &breaks, &arc_tol)?;
        if turns > 0 {
            r
        } else {
            QuadResult { value: -r.value, ..r }
        }
    };
    let value = seg.value + arc.value + ray.value;
    if !value.re.is_finite() || !value.im.is_finite() {
        return Err(Error::NonFinite("winding integral".into()));
    }
    Ok(Integral {
        value,
        error: seg.error + arc.error + ray.error,
        subdivisions: seg.subdivisions + arc.subdivisions + ray.subdivisions,
    })
}

/// Result of [`winding_value`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WindingValue {
    pub k: i64,
    /// `f_+ + k a`.
    pub value: ComplexVal,
    pub error: f64,
    /// Direct quadrature over a path winding `k` times, for `|k| = 1`.
    pub direct: Option<Integral>,
    /// `|direct - value| / |value|`.
    pub discrepancy: Option<f64>,
    /// Whether the discrepancy is within `10 rel_tol`.
    pub agrees: Option<bool>,
}

/// `f_+(w) + k a(w)`, cross-checked by direct quadrature for `|k| = 1`.
pub fn winding_value(w: ComplexVal, k: i64, q: &QuadParams) -> Result<WindingValue> {
    let fp = laplace_ray(w, FRAC_PI_4, q)?;
    let (value, error) = if k == 0 {
        (fp.value, fp.error)
    } else {
        let a = flat_difference(w, q)?;
        (fp.value + a.value * k as f64, fp.error + a.error * k.unsigned_abs() as f64)
    };
    let direct = if k.abs() == 1 { Some(winding_integral(w, k, FRAC_PI_4, q)?) } else { None };
    let discrepancy = direct.map(|d| (d.value - value).norm() / value.norm());
    Ok(WindingValue {
        k,
        value,
        error,
        direct,
        discrepancy,
        agrees: discrepancy.map(|d| d <= 10.0 * q.rel_tol),
    })
}

/// `f_+(w) - f_-(w)`, the jump across the Stokes line `arg ξ = 0`.
pub fn stokes_jump(w: ComplexVal, q: &QuadParams) -> Result<Integral> {
    let p = laplace_ray(w, FRAC_PI_4, q)?;
    let m = laplace_ray(w, -FRAC_PI_4, q)?;
    Ok(Integral { value: p.value - m.value, error: p.error + m.error, subdivisions: p.subdivisions + m.subdivisions })
}

/// Partial sum `Σ_{k<N} (2k)!/k! w^{-k-1}` of the asymptotic expansion.
pub fn asymptotic_partial_sum(w: ComplexVal, n_terms: usize) -> ComplexVal {
    let inv = w.inv();
    let mut term = inv;
    let mut terms = Vec::with_capacity(n_terms);
    for k in 0..n_terms {
        terms.push(term);
        // (2k+2)!/(k+1)! = (2k)!/k! · 2(2k+1)
        term *= inv * (2.0 * (2 * k + 1) as f64);
    }
    crate::quad::complex_sum(terms)
}

/// Any [`PathSpec`]: rays and the cut directly, windings as `f_+ + k a`.
pub fn laplace(w: ComplexVal, path: &PathSpec, q: &QuadParams) -> Result<Integral> {
    match *path {
        PathSpec::Ray { angle } => laplace_ray(w, angle, q),
        PathSpec::RealCut => flat_difference(w, q),
        PathSpec::Winding { k, base_angle } => winding_integral(w, k, base_angle, q),
    }
}

/// `f_Γ` at many points along one ray.
pub fn laplace_batch(ws: &[ComplexVal], angle: f64, q: &QuadParams, exec: Exec) -> Vec<Result<Integral>> {
    par::map(exec, ws, |&w| laplace_ray(w, angle, q))
}
