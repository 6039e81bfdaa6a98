//! Growth diagnostics for the t-coefficients of a flow.
//!
//! A series `Σ a_k t^k` is of Gevrey class `s` when `Σ a_k t^k / (k!)^{s-1}`
//! converges, i.e. when `a_k <= C R^k (k!)^{s-1}`. From finitely many terms
//! this can only be probed, never decided: [`estimate_order`] fits the growth
//! model to the log-ratios of a window and [`min_r_for_s`] computes the
//! smallest admissible `R` over the window, with a heuristic divergence flag.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::FlowResult;
use crate::par::{self, Exec};
use crate::series::{coeff_to_string, factorial, Coeff, MIndex, MSeries, TSeries};

/// Dyadic resolution of the per-k bounds in [`min_r_for_s`]: `2^-20 < 1e-6`.
const R_BITS: u32 = 20;
/// Upper-half slope of `ln R_k` against `ln k` above which growth is flagged.
const DIVERGENCE_SLOPE: f64 = 0.5;

/// How a t-coefficient `v_k` is turned into a single nonnegative number.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum NormMode {
    /// `|ψ(v_k)(0)|`.
    AtOrigin,
    /// `ψ(abs v_k)(0)`.
    #[default]
    AbsAtOrigin,
    /// Largest `|coefficient|` of any component up to the given degree.
    MaxCoeff(u32),
}

impl fmt::Display for NormMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormMode::AtOrigin => f.write_str("at_origin"),
            NormMode::AbsAtOrigin => f.write_str("abs_at_origin"),
            NormMode::MaxCoeff(d) => write!(f, "max_coeff({d})"),
        }
    }
}

impl FromStr for NormMode {
    type Err = Error;

    /// Accepts `at_origin`, `abs_at_origin`, `max_coeff(d)` and `max_coeff:d`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "at_origin" => return Ok(NormMode::AtOrigin),
            "abs_at_origin" => return Ok(NormMode::AbsAtOrigin),
            _ => {}
        }
        let deg = s
            .strip_prefix("max_coeff(")
            .and_then(|r| r.strip_suffix(')'))
            .or_else(|| s.strip_prefix("max_coeff:"));
        match deg.map(|d| d.trim().parse::<u32>()) {
            Some(Ok(d)) => Ok(NormMode::MaxCoeff(d)),
            _ => Err(Error::InvalidArgument(format!(
                "unknown norm mode `{s}` (expected at_origin, abs_at_origin or max_coeff(d))"
            ))),
        }
    }
}

impl Serialize for NormMode {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NormMode {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Nonnegative sequence `a_0, ..., a_K` extracted from a flow.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormSeq {
    pub values: Vec<Coeff>,
    pub mode: NormMode,
}

impl NormSeq {
    /// Wraps raw values; fails on a negative entry.
    pub fn new(values: Vec<Coeff>, mode: NormMode) -> Result<Self> {
        if let Some(k) = values.iter().position(Signed::is_negative) {
            return Err(Error::InvalidArgument(format!("norm sequence entry {k} is negative")));
        }
        Ok(NormSeq { values, mode })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// The last index `K`.
    pub fn order(&self) -> usize {
        self.values.len().saturating_sub(1)
    }

    pub fn strings(&self) -> Vec<String> {
        self.values.iter().map(coeff_to_string).collect()
    }
}

/// `a_k` for every t-coefficient of `series`.
pub fn norm_sequence(series: &TSeries, mode: NormMode) -> Result<NormSeq> {
    let origin = MIndex::zero(series.nvars());
    let values = series
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, v)| match mode {
            NormMode::AtOrigin => Ok(v.component_sum().coeff_at(&origin)?.abs()),
            NormMode::AbsAtOrigin => v.abs().component_sum().coeff_at(&origin),
            NormMode::MaxCoeff(d) => {
                if d > v.trunc_deg() {
                    return Err(Error::DegreeBeyondValid { requested: d, valid: v.trunc_deg(), k });
                }
                Ok(v
                    .components()
                    .iter()
                    .flat_map(MSeries::terms)
                    .filter(|(idx, _)| idx.degree() <= d)
                    .map(|(_, c)| c.abs())
                    .max()
                    .unwrap_or_else(Coeff::zero))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    NormSeq::new(values, mode)
}

/// [`norm_sequence`] of a computed flow.
pub fn flow_norm_sequence(fr: &FlowResult, mode: NormMode) -> Result<NormSeq> {
    norm_sequence(&fr.series, mode)
}

/// Fitted growth `a_k ≈ c · R^k · (k!)^{s-1}` over a window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GevreyEstimate {
    pub s_hat: f64,
    #[serde(rename = "R_hat")]
    pub r_hat: f64,
    pub c_hat: f64,
    pub window: (usize, usize),
    /// RMS of the log-ratio residuals.
    pub residual: f64,
}

/// Natural logarithm of a positive big integer, good to double precision.
fn ln_biguint(n: &BigUint) -> f64 {
    let bits = n.bits();
    let shift = bits.saturating_sub(64);
    let top = (n >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ln q` for a positive rational, evaluated without forming `q` as a float.
pub fn ln_rational(q: &Coeff) -> Result<f64> {
    if !q.is_positive() {
        return Err(Error::InvalidArgument(format!("logarithm of nonpositive {}", coeff_to_string(q))));
    }
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    Ok(ln_biguint(num) - ln_biguint(den))
}

fn check_window(seq: &NormSeq, window: (usize, usize)) -> Result<()> {
    let (lo, hi) = window;
    if lo < 1 || lo > hi || hi > seq.order() {
        return Err(Error::InvalidArgument(format!(
            "window {lo}:{hi} must satisfy 1 <= k_min <= k_max <= {}",
            seq.order()
        )));
    }
    Ok(())
}

/// Least-squares fit of `ln(a_{k'}/a_k) = (s-1) ln(k'!/k!) + (k'-k) ln R`
/// over consecutive positive entries `k < k'` of the window.
///
/// With no zeros in the window every gap is 1 and this is the usual fit of
/// `ln(a_{k+1}/a_k)` against `ln(k+1)`. Isolated zeros (parity) are skipped;
/// two adjacent zeros, or fewer than three positive entries, mean the
/// sequence is flat or terminating and no fit is attempted.
pub fn estimate_order(seq: &NormSeq, window: (usize, usize)) -> Result<GevreyEstimate> {
    check_window(seq, window)?;
    let (lo, hi) = window;
    let slice = &seq.values[lo..=hi];
    if let Some(i) = slice.windows(2).position(|w| w[0].is_zero() && w[1].is_zero()) {
        return Err(Error::CannotFit(format!("zero values at k = {} and {}", lo + i, lo + i + 1)));
    }
    let positive: Vec<usize> = (lo..=hi).filter(|&k| seq.values[k].is_positive()).collect();
    if positive.len() < 3 {
        return Err(Error::CannotFit(format!("only {} positive values in window {lo}:{hi}", positive.len())));
    }

    // rows (x1, x2, y) of the model y = α x1 + β x2
    let mut rows = Vec::with_capacity(positive.len() - 1);
    for p in positive.windows(2) {
        let (k, k2) = (p[0], p[1]);
        let ratio = &seq.values[k2] / &seq.values[k];
        let x1: f64 = (k + 1..=k2).map(|i| (i as f64).ln()).sum();
        rows.push((x1, (k2 - k) as f64, ln_rational(&ratio)?));
    }
    let (mut s11, mut s12, mut s22, mut s1y, mut s2y) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for &(x1, x2, y) in &rows {
        s11 += x1 * x1;
        s12 += x1 * x2;
        s22 += x2 * x2;
        s1y += x1 * y;
        s2y += x2 * y;
    }
    let det = s11 * s22 - s12 * s12;
    if det.abs() <= 1e-12 * s11 * s22 {
        return Err(Error::CannotFit("degenerate window for the growth model".into()));
    }
    let alpha = (s1y * s22 - s2y * s12) / det;
    let beta = (s11 * s2y - s12 * s1y) / det;
    let residual =
        (rows.iter().map(|&(x1, x2, y)| (y - alpha * x1 - beta * x2).powi(2)).sum::<f64>() / rows.len() as f64).sqrt();

    let mut ln_c = 0.0;
    for &k in &positive {
        let ln_fact: f64 = (2..=k).map(|i| (i as f64).ln()).sum();
        ln_c += ln_rational(&seq.values[k])? - alpha * ln_fact - k as f64 * beta;
    }
    ln_c /= positive.len() as f64;

    let est = GevreyEstimate { s_hat: 1.0 + alpha, r_hat: beta.exp(), c_hat: ln_c.exp(), window, residual };
    if [est.s_hat, est.r_hat, est.c_hat, est.residual].iter().all(|x| x.is_finite()) {
        Ok(est)
    } else {
        Err(Error::NonFinite("growth fit".into()))
    }
}

/// Smallest admissible `R` for a given `s` over a window.
#[derive(Clone, Debug, PartialEq)]
pub struct MinR {
    pub s: u32,
    pub window: (usize, usize),
    /// `max_k R_k`, exact.
    pub bound: Coeff,
    /// `R_k`: least multiple of `2^-20` with `a_k <= (k!)^{s-1} R_k^k`.
    pub per_k: Vec<(usize, Coeff)>,
    /// Least-squares slope of `ln R_k` against `ln k` on the upper half of the window.
    pub upper_slope: f64,
    /// Heuristic: `R_k` strictly increasing over the positive entries and
    /// still growing like a power of `k` on the upper half of the window.
    pub divergent: bool,
}

impl MinR {
    pub fn bound_f64(&self) -> f64 {
        self.bound.to_f64().unwrap_or(f64::INFINITY)
    }
}

/// `(k!)^{s-1}` for `s >= 1`.
fn fact_power(k: usize, s: u32) -> BigUint {
    factorial(k as u64).pow(s.saturating_sub(1))
}

/// Least `n` with `(n / 2^bits)^k >= q`, for `q > 0`, `k >= 1`.
fn dyadic_root_ceil(q: &Coeff, k: u32, bits: u32) -> BigUint {
    let num = q.numer().magnitude();
    let den = q.denom().magnitude();
    let rhs = num << (bits as u64 * k as u64);
    let ok = |n: &BigUint| n.pow(k) * den >= rhs;

    let guess = ln_rational(q).map(|l| (l / k as f64 + bits as f64 * std::f64::consts::LN_2).exp()).unwrap_or(1.0);
    let seed = if guess.is_finite() && guess < 1e300 {
        BigUint::from((guess.max(1.0)) as u128)
    } else {
        BigUint::one()
    };
    let (mut lo, mut hi);
    if ok(&seed) {
        hi = seed;
        lo = &hi >> 1u32;
        while ok(&lo) && !lo.is_zero() {
            hi = lo.clone();
            lo >>= 1u32;
        }
        if ok(&lo) {
            return lo;
        }
    } else {
        lo = seed;
        hi = (&lo << 1u32) + 1u32;
        while !ok(&hi) {
            lo = hi.clone();
            hi <<= 1u32;
        }
    }
    // invariant: !ok(lo), ok(hi)
    while &hi - &lo > BigUint::one() {
        let mid: BigUint = (&lo + &hi) >> 1u32;
        if ok(&mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn ls_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    if points.len() < 2 {
        return 0.0;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Minimal `R` with `a_k <= (k!)^{s-1} R^k` on the window, bracketed from
/// above to `2^-20` per k, plus the divergence heuristic.
pub fn min_r_for_s(seq: &NormSeq, s: u32, window: (usize, usize)) -> Result<MinR> {
    if s == 0 {
        return Err(Error::InvalidArgument("Gevrey order s must be >= 1".into()));
    }
    check_window(seq, window)?;
    let (lo, hi) = window;
    let ks: Vec<usize> = (lo..=hi).collect();
    let scale = BigInt::from(1u32) << R_BITS;
    let per_k: Vec<(usize, Coeff)> = par::map(Exec::default(), &ks, |&k| {
        let a = &seq.values[k];
        if a.is_zero() {
            return (k, Coeff::zero());
        }
        let q = a / Coeff::from_integer(fact_power(k, s).into());
        let n = dyadic_root_ceil(&q, k as u32, R_BITS);
        (k, Coeff::new(n.into(), scale.clone()))
    });
    let bound = per_k.iter().map(|(_, r)| r.clone()).max().unwrap_or_else(Coeff::zero);

    let positive: Vec<&(usize, Coeff)> = per_k.iter().filter(|(_, r)| r.is_positive()).collect();
    let increasing = positive.windows(2).all(|w| w[0].1 < w[1].1);
    let mid = (lo + hi).div_ceil(2);
    let logs = |from: usize| -> Vec<(f64, f64)> {
        positive
            .iter()
            .filter(|(k, _)| *k >= from)
            .map(|(k, r)| ((*k as f64).ln(), ln_rational(r).unwrap_or(0.0)))
            .collect()
    };
    let mut upper = logs(mid);
    if upper.len() < 2 {
        upper = logs(lo);
    }
    let upper_slope = ls_slope(&upper);
    let divergent = positive.len() >= 3 && increasing && upper_slope > DIVERGENCE_SLOPE;
    Ok(MinR { s, window, bound, per_k, upper_slope, divergent })
}

/// Formal `s`-Borel transform `b_k = a_k / (k!)^{s-1}`.
pub fn borel_transform(seq: &NormSeq, s: u32) -> Result<NormSeq> {
    if s == 0 {
        return Err(Error::InvalidArgument("Borel order s must be >= 1".into()));
    }
    let values =
        seq.values.iter().enumerate().map(|(k, a)| a / Coeff::from_integer(fact_power(k, s).into())).collect();
    Ok(NormSeq { values, mode: seq.mode })
}

/// The comparison function `v_{A,B} = A / (B - z)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CauchyMajorant {
    pub a: Coeff,
    pub b: Coeff,
}

impl CauchyMajorant {
    /// `A/(B-z) = Σ_n A B^{-(n+1)} z^n` to degree `trunc_deg`.
    pub fn expansion(&self, trunc_deg: u32) -> MSeries {
        let inv_b = self.b.recip();
        let mut c = &self.a * &inv_b;
        let mut terms = Vec::with_capacity(trunc_deg as usize + 1);
        for n in 0..=trunc_deg {
            terms.push((MIndex::new(vec![n]), c.clone()));
            c = &c * &inv_b;
        }
        MSeries::from_terms(1, trunc_deg, terms).expect("degrees within truncation")
    }
}

/// Least `A` with `|u_n| <= A B^{-(n+1)}` for all `n <= trunc_deg`.
pub fn cauchy_majorant(u: &MSeries, b: &Coeff) -> Result<CauchyMajorant> {
    if u.nvars() != 1 {
        return Err(Error::InvalidArgument(format!("Cauchy majorant needs a univariate series, got {} variables", u.nvars())));
    }
    if !b.is_positive() {
        return Err(Error::InvalidArgument(format!("B = {} must be positive", coeff_to_string(b))));
    }
    let a = u
        .terms()
        .map(|(idx, c)| c.abs() * num_traits::pow(b.clone(), idx.degree() as usize + 1))
        .max()
        .unwrap_or_else(Coeff::zero);
    Ok(CauchyMajorant { a, b: b.clone() })
}

/// Report row: the bound for one `s`, or the divergence flag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinRRow {
    pub s: u32,
    /// Exact bound as `"p/q"`, or `"divergent"`.
    #[serde(rename = "R")]
    pub r: String,
    #[serde(rename = "R_approx")]
    pub r_approx: f64,
    pub upper_slope: f64,
}

/// Everything the `gevrey` command prints.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GevreyReport {
    pub mode: NormMode,
    pub window: (usize, usize),
    pub values: Vec<String>,
    pub s_hat: Option<f64>,
    #[serde(rename = "R_hat")]
    pub r_hat: Option<f64>,
    pub c_hat: Option<f64>,
    pub residual: Option<f64>,
    pub fit_error: Option<String>,
    #[serde(rename = "minR_table")]
    pub min_r_table: Vec<MinRRow>,
    pub divergence_rule: String,
}

impl GevreyReport {
    /// Whether the row for `s` carries the divergence flag.
    pub fn divergent_at(&self, s: u32) -> bool {
        self.min_r_table.iter().any(|r| r.s == s && r.r == "divergent")
    }
}

/// Fit plus `min_r_for_s` for `s = 1..=s_max`.
///
/// A failed fit is recorded in the report rather than returned, since the
/// bound table is still meaningful for flat sequences.
pub fn gevrey_report(seq: &NormSeq, window: (usize, usize), s_max: u32) -> Result<GevreyReport> {
    check_window(seq, window)?;
    let fit = estimate_order(seq, window);
    let mut table = Vec::new();
    for s in 1..=s_max {
        let m = min_r_for_s(seq, s, window)?;
        table.push(MinRRow {
            s,
            r: if m.divergent { "divergent".into() } else { coeff_to_string(&m.bound) },
            r_approx: m.bound_f64(),
            upper_slope: m.upper_slope,
        });
    }
    let (fit, fit_error) = match fit {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Ok(GevreyReport {
        mode: seq.mode,
        window,
        values: seq.strings(),
        s_hat: fit.as_ref().map(|f| f.s_hat),
        r_hat: fit.as_ref().map(|f| f.r_hat),
        c_hat: fit.as_ref().map(|f| f.c_hat),
        residual: fit.as_ref().map(|f| f.residual),
        fit_error,
        min_r_table: table,
        divergence_rule: format!(
            "heuristic: R_k strictly increasing over the window and ln R_k vs ln k slope > {DIVERGENCE_SLOPE} on its upper half"
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::ProblemSpec;
    use crate::flow::flow_recurrence;

    fn int(n: BigUint) -> Coeff {
        Coeff::from_integer(n.into())
    }

    fn seq(values: Vec<Coeff>) -> NormSeq {
        NormSeq::new(values, NormMode::AbsAtOrigin).unwrap()
    }

    fn kovalevskaia(k_max: usize) -> NormSeq {
        seq((0..=k_max as u64).map(|k| int(factorial(2 * k) / factorial(k))).collect())
    }

    fn flow(field: &str, initial: &str, k: usize, d: u32) -> FlowResult {
        let json = format!(
            r#"{{"space_vars":["z"],"components":["u"],"field":["{field}"],"initial":["{initial}"],"order_t":{k},"trunc_deg":{d}}}"#
        );
        flow_recurrence(&ProblemSpec::from_json(&json).unwrap()).unwrap()
    }

    #[test]
    fn norm_modes_on_flows() {
        let heat = flow("D(u,[2])", "inv(1-z)", 6, 12);
        assert_eq!(flow_norm_sequence(&heat, NormMode::AbsAtOrigin).unwrap(), kovalevskaia(6));
        assert_eq!(flow_norm_sequence(&heat, NormMode::AtOrigin).unwrap().values, kovalevskaia(6).values);

        let shift = flow("D(u,[1])", "z^3", 4, 4);
        let a = flow_norm_sequence(&shift, NormMode::AtOrigin).unwrap();
        let expect: Vec<Coeff> = [0, 0, 0, 1, 0].iter().map(|&n| Coeff::from_integer(n.into())).collect();
        assert_eq!(a.values, expect);

        let zero = flow("D(u,[1])", "0", 3, 3);
        assert!(flow_norm_sequence(&zero, NormMode::AbsAtOrigin).unwrap().values.iter().all(Zero::is_zero));

        let signed = flow("D(u,[1])", "1-z", 1, 2);
        let m = flow_norm_sequence(&signed, NormMode::MaxCoeff(1)).unwrap();
        assert_eq!(m.values, vec![Coeff::one(), Coeff::one()]);
        let err = flow_norm_sequence(&signed, NormMode::MaxCoeff(2)).unwrap_err();
        assert_eq!(err, Error::DegreeBeyondValid { requested: 2, valid: 1, k: 1 });
    }

    #[test]
    fn mode_strings() {
        for m in [NormMode::AtOrigin, NormMode::AbsAtOrigin, NormMode::MaxCoeff(7)] {
            assert_eq!(m.to_string().parse::<NormMode>().unwrap(), m);
        }
        assert_eq!("max_coeff:3".parse::<NormMode>().unwrap(), NormMode::MaxCoeff(3));
        assert!("sup".parse::<NormMode>().is_err());
    }

    #[test]
    fn ln_of_huge_rationals() {
        let big = int(factorial(300));
        let direct: f64 = (2..=300).map(|i| (i as f64).ln()).sum();
        assert!((ln_rational(&big).unwrap() - direct).abs() < 1e-9);
        let q = Coeff::new(3.into(), 7.into());
        assert!((ln_rational(&q).unwrap() - (3.0f64 / 7.0).ln()).abs() < 1e-15);
        assert!(ln_rational(&Coeff::zero()).is_err());
    }

    #[test]
    fn factorial_growth_is_gevrey_two() {
        let s = seq((0..=40u64).map(|k| int(factorial(k))).collect());
        let e = estimate_order(&s, (10, 40)).unwrap();
        assert!((e.s_hat - 2.0).abs() < 0.05, "{e:?}");
        assert!((e.s_hat - 2.0).abs() < 1e-9 && (e.r_hat - 1.0).abs() < 1e-9);
    }

    #[test]
    fn geometric_growth_is_analytic() {
        let s = seq((0..=30u32).map(|k| int(BigUint::from(2u32).pow(k))).collect());
        let e = estimate_order(&s, (5, 30)).unwrap();
        assert!((e.s_hat - 1.0).abs() < 1e-9);
        assert!((e.r_hat - 2.0).abs() < 1e-9);
        assert!((e.c_hat - 1.0).abs() < 1e-9);
        assert!(e.residual < 1e-12);
    }

    #[test]
    fn kovalevskaia_growth() {
        let e = estimate_order(&kovalevskaia(40), (10, 40)).unwrap();
        assert!((e.s_hat - 2.0).abs() < 0.05, "{e:?}");
        assert!((e.r_hat - 4.0).abs() < 0.5, "{e:?}");
    }

    #[test]
    fn fit_refuses_flat_sequences() {
        let s = seq([0, 0, 0, 1, 0].iter().map(|&n| Coeff::from_integer(n.into())).collect());
        assert!(matches!(estimate_order(&s, (1, 4)), Err(Error::CannotFit(_))));
        assert!(estimate_order(&kovalevskaia(5), (0, 5)).is_err());
        assert!(estimate_order(&kovalevskaia(5), (1, 6)).is_err());
    }

    #[test]
    fn fit_skips_parity_zeros() {
        // a_{2i} = (2i)!·2^{2i}, odd entries zero
        let vals = (0..=20u64)
            .map(|k| if k % 2 == 0 { int(factorial(k) * BigUint::from(2u32).pow(k as u32)) } else { Coeff::zero() })
            .collect();
        let e = estimate_order(&seq(vals), (3, 20)).unwrap();
        assert!((e.s_hat - 2.0).abs() < 1e-9 && (e.r_hat - 2.0).abs() < 1e-9, "{e:?}");
    }

    #[test]
    fn fit_slope_is_scale_invariant() {
        let base = kovalevskaia(25);
        let e0 = estimate_order(&base, (5, 25)).unwrap();
        let c = Coeff::new(7.into(), 3.into());
        let rho = Coeff::new(5.into(), 2.into());
        let scaled = seq(base.values.iter().enumerate().map(|(k, a)| a * &c * num_traits::pow(rho.clone(), k)).collect());
        let e1 = estimate_order(&scaled, (5, 25)).unwrap();
        assert!((e0.s_hat - e1.s_hat).abs() < 1e-9);
        assert!((e1.r_hat / e0.r_hat - 2.5).abs() < 1e-9);
    }

    #[test]
    fn min_r_kovalevskaia() {
        let s = kovalevskaia(12);
        let two = min_r_for_s(&s, 2, (6, 12)).unwrap();
        assert!(!two.divergent, "{two:?}");
        let r = two.bound_f64();
        assert!((3.0..=4.5).contains(&r), "{r}");
        // C(24,12)^{1/12}
        assert!((r - 2704156f64.powf(1.0 / 12.0)).abs() < 2e-6);
        let one = min_r_for_s(&s, 1, (6, 12)).unwrap();
        assert!(one.divergent, "{one:?}");
    }

    #[test]
    fn min_r_is_a_tight_upper_bracket() {
        let s = kovalevskaia(12);
        let m = min_r_for_s(&s, 2, (1, 12)).unwrap();
        let step = Coeff::new(1.into(), BigInt::from(1) << R_BITS);
        for (k, r) in &m.per_k {
            let lhs = &s.values[*k] / int(factorial(*k as u64));
            assert!(num_traits::pow(r.clone(), *k) >= lhs);
            assert!(num_traits::pow(r - &step, *k) < lhs);
        }
    }

    #[test]
    fn closed_form_coefficients_have_bounded_r() {
        let vals = (0..=12).map(|j| if j == 0 { Coeff::one() } else { crate::flow::closed_form_coeff(3, j).unwrap() });
        let m = min_r_for_s(&seq(vals.collect()), 3, (2, 12)).unwrap();
        assert!(!m.divergent, "{m:?}");
        // (4j)!/(j!)^4 ~ 256^j, so u_j ~ (j!)^2 64^j up to powers of j
        assert!(m.bound_f64() < 64.0, "{m:?}");
    }

    #[test]
    fn feasibility_is_monotone_in_s() {
        let seqs = [kovalevskaia(12), seq((0..=12u64).map(|k| int(factorial(k).pow(2))).collect())];
        for sq in &seqs {
            for s in 1..4 {
                let m = min_r_for_s(sq, s, (1, 12)).unwrap();
                for (k, r) in &m.per_k {
                    let rk = num_traits::pow(r.clone(), *k);
                    assert!(sq.values[*k] <= int(fact_power(*k, s)) * &rk);
                    assert!(sq.values[*k] <= int(fact_power(*k, s + 1)) * &rk);
                }
            }
        }
    }

    #[test]
    fn borel_transform_examples() {
        let b = borel_transform(&kovalevskaia(4), 2).unwrap();
        let expect: Vec<Coeff> = [1, 2, 6, 20, 70].iter().map(|&n| Coeff::from_integer(n.into())).collect();
        assert_eq!(b.values, expect);
        let squares = seq((0..=6u64).map(|k| int(factorial(k).pow(2))).collect());
        assert!(borel_transform(&squares, 3).unwrap().values.iter().all(One::is_one));
        let zeros = seq(vec![Coeff::zero(); 4]);
        assert_eq!(borel_transform(&zeros, 5).unwrap(), zeros);
        // undo
        let back: Vec<Coeff> =
            b.values.iter().enumerate().map(|(k, x)| x * int(factorial(k as u64))).collect();
        assert_eq!(back, kovalevskaia(4).values);
    }

    #[test]
    fn cauchy_majorant_examples() {
        let one = Coeff::one();
        let g = MSeries::geometric(8);
        let m = cauchy_majorant(&g, &one).unwrap();
        assert_eq!(m.a, one);
        assert!(crate::series::majorizes(&g, &m.expansion(8)).unwrap());

        let u = MSeries::from_terms(1, 5, [(MIndex::new(vec![0]), Coeff::from_integer(2.into())), (MIndex::new(vec![1]), one.clone())]).unwrap();
        assert_eq!(cauchy_majorant(&u, &one).unwrap().a, Coeff::from_integer(2.into()));
        let half = Coeff::new(1.into(), 2.into());
        let m = cauchy_majorant(&u, &half).unwrap();
        assert!(crate::series::majorizes(&u, &m.expansion(5)).unwrap());

        assert_eq!(cauchy_majorant(&MSeries::zero(1, 3), &one).unwrap().a, Coeff::zero());
        assert!(cauchy_majorant(&MSeries::zero(2, 3), &one).is_err());
        assert!(cauchy_majorant(&g, &Coeff::zero()).is_err());
    }

    #[test]
    fn report_marks_divergence() {
        let r = gevrey_report(&kovalevskaia(12), (6, 12), 2).unwrap();
        assert!(r.divergent_at(1));
        assert!(!r.divergent_at(2));
        assert!((r.s_hat.unwrap() - 2.0).abs() < 0.3);
        let flat = seq([0, 0, 0, 1, 0].iter().map(|&n| Coeff::from_integer(n.into())).collect());
        let r = gevrey_report(&flat, (1, 4), 1).unwrap();
        assert!(r.s_hat.is_none() && r.fit_error.is_some());
    }
}
