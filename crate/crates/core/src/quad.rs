//! Adaptive Gauss-Kronrod (7/15) quadrature of complex-valued integrands over
//! finite real intervals.
//!
//! The interval with the largest error estimate is bisected until the total
//! estimate meets the tolerance. Final sums use compensated summation.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    /// Maximum number of bisections.
    pub max_subdiv: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-10, abs: 0.0, max_subdiv: 1 << 16 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult {
    pub value: Complex64,
    /// Sum of the per-interval `|K15 - G7|` estimates.
    pub error: f64,
    pub subdivisions: usize,
    pub evaluations: usize,
}

/// Neumaier's variant of Kahan summation.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Compensated sum of complex terms.
pub fn complex_sum(terms: impl IntoIterator<Item = Complex64>) -> Complex64 {
    let (mut re, mut im) = (CompensatedSum::default(), CompensatedSum::default());
    for t in terms {
        re.add(t.re);
        im.add(t.im);
    }
    Complex64::new(re.value(), im.value())
}

#[derive(Clone, Copy, Debug)]
struct Piece {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Result<Piece> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for (i, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let pair = f(c - h * x) + f(c + h * x);
        k += pair * w;
        if i % 2 == 1 {
            g += pair * WG[i / 2];
        }
    }
    let value = k * h;
    let error = ((k - g) * h).norm();
    if !value.re.is_finite() || !value.im.is_finite() || !error.is_finite() {
        return Err(Error::NonFinite(format!("integrand on [{a}, {b}]")));
    }
    Ok(Piece { a, b, value, error })
}

/// `∫ f` over the union of consecutive intervals `[p_i, p_{i+1}]`.
///
/// Breakpoints must be increasing; they seed the subdivision and should be
/// placed near features of the integrand.
pub fn integrate_pieces<F: Fn(f64) -> Complex64>(f: F, breakpoints: &[f64], tol: &Tolerance) -> Result<QuadResult> {
    if breakpoints.len() < 2 || breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidArgument("quadrature breakpoints must be strictly increasing".into()));
    }
    if !(tol.rel > 0.0) && !(tol.abs > 0.0) {
        return Err(Error::InvalidArgument("quadrature needs a positive tolerance".into()));
    }
    let mut heap = BinaryHeap::new();
    let (mut total, mut err) = (Complex64::new(0.0, 0.0), 0.0);
    for w in breakpoints.windows(2) {
        let p = kronrod(&f, w[0], w[1])?;
        total += p.value;
        err += p.error;
        heap.push(p);
    }
    let mut evaluations = 15 * heap.len();
    let mut subdivisions = 0;
    while err > tol.abs.max(tol.rel * total.norm()) {
        if subdivisions >= tol.max_subdiv {
            return Err(Error::SubdivisionLimit(tol.max_subdiv));
        }
        let worst = heap.pop().expect("nonempty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if !(worst.a < mid && mid < worst.b) {
            return Err(Error::SubdivisionLimit(subdivisions));
        }
        let left = kronrod(&f, worst.a, mid)?;
        let right = kronrod(&f, mid, worst.b)?;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        evaluations += 30;
        subdivisions += 1;
    }
    let pieces = heap.into_vec();
    let value = complex_sum(pieces.iter().map(|p| p.value));
    let mut e = CompensatedSum::default();
    for p in &pieces {
        e.add(p.error);
    }
    Ok(QuadResult { value, error: e.value(), subdivisions, evaluations })
}

/// `∫_a^b f` for `a < b`; `a > b` integrates the reversed interval with a sign.
pub fn integrate<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, tol: &Tolerance) -> Result<QuadResult> {
    match a.partial_cmp(&b) {
        Some(Ordering::Less) => integrate_pieces(f, &[a, b], tol),
        Some(Ordering::Greater) => {
            let r = integrate_pieces(f, &[b, a], tol)?;
            Ok(QuadResult { value: -r.value, ..r })
        }
        Some(Ordering::Equal) => Ok(QuadResult { value: Complex64::new(0.0, 0.0), error: 0.0, subdivisions: 0, evaluations: 0 }),
        None => Err(Error::NonFinite("integration bounds".into())),
    }
}
