use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::coeff::{coeff_to_string, is_nonnegative, Coeff};
use crate::error::{Error, Result};
use crate::par::{self, Exec};

/// Exponent vector of a monomial `z_1^{e_1} ... z_n^{e_n}`.
///
/// Ordering is lexicographic on the exponents, which is also the order used
/// in serialized output.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MIndex(Vec<u32>);

impl MIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MIndex(exponents)
    }

    pub fn zero(nvars: usize) -> Self {
        MIndex(vec![0; nvars])
    }

    /// The unit exponent in variable `var`.
    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        MIndex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn plus(&self, other: &MIndex) -> MIndex {
        MIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl From<Vec<u32>> for MIndex {
    fn from(v: Vec<u32>) -> Self {
        MIndex(v)
    }
}

/// Truncated multivariate power series with exact rational coefficients.
///
/// Only terms of total degree `<= trunc_deg` are stored and no stored
/// coefficient is zero, so derived `PartialEq` is the structural equality of
/// two truncated series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MSeries {
    nvars: usize,
    trunc_deg: u32,
    terms: BTreeMap<MIndex, Coeff>,
}

/// Products with fewer pairwise term multiplications than this stay on the
/// calling thread.
const PAR_MUL_THRESHOLD: usize = 4096;

impl MSeries {
    pub fn zero(nvars: usize, trunc_deg: u32) -> Self {
        assert!(nvars >= 1, "MSeries needs at least one variable");
        MSeries { nvars, trunc_deg, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, trunc_deg: u32, c: Coeff) -> Self {
        Self::monomial(nvars, trunc_deg, MIndex::zero(nvars), c)
    }

    pub fn one(nvars: usize, trunc_deg: u32) -> Self {
        Self::constant(nvars, trunc_deg, Coeff::one())
    }

    /// The coordinate function `z_var`.
    pub fn var(nvars: usize, trunc_deg: u32, var: usize) -> Result<Self> {
        if var >= nvars {
            return Err(Error::VarOutOfRange { var, nvars });
        }
        Ok(Self::monomial(nvars, trunc_deg, MIndex::unit(nvars, var), Coeff::one()))
    }

    /// `c * z^idx`, dropped if beyond the truncation.
    pub fn monomial(nvars: usize, trunc_deg: u32, idx: MIndex, c: Coeff) -> Self {
        assert_eq!(idx.len(), nvars, "multi-index length must equal nvars");
        let mut s = Self::zero(nvars, trunc_deg);
        if idx.degree() <= trunc_deg && !c.is_zero() {
            s.terms.insert(idx, c);
        }
        s
    }

    /// Build from arbitrary terms: duplicates are summed, zeros and terms
    /// above the truncation are dropped.
    pub fn from_terms<I>(nvars: usize, trunc_deg: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (MIndex, Coeff)>,
    {
        let mut s = Self::zero(nvars, trunc_deg);
        for (idx, c) in terms {
            if idx.len() != nvars {
                return Err(Error::ShapeMismatch(format!(
                    "multi-index of length {} in a series of {} variables",
                    idx.len(),
                    nvars
                )));
            }
            if idx.degree() <= trunc_deg {
                accumulate(&mut s.terms, idx, c);
            }
        }
        s.terms.retain(|_, c| !c.is_zero());
        Ok(s)
    }

    /// `1 + z + z^2 + ... + z^D`, the expansion of `1/(1-z)` in one variable.
    pub fn geometric(trunc_deg: u32) -> Self {
        Self::geometric_in(1, 0, trunc_deg)
    }

    /// Geometric series `Σ z_var^k` inside an `nvars`-variable ring.
    pub fn geometric_in(nvars: usize, var: usize, trunc_deg: u32) -> Self {
        let terms = (0..=trunc_deg).map(|k| {
            let mut e = vec![0; nvars];
            e[var] = k;
            (MIndex(e), Coeff::one())
        });
        Self::from_terms(nvars, trunc_deg, terms).expect("well-formed geometric series")
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn trunc_deg(&self) -> u32 {
        self.trunc_deg
    }

    /// Number of stored (nonzero) terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Stored terms in lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&MIndex, &Coeff)> {
        self.terms.iter()
    }

    pub fn constant_term(&self) -> Coeff {
        self.terms.get(&MIndex::zero(self.nvars)).cloned().unwrap_or_else(Coeff::zero)
    }

    /// Coefficient of `z^idx`. Indices beyond the truncation are unknown,
    /// which is an error rather than zero.
    pub fn coeff_at(&self, idx: &MIndex) -> Result<Coeff> {
        if idx.len() != self.nvars {
            return Err(Error::ShapeMismatch(format!(
                "multi-index of length {} for a series of {} variables",
                idx.len(),
                self.nvars
            )));
        }
        let degree = idx.degree();
        if degree > self.trunc_deg {
            return Err(Error::BeyondTruncation { degree, trunc_deg: self.trunc_deg });
        }
        Ok(self.terms.get(idx).cloned().unwrap_or_else(Coeff::zero))
    }

    /// Drop everything above `deg`; never raises the truncation.
    pub fn truncate(&self, deg: u32) -> MSeries {
        let deg = deg.min(self.trunc_deg);
        MSeries {
            nvars: self.nvars,
            trunc_deg: deg,
            terms: self
                .terms
                .iter()
                .filter(|(i, _)| i.degree() <= deg)
                .map(|(i, c)| (i.clone(), c.clone()))
                .collect(),
        }
    }

    fn check_vars(&self, other: &MSeries) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::VarCountMismatch { left: self.nvars, right: other.nvars });
        }
        Ok(())
    }

    pub fn add(&self, other: &MSeries) -> Result<MSeries> {
        self.check_vars(other)?;
        let d = self.trunc_deg.min(other.trunc_deg);
        let mut out = self.truncate(d);
        for (i, c) in other.terms.iter().filter(|(i, _)| i.degree() <= d) {
            accumulate(&mut out.terms, i.clone(), c.clone());
        }
        out.terms.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    pub fn sub(&self, other: &MSeries) -> Result<MSeries> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MSeries {
        self.map_coeffs(|c| -c)
    }

    pub fn scale(&self, k: &Coeff) -> MSeries {
        if k.is_zero() {
            return MSeries::zero(self.nvars, self.trunc_deg);
        }
        self.map_coeffs(|c| c * k)
    }

    /// Every coefficient replaced by its absolute value.
    pub fn abs(&self) -> MSeries {
        self.map_coeffs(|c| c.abs())
    }

    fn map_coeffs(&self, f: impl Fn(&Coeff) -> Coeff) -> MSeries {
        MSeries {
            nvars: self.nvars,
            trunc_deg: self.trunc_deg,
            terms: self.terms.iter().map(|(i, c)| (i.clone(), f(c))).collect(),
        }
    }

    /// Truncated Cauchy product using the default execution policy.
    pub fn mul(&self, other: &MSeries) -> Result<MSeries> {
        self.mul_with(other, Exec::default())
    }

    pub fn mul_with(&self, other: &MSeries, exec: Exec) -> Result<MSeries> {
        self.check_vars(other)?;
        let d = self.trunc_deg.min(other.trunc_deg);
        let left: Vec<(&MIndex, &Coeff, u32)> =
            self.terms.iter().map(|(i, c)| (i, c, i.degree())).filter(|t| t.2 <= d).collect();
        let right: Vec<(&MIndex, &Coeff, u32)> =
            other.terms.iter().map(|(i, c)| (i, c, i.degree())).filter(|t| t.2 <= d).collect();

        let partial = |chunk: &[(&MIndex, &Coeff, u32)]| {
            let mut acc = BTreeMap::new();
            for (ia, ca, da) in chunk {
                for (ib, cb, db) in &right {
                    if da + db <= d {
                        accumulate(&mut acc, ia.plus(ib), *ca * *cb);
                    }
                }
            }
            acc
        };

        let work = left.len() * right.len();
        let exec = if work < PAR_MUL_THRESHOLD { Exec::Sequential } else { exec };
        let chunk = if exec.is_parallel() { left.len().div_ceil(4 * rayon_width()) } else { left.len() };
        let mut terms = par::map_reduce_chunks(exec, &left, chunk, BTreeMap::new, partial, |mut a, b| {
            for (i, c) in b {
                accumulate(&mut a, i, c);
            }
            a
        });
        terms.retain(|_, c: &mut Coeff| !c.is_zero());
        Ok(MSeries { nvars: self.nvars, trunc_deg: d, terms })
    }

    /// Integer power by repeated squaring; `a^0 = 1` at `a`'s truncation.
    pub fn pow(&self, n: u32) -> Result<MSeries> {
        let mut result = MSeries::one(self.nvars, self.trunc_deg);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(result)
    }

    /// Formal partial derivative in `var`. The truncation drops by one,
    /// except that a degree-0 series stays at degree 0 (its derivative is 0).
    pub fn derive(&self, var: usize) -> Result<MSeries> {
        if var >= self.nvars {
            return Err(Error::VarOutOfRange { var, nvars: self.nvars });
        }
        let trunc_deg = self.trunc_deg.saturating_sub(1);
        let mut terms = BTreeMap::new();
        for (idx, c) in &self.terms {
            let e = idx.0[var];
            if e == 0 {
                continue;
            }
            let mut ne = idx.0.clone();
            ne[var] -= 1;
            terms.insert(MIndex(ne), c * Coeff::from_integer(e.into()));
        }
        Ok(MSeries { nvars: self.nvars, trunc_deg, terms })
    }

    /// Mixed partial `∂^idx`.
    pub fn derive_multi(&self, idx: &MIndex) -> Result<MSeries> {
        if idx.len() != self.nvars {
            return Err(Error::ShapeMismatch(format!(
                "derivative multi-index of length {} in {} variables",
                idx.len(),
                self.nvars
            )));
        }
        let mut out = self.clone();
        for (var, &times) in idx.0.iter().enumerate() {
            for _ in 0..times {
                out = out.derive(var)?;
            }
        }
        Ok(out)
    }

    /// Multiplicative inverse up to the truncation, by the degree-graded
    /// recurrence `b_d = -(1/a_0) Σ_{e=1..d} a_e b_{d-e}` on homogeneous parts.
    pub fn invert(&self) -> Result<MSeries> {
        let a0 = self.constant_term();
        if a0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let d = self.trunc_deg as usize;
        let inv_a0 = a0.recip();
        let mut a_parts: Vec<BTreeMap<MIndex, Coeff>> = vec![BTreeMap::new(); d + 1];
        for (i, c) in &self.terms {
            a_parts[i.degree() as usize].insert(i.clone(), c.clone());
        }
        let mut b_parts: Vec<BTreeMap<MIndex, Coeff>> = Vec::with_capacity(d + 1);
        b_parts.push([(MIndex::zero(self.nvars), inv_a0.clone())].into_iter().collect());
        for deg in 1..=d {
            let mut acc = BTreeMap::new();
            for e in 1..=deg {
                for (ia, ca) in &a_parts[e] {
                    for (ib, cb) in &b_parts[deg - e] {
                        accumulate(&mut acc, ia.plus(ib), ca * cb);
                    }
                }
            }
            let scale = -&inv_a0;
            let part = acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c * &scale))
                .collect();
            b_parts.push(part);
        }
        let terms = b_parts.into_iter().flatten().collect();
        Ok(MSeries { nvars: self.nvars, trunc_deg: self.trunc_deg, terms })
    }

    /// `self ≪ other` at the shared truncation: `|a_n| <= b_n` for every
    /// multi-index of degree `<= min(D_a, D_b)`. A finite check, not a claim
    /// about the full series.
    pub fn majorized_by(&self, other: &MSeries) -> Result<bool> {
        self.check_vars(other)?;
        let d = self.trunc_deg.min(other.trunc_deg);
        // every stored coefficient of `other` in range must be nonnegative
        // (indices absent from `self` compare 0 <= b_n)
        for (i, b) in &other.terms {
            if i.degree() <= d && b.is_negative() {
                return Ok(false);
            }
        }
        for (i, a) in &self.terms {
            if i.degree() > d {
                continue;
            }
            let b = other.terms.get(i).cloned().unwrap_or_else(Coeff::zero);
            if a.abs() > b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// All coefficients `>= 0`.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(is_nonnegative)
    }

    /// Pull back along the diagonal `z -> (z, ..., z)`: a univariate series
    /// whose degree-`d` coefficient collects all monomials of total degree `d`.
    pub fn diagonal_restrict(&self) -> MSeries {
        let mut terms = BTreeMap::new();
        for (i, c) in &self.terms {
            accumulate(&mut terms, MIndex(vec![i.degree()]), c.clone());
        }
        terms.retain(|_, c| !c.is_zero());
        MSeries { nvars: 1, trunc_deg: self.trunc_deg, terms }
    }
}

fn accumulate(map: &mut BTreeMap<MIndex, Coeff>, idx: MIndex, c: Coeff) {
    match map.entry(idx) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
        }
    }
}

#[cfg(feature = "parallel")]
fn rayon_width() -> usize {
    rayon::current_num_threads()
}

#[cfg(not(feature = "parallel"))]
fn rayon_width() -> usize {
    1
}

impl fmt::Display for MSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O({})", self.trunc_deg + 1);
        }
        let mut first = true;
        for (i, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{}", coeff_to_string(c))?;
            for (v, e) in i.0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => write!(f, "*z{}", v + 1)?,
                    _ => write!(f, "*z{}^{}", v + 1, e)?,
                }
            }
        }
        write!(f, " + O({})", self.trunc_deg + 1)
    }
}
