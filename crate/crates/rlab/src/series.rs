//! Exact sparse truncated power series in the cyclic ratio variables.
//!
//! With positions `x_1..x_N` and a nome `p`, the chart variables are
//! `z_i = x_{i+1}/x_i` for `i < N` and `z_N = p x_1 / x_N`, so `p = z_1 ... z_N`
//! and `x_{a+N} = p x_a` becomes plain monomial arithmetic. Trigonometric
//! series simply use the first `N - 1` variables.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};

/// Exact coefficient field.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// `x^e` for any integer `e`; a zero base with negative exponent is a pole.
pub fn powi(x: &Scalar, e: i64) -> Result<Scalar> {
    if e < 0 && x.is_zero() {
        return Err(Error::Pole("zero raised to a negative power".into()));
    }
    let mut base = if e < 0 { x.recip() } else { x.clone() };
    let mut e = e.unsigned_abs();
    let mut acc = Scalar::one();
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    Ok(acc)
}

/// Integer value of a rational, if it is one.
pub fn as_integer(x: &Scalar) -> Option<i64> {
    if !x.is_integer() {
        return None;
    }
    i64::try_from(x.to_integer()).ok()
}

/// Exponent vector of a monomial in the chart variables.
///
/// Ordered by total degree first, then lexicographically, so iterating a
/// series walks it grade by grade.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(entries: Vec<u32>) -> Self {
        Exponent(entries)
    }

    pub fn zero(nvars: usize) -> Self {
        Exponent(vec![0; nvars])
    }

    pub fn unit(nvars: usize, var: usize) -> Self {
        let mut e = vec![0; nvars];
        e[var] = 1;
        Exponent(e)
    }

    /// From a signed monomial; `None` if any entry is negative.
    pub fn from_signed(entries: &[i64]) -> Option<Self> {
        entries
            .iter()
            .map(|&e| u32::try_from(e).ok())
            .collect::<Option<Vec<_>>>()
            .map(Exponent)
    }

    pub fn entries(&self) -> &[u32] {
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

    pub fn add(&self, other: &Exponent) -> Exponent {
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn scale(&self, k: u32) -> Exponent {
        Exponent(self.0.iter().map(|a| a * k).collect())
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Which monomials a series keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// Total degree at most the given order.
    Total(u32),
    /// Separate degree caps on the first `split` variables and on the rest.
    /// Used for doubly expanded series in position and spectral variables.
    Bigraded { split: usize, first: u32, second: u32 },
}

impl Truncation {
    pub fn fits(&self, e: &Exponent) -> bool {
        match *self {
            Truncation::Total(d) => e.degree() <= d,
            Truncation::Bigraded { split, first, second } => {
                let (a, b) = e.entries().split_at(split.min(e.len()));
                a.iter().sum::<u32>() <= first && b.iter().sum::<u32>() <= second
            }
        }
    }

    /// Largest total degree any kept monomial can have.
    pub fn max_degree(&self) -> u32 {
        match *self {
            Truncation::Total(d) => d,
            Truncation::Bigraded { first, second, .. } => first + second,
        }
    }

    /// The coarser of two truncations; both must be of the same kind.
    pub fn meet(self, other: Truncation) -> Result<Truncation> {
        match (self, other) {
            (Truncation::Total(a), Truncation::Total(b)) => Ok(Truncation::Total(a.min(b))),
            (
                Truncation::Bigraded { split: s1, first: f1, second: g1 },
                Truncation::Bigraded { split: s2, first: f2, second: g2 },
            ) if s1 == s2 => Ok(Truncation::Bigraded {
                split: s1,
                first: f1.min(f2),
                second: g1.min(g2),
            }),
            _ => Err(Error::Shape(format!("incompatible truncations {self:?} and {other:?}"))),
        }
    }

    /// Truncation left for a factor multiplied by the monomial `e`.
    pub fn below(self, e: &Exponent) -> Option<Truncation> {
        match self {
            Truncation::Total(d) => d.checked_sub(e.degree()).map(Truncation::Total),
            Truncation::Bigraded { split, first, second } => {
                let (a, b) = e.entries().split_at(split.min(e.len()));
                Some(Truncation::Bigraded {
                    split,
                    first: first.checked_sub(a.iter().sum())?,
                    second: second.checked_sub(b.iter().sum())?,
                })
            }
        }
    }
}

/// A truncated power series, optionally times a symbolic `x^prefix`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    nvars: usize,
    trunc: Truncation,
    terms: BTreeMap<Exponent, Scalar>,
    prefix: Option<Vec<Scalar>>,
}

/// First coefficient where two series differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub exponent: Exponent,
    pub left: Scalar,
    pub right: Scalar,
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at {:?}: {} vs {}", self.exponent.entries(), self.left, self.right)
    }
}

impl TruncatedSeries {
    pub fn zero(nvars: usize, trunc: Truncation) -> Self {
        TruncatedSeries { nvars, trunc, terms: BTreeMap::new(), prefix: None }
    }

    pub fn constant(c: Scalar, nvars: usize, trunc: Truncation) -> Self {
        let mut s = Self::zero(nvars, trunc);
        if !c.is_zero() {
            s.terms.insert(Exponent::zero(nvars), c);
        }
        s
    }

    pub fn one(nvars: usize, trunc: Truncation) -> Self {
        Self::constant(Scalar::one(), nvars, trunc)
    }

    pub fn monomial(c: Scalar, e: Exponent, trunc: Truncation) -> Self {
        let nvars = e.len();
        let mut s = Self::zero(nvars, trunc);
        if !c.is_zero() && trunc.fits(&e) {
            s.terms.insert(e, c);
        }
        s
    }

    /// Collects terms, summing duplicates and dropping zeros and out-of-range keys.
    pub fn from_terms<I>(nvars: usize, trunc: Truncation, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Scalar)>,
    {
        let mut s = Self::zero(nvars, trunc);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::Shape(format!("exponent of length {} in {nvars} variables", e.len())));
            }
            s.add_term(e, c);
        }
        Ok(s)
    }

    fn add_term(&mut self, e: Exponent, c: Scalar) {
        if c.is_zero() || !self.trunc.fits(&e) {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    /// Maximal total degree kept.
    pub fn order(&self) -> u32 {
        self.trunc.max_degree()
    }

    pub fn prefix(&self) -> Option<&[Scalar]> {
        self.prefix.as_deref()
    }

    /// Prefix as a vector of length `n`, zeros when absent.
    pub fn prefix_or_zero(&self, n: usize) -> Vec<Scalar> {
        self.prefix.clone().unwrap_or_else(|| vec![Scalar::zero(); n])
    }

    pub fn with_prefix(mut self, prefix: Option<Vec<Scalar>>) -> Self {
        self.prefix = prefix.filter(|p| p.iter().any(|c| !c.is_zero()));
        self
    }

    pub fn coeff(&self, e: &Exponent) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Exponent, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::Shape(format!("{} vs {} variables", self.nvars, other.nvars)));
        }
        Ok(())
    }

    fn check_prefix(&self, other: &Self) -> Result<()> {
        if self.prefix != other.prefix {
            return Err(Error::PrefixMismatch(format!("{:?} vs {:?}", self.prefix, other.prefix)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        self.check_prefix(other)?;
        let trunc = self.trunc.meet(other.trunc)?;
        let mut out = TruncatedSeries { nvars: self.nvars, trunc, terms: BTreeMap::new(), prefix: self.prefix.clone() };
        for (e, c) in self.terms.iter().chain(other.terms.iter()) {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = TruncatedSeries { terms: BTreeMap::new(), ..self.clone() };
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        }
        out
    }

    /// Cauchy product truncated at the coarser truncation; prefixes add.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let trunc = self.trunc.meet(other.trunc)?;
        let maxd = trunc.max_degree();
        let prefix = match (&self.prefix, &other.prefix) {
            (None, None) => None,
            (Some(a), None) | (None, Some(a)) => Some(a.clone()),
            (Some(a), Some(b)) => {
                if a.len() != b.len() {
                    return Err(Error::Shape("prefix lengths differ".into()));
                }
                Some(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
        };
        let rhs: Vec<(&Exponent, &Scalar, u32)> =
            other.terms.iter().map(|(e, c)| (e, c, e.degree())).collect();
        let lhs: Vec<(&Exponent, &Scalar)> = self.terms.iter().collect();
        let product = |chunk: &[(&Exponent, &Scalar)]| {
            let mut acc: BTreeMap<Exponent, Scalar> = BTreeMap::new();
            for (ea, ca) in chunk {
                let da = ea.degree();
                for (eb, cb, db) in &rhs {
                    // rhs is sorted by degree, so nothing further fits
                    if da + db > maxd {
                        break;
                    }
                    let e = ea.add(eb);
                    if !trunc.fits(&e) {
                        continue;
                    }
                    *acc.entry(e).or_insert_with(Scalar::zero) += *ca * *cb;
                }
            }
            acc
        };
        let partial: Vec<BTreeMap<Exponent, Scalar>> = if lhs.len() * rhs.len() > 4096 {
            lhs.par_chunks(64).map(product).collect()
        } else {
            vec![product(&lhs)]
        };
        let mut out = TruncatedSeries { nvars: self.nvars, trunc, terms: BTreeMap::new(), prefix };
        for map in partial {
            for (e, c) in map {
                out.add_term(e, c);
            }
        }
        out.prefix = out.prefix.filter(|p| p.iter().any(|c| !c.is_zero()));
        Ok(out)
    }

    /// Restricts to a finer truncation of the same kind.
    pub fn truncate(&self, trunc: Truncation) -> Result<Self> {
        let trunc = self.trunc.meet(trunc)?;
        let mut out = TruncatedSeries { trunc, terms: BTreeMap::new(), ..self.clone() };
        out.terms = self.terms.iter().filter(|(e, _)| trunc.fits(e)).map(|(e, c)| (e.clone(), c.clone())).collect();
        Ok(out)
    }

    /// Same terms under a different truncation label; keys that no longer fit
    /// are dropped. Used when the caller knows the terms are exact further out.
    pub fn retruncate(&self, trunc: Truncation) -> Self {
        let mut out = TruncatedSeries { trunc, terms: BTreeMap::new(), ..self.clone() };
        out.terms = self.terms.iter().filter(|(e, _)| trunc.fits(e)).map(|(e, c)| (e.clone(), c.clone())).collect();
        out
    }

    /// Multiplies by the monomial `z^e`, keeping the truncation.
    pub fn shift(&self, e: &Exponent) -> Self {
        let mut out = TruncatedSeries { terms: BTreeMap::new(), ..self.clone() };
        for (k, c) in &self.terms {
            let key = k.add(e);
            if self.trunc.fits(&key) {
                out.terms.insert(key, c.clone());
            }
        }
        out
    }

    /// Rescales each coefficient by a function of its exponent.
    pub fn map_coeffs<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(&Exponent, &Scalar) -> Result<Scalar>,
    {
        let mut out = TruncatedSeries { terms: BTreeMap::new(), ..self.clone() };
        for (e, c) in &self.terms {
            let v = f(e, c)?;
            if !v.is_zero() {
                out.terms.insert(e.clone(), v);
            }
        }
        Ok(out)
    }

    /// Terms whose exponent in variable `var` is zero, as a series in the remaining variables.
    pub fn slice_zero(&self, var: usize) -> Result<Self> {
        if var >= self.nvars {
            return Err(Error::Shape(format!("no variable {var}")));
        }
        let trunc = match self.trunc {
            Truncation::Total(d) => Truncation::Total(d),
            _ => return Err(Error::Shape("slicing needs a total-degree truncation".into())),
        };
        let mut out = TruncatedSeries::zero(self.nvars - 1, trunc);
        out.prefix = self.prefix.clone();
        for (e, c) in &self.terms {
            if e.entries()[var] == 0 {
                let mut v = e.entries().to_vec();
                v.remove(var);
                out.terms.insert(Exponent(v), c.clone());
            }
        }
        Ok(out)
    }

    /// Embeds into `nvars` variables with this series' variables starting at `offset`.
    pub fn embed(&self, nvars: usize, offset: usize, trunc: Truncation) -> Result<Self> {
        if offset + self.nvars > nvars {
            return Err(Error::Shape("embedding does not fit".into()));
        }
        let mut out = TruncatedSeries::zero(nvars, trunc);
        out.prefix = self.prefix.clone();
        for (e, c) in &self.terms {
            let mut v = vec![0; nvars];
            v[offset..offset + self.nvars].copy_from_slice(e.entries());
            out.add_term(Exponent(v), c.clone());
        }
        Ok(out)
    }

    /// Exchanges the two variable blocks of a bigraded series with equal block sizes.
    pub fn swap_blocks(&self) -> Result<Self> {
        let Truncation::Bigraded { split, first, second } = self.trunc else {
            return Err(Error::Shape("block swap needs a bigraded series".into()));
        };
        if 2 * split != self.nvars {
            return Err(Error::Shape("block swap needs equal block sizes".into()));
        }
        let trunc = Truncation::Bigraded { split, first: second, second: first };
        let mut out = TruncatedSeries::zero(self.nvars, trunc);
        for (e, c) in &self.terms {
            let (a, b) = e.entries().split_at(split);
            out.terms.insert(Exponent([b, a].concat()), c.clone());
        }
        Ok(out)
    }

    /// First coefficient (in graded-lex order) where the two series differ,
    /// compared on the monomials both truncations keep. Prefixes must agree.
    pub fn first_difference(&self, other: &Self) -> Result<Option<Discrepancy>> {
        self.check_shape(other)?;
        self.check_prefix(other)?;
        let trunc = self.trunc.meet(other.trunc)?;
        let keys: std::collections::BTreeSet<&Exponent> =
            self.terms.keys().chain(other.terms.keys()).filter(|e| trunc.fits(e)).collect();
        Ok(keys.into_iter().find_map(|e| {
            let (l, r) = (self.coeff(e), other.coeff(e));
            (l != r).then(|| Discrepancy { exponent: e.clone(), left: l, right: r })
        }))
    }

    /// Sum of many series over the same shape.
    pub fn sum<I: IntoIterator<Item = TruncatedSeries>>(nvars: usize, trunc: Truncation, items: I) -> Result<Self> {
        let mut out = TruncatedSeries::zero(nvars, trunc);
        let mut first = true;
        for s in items {
            if first {
                out.prefix = s.prefix.clone();
                first = false;
            }
            out = out.add(&s)?;
        }
        Ok(out)
    }
}

/// Monomial of `x_a / x_b` in the chart, with `x_{a+N} = p x_a`.
///
/// Entries may be negative when the ratio is not a power series monomial.
pub fn ratio_monomial(n: usize, a: i64, b: i64) -> Vec<i64> {
    let n_i = n as i64;
    let mut m = vec![0i64; n];
    let (lo, hi, sign) = if a >= b { (b, a, 1) } else { (a, b, -1) };
    for c in lo..hi {
        let var = (c - 1).rem_euclid(n_i) as usize;
        m[var] += sign;
    }
    m
}

/// `sum_k c^k z^{k m}` within the truncation.
pub fn geometric_expand(c: &Scalar, m: &Exponent, trunc: Truncation) -> Result<TruncatedSeries> {
    let nvars = m.len();
    if m.degree() == 0 {
        let d = Scalar::one() - c;
        if d.is_zero() {
            return Err(Error::Pole("1 - c vanishes in a constant geometric factor".into()));
        }
        return Ok(TruncatedSeries::constant(d.recip(), nvars, trunc));
    }
    let mut out = TruncatedSeries::zero(nvars, trunc);
    let mut k = 0u32;
    let mut ck = Scalar::one();
    loop {
        let e = m.scale(k);
        if !trunc.fits(&e) {
            break;
        }
        out.add_term(e, ck.clone());
        if c.is_zero() {
            break;
        }
        ck *= c;
        k += 1;
    }
    Ok(out)
}

/// Coefficients of `(a y;q)_inf / (b y;q)_inf` in `y` up to `y^kmax`,
/// by the q-binomial theorem.
pub fn poch_ratio_coeffs(a: &Scalar, b: &Scalar, q: &Scalar, kmax: usize) -> Result<Vec<Scalar>> {
    let mut w = Vec::with_capacity(kmax + 1);
    w.push(Scalar::one());
    let mut qn = Scalar::one();
    for k in 1..=kmax {
        // qn = q^{k-1}
        let den = Scalar::one() - &qn * q;
        if den.is_zero() {
            return Err(Error::Pole("q is a root of unity".into()));
        }
        let prev = &w[k - 1];
        w.push(prev * (b - a * &qn) / den);
        qn *= q;
    }
    Ok(w)
}

/// `(a z^m;q)_inf / (b z^m;q)_inf` as a truncated series.
pub fn poch_ratio_expand(a: &Scalar, b: &Scalar, q: &Scalar, m: &Exponent, trunc: Truncation) -> Result<TruncatedSeries> {
    if m.degree() == 0 {
        return Err(Error::Shape("q-binomial expansion needs a nonconstant monomial".into()));
    }
    let mut fp = FactorProduct::new(m.len());
    let signed: Vec<i64> = m.entries().iter().map(|&e| e as i64).collect();
    fp.push_poch_ratio(a.clone(), b.clone(), q.clone(), &signed)?;
    fp.into_series(trunc)
}

/// `theta(u x_i/x_j; p) / theta(x_i/x_j; p)` in the periodic chart with `N`
/// variables, where `theta(y;p) = (y;p)_inf (p/y;p)_inf`.
pub fn theta_ratio_expand(u: &Scalar, i: usize, j: usize, n: usize, trunc: Truncation) -> Result<TruncatedSeries> {
    let mut fp = FactorProduct::new(n);
    fp.push_theta_ratio(u, i as i64, j as i64, n, trunc.max_degree())?;
    fp.into_series(trunc)
}

/// A product of simple factors to be expanded as one power series.
///
/// Holds a scalar, linear factors `(1 - c z^m)^k` and q-Pochhammer ratios
/// `(a z^m;q)_inf / (b z^m;q)_inf`. Factors with a nonpositive monomial are
/// flipped to a positive one, and the monomial pulled out is tracked so that
/// [`FactorProduct::into_series`] can insist it cancels.
#[derive(Clone, Debug)]
pub struct FactorProduct {
    nvars: usize,
    scalar: Scalar,
    shift: Vec<i64>,
    linear: BTreeMap<Vec<i64>, BTreeMap<Scalar, i32>>,
    poch: BTreeMap<Vec<i64>, Vec<(Scalar, Scalar, Scalar)>>,
}

impl FactorProduct {
    pub fn new(nvars: usize) -> Self {
        FactorProduct {
            nvars,
            scalar: Scalar::one(),
            shift: vec![0; nvars],
            linear: BTreeMap::new(),
            poch: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn scale(&mut self, c: &Scalar) {
        self.scalar *= c;
    }

    /// Multiplies by `(1 - c z^m)^power`.
    pub fn push_linear(&mut self, c: Scalar, m: &[i64], power: i32) -> Result<()> {
        if m.len() != self.nvars {
            return Err(Error::Shape("monomial length".into()));
        }
        if power == 0 || c.is_zero() {
            return Ok(());
        }
        if m.iter().all(|&e| e == 0) {
            let v = Scalar::one() - &c;
            if v.is_zero() && power < 0 {
                return Err(Error::Pole("constant factor vanishes in a denominator".into()));
            }
            self.scalar *= powi(&v, power as i64)?;
            return Ok(());
        }
        if m.iter().all(|&e| e >= 0) {
            self.insert_linear(c, m.to_vec(), power);
            return Ok(());
        }
        if m.iter().all(|&e| e <= 0) {
            // 1 - c w^{-1} = (-c w^{-1}) (1 - c^{-1} w)
            self.scalar *= powi(&-c.clone(), power as i64)?;
            for (s, e) in self.shift.iter_mut().zip(m) {
                *s += e * power as i64;
            }
            let flipped: Vec<i64> = m.iter().map(|e| -e).collect();
            self.insert_linear(c.recip(), flipped, power);
            return Ok(());
        }
        Err(Error::Laurent(format!("mixed-sign monomial {m:?}")))
    }

    fn insert_linear(&mut self, c: Scalar, m: Vec<i64>, power: i32) {
        let group = self.linear.entry(m).or_default();
        let slot = group.entry(c).or_insert(0);
        *slot += power;
    }

    /// Multiplies by `(a z^m;q)_inf / (b z^m;q)_inf` for a positive monomial.
    pub fn push_poch_ratio(&mut self, a: Scalar, b: Scalar, q: Scalar, m: &[i64]) -> Result<()> {
        if m.len() != self.nvars {
            return Err(Error::Shape("monomial length".into()));
        }
        if m.iter().any(|&e| e < 0) || m.iter().all(|&e| e == 0) {
            return Err(Error::Laurent(format!("q-Pochhammer ratio at monomial {m:?}")));
        }
        if a != b {
            self.poch.entry(m.to_vec()).or_default().push((a, b, q));
        }
        Ok(())
    }

    /// Multiplies by `theta(u x_a/x_b;p)/theta(x_a/x_b;p)` in the periodic
    /// chart, keeping factors of degree up to `maxdeg`.
    pub fn push_theta_ratio(&mut self, u: &Scalar, a: i64, b: i64, n: usize, maxdeg: u32) -> Result<()> {
        if a == b {
            return Err(Error::Invalid("theta ratio needs distinct indices".into()));
        }
        if u.is_zero() {
            return Err(Error::Pole("theta ratio with u = 0".into()));
        }
        let n_i = n as i64;
        let maxdeg = maxdeg as i64;
        let mut k = 0i64;
        loop {
            // (1 - u x_{a+kN}/x_b) / (1 - x_{a+kN}/x_b)
            let d1 = a + k * n_i - b;
            // (1 - u^{-1} x_{b+(k+1)N}/x_a) / (1 - x_{b+(k+1)N}/x_a)
            let d2 = b + (k + 1) * n_i - a;
            if d1 > maxdeg && d2 > maxdeg {
                break;
            }
            if d1 <= maxdeg {
                let m = ratio_monomial(n, a + k * n_i, b);
                self.push_linear(u.clone(), &m, 1)?;
                self.push_linear(Scalar::one(), &m, -1)?;
            }
            if d2 <= maxdeg {
                let m = ratio_monomial(n, b + (k + 1) * n_i, a);
                self.push_linear(u.recip(), &m, 1)?;
                self.push_linear(Scalar::one(), &m, -1)?;
            }
            k += 1;
        }
        Ok(())
    }

    /// Net monomial pulled out by flips.
    pub fn offset(&self) -> &[i64] {
        &self.shift
    }

    pub fn scalar(&self) -> &Scalar {
        &self.scalar
    }

    /// Expands everything as a power series; the flip offset must vanish.
    pub fn into_series(self, trunc: Truncation) -> Result<TruncatedSeries> {
        if self.shift.iter().any(|&e| e != 0) {
            return Err(Error::Laurent(format!("leftover monomial {:?}", self.shift)));
        }
        self.expand_with_offset(trunc)
    }

    /// Expands the flipped factors, ignoring the flip offset. The caller is
    /// responsible for multiplying by `z^offset()` afterwards.
    pub fn expand_with_offset(self, trunc: Truncation) -> Result<TruncatedSeries> {
        let mut out = TruncatedSeries::constant(self.scalar.clone(), self.nvars, trunc);
        if out.is_zero() {
            return Ok(out);
        }
        let mut monos: std::collections::BTreeSet<&Vec<i64>> = self.linear.keys().collect();
        monos.extend(self.poch.keys());
        for m in monos {
            let e = Exponent::from_signed(m).expect("flipped monomials are nonnegative");
            let mut kmax = 0usize;
            while trunc.fits(&e.scale(kmax as u32 + 1)) {
                kmax += 1;
            }
            if kmax == 0 {
                continue;
            }
            let mut coeffs = vec![Scalar::zero(); kmax + 1];
            coeffs[0] = Scalar::one();
            if let Some(group) = self.linear.get(m) {
                for (c, &power) in group {
                    uni_linear(&mut coeffs, c, power);
                }
            }
            if let Some(group) = self.poch.get(m) {
                for (a, b, q) in group {
                    let w = poch_ratio_coeffs(a, b, q, kmax)?;
                    uni_mul(&mut coeffs, &w);
                }
            }
            let factor = TruncatedSeries::from_terms(
                self.nvars,
                trunc,
                coeffs.into_iter().enumerate().map(|(k, c)| (e.scale(k as u32), c)),
            )?;
            if factor.len() > 1 {
                out = out.mul(&factor)?;
            }
        }
        Ok(out)
    }

    /// The value when no variable factors remain.
    pub fn into_scalar(self) -> Result<Scalar> {
        if !self.linear.values().all(|g| g.values().all(|&p| p == 0)) || !self.poch.is_empty() {
            return Err(Error::Shape("product still depends on the variables".into()));
        }
        Ok(self.scalar)
    }
}

/// Multiplies a truncated univariate series by `(1 - c y)^power`.
fn uni_linear(coeffs: &mut [Scalar], c: &Scalar, power: i32) {
    let len = coeffs.len();
    for _ in 0..power.unsigned_abs() {
        if power > 0 {
            for k in (1..len).rev() {
                let v = c * &coeffs[k - 1];
                coeffs[k] -= v;
            }
        } else {
            for k in 1..len {
                let v = c * &coeffs[k - 1];
                coeffs[k] += v;
            }
        }
    }
}

fn uni_mul(coeffs: &mut [Scalar], w: &[Scalar]) {
    let len = coeffs.len();
    for k in (0..len).rev() {
        let mut acc = Scalar::zero();
        for j in 0..=k {
            if !coeffs[j].is_zero() && !w[k - j].is_zero() {
                acc += &coeffs[j] * &w[k - j];
            }
        }
        coeffs[k] = acc;
    }
}

/// Absolute value helper used by float-free bound checks.
pub fn abs(x: &Scalar) -> Scalar {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: u32) -> Truncation {
        Truncation::Total(d)
    }

    #[test]
    fn geometric_two_variables() {
        let s = geometric_expand(&int(2), &Exponent::new(vec![1, 1]), t(4)).unwrap();
        let want = TruncatedSeries::from_terms(
            2,
            t(4),
            vec![
                (Exponent::new(vec![0, 0]), int(1)),
                (Exponent::new(vec![1, 1]), int(2)),
                (Exponent::new(vec![2, 2]), int(4)),
            ],
        )
        .unwrap();
        assert_eq!(s, want);
    }

    #[test]
    fn constant_geometric_pole() {
        assert!(matches!(geometric_expand(&int(1), &Exponent::zero(2), t(3)), Err(Error::Pole(_))));
    }

    #[test]
    fn poch_first_order() {
        let q = frac(1, 2);
        let s = poch_ratio_expand(&int(0), &q, &q, &Exponent::new(vec![1]), t(1)).unwrap();
        assert_eq!(s.coeff(&Exponent::new(vec![1])), int(1));
    }

    #[test]
    fn ratio_monomials_wrap() {
        assert_eq!(ratio_monomial(3, 2, 1), vec![1, 0, 0]);
        assert_eq!(ratio_monomial(3, 4, 1), vec![1, 1, 1]);
        assert_eq!(ratio_monomial(3, 1, 3), vec![-1, -1, 0]);
        assert_eq!(ratio_monomial(1, 2, 1), vec![1]);
    }

    #[test]
    fn flip_cancels() {
        let mut fp = FactorProduct::new(2);
        fp.push_linear(frac(1, 3), &[-1, 0], 1).unwrap();
        fp.push_linear(int(1), &[-1, 0], -1).unwrap();
        let s = fp.into_series(t(2)).unwrap();
        assert_eq!(s.coeff(&Exponent::zero(2)), frac(1, 3));
    }

    #[test]
    fn laurent_leftover_rejected() {
        let mut fp = FactorProduct::new(1);
        fp.push_linear(int(2), &[-1], 1).unwrap();
        assert!(matches!(fp.into_series(t(2)), Err(Error::Laurent(_))));
    }
}
