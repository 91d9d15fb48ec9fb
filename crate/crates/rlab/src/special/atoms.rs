//! Symbolic products of `(1 - atom)` factors and their evaluation on numeric
//! points, on approach curves, in formal charts and in complex floats.

use std::collections::BTreeMap;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::series::{powi, ratio_monomial, FactorProduct, Scalar};

use super::ParamPoint;

/// The monomial `q^q t^t kappa^kappa s_num / s_den` in the parameters.
///
/// Indices are 1-based and may leave `1..=N`; the chart decides what
/// `s_{j+N}` means.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub q: i64,
    pub t: i64,
    pub kappa: i64,
    pub num: i64,
    pub den: i64,
}

impl Atom {
    pub fn ratio(num: i64, den: i64) -> Self {
        Atom { q: 0, t: 0, kappa: 0, num, den }
    }

    pub fn with_q(mut self, e: i64) -> Self {
        self.q += e;
        self
    }

    pub fn with_t(mut self, e: i64) -> Self {
        self.t += e;
        self
    }

    pub fn with_kappa(mut self, e: i64) -> Self {
        self.kappa += e;
        self
    }

    /// Shifts both indices into the same period so equal atoms compare equal.
    fn normalized(self, n: usize) -> Self {
        let n = n as i64;
        let shift = (self.den - 1).div_euclid(n) * n;
        Atom { num: self.num - shift, den: self.den - shift, ..self }
    }
}

/// `q^q t^t prod (1 - atom)^mult`, kept symbolic until evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorList {
    n: usize,
    q: i64,
    t: i64,
    factors: BTreeMap<Atom, i32>,
}

impl FactorList {
    pub fn new(n: usize) -> Self {
        FactorList { n, q: 0, t: 0, factors: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Multiplies by `q^qe t^te`.
    pub fn monomial(&mut self, qe: i64, te: i64) {
        self.q += qe;
        self.t += te;
    }

    /// Multiplies by `(1 - atom)^power`.
    pub fn push(&mut self, atom: Atom, power: i32) {
        if power == 0 {
            return;
        }
        let key = atom.normalized(self.n);
        let slot = self.factors.entry(key).or_insert(0);
        *slot += power;
        if *slot == 0 {
            self.factors.remove(&key);
        }
    }

    /// Multiplies by `(atom; q)_len ^ power`.
    pub fn poch(&mut self, atom: Atom, len: i64, power: i32) {
        for k in 0..len.max(0) {
            self.push(atom.with_q(k), power);
        }
    }

    pub fn extend(&mut self, other: &FactorList) {
        self.q += other.q;
        self.t += other.t;
        for (&a, &p) in &other.factors {
            self.push(a, p);
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty() && self.q == 0 && self.t == 0
    }

    pub fn factors(&self) -> impl Iterator<Item = (&Atom, &i32)> {
        self.factors.iter()
    }

    /// Exact value at a point. Along the point's approach curve each factor
    /// is `1 - C (1 + e)^k`; the value is the `e -> 0` limit of the product.
    pub fn evaluate(&self, point: &ParamPoint) -> Result<Scalar> {
        let mut lead = powi(&point.q, self.q)? * powi(&point.t, self.t)?;
        let mut order: i64 = 0;
        let mut vanishes = false;
        for (atom, &m) in &self.factors {
            let (c, k) = point.atom_value(atom)?;
            let v = Scalar::one() - &c;
            if !v.is_zero() {
                lead *= powi(&v, m as i64)?;
            } else if k != 0 {
                order += m as i64;
                lead *= powi(&Scalar::from_integer((-k).into()), m as i64)?;
            } else if m > 0 {
                vanishes = true;
            } else {
                return Err(Error::Pole(format!("factor {atom:?} vanishes identically")));
            }
        }
        if vanishes || order > 0 {
            return Ok(Scalar::zero());
        }
        if order < 0 {
            return Err(Error::Pole(format!("coefficient has a pole of order {}", -order)));
        }
        Ok(lead)
    }

    /// Pushes the factors into a series product in a formal chart.
    pub fn push_formal(&self, chart: &FormalChart, fp: &mut FactorProduct) -> Result<()> {
        fp.scale(&(powi(&chart.q, self.q)? * powi(&chart.t, self.t)?));
        for (atom, &m) in &self.factors {
            let (c, mono) = chart.atom(atom)?;
            fp.push_linear(c, &mono, m)?;
        }
        Ok(())
    }

    /// Complex float value with `s_{j+N} = kappa s_j`.
    pub fn evaluate_complex(&self, q: Complex64, t: Complex64, kappa: Complex64, s: &[Complex64]) -> Complex64 {
        let n = s.len() as i64;
        let sv = |j: i64| {
            let l = (j - 1).div_euclid(n);
            s[(j - 1).rem_euclid(n) as usize] * kappa.powi(l as i32)
        };
        let mut v = q.powi(self.q as i32) * t.powi(self.t as i32);
        for (a, &m) in &self.factors {
            let x = q.powi(a.q as i32) * t.powi(a.t as i32) * kappa.powi(a.kappa as i32) * sv(a.num) / sv(a.den);
            v *= (Complex64::one() - x).powi(m);
        }
        v
    }
}

/// Which variables stand in for `s` when a coefficient is expanded formally.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChartKind {
    /// `N - 1` ratios, no periodic extension.
    Trig,
    /// `N` cyclic ratios with `s_{j+N} = kappa s_j` and `kappa` read as the nome.
    Periodic,
    /// Balanced coordinates: `kappa^k s_a/s_b` is the unbalanced
    /// `s_{a+lN}/s_b` with `l = (k - (a - b))/N`.
    Balanced,
}

/// Formal chart: atoms become `coefficient * monomial` in a block of
/// `nvars` variables starting at `offset` inside a series of `total` variables.
#[derive(Clone, Debug)]
pub struct FormalChart {
    pub n: usize,
    pub kind: ChartKind,
    pub offset: usize,
    pub total: usize,
    pub q: Scalar,
    pub t: Scalar,
}

impl FormalChart {
    pub fn nvars(&self) -> usize {
        match self.kind {
            ChartKind::Trig => self.n - 1,
            _ => self.n,
        }
    }

    /// Coefficient and signed monomial of an atom.
    pub fn atom(&self, a: &Atom) -> Result<(Scalar, Vec<i64>)> {
        let c = powi(&self.q, a.q)? * powi(&self.t, a.t)?;
        let n = self.n as i64;
        let full = match self.kind {
            ChartKind::Trig => {
                if a.kappa != 0 {
                    return Err(Error::Shape("kappa in a trigonometric chart".into()));
                }
                let m = ratio_monomial(self.n, a.num, a.den);
                if a.num < 1 || a.den < 1 || a.num > n || a.den > n {
                    return Err(Error::Shape(format!("index outside 1..N in {a:?}")));
                }
                m[..self.n - 1].to_vec()
            }
            ChartKind::Periodic => ratio_monomial(self.n, a.num + a.kappa * n, a.den),
            ChartKind::Balanced => {
                let d = a.kappa - (a.num - a.den);
                if d.rem_euclid(n) != 0 {
                    return Err(Error::NotRealizable(format!("{a:?} needs a fractional power of p")));
                }
                ratio_monomial(self.n, a.num + d, a.den)
            }
        };
        let mut mono = vec![0i64; self.total];
        mono[self.offset..self.offset + full.len()].copy_from_slice(&full);
        Ok((c, mono))
    }
}
