//! q-Pochhammer symbols, Nekrasov factors, parameter points and the
//! coefficient formulas of the series.

mod atoms;
pub mod coeffs;

pub use atoms::{Atom, ChartKind, FactorList, FormalChart};

use num_traits::{One, Zero};
use rand::Rng;

use crate::combinatorics::Partition;
use crate::error::{Error, Result};
use crate::series::{int, powi, Scalar};

/// `(z;q)_k`, for negative `k` the inverse product `1/prod_{n=1}^{-k} (1 - q^{-n} z)`.
pub fn qpoch(z: &Scalar, q: &Scalar, k: i64) -> Result<Scalar> {
    let mut acc = Scalar::one();
    if k >= 0 {
        let mut zq = z.clone();
        for _ in 0..k {
            acc *= Scalar::one() - &zq;
            zq *= q;
        }
        return Ok(acc);
    }
    if q.is_zero() {
        return Err(Error::Pole("negative length with q = 0".into()));
    }
    let qi = q.recip();
    let mut zq = z * &qi;
    for _ in 0..(-k) {
        acc *= Scalar::one() - &zq;
        zq *= &qi;
    }
    if acc.is_zero() {
        return Err(Error::Pole("negative-length q-Pochhammer at a pole".into()));
    }
    Ok(acc.recip())
}

/// Checks `(q^{-m}/a;q)_m / (q^{-m}/b;q)_m = (b/a)^m (qa;q)_m / (qb;q)_m` exactly.
pub fn poch_flip_check(a: &Scalar, b: &Scalar, q: &Scalar, m: i64) -> Result<bool> {
    if a.is_zero() || b.is_zero() || q.is_zero() {
        return Err(Error::Pole("flip identity needs nonzero a, b, q".into()));
    }
    let qm = powi(q, -m)?;
    let ratio = |x: Scalar, y: Scalar| -> Result<Scalar> {
        if y.is_zero() {
            return Err(Error::Pole("flip identity denominator vanishes".into()));
        }
        Ok(x / y)
    };
    let lhs = ratio(qpoch(&(&qm / a), q, m)?, qpoch(&(&qm / b), q, m)?)?;
    let rhs = powi(&(b / a), m)? * ratio(qpoch(&(q * a), q, m)?, qpoch(&(q * b), q, m)?)?;
    Ok(lhs == rhs)
}

/// The Nekrasov factor `N^{(k|N)}_{lam,mu}(u|q,kappa)` evaluated directly.
pub fn nekrasov(lam: &Partition, mu: &Partition, k: i64, n: usize, u: &Scalar, q: &Scalar, kappa: &Scalar) -> Result<Scalar> {
    let nn = n as i64;
    let mut v = Scalar::one();
    for b in 1..=lam.len() as i64 {
        let len = lam.part(b) - lam.part(b + 1);
        for a in 1..=b {
            if (b - a - k).rem_euclid(nn) == 0 {
                let z = u * powi(q, -mu.part(a) + lam.part(b + 1))? * powi(kappa, b - a)?;
                v *= qpoch(&z, q, len)?;
            }
        }
    }
    for beta in 1..=mu.len() as i64 {
        let len = mu.part(beta) - mu.part(beta + 1);
        for alpha in 1..=beta {
            if (beta - alpha + k + 1).rem_euclid(nn) == 0 {
                let z = u * powi(q, lam.part(alpha) - mu.part(beta))? * powi(kappa, alpha - beta - 1)?;
                v *= qpoch(&z, q, len)?;
            }
        }
    }
    Ok(v)
}

/// One exact specialization of `(q, t, kappa, s)` with `q = r^2`.
///
/// `t_curve` and `s_curve` describe an approach curve
/// `t -> t (1+e)^t_curve`, `s_i -> s_i (1+e)^s_curve[i]` along which
/// coefficients are evaluated as limits. They are zero at generic points and
/// only matter where a formula degenerates to `0/0`, such as
/// `s_i = t^{N-i} q^{lambda_i}` with `t` an integer power of `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPoint {
    pub r: Scalar,
    pub q: Scalar,
    pub t: Scalar,
    pub kappa: Scalar,
    pub s: Vec<Scalar>,
    /// `t = q^beta` when set.
    pub beta: Option<i64>,
    pub t_curve: i64,
    pub s_curve: Vec<i64>,
}

impl ParamPoint {
    pub fn new(r: Scalar, t: Scalar, kappa: Scalar, s: Vec<Scalar>) -> Result<Self> {
        if r.is_zero() || t.is_zero() || kappa.is_zero() || s.iter().any(Zero::is_zero) {
            return Err(Error::Invalid("parameters must be nonzero".into()));
        }
        if s.is_empty() {
            return Err(Error::Invalid("need at least one spectral variable".into()));
        }
        let n = s.len();
        Ok(ParamPoint { q: &r * &r, r, t, kappa, s, beta: None, t_curve: 0, s_curve: vec![0; n] })
    }

    /// `s_i = t^{N-i} q^{lambda_i}` for a given `t`.
    pub fn spectral(r: Scalar, t: Scalar, kappa: Scalar, lambda: &[i64]) -> Result<Self> {
        let n = lambda.len();
        let q = &r * &r;
        let s = lambda
            .iter()
            .enumerate()
            .map(|(i0, &l)| Ok(powi(&t, (n - 1 - i0) as i64)? * powi(&q, l)?))
            .collect::<Result<Vec<_>>>()?;
        let mut p = ParamPoint::new(r, t, kappa, s)?;
        p.t_curve = 1;
        p.s_curve = (0..n).map(|i0| (n - 1 - i0) as i64).collect();
        Ok(p)
    }

    /// Spectral point with `t = q^beta`.
    pub fn spectral_beta(r: Scalar, beta: i64, kappa: Scalar, lambda: &[i64]) -> Result<Self> {
        let t = powi(&(&r * &r), beta)?;
        let mut p = ParamPoint::spectral(r, t, kappa, lambda)?;
        p.beta = Some(beta);
        Ok(p)
    }

    /// Balanced spectral point: `t_B = q^{1-beta}` and
    /// `s_i = (q/t_B)^{N-i} q^{lambda_i}`.
    pub fn balanced_spectral_beta(r: Scalar, beta: i64, kappa: Scalar, lambda: &[i64]) -> Result<Self> {
        let mut p = ParamPoint::spectral_beta(r, beta, kappa, lambda)?;
        p.t = powi(&p.q, 1 - beta)?;
        p.t_curve = -1;
        p.beta = Some(1 - beta);
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// Same point with `t` replaced, dropping any curve and `beta`.
    pub fn with_t(&self, t: Scalar) -> Self {
        ParamPoint { t, beta: None, t_curve: 0, s_curve: vec![0; self.n()], ..self.clone() }
    }

    /// Same point with the spectral variables replaced.
    pub fn with_s(&self, s: Vec<Scalar>) -> Self {
        let n = s.len();
        ParamPoint { s, t_curve: 0, s_curve: vec![0; n], ..self.clone() }
    }

    /// `s_j` with `s_{j+N} = kappa s_j`, and its curve exponent.
    fn s_value(&self, j: i64) -> Result<(Scalar, i64)> {
        let n = self.n() as i64;
        let l = (j - 1).div_euclid(n);
        let base = (j - 1).rem_euclid(n) as usize;
        Ok((&self.s[base] * powi(&self.kappa, l)?, self.s_curve[base]))
    }

    /// Value `C` and curve exponent `k` of an atom: it equals `C (1+e)^k`.
    pub fn atom_value(&self, a: &Atom) -> Result<(Scalar, i64)> {
        let (sn, kn) = self.s_value(a.num)?;
        let (sd, kd) = self.s_value(a.den)?;
        let c = powi(&self.q, a.q)? * powi(&self.t, a.t)? * powi(&self.kappa, a.kappa)? * sn / sd;
        Ok((c, a.t * self.t_curve + kn - kd))
    }

    /// A seeded generic point in `N` spectral variables.
    pub fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        let r = small_rational(rng);
        let t = small_rational(rng);
        let kappa = small_rational(rng);
        let s = (0..n).map(|_| small_rational(rng)).collect();
        ParamPoint::new(r, t, kappa, s).expect("small rationals are nonzero")
    }
}

/// A rational of small height in `(0,1)` or `(1,2)`.
pub fn small_rational<R: Rng>(rng: &mut R) -> Scalar {
    loop {
        let d: i64 = rng.gen_range(2..=9);
        let n: i64 = rng.gen_range(1..2 * d);
        if n != d {
            return int(n) / int(d);
        }
    }
}
