//! Convergence estimates for the non-stationary series, checked in complex
//! double precision, plus the two exact product identities they rely on.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::combinatorics::{enumerate_multipartitions, multipartitions_of, partitions_of};
use crate::error::{Error, Result};
use crate::report::{CheckReport, Status};
use crate::series::{geometric_expand, int, ratio_monomial, Exponent, FactorProduct, Scalar, TruncatedSeries, Truncation};
use crate::special::coeffs::big_cn_inf_factors;

/// Inputs of the convergence theorem.
#[derive(Clone, Debug)]
pub struct ConvergenceInput {
    pub n: usize,
    /// Lower bound on `|sin arg(s_i/s_j)|` for `i < j`.
    pub sigma: f64,
    pub q: f64,
    pub kappa: f64,
    pub t: Complex64,
    pub s: Vec<Complex64>,
    /// Radius of the polydisc in the ratio variables.
    pub rho: f64,
}

/// The closed-form constants and what was observed against them.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundReport {
    pub c1: f64,
    pub c2: f64,
    pub rho_max: f64,
    /// Largest `|C(lam)|^{1/|lam|}` seen.
    pub worst_root: f64,
    /// Smallest `(C1 C2)^{|lam|} - |C(lam)|` relative to the bound, over nonempty `lam`.
    pub margin: f64,
    pub checked: usize,
    pub violations: usize,
}

fn regime_ok(q: f64, kappa: f64) -> bool {
    (q.abs() < 1.0 && kappa.abs() > 1.0) || (q.abs() > 1.0 && kappa.abs() < 1.0)
}

impl ConvergenceInput {
    /// Rejects inputs outside the hypotheses of the theorem.
    pub fn validate(&self) -> Result<()> {
        if self.s.len() != self.n || self.n == 0 {
            return Err(Error::Shape("need N spectral values".into()));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::Hypothesis("sigma must be positive".into()));
        }
        if !regime_ok(self.q, self.kappa) {
            return Err(Error::Hypothesis(format!("q = {}, kappa = {} outside both regimes", self.q, self.kappa)));
        }
        for i in 0..self.n {
            for j in i + 1..self.n {
                let sin = (self.s[i] / self.s[j]).arg().sin().abs();
                if sin <= self.sigma {
                    return Err(Error::Hypothesis(format!("|sin arg(s{}/s{})| = {sin} <= sigma", i + 1, j + 1)));
                }
            }
        }
        if self.t.norm() == 0.0 {
            return Err(Error::Hypothesis("t must be nonzero".into()));
        }
        Ok(())
    }

    /// A seeded admissible point: angles spread with margin, `q` and `kappa` from one of the regimes.
    pub fn sample<R: Rng>(rng: &mut R, n: usize) -> Self {
        let step = std::f64::consts::PI / n as f64;
        let phases: Vec<f64> = (0..n).map(|i| i as f64 * step + rng.gen_range(-0.1..0.1) * step).collect();
        let s: Vec<Complex64> = phases.iter().map(|&ph| Complex64::from_polar(rng.gen_range(0.5..2.0), ph)).collect();
        let mut min_sin: f64 = 1.0;
        for i in 0..n {
            for j in i + 1..n {
                min_sin = min_sin.min((s[i] / s[j]).arg().sin().abs());
            }
        }
        let sign = |rng: &mut R| if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let (q, kappa) = if rng.gen_bool(0.5) {
            (sign(rng) * rng.gen_range(0.2..0.8), sign(rng) * rng.gen_range(1.25..4.0))
        } else {
            (sign(rng) * rng.gen_range(1.25..5.0), sign(rng) * rng.gen_range(0.25..0.8))
        };
        let t = Complex64::from_polar(rng.gen_range(0.3..2.0), rng.gen_range(-3.0..3.0));
        ConvergenceInput { n, sigma: 0.9 * min_sin, q, kappa, t, s, rho: 0.0 }
    }
}

/// `C1`, `C2` and the radius `1/(C1 C2)`.
pub fn bounds_c1c2(input: &ConvergenceInput) -> Result<BoundReport> {
    input.validate()?;
    let q = Complex64::new(input.q, 0.0);
    let k = input.kappa.abs();
    let c1 = 1.0 + (Complex64::new(1.0, 0.0) - input.t / q).norm() * (1.0 / input.sigma).max(k / (1.0 - k).abs());
    let c2 = 1.0 + (Complex64::new(1.0, 0.0) - q / input.t).norm() * (1.0 / input.sigma).max(1.0 / (1.0 - input.q.abs()).abs());
    Ok(BoundReport { c1, c2, rho_max: 1.0 / (c1 * c2), worst_root: 0.0, margin: f64::INFINITY, checked: 0, violations: 0 })
}

fn complex_coefficient(lam: &crate::combinatorics::MultiPartition, input: &ConvergenceInput) -> Complex64 {
    big_cn_inf_factors(lam).evaluate_complex(
        Complex64::new(input.q, 0.0),
        input.t,
        Complex64::new(input.kappa, 0.0),
        &input.s,
    )
}

/// `|C(lam)| <= (C1 C2)^{|lam|}` for every multipartition up to weight `d`.
pub fn check_coeff_bound(input: &ConvergenceInput, d: u32) -> Result<BoundReport> {
    let mut rep = bounds_c1c2(input)?;
    let base = rep.c1 * rep.c2;
    for lam in enumerate_multipartitions(input.n, d) {
        let w = lam.weight();
        let c = complex_coefficient(&lam, input).norm();
        let bound = base.powi(w as i32);
        rep.checked += 1;
        if c > bound * (1.0 + 1e-9) || !c.is_finite() {
            rep.violations += 1;
        }
        if w > 0 {
            rep.margin = rep.margin.min((bound - c) / bound);
            rep.worst_root = rep.worst_root.max(c.powf(1.0 / w as f64));
        }
    }
    Ok(rep)
}

/// Outcome of sampling one inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct InequalityReport {
    pub samples: usize,
    pub failures: usize,
    /// Largest `lhs - rhs` seen (negative when everything holds with room).
    pub worst_excess: f64,
}

/// Outcome for all three parts of the fraction estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionEstimates {
    pub a: InequalityReport,
    pub b: InequalityReport,
    pub c: InequalityReport,
}

impl FractionEstimates {
    pub fn passed(&self) -> bool {
        self.a.failures + self.b.failures + self.c.failures == 0
    }
}

fn poch_c(z: Complex64, q: f64, len: u32) -> Complex64 {
    (0..len).fold(Complex64::new(1.0, 0.0), |acc, n| acc * (Complex64::new(1.0, 0.0) - z * q.powi(n as i32)))
}

/// `|(q^l a u;q)_th / (q^l u;q)_th|`.
fn poch_ratio_abs(a: Complex64, u: Complex64, q: f64, l: i32, len: u32) -> f64 {
    let ql = q.powi(l);
    (poch_c(a * u * ql, q, len) / poch_c(u * ql, q, len)).norm()
}

fn record(rep: &mut InequalityReport, lhs: f64, rhs: f64) {
    rep.samples += 1;
    let excess = lhs - rhs;
    rep.worst_excess = rep.worst_excess.max(excess);
    if !(excess <= 1e-12 * rhs.max(1.0)) {
        rep.failures += 1;
    }
}

/// Samples the three fraction estimates within their hypotheses.
pub fn check_fraction_estimates(samples: usize, seed: u64) -> FractionEstimates {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let empty = InequalityReport { samples: 0, failures: 0, worst_excess: f64::NEG_INFINITY };
    let mut rep = FractionEstimates { a: empty.clone(), b: empty.clone(), c: empty };
    for _ in 0..samples {
        let small = rng.gen_bool(0.5);
        let sgn = |r: &mut ChaCha8Rng| if r.gen_bool(0.5) { 1.0 } else { -1.0 };
        let (q, kappa) = if small {
            (sgn(&mut rng) * rng.gen_range(0.1..0.9), sgn(&mut rng) * rng.gen_range(1.1..4.0))
        } else {
            (sgn(&mut rng) * rng.gen_range(1.1..5.0), sgn(&mut rng) * rng.gen_range(0.1..0.9))
        };
        let a = Complex64::from_polar(rng.gen_range(0.0..3.0), rng.gen_range(-3.14..3.14));
        let th: u32 = rng.gen_range(0..=8);
        let m: i32 = rng.gen_range(0..=5);

        // (a): u off the real axis, any integer l
        let u = Complex64::from_polar(rng.gen_range(0.1..5.0), rng.gen_range(0.05..3.09) * sgn(&mut rng));
        let l: i32 = rng.gen_range(-6..=6);
        let rhs = (1.0 + (Complex64::new(1.0, 0.0) - a).norm() / u.arg().sin().abs()).powi(th as i32);
        record(&mut rep.a, poch_ratio_abs(a, u, q, l, th), rhs);

        // (b): kappa^ell with ell >= 1
        let ell: i32 = rng.gen_range(1..=4);
        let u = Complex64::new(kappa.powi(ell), 0.0);
        let k = kappa.abs();
        let rhs = (1.0 + (Complex64::new(1.0, 0.0) - a).norm() * k / (1.0 - k).abs()).powi(th as i32);
        record(&mut rep.b, poch_ratio_abs(a, u, q, -(th as i32) - m + 1, th), rhs);

        // (c): kappa^ell with ell >= 0
        let ell: i32 = rng.gen_range(0..=4);
        let u = Complex64::new(kappa.powi(ell), 0.0);
        let rhs = (1.0 + (Complex64::new(1.0, 0.0) - a).norm() / (1.0 - q.abs()).abs()).powi(th as i32);
        record(&mut rep.c, poch_ratio_abs(a, u, q, -(th as i32) - m, th), rhs);
    }
    rep
}

/// Partial sums of the non-stationary series at a point of the polydisc.
#[derive(Clone, Debug, PartialEq)]
pub struct PartialSumReport {
    pub bounds: BoundReport,
    pub sums: Vec<Complex64>,
    /// `|S_D - S_{D-1}|` for `D >= 1`.
    pub increments: Vec<f64>,
    /// Increments that exceed `#{|lam| = D} (rho C1 C2)^D`.
    pub violations: usize,
}

/// Sums `C(lam) z^lam` grade by grade at the chart point `z` with every `|z_i| <= rho`.
pub fn partial_sums(input: &ConvergenceInput, z: &[Complex64], d_max: u32) -> Result<PartialSumReport> {
    let bounds = bounds_c1c2(input)?;
    if z.len() != input.n {
        return Err(Error::Shape("need N chart values".into()));
    }
    if z.iter().any(|v| v.norm() > input.rho) || input.rho >= bounds.rho_max {
        return Err(Error::Hypothesis("point outside the convergence polydisc".into()));
    }
    let alpha = input.rho * bounds.c1 * bounds.c2;
    let mut sums = Vec::new();
    let mut increments = Vec::new();
    let mut violations = 0;
    let mut acc = Complex64::new(0.0, 0.0);
    for d in 0..=d_max {
        let grade = multipartitions_of(input.n, d);
        let count = grade.len() as f64;
        let inc: Complex64 = grade
            .iter()
            .map(|lam| {
                let mono = lam.monomial();
                let zpow = mono.iter().zip(z).fold(Complex64::new(1.0, 0.0), |p, (&e, &v)| p * v.powi(e as i32));
                complex_coefficient(lam, input) * zpow
            })
            .sum();
        acc += inc;
        sums.push(acc);
        if d > 0 {
            let size = inc.norm();
            if size > count * alpha.powi(d as i32) * (1.0 + 1e-9) {
                violations += 1;
            }
            increments.push(size);
        }
    }
    Ok(PartialSumReport { bounds, sums, increments, violations })
}

/// Partitions counted by weight against the expansion of `1/(alpha;alpha)_inf`.
pub fn check_euler_identity(d: u32) -> Result<CheckReport> {
    let mut rep = CheckReport::new("euler", Status::Proven);
    let trunc = Truncation::Total(d);
    let lhs = TruncatedSeries::from_terms(
        1,
        trunc,
        (0..=d).map(|w| (Exponent::new(vec![w]), int(partitions_of(w).len() as i64))),
    )?;
    let mut rhs = TruncatedSeries::one(1, trunc);
    for k in 1..=d {
        rhs = rhs.mul(&geometric_expand(&int(1), &Exponent::new(vec![k]), trunc)?)?;
    }
    rep.compare("partition counts", &lhs, &rhs)?;
    Ok(rep)
}

/// Single products over `j > i` with `x_{j+N} = p x_j`, against double
/// q-Pochhammer products over the block.
pub fn check_block_products(a: &Scalar, b: &Scalar, q: &Scalar, n: usize, d: u32) -> Result<CheckReport> {
    let mut rep = CheckReport::new("lemmaD2", Status::Proven);
    let trunc = Truncation::Total(d);
    let nn = n as i64;
    let dd = d as i64;
    let mut left = FactorProduct::new(n);
    for i in 1..=nn {
        for j in i + 1..=i + dd {
            left.push_poch_ratio(a.clone(), b.clone(), q.clone(), &ratio_monomial(n, j, i))?;
        }
    }
    let mut right = FactorProduct::new(n);
    let mut double = |num: i64, den: i64| -> Result<()> {
        // (P^m a X;q)_inf / (P^m b X;q)_inf for m >= 0 with P = p
        let mut top = num;
        while top - den <= dd {
            right.push_poch_ratio(a.clone(), b.clone(), q.clone(), &ratio_monomial(n, top, den))?;
            top += nn;
        }
        Ok(())
    };
    for i in 1..=nn {
        for j in i..=nn {
            if i < j {
                double(j, i)?;
            }
            double(i + nn, j)?;
        }
    }
    rep.compare("products", &left.into_series(trunc)?, &right.into_series(trunc)?)?;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_example() {
        let input = ConvergenceInput {
            n: 1,
            sigma: 0.5,
            q: 0.5,
            kappa: 2.0,
            t: Complex64::new(1.0, 0.0),
            s: vec![Complex64::new(1.0, 0.0)],
            rho: 0.1,
        };
        let b = bounds_c1c2(&input).unwrap();
        assert!((b.c1 - 3.0).abs() < 1e-12);
        assert!((b.c2 - 2.0).abs() < 1e-12);
        assert!((b.rho_max - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn kappa_branch() {
        let input = ConvergenceInput {
            n: 1,
            sigma: 1.0,
            q: 0.5,
            kappa: 1.5,
            t: Complex64::new(1.0, 0.0),
            s: vec![Complex64::new(1.0, 0.0)],
            rho: 0.1,
        };
        let b = bounds_c1c2(&input).unwrap();
        assert!((b.c1 - 4.0).abs() < 1e-12);
    }
}
