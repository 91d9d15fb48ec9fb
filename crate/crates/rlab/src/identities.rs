//! Named identity checks with their default ranges, shared by the command
//! line and the acceptance suite.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::combinatorics::{enumerate_multipartitions, enumerate_partitions, enumerate_periodic_theta, theta_to_multipartition, Partition};
use crate::convergence::{self, ConvergenceInput};
use crate::error::{Error, Result};
use crate::operators::{
    apply_d_trig, apply_e, apply_t_balanced, apply_t_nonstat, apply_t_trig, check_commutativity, eigenvalue_eps, DeltaMode,
    EigenReport, OperatorContext,
};
use crate::report::{CheckReport, Status};
use crate::ruijsenaars::{
    check_chi_duality, check_duality_nonstat, check_duality_trig, check_gl_transfer, check_macdonald_reduction,
    check_nome_limit, f_gl_balanced, f_nonstat, f_trig, SeriesRequest,
};
use crate::series::{frac, int, powi, Exponent, Scalar, TruncatedSeries, Truncation};
use crate::special::coeffs::{coeff_big_cn_inf, coeff_cn_inf, coeff_ctilde, coeff_ctilde_nekrasov};
use crate::special::{small_rational, ParamPoint};

/// The checks exposed by name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Identity {
    ThetaForms,
    NekrasovForms,
    NomeLimit,
    Macdonald,
    DualityTrig,
    DualityNonstat,
    ChiDuality,
    TrigEigen,
    Commutativity,
    NonstatEigen,
    BalancedEigen,
    Euler,
    BlockProducts,
    FractionEstimates,
    Bounds,
}

impl Identity {
    pub const ALL: [Identity; 15] = [
        Identity::ThetaForms,
        Identity::NekrasovForms,
        Identity::NomeLimit,
        Identity::Macdonald,
        Identity::DualityTrig,
        Identity::DualityNonstat,
        Identity::ChiDuality,
        Identity::TrigEigen,
        Identity::Commutativity,
        Identity::NonstatEigen,
        Identity::BalancedEigen,
        Identity::Euler,
        Identity::BlockProducts,
        Identity::FractionEstimates,
        Identity::Bounds,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Identity::ThetaForms => "lemma3_5",
            Identity::NekrasovForms => "thm3_2",
            Identity::NomeLimit => "cor3_4",
            Identity::Macdonald => "macdonald",
            Identity::DualityTrig => "duality_trig",
            Identity::DualityNonstat => "duality_nonstat",
            Identity::ChiDuality => "chi_duality",
            Identity::TrigEigen => "prop4_2",
            Identity::Commutativity => "commutativity",
            Identity::NonstatEigen => "conj4_6",
            Identity::BalancedEigen => "fact4_9",
            Identity::Euler => "euler",
            Identity::BlockProducts => "lemmaD2",
            Identity::FractionEstimates => "lemmaB1",
            Identity::Bounds => "bounds",
        }
    }

    pub fn status(self) -> Status {
        match self {
            Identity::DualityNonstat | Identity::NonstatEigen | Identity::BalancedEigen => Status::Conjecture,
            _ => Status::Proven,
        }
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Identity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identity::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown identity {s:?}")))
    }
}

/// Inputs of a named check. Unset fields fall back to seeded samples.
#[derive(Clone, Debug)]
pub struct CheckConfig {
    pub n: usize,
    pub order: u32,
    pub dual_order: Option<u32>,
    pub r: Scalar,
    pub t: Option<Scalar>,
    pub kappa: Option<Scalar>,
    pub s: Option<Vec<Scalar>>,
    pub lambda: Option<Vec<i64>>,
    pub beta: i64,
    pub seed: u64,
    /// Seeded points or bodies per check.
    pub samples: usize,
}

impl CheckConfig {
    pub fn new(n: usize, order: u32) -> Self {
        CheckConfig {
            n,
            order,
            dual_order: None,
            r: frac(1, 2),
            t: None,
            kappa: None,
            s: None,
            lambda: None,
            beta: 1,
            seed: 0,
            samples: 3,
        }
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    /// The configured point, or a seeded generic one.
    fn point(&self, rng: &mut ChaCha8Rng) -> Result<ParamPoint> {
        let mut p = ParamPoint::random(rng, self.n);
        p.r = self.r.clone();
        p.q = &self.r * &self.r;
        if let Some(t) = &self.t {
            p.t = t.clone();
        }
        if let Some(k) = &self.kappa {
            p.kappa = k.clone();
        }
        if let Some(s) = &self.s {
            if s.len() != self.n {
                return Err(Error::Shape(format!("{} spectral values for N = {}", s.len(), self.n)));
            }
            p = p.with_s(s.clone());
        }
        Ok(p)
    }

    fn fixed_point(&self) -> bool {
        self.s.is_some() && self.t.is_some() && self.kappa.is_some()
    }

    fn lambda_or_zero(&self) -> Result<Vec<i64>> {
        let lam = self.lambda.clone().unwrap_or_else(|| vec![0; self.n]);
        if lam.len() != self.n {
            return Err(Error::Shape(format!("lambda of length {} for N = {}", lam.len(), self.n)));
        }
        Ok(lam)
    }
}

/// Runs `probe` at `count` seeded points, redrawing a point when it hits a pole.
fn at_points<F>(cfg: &CheckConfig, name: &str, status: Status, mut probe: F) -> Result<CheckReport>
where
    F: FnMut(&ParamPoint) -> Result<CheckReport>,
{
    let mut rep = CheckReport::new(name, status);
    let mut rng = cfg.rng();
    let count = if cfg.fixed_point() { 1 } else { cfg.samples };
    let mut done = 0;
    let mut redraws = 0;
    while done < count {
        let p = cfg.point(&mut rng)?;
        match probe(&p) {
            Err(Error::Pole(_)) if !cfg.fixed_point() && redraws < 50 => redraws += 1,
            other => {
                rep.merge(other?);
                done += 1;
            }
        }
    }
    Ok(rep)
}

/// Matrix and multipartition forms of the non-stationary coefficient agree.
pub fn check_theta_forms(point: &ParamPoint, d: u32) -> Result<CheckReport> {
    let mut rep = CheckReport::new("lemma3_5", Status::Proven);
    let thetas = enumerate_periodic_theta(point.n(), d);
    let mismatches: Vec<Option<String>> = thetas
        .par_iter()
        .map(|th| {
            let lam = theta_to_multipartition(th);
            let (a, b) = (coeff_cn_inf(th, point)?, coeff_big_cn_inf(&lam, point)?);
            Ok((a != b).then(|| format!("{lam}: {a} vs {b}")))
        })
        .collect::<Result<_>>()?;
    rep.checked = thetas.len();
    rep.max_degree = thetas.iter().map(|th| th.zdegree()).max().unwrap_or(0);
    mismatches.into_iter().flatten().take(1).for_each(|m| rep.fail(m));
    Ok(rep)
}

/// The kappa-cancelled and literal Nekrasov forms match the multipartition
/// coefficient, and the balanced series transfers to the unbalanced one.
pub fn check_nekrasov_forms(point: &ParamPoint, d: u32) -> Result<CheckReport> {
    let mut rep = CheckReport::new("thm3_2", Status::Proven);
    let root = point.kappa.clone();
    let mut unbalanced = point.clone();
    unbalanced.kappa = powi(&root, point.n() as i64)?;
    let lams: Vec<_> = enumerate_multipartitions(point.n(), d).collect();
    let mismatches: Vec<Option<String>> = lams
        .par_iter()
        .map(|lam| {
            let want = coeff_big_cn_inf(lam, point)?;
            let cancelled = coeff_ctilde(lam, point)?;
            if cancelled != want {
                return Ok(Some(format!("{lam}: cancelled form {cancelled} vs {want}")));
            }
            let literal = coeff_ctilde_nekrasov(lam, &unbalanced, &root)?;
            let literal_want = coeff_big_cn_inf(lam, &unbalanced)?;
            Ok((literal != literal_want).then(|| format!("{lam}: Nekrasov form {literal} vs {literal_want}")))
        })
        .collect::<Result<_>>()?;
    rep.checked = 2 * lams.len();
    rep.max_degree = d;
    mismatches.into_iter().flatten().take(1).for_each(|m| rep.fail(m));
    rep.merge(check_gl_transfer(&SeriesRequest::new(point.clone(), d.min(4)), &root)?);
    Ok(rep)
}

fn prefixed(f: TruncatedSeries, lam: &[i64]) -> TruncatedSeries {
    f.with_prefix(Some(lam.iter().map(|&l| int(l)).collect()))
}

fn eps(lam: &[i64], beta: i64, r: &Scalar) -> Result<Scalar> {
    let n = lam.len();
    let ex: Vec<Scalar> = lam.iter().enumerate().map(|(i, &l)| int(l + beta * (n - 1 - i) as i64)).collect();
    eigenvalue_eps(&ex, r)
}

fn eigen_report(name: &str, status: Status, rep: EigenReport) -> CheckReport {
    let mut out = CheckReport::new(name, status);
    out.checked = rep.lhs.len().max(rep.rhs.len());
    out.max_degree = rep.max_checked_degree;
    if let Some(d) = &rep.first_discrepancy {
        out.fail(CheckReport::discrepancy("residual", d));
    }
    out
}

/// `T x^lam f_trig = eps x^lam f_trig` with `t = q^beta`.
pub fn check_trig_eigen(n: usize, r: &Scalar, beta: i64, lam: &[i64], d: u32) -> Result<CheckReport> {
    let p = ParamPoint::spectral_beta(r.clone(), beta, int(1), lam)?;
    let f = prefixed(f_trig(&SeriesRequest::new(p, d))?, lam);
    let ctx = OperatorContext::with_beta(n, r.clone(), beta)?;
    let lhs = apply_t_trig(&f, &ctx, &DeltaMode::Integer { beta })?;
    let rep = EigenReport::new(lhs, f.scale(&eps(lam, beta, r)?))?;
    Ok(eigen_report("prop4_2", Status::Proven, rep))
}

/// `T x^lam f_nonstat = eps x^lam f_nonstat` with `t = q^beta`.
pub fn check_nonstat_eigen(n: usize, r: &Scalar, beta: i64, kappa: &Scalar, lam: &[i64], d: u32) -> Result<CheckReport> {
    let p = ParamPoint::spectral_beta(r.clone(), beta, kappa.clone(), lam)?;
    let f = prefixed(f_nonstat(&SeriesRequest::new(p, d))?, lam);
    let ctx = OperatorContext::with_beta(n, r.clone(), beta)?;
    let lhs = apply_t_nonstat(&f, &ctx, kappa, &DeltaMode::Integer { beta })?;
    let rep = EigenReport::new(lhs, f.scale(&eps(lam, beta, r)?))?;
    Ok(eigen_report("conj4_6", Status::Conjecture, rep))
}

/// Balanced operator on the balanced series at `t_B = q^{1-beta}`, where
/// the spectral values coincide with the unbalanced ones at `t = q^beta`.
pub fn check_balanced_eigen(n: usize, r: &Scalar, beta: i64, kappa: &Scalar, lam: &[i64], d: u32) -> Result<CheckReport> {
    let p = ParamPoint::balanced_spectral_beta(r.clone(), beta, kappa.clone(), lam)?;
    let f = prefixed(f_gl_balanced(&SeriesRequest::new(p.clone(), d))?, lam);
    let ctx = OperatorContext::new(n, r.clone(), p.t.clone());
    let lhs = apply_t_balanced(&f, &ctx, kappa, &DeltaMode::Integer { beta })?;
    let rep = EigenReport::new(lhs, f.scale(&eps(lam, beta, r)?))?;
    Ok(eigen_report("fact4_9", Status::Conjecture, rep))
}

/// A seeded body in `nvars` variables with small rational coefficients.
pub fn random_body<R: Rng>(rng: &mut R, nvars: usize, d: u32, terms: usize) -> Result<TruncatedSeries> {
    let items: Vec<(Exponent, Scalar)> = (0..terms)
        .map(|_| {
            let mut e = vec![0u32; nvars];
            let mut budget = rng.gen_range(0..=d);
            for slot in e.iter_mut() {
                let k = rng.gen_range(0..=budget);
                *slot = k;
                budget -= k;
            }
            let c = small_rational(rng) - int(1);
            (Exponent::new(e), c)
        })
        .collect();
    let mut body = TruncatedSeries::from_terms(nvars, Truncation::Total(d), items)?;
    if body.coeff(&Exponent::zero(nvars)) == int(0) {
        body = body.add(&TruncatedSeries::one(nvars, Truncation::Total(d)))?;
    }
    Ok(body)
}

/// On the balanced chart with one variable, both operators act identically
/// on any body under `t_B = q/t`.
pub fn check_balanced_single(r: &Scalar, beta: i64, kappa: &Scalar, body: &TruncatedSeries) -> Result<CheckReport> {
    let unbalanced = OperatorContext::with_beta(1, r.clone(), beta)?;
    let balanced = OperatorContext::with_beta(1, r.clone(), 1 - beta)?;
    let mode = DeltaMode::Integer { beta };
    let a = apply_t_nonstat(body, &unbalanced, kappa, &mode)?;
    let b = apply_t_balanced(body, &balanced, kappa, &mode)?;
    Ok(eigen_report("fact4_9", Status::Conjecture, EigenReport::new(a, b)?))
}

/// `E^sign f_trig = e_1(s^sign) f_trig`.
pub fn check_e_eigen(point: &ParamPoint, d: u32) -> Result<CheckReport> {
    let mut rep = CheckReport::new("e_eigen", Status::Proven);
    let n = point.n();
    let f = f_trig(&SeriesRequest::new(point.clone(), d))?;
    let ctx = OperatorContext::new(n, point.r.clone(), point.t.clone());
    for sign in [1, -1] {
        let ev = point.s.iter().map(|s| powi(s, sign)).sum::<Result<Scalar>>()?;
        rep.compare(&format!("sign {sign}"), &apply_e(&f, sign, &point.s, &ctx)?, &f.scale(&ev))?;
    }
    Ok(rep)
}

/// `D^sign (x^lam f) = x^lam E^sign f` at `s_i = t^{N-i} q^{lam_i}`.
pub fn check_intertwining(ctx: &OperatorContext, lam: &[i64], body: &TruncatedSeries) -> Result<CheckReport> {
    let mut rep = CheckReport::new("intertwining", Status::Proven);
    let n = ctx.n;
    let s = lam
        .iter()
        .enumerate()
        .map(|(i, &l)| Ok(powi(&ctx.t, (n - 1 - i) as i64)? * powi(&ctx.q, l)?))
        .collect::<Result<Vec<_>>>()?;
    let pref = prefixed(body.clone(), lam);
    for sign in [1, -1] {
        let lhs = apply_d_trig(&pref, sign, ctx)?;
        let rhs = prefixed(apply_e(body, sign, &s, ctx)?, lam);
        rep.compare(&format!("sign {sign}"), &lhs, &rhs)?;
    }
    Ok(rep)
}

fn partitions_for(cfg: &CheckConfig) -> Result<Vec<Partition>> {
    match &cfg.lambda {
        Some(l) => {
            let parts: Vec<u32> = l
                .iter()
                .map(|&x| u32::try_from(x).map_err(|_| Error::Invalid(format!("negative part {x}"))))
                .collect::<Result<_>>()?;
            let p = Partition::new(parts.into_iter().filter(|&x| x > 0).collect())
                .ok_or_else(|| Error::Invalid(format!("{l:?} is not a partition")))?;
            Ok(vec![p])
        }
        None => Ok(enumerate_partitions(cfg.order.min(4)).filter(|p| p.len() <= cfg.n).collect()),
    }
}

/// Seeded admissible inputs for the convergence checks.
pub fn admissible_inputs(n: usize, count: usize, seed: u64) -> Vec<ConvergenceInput> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| ConvergenceInput::sample(&mut rng, n)).collect()
}

/// Coefficient bounds at seeded points plus one partial-sum run inside the polydisc.
pub fn check_bounds(n: usize, d: u32, count: usize, seed: u64) -> Result<CheckReport> {
    let mut rep = CheckReport::new("bounds", Status::Proven);
    rep.max_degree = d;
    for mut input in admissible_inputs(n, count, seed) {
        let b = convergence::check_coeff_bound(&input, d)?;
        rep.checked += b.checked;
        if b.violations > 0 {
            rep.fail(format!("{} coefficients exceed (C1 C2)^|lam| at C1 = {}, C2 = {}", b.violations, b.c1, b.c2));
        }
        input.rho = b.rho_max / 2.0;
        let z: Vec<Complex64> = (0..n).map(|i| Complex64::from_polar(0.9 * input.rho, 0.7 * i as f64 + 0.3)).collect();
        let sums = convergence::partial_sums(&input, &z, d)?;
        if sums.violations > 0 {
            rep.fail(format!("{} partial-sum increments exceed the geometric bound", sums.violations));
        }
    }
    Ok(rep)
}

/// Runs one named check.
pub fn run(id: Identity, cfg: &CheckConfig) -> Result<CheckReport> {
    let n = cfg.n;
    let d = cfg.order;
    let ds = cfg.dual_order.unwrap_or(d);
    let status = id.status();
    let name = id.name();
    let mut rep = match id {
        Identity::ThetaForms => at_points(cfg, name, status, |p| check_theta_forms(p, d))?,
        Identity::NekrasovForms => at_points(cfg, name, status, |p| check_nekrasov_forms(p, d))?,
        Identity::NomeLimit => at_points(cfg, name, status, |p| check_nome_limit(&SeriesRequest::new(p.clone(), d)))?,
        Identity::DualityTrig => at_points(cfg, name, status, |p| check_duality_trig(&SeriesRequest::new(p.clone(), d).dual(ds)))?,
        Identity::DualityNonstat => {
            at_points(cfg, name, status, |p| check_duality_nonstat(&SeriesRequest::new(p.clone(), d).dual(ds)))?
        }
        Identity::ChiDuality => at_points(cfg, name, status, |p| check_chi_duality(&SeriesRequest::new(p.clone(), d).dual(ds)))?,
        Identity::Macdonald => {
            let mut rep = CheckReport::new(name, status);
            let mut rng = cfg.rng();
            for lam in partitions_for(cfg)? {
                let t = cfg.t.clone().unwrap_or_else(|| small_rational(&mut rng));
                rep.merge(check_macdonald_reduction(&lam, n, &cfg.r, &t)?);
            }
            rep
        }
        Identity::TrigEigen => check_trig_eigen(n, &cfg.r, cfg.beta, &cfg.lambda_or_zero()?, d)?,
        Identity::Commutativity => {
            let mut rep = CheckReport::new(name, status);
            let mut rng = cfg.rng();
            let lam = cfg.lambda_or_zero()?;
            let ctx = OperatorContext::with_beta(n, cfg.r.clone(), cfg.beta)?;
            for _ in 0..cfg.samples {
                let body = prefixed(random_body(&mut rng, n.saturating_sub(1), d, 6)?, &lam);
                for sign in [1, -1] {
                    rep.merge(eigen_report(name, status, check_commutativity(&body, sign, &ctx, cfg.beta)?));
                }
            }
            rep
        }
        Identity::NonstatEigen => {
            let kappa = cfg.kappa.clone().unwrap_or_else(|| frac(3, 7));
            check_nonstat_eigen(n, &cfg.r, cfg.beta, &kappa, &cfg.lambda_or_zero()?, d)?
        }
        Identity::BalancedEigen => {
            let kappa = cfg.kappa.clone().unwrap_or_else(|| frac(3, 7));
            let mut rep = check_balanced_eigen(n, &cfg.r, cfg.beta, &kappa, &cfg.lambda_or_zero()?, d)?;
            if n == 1 {
                let mut rng = cfg.rng();
                for _ in 0..cfg.samples {
                    let body = prefixed(random_body(&mut rng, 1, d, 4)?, &cfg.lambda_or_zero()?);
                    rep.merge(check_balanced_single(&cfg.r, cfg.beta, &kappa, &body)?);
                }
            }
            rep
        }
        Identity::Euler => convergence::check_euler_identity(d)?,
        Identity::BlockProducts => {
            let mut rep = CheckReport::new(name, status);
            let mut rng = cfg.rng();
            for _ in 0..cfg.samples {
                let (a, b, q) = (small_rational(&mut rng), small_rational(&mut rng), small_rational(&mut rng));
                rep.merge(convergence::check_block_products(&a, &b, &q, n, d)?);
            }
            rep
        }
        Identity::FractionEstimates => {
            let b1 = convergence::check_fraction_estimates(cfg.samples, cfg.seed);
            let mut rep = CheckReport::new(name, status);
            rep.checked = b1.a.samples + b1.b.samples + b1.c.samples;
            for (part, r) in [("a", &b1.a), ("b", &b1.b), ("c", &b1.c)] {
                if r.failures > 0 {
                    rep.fail(format!("part ({part}): {} failures, worst excess {}", r.failures, r.worst_excess));
                }
            }
            rep
        }
        Identity::Bounds => check_bounds(n, d, cfg.samples, cfg.seed)?,
    };
    rep.name = name.to_string();
    rep.status = status;
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for id in Identity::ALL {
            assert_eq!(id.name().parse::<Identity>().unwrap(), id);
        }
        assert!("nope".parse::<Identity>().is_err());
    }

    #[test]
    fn small_runs_pass() {
        for id in Identity::ALL {
            let mut cfg = CheckConfig::new(2, 2);
            cfg.samples = 1;
            let rep = run(id, &cfg).unwrap();
            assert!(rep.passed(), "{rep}");
        }
    }
}
