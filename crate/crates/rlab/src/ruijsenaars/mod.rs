//! Assembly of the trigonometric, non-stationary and balanced series, the
//! prefactored functions and the duality and reduction checks.

pub mod macdonald;

use rayon::prelude::*;

use crate::combinatorics::{
    enumerate_multipartitions, enumerate_periodic_theta, enumerate_theta, theta_monomial,
};
use crate::error::{Error, Result};
use crate::report::{CheckReport, Status};
use crate::series::{ratio_monomial, Exponent, FactorProduct, Scalar, TruncatedSeries, Truncation};
use crate::special::coeffs::{big_cn_inf_factors, cn_factors, cn_inf_factors, gl_balanced_factors};
use crate::special::{ChartKind, FactorList, FormalChart, ParamPoint};

pub use macdonald::{check_macdonald_reduction, macdonald_oracle, SymPoly};

/// Which of the equivalent sums builds a non-stationary series.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Representation {
    Theta,
    Multipartition,
    NekrasovBalanced,
}

/// Everything needed to expand one series.
#[derive(Clone, Debug)]
pub struct SeriesRequest {
    pub n: usize,
    pub order: u32,
    pub point: ParamPoint,
    pub representation: Representation,
    /// When set, the spectral variables are kept formal and expanded to this
    /// degree in their own ratio variables, placed after the position block.
    pub dual_order: Option<u32>,
}

impl SeriesRequest {
    pub fn new(point: ParamPoint, order: u32) -> Self {
        SeriesRequest { n: point.n(), order, point, representation: Representation::Theta, dual_order: None }
    }

    pub fn dual(mut self, ds: u32) -> Self {
        self.dual_order = Some(ds);
        self
    }

    pub fn representation(mut self, r: Representation) -> Self {
        self.representation = r;
        self
    }
}

/// A series as a list of chart monomials with symbolic coefficients.
type SymbolicTerms = Vec<(Vec<u32>, FactorList)>;

fn trig_terms(n: usize, d: u32) -> SymbolicTerms {
    enumerate_theta(n, d)
        .into_iter()
        .map(|th| (theta_monomial(&th.to_periodic(), n - 1), cn_factors(&th)))
        .collect()
}

fn nonstat_theta_terms(n: usize, d: u32) -> SymbolicTerms {
    enumerate_periodic_theta(n, d)
        .into_iter()
        .map(|th| (theta_monomial(&th, n), cn_inf_factors(&th)))
        .collect()
}

fn nonstat_multipartition_terms(n: usize, d: u32) -> SymbolicTerms {
    enumerate_multipartitions(n, d).map(|l| (l.monomial(), big_cn_inf_factors(&l))).collect()
}

fn gl_terms(n: usize, d: u32) -> SymbolicTerms {
    enumerate_multipartitions(n, d).map(|l| (l.monomial(), gl_balanced_factors(&l))).collect()
}

/// Evaluates symbolic terms either at the point or formally in the spectral
/// ratio variables.
fn assemble(terms: SymbolicTerms, nz: usize, req: &SeriesRequest, kind: ChartKind) -> Result<TruncatedSeries> {
    match req.dual_order {
        None => {
            let trunc = Truncation::Total(req.order);
            let values: Vec<(Exponent, Scalar)> = terms
                .into_par_iter()
                .map(|(m, f)| Ok((Exponent::new(m), f.evaluate(&req.point)?)))
                .collect::<Result<_>>()?;
            TruncatedSeries::from_terms(nz, trunc, values)
        }
        Some(ds) => {
            let chart = formal_chart(req, kind, nz);
            let total = nz + chart.nvars();
            let trunc = Truncation::Bigraded { split: nz, first: req.order, second: ds };
            let parts: Vec<TruncatedSeries> = terms
                .into_par_iter()
                .map(|(m, f)| {
                    let mut fp = FactorProduct::new(total);
                    f.push_formal(&chart, &mut fp)?;
                    let mut shift = m;
                    shift.resize(total, 0);
                    Ok(fp.into_series(trunc)?.shift(&Exponent::new(shift)))
                })
                .collect::<Result<_>>()?;
            let all = parts.iter().flat_map(|s| s.iter().map(|(e, c)| (e.clone(), c.clone())));
            TruncatedSeries::from_terms(total, trunc, all.collect::<Vec<_>>())
        }
    }
}

fn formal_chart(req: &SeriesRequest, kind: ChartKind, nz: usize) -> FormalChart {
    let mut chart = FormalChart { n: req.n, kind, offset: nz, total: 0, q: req.point.q.clone(), t: req.point.t.clone() };
    chart.total = nz + chart.nvars();
    chart
}

fn check_request(req: &SeriesRequest) -> Result<()> {
    if req.n == 0 || req.point.n() != req.n {
        return Err(Error::Shape(format!("N = {} with {} spectral variables", req.n, req.point.n())));
    }
    Ok(())
}

/// The trigonometric series, in `N - 1` ratio variables.
pub fn f_trig(req: &SeriesRequest) -> Result<TruncatedSeries> {
    check_request(req)?;
    assemble(trig_terms(req.n, req.order), req.n - 1, req, ChartKind::Trig)
}

/// The non-stationary series in `N` cyclic ratio variables.
pub fn f_nonstat(req: &SeriesRequest) -> Result<TruncatedSeries> {
    check_request(req)?;
    let terms = match req.representation {
        Representation::Theta => nonstat_theta_terms(req.n, req.order),
        Representation::Multipartition => nonstat_multipartition_terms(req.n, req.order),
        Representation::NekrasovBalanced => {
            return Err(Error::Invalid("use f_gl_balanced for the balanced representation".into()))
        }
    };
    assemble(terms, req.n, req, ChartKind::Periodic)
}

/// The balanced series. Its `t` and `kappa` are the balanced parameters;
/// crossing from unbalanced ones means `t_B = q / t_U`.
pub fn f_gl_balanced(req: &SeriesRequest) -> Result<TruncatedSeries> {
    check_request(req)?;
    assemble(gl_terms(req.n, req.order), req.n, req, ChartKind::Balanced)
}

/// `prod (a x_j/x_i;q)_inf / (b x_j/x_i;q)_inf` over `i < j <= N` (trigonometric)
/// or over `i <= N, j > i` with `x_{j+N} = p x_j` (periodic), as a factor product
/// on a block of variables.
fn ratio_prefactor(
    fp: &mut FactorProduct,
    n: usize,
    periodic: bool,
    offset: usize,
    a: &Scalar,
    b: &Scalar,
    q: &Scalar,
    maxdeg: u32,
) -> Result<()> {
    let total = fp.nvars();
    for i in 1..=n as i64 {
        let jmax = if periodic { i + maxdeg as i64 } else { n as i64 };
        for j in i + 1..=jmax {
            let m = ratio_monomial(n, j, i);
            let mut full = vec![0i64; total];
            let width = if periodic { n } else { n - 1 };
            full[offset..offset + width].copy_from_slice(&m[..width]);
            fp.push_poch_ratio(a.clone(), b.clone(), q.clone(), &full)?;
        }
    }
    Ok(())
}

fn phi_prefactor(req: &SeriesRequest, periodic: bool, f: &TruncatedSeries) -> Result<TruncatedSeries> {
    let p = &req.point;
    let mut fp = FactorProduct::new(f.nvars());
    ratio_prefactor(&mut fp, req.n, periodic, 0, &(&p.q / &p.t), &p.q, &p.q, req.order)?;
    fp.into_series(f.truncation())
}

/// `prod_{i<j} (q x_j/(t x_i);q)_inf / (q x_j/x_i;q)_inf` times the trigonometric series.
pub fn phi_trig(req: &SeriesRequest) -> Result<TruncatedSeries> {
    let f = f_trig(req)?;
    phi_prefactor(req, false, &f)?.mul(&f)
}

/// The same prefactor over all `j > i` with `x_{j+N} = p x_j`, times the non-stationary series.
pub fn phi_nonstat(req: &SeriesRequest) -> Result<TruncatedSeries> {
    let f = f_nonstat(req)?;
    phi_prefactor(req, true, &f)?.mul(&f)
}

/// `f_N(x|y) prod_{i<j} (q y_j/y_i;q)_inf / (t y_j/y_i;q)_inf`, doubly expanded.
pub fn chi(req: &SeriesRequest) -> Result<TruncatedSeries> {
    let Some(_) = req.dual_order else {
        return Err(Error::Invalid("chi needs a dual order".into()));
    };
    let f = f_trig(req)?;
    let p = &req.point;
    let mut fp = FactorProduct::new(f.nvars());
    ratio_prefactor(&mut fp, req.n, false, req.n - 1, &p.q, &p.t, &p.q, 0)?;
    fp.into_series(f.truncation())?.mul(&f)
}

/// Proven dualities of the trigonometric prefactored function:
/// swapping positions and spectral variables, alone and combined with `t -> q/t`.
pub fn check_duality_trig(req: &SeriesRequest) -> Result<CheckReport> {
    let mut rep = CheckReport::new("duality_trig", Status::Proven);
    let a = phi_trig(req)?;
    let dual_req = SeriesRequest { point: req.point.with_t(&req.point.q / &req.point.t), ..req.clone() };
    let b = phi_trig(&dual_req)?;
    rep.compare("bispectral", &a, &a.swap_blocks()?)?;
    rep.compare("poincare", &a, &b.swap_blocks()?)?;
    rep.compare("t to q/t", &a, &b)?;
    Ok(rep)
}

/// The same symmetries for the non-stationary prefactored function, as
/// conjecture evidence.
pub fn check_duality_nonstat(req: &SeriesRequest) -> Result<CheckReport> {
    let mut rep = CheckReport::new("duality_nonstat", Status::Conjecture);
    let a = phi_nonstat(req)?;
    let dual_req = SeriesRequest { point: req.point.with_t(&req.point.q / &req.point.t), ..req.clone() };
    let b = phi_nonstat(&dual_req)?;
    rep.compare("bispectral", &a, &a.swap_blocks()?)?;
    rep.compare("t to q/t", &a, &b)?;
    Ok(rep)
}

/// `chi(x|y|q,t) = chi(y|x|q,q/t)` as bigraded series.
pub fn check_chi_duality(req: &SeriesRequest) -> Result<CheckReport> {
    let mut rep = CheckReport::new("chi_duality", Status::Proven);
    let a = chi(req)?;
    let dual_req = SeriesRequest { point: req.point.with_t(&req.point.q / &req.point.t), ..req.clone() };
    let b = chi(&dual_req)?;
    rep.compare("chi", &a, &b.swap_blocks()?)?;
    Ok(rep)
}

/// Removing the nome from the non-stationary series leaves the trigonometric one.
pub fn check_nome_limit(req: &SeriesRequest) -> Result<CheckReport> {
    let mut rep = CheckReport::new("cor3_4", Status::Proven);
    let f = f_nonstat(req)?;
    let slice = f.slice_zero(req.n - 1)?;
    let g = f_trig(req)?;
    rep.compare("nome 0 slice", &slice, &g)?;
    Ok(rep)
}

/// Theta and multipartition sums give the same non-stationary series.
pub fn check_representations(req: &SeriesRequest) -> Result<CheckReport> {
    let mut rep = CheckReport::new("representations", Status::Proven);
    let a = f_nonstat(&req.clone().representation(Representation::Theta))?;
    let b = f_nonstat(&req.clone().representation(Representation::Multipartition))?;
    rep.compare("theta vs multipartition", &a, &b)?;
    Ok(rep)
}

/// Series-level transfer between balanced and unbalanced coordinates: with
/// `kappa_U = root^N`, `s_B,i = root^{N-i} s_U,i`, `kappa_B = root` and
/// `t_B = q/t_U` the two series coincide in the shared chart.
pub fn check_gl_transfer(req: &SeriesRequest, root: &Scalar) -> Result<CheckReport> {
    let mut rep = CheckReport::new("gl_transfer", Status::Proven);
    let n = req.n;
    let p = &req.point;
    let mut unbalanced = p.clone();
    unbalanced.kappa = crate::series::powi(root, n as i64)?;
    let mut balanced = p.clone();
    balanced.kappa = root.clone();
    balanced.t = &p.q / &p.t;
    balanced.t_curve = -p.t_curve;
    for i in 0..n {
        balanced.s[i] = &p.s[i] * crate::series::powi(root, (n - 1 - i) as i64)?;
    }
    let a = f_nonstat(&SeriesRequest { point: unbalanced, ..req.clone() })?;
    let b = f_gl_balanced(&SeriesRequest { point: balanced, ..req.clone() })?;
    rep.compare("balanced vs unbalanced", &a, &b)?;
    Ok(rep)
}
