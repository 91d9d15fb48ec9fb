//! Difference operators acting on prefixed series `x^lambda * body`.
//!
//! A series' prefix is the symbolic `x^lambda`; its body lives in the
//! trigonometric chart (`N - 1` variables) or the cyclic chart (`N`
//! variables). A chart monomial `z^alpha` is `x^{mu(alpha)}` with
//! `mu_i = alpha_{i-1} - alpha_i`, indices cyclic and `alpha_N = 0` in the
//! trigonometric chart.

use num_traits::One;
use rayon::prelude::*;

use crate::combinatorics::{enumerate_multipartitions, enumerate_periodic_theta, enumerate_theta, theta_monomial};
use crate::error::{Error, Result};
use crate::series::{as_integer, powi, ratio_monomial, Discrepancy, Exponent, FactorProduct, Scalar, TruncatedSeries, Truncation};
use crate::special::coeffs::{cn_factors, cn_inf_factors, gl_balanced_factors};
use crate::special::{ChartKind, FactorList, FormalChart};

/// Parameters shared by all operators: `q = r^2` and `t`.
#[derive(Clone, Debug)]
pub struct OperatorContext {
    pub n: usize,
    pub r: Scalar,
    pub q: Scalar,
    pub t: Scalar,
}

impl OperatorContext {
    pub fn new(n: usize, r: Scalar, t: Scalar) -> Self {
        let q = &r * &r;
        OperatorContext { n, r, q, t }
    }

    /// `t = q^beta`.
    pub fn with_beta(n: usize, r: Scalar, beta: i64) -> Result<Self> {
        let q = &r * &r;
        let t = powi(&q, beta)?;
        Ok(OperatorContext { n, r, q, t })
    }
}

/// How `q^{Delta/2}` is applied.
#[derive(Clone, Debug)]
pub enum DeltaMode {
    /// Exact action with `t = q^beta`, on integer prefixes.
    Integer { beta: i64 },
    /// Action divided by the eigenvalue of `x^lambda`, written through the
    /// spectral variables `s_i = t^{N-i} q^{lambda_i}`. Valid for any `t`.
    Spectral { s: Vec<Scalar> },
}

/// Comparison of two sides of an eigen-relation.
#[derive(Clone, Debug)]
pub struct EigenReport {
    pub lhs: TruncatedSeries,
    pub rhs: TruncatedSeries,
    pub max_checked_degree: u32,
    pub first_discrepancy: Option<Discrepancy>,
}

impl EigenReport {
    pub fn new(lhs: TruncatedSeries, rhs: TruncatedSeries) -> Result<Self> {
        let first_discrepancy = lhs.first_difference(&rhs)?;
        let max_checked_degree = lhs.order().min(rhs.order());
        Ok(EigenReport { lhs, rhs, max_checked_degree, first_discrepancy })
    }

    pub fn holds(&self) -> bool {
        self.first_discrepancy.is_none()
    }
}

/// `x`-exponent shift `mu(alpha)` of a chart monomial.
pub fn x_exponents(n: usize, alpha: &Exponent) -> Vec<i64> {
    let a = |i: usize| -> i64 {
        // alpha_i with alpha_0 = alpha_N and alpha_N = 0 in the short chart
        let i = if i == 0 { n } else { i };
        alpha.entries().get(i - 1).map_or(0, |&v| v as i64)
    };
    (1..=n).map(|i| a(i - 1) - a(i)).collect()
}

fn check_chart(f: &TruncatedSeries, n: usize) -> Result<()> {
    if f.nvars() + 1 != n && f.nvars() != n {
        return Err(Error::Shape(format!("series in {} variables for N = {n}", f.nvars())));
    }
    Ok(())
}

/// `q^{k/2}` for rational `k` with `k` an integer.
fn half_power(r: &Scalar, k: &Scalar) -> Result<Scalar> {
    let e = as_integer(k).ok_or_else(|| Error::NotRealizable(format!("q^({k}/2)")))?;
    powi(r, e)
}

/// `T_{q,x_i}^{sign}`: multiplies `x^{lambda+mu}` by `q^{sign (lambda_i + mu_i)}`.
pub fn apply_qshift(f: &TruncatedSeries, i: usize, sign: i64, ctx: &OperatorContext) -> Result<TruncatedSeries> {
    check_chart(f, ctx.n)?;
    let lam = f.prefix_or_zero(ctx.n);
    let base = half_power(&ctx.r, &(Scalar::from_integer((2 * sign).into()) * &lam[i - 1]))?;
    f.map_coeffs(|e, c| Ok(c * &base * powi(&ctx.q, sign * x_exponents(ctx.n, e)[i - 1])?))
}

/// Chart monomial of `x_a/x_b` padded or cut to the series' variables.
fn chart_ratio(n: usize, nvars: usize, a: i64, b: i64) -> Result<Vec<i64>> {
    let m = ratio_monomial(n, a, b);
    if nvars < n && m[n - 1] != 0 {
        return Err(Error::Shape("ratio leaves the trigonometric chart".into()));
    }
    Ok(m[..nvars].to_vec())
}

fn sum_parts(parts: Vec<TruncatedSeries>, template: &TruncatedSeries) -> Result<TruncatedSeries> {
    let all: Vec<(Exponent, Scalar)> = parts.iter().flat_map(|s| s.iter().map(|(e, c)| (e.clone(), c.clone()))).collect();
    Ok(TruncatedSeries::from_terms(template.nvars(), template.truncation(), all)?.with_prefix(template.prefix().map(<[_]>::to_vec)))
}

/// Trigonometric Macdonald operator `sum_i prod_{j != i} (1 - t^s x_i/x_j)/(1 - x_i/x_j) T_{q,x_i}^s`.
pub fn apply_d_trig(f: &TruncatedSeries, sign: i64, ctx: &OperatorContext) -> Result<TruncatedSeries> {
    check_chart(f, ctx.n)?;
    let u = powi(&ctx.t, sign)?;
    let parts = (1..=ctx.n as i64)
        .map(|i| {
            let mut fp = FactorProduct::new(f.nvars());
            for j in (1..=ctx.n as i64).filter(|&j| j != i) {
                let m = chart_ratio(ctx.n, f.nvars(), i, j)?;
                fp.push_linear(u.clone(), &m, 1)?;
                fp.push_linear(Scalar::one(), &m, -1)?;
            }
            fp.into_series(f.truncation())?.mul(&apply_qshift(f, i as usize, sign, ctx)?)
        })
        .collect::<Result<Vec<_>>>()?;
    sum_parts(parts, f)
}

/// `theta(u x_i/x_j;p)/theta(x_i/x_j;p)` in the cyclic chart. The flipped
/// route expands `u theta(x_j/(u x_i);p)/theta(x_j/x_i;p)` instead.
pub fn elliptic_coefficient(u: &Scalar, i: usize, j: usize, n: usize, trunc: Truncation, flipped: bool) -> Result<TruncatedSeries> {
    let mut fp = FactorProduct::new(n);
    if flipped {
        fp.push_theta_ratio(&u.recip(), j as i64, i as i64, n, trunc.max_degree())?;
        fp.scale(u);
    } else {
        fp.push_theta_ratio(u, i as i64, j as i64, n, trunc.max_degree())?;
    }
    fp.into_series(trunc)
}

/// Elliptic Macdonald operator, with theta-function ratios in the cyclic chart.
pub fn apply_d_elliptic(f: &TruncatedSeries, sign: i64, ctx: &OperatorContext, flipped: bool) -> Result<TruncatedSeries> {
    if f.nvars() != ctx.n {
        return Err(Error::Shape("elliptic operator needs the cyclic chart".into()));
    }
    let u = powi(&ctx.t, sign)?;
    let parts = (1..=ctx.n)
        .map(|i| {
            let mut coeff = TruncatedSeries::one(ctx.n, f.truncation());
            for j in (1..=ctx.n).filter(|&j| j != i) {
                coeff = coeff.mul(&elliptic_coefficient(&u, i, j, ctx.n, f.truncation(), flipped && i < j)?)?;
            }
            coeff.mul(&apply_qshift(f, i, sign, ctx)?)
        })
        .collect::<Result<Vec<_>>>()?;
    sum_parts(parts, f)
}

/// Modified operator `sum_i A_i(x|t^s) s_i^s T_{q,x_i}^s` with
/// `A_i = prod_{j<i} (1 - t^s x_i/x_j)/(1 - x_i/x_j) prod_{k>i} (1 - t^{-s} x_k/x_i)/(1 - x_k/x_i)`.
pub fn apply_e(f: &TruncatedSeries, sign: i64, s: &[Scalar], ctx: &OperatorContext) -> Result<TruncatedSeries> {
    check_chart(f, ctx.n)?;
    let up = powi(&ctx.t, sign)?;
    let down = powi(&ctx.t, -sign)?;
    let parts = (1..=ctx.n as i64)
        .map(|i| {
            let mut fp = FactorProduct::new(f.nvars());
            for j in 1..i {
                let m = chart_ratio(ctx.n, f.nvars(), i, j)?;
                fp.push_linear(up.clone(), &m, 1)?;
                fp.push_linear(Scalar::one(), &m, -1)?;
            }
            for k in i + 1..=ctx.n as i64 {
                let m = chart_ratio(ctx.n, f.nvars(), k, i)?;
                fp.push_linear(down.clone(), &m, 1)?;
                fp.push_linear(Scalar::one(), &m, -1)?;
            }
            fp.scale(&powi(&s[i as usize - 1], sign)?);
            fp.into_series(f.truncation())?.mul(&apply_qshift(f, i as usize, sign, ctx)?)
        })
        .collect::<Result<Vec<_>>>()?;
    sum_parts(parts, f)
}

/// `r^{sum e_i^2}`: the eigenvalue `q^{sum e_i^2 / 2}` for `e_i = lambda_i + beta (N - i)`.
pub fn eigenvalue_eps(exponents: &[Scalar], r: &Scalar) -> Result<Scalar> {
    let sq: Scalar = exponents.iter().map(|e| e * e).sum();
    half_power(r, &sq)
}

/// `q^{Delta/2}` on each monomial.
pub fn apply_qdelta_half(f: &TruncatedSeries, mode: &DeltaMode, ctx: &OperatorContext) -> Result<TruncatedSeries> {
    check_chart(f, ctx.n)?;
    let n = ctx.n;
    match mode {
        DeltaMode::Integer { beta } => {
            let lam = f.prefix_or_zero(n);
            if lam.iter().any(|l| !l.is_integer()) {
                return Err(Error::NotRealizable("q^(Delta/2) needs an integer prefix".into()));
            }
            f.map_coeffs(|e, c| {
                let mu = x_exponents(n, e);
                let ex: Vec<Scalar> = (0..n)
                    .map(|i| &lam[i] + Scalar::from_integer((mu[i] + (n - 1 - i) as i64 * beta).into()))
                    .collect();
                Ok(c * eigenvalue_eps(&ex, &ctx.r)?)
            })
        }
        DeltaMode::Spectral { s } => f.map_coeffs(|e, c| {
            let mu = x_exponents(n, e);
            let mut v = c * powi(&ctx.r, mu.iter().map(|m| m * m).sum())?;
            for (si, &m) in s.iter().zip(&mu) {
                v *= powi(si, m)?;
            }
            Ok(v)
        }),
    }
}

/// `T_{kappa,p}`: multiplies `z^alpha` by `kappa^{alpha_N}`.
pub fn apply_tkp(f: &TruncatedSeries, kappa: &Scalar, n: usize) -> Result<TruncatedSeries> {
    if f.nvars() != n {
        return Err(Error::Shape("the nome shift needs the cyclic chart".into()));
    }
    f.map_coeffs(|e, c| Ok(c * powi(kappa, e.entries()[n - 1] as i64)?))
}

/// The balanced nome shift: each balanced chart variable carries one power of `p`.
pub fn apply_tkp_balanced(f: &TruncatedSeries, kappa: &Scalar) -> Result<TruncatedSeries> {
    f.map_coeffs(|e, c| Ok(c * powi(kappa, e.degree() as i64)?))
}

/// A formal coefficient `c(theta|x)` as a series in the chart.
fn formal_coefficient(list: &FactorList, ctx: &OperatorContext, kind: ChartKind, trunc: Truncation, t: &Scalar) -> Result<TruncatedSeries> {
    let chart = FormalChart { n: ctx.n, kind, offset: 0, total: 0, q: ctx.q.clone(), t: t.clone() };
    let chart = FormalChart { total: chart.nvars(), ..chart };
    let mut fp = FactorProduct::new(chart.total);
    list.push_formal(&chart, &mut fp)?;
    fp.into_series(trunc)
}

/// `prod (a x_j/x_i;q)_inf/(b x_j/x_i;q)_inf` over `i < j <= N` or, in the
/// cyclic chart, over `i <= N < ...` all `j > i`.
fn pair_prefactor(ctx: &OperatorContext, nvars: usize, a: &Scalar, b: &Scalar, trunc: Truncation) -> Result<TruncatedSeries> {
    let n = ctx.n as i64;
    let periodic = nvars == ctx.n;
    let mut fp = FactorProduct::new(nvars);
    for i in 1..=n {
        let jmax = if periodic { i + trunc.max_degree() as i64 } else { n };
        for j in i + 1..=jmax {
            let m = ratio_monomial(ctx.n, j, i);
            fp.push_poch_ratio(a.clone(), b.clone(), ctx.q.clone(), &m[..nvars])?;
        }
    }
    fp.into_series(trunc)
}

/// One term `z^mono q^{Delta/2} [coeff * g]`, with `g` already prefactored.
fn theta_term(
    mono: &[u32],
    coeff: &FactorList,
    g: &TruncatedSeries,
    ctx: &OperatorContext,
    kind: ChartKind,
    mode: &DeltaMode,
    nome: Option<&(dyn Fn(&TruncatedSeries) -> Result<TruncatedSeries> + Sync)>,
) -> Result<Option<TruncatedSeries>> {
    let e = Exponent::new(mono.to_vec());
    let Some(rest) = g.truncation().below(&e) else {
        return Ok(None);
    };
    let c = formal_coefficient(coeff, ctx, kind, rest, &ctx.t)?;
    let mut h = c.mul(&g.truncate(rest)?)?;
    if let Some(shift) = nome {
        h = shift(&h)?;
    }
    let h = apply_qdelta_half(&h, mode, ctx)?;
    Ok(Some(h.retruncate(g.truncation()).shift(&e)))
}

/// Trigonometric `T`-operator: sum over block matrices of
/// `z^theta q^{Delta/2} c(theta|x) prod_{i<j} (x_j/x_i;q)_inf/(t x_j/x_i;q)_inf`.
pub fn apply_t_trig(f: &TruncatedSeries, ctx: &OperatorContext, mode: &DeltaMode) -> Result<TruncatedSeries> {
    if f.nvars() + 1 != ctx.n {
        return Err(Error::Shape("trigonometric operator needs N - 1 variables".into()));
    }
    let trunc = f.truncation();
    let g = pair_prefactor(ctx, f.nvars(), &Scalar::one(), &ctx.t, trunc)?.mul(f)?;
    let thetas = enumerate_theta(ctx.n, trunc.max_degree());
    let parts: Vec<TruncatedSeries> = thetas
        .par_iter()
        .map(|th| theta_term(&theta_monomial(&th.to_periodic(), ctx.n - 1), &cn_factors(th), &g, ctx, ChartKind::Trig, mode, None))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    sum_parts(parts, f)
}

/// The alternative form
/// `prod_{i<j} (q x_j/x_i;q)_inf/(q x_j/(t x_i);q)_inf sum_theta c(theta|x|q,q/t) q^{Delta/2} z^theta prod_{i<j} (1 - x_j/x_i)`.
pub fn apply_t_trig_alt(f: &TruncatedSeries, ctx: &OperatorContext, mode: &DeltaMode) -> Result<TruncatedSeries> {
    if f.nvars() + 1 != ctx.n {
        return Err(Error::Shape("trigonometric operator needs N - 1 variables".into()));
    }
    let trunc = f.truncation();
    let nv = f.nvars();
    let mut fp = FactorProduct::new(nv);
    for i in 1..=ctx.n as i64 {
        for j in i + 1..=ctx.n as i64 {
            fp.push_linear(Scalar::one(), &ratio_monomial(ctx.n, j, i)[..nv], 1)?;
        }
    }
    let g = fp.into_series(trunc)?.mul(f)?;
    let dual_t = &ctx.q / &ctx.t;
    let parts = enumerate_theta(ctx.n, trunc.max_degree())
        .par_iter()
        .map(|th| {
            let e = Exponent::new(theta_monomial(&th.to_periodic(), nv));
            let h = apply_qdelta_half(&g.shift(&e), mode, ctx)?;
            let c = formal_coefficient(&cn_factors(th), ctx, ChartKind::Trig, trunc, &dual_t)?;
            c.mul(&h)
        })
        .collect::<Result<Vec<_>>>()?;
    let sum = sum_parts(parts, f)?;
    pair_prefactor(ctx, nv, &ctx.q, &dual_t, trunc)?.mul(&sum)
}

/// Non-stationary `T`-operator in the cyclic chart, with the nome shift
/// applied to `c(theta|x) * prefactor * f` before `q^{Delta/2}`.
pub fn apply_t_nonstat(f: &TruncatedSeries, ctx: &OperatorContext, kappa: &Scalar, mode: &DeltaMode) -> Result<TruncatedSeries> {
    if f.nvars() != ctx.n {
        return Err(Error::Shape("non-stationary operator needs the cyclic chart".into()));
    }
    let trunc = f.truncation();
    let g = pair_prefactor(ctx, ctx.n, &Scalar::one(), &ctx.t, trunc)?.mul(f)?;
    let n = ctx.n;
    let shift = |h: &TruncatedSeries| apply_tkp(h, kappa, n);
    let parts: Vec<TruncatedSeries> = enumerate_periodic_theta(n, trunc.max_degree())
        .par_iter()
        .map(|th| theta_term(&theta_monomial(th, n), &cn_inf_factors(th), &g, ctx, ChartKind::Periodic, mode, Some(&shift)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    sum_parts(parts, f)
}

/// Prefactor of the balanced operator: double q-Pochhammer ratios with
/// `(z;q,P)_inf = prod_m (P^m z;q)_inf` and `P = p^N`, read in the shared chart.
pub fn balanced_prefactor(n: usize, q: &Scalar, t_balanced: &Scalar, trunc: Truncation) -> Result<TruncatedSeries> {
    let b = q / t_balanced;
    let nn = n as i64;
    let maxdeg = trunc.max_degree() as i64;
    let mut fp = FactorProduct::new(n);
    for i in 1..=nn {
        for j in i..=nn {
            // p^{j-i} x_j/x_i for i < j, and p^{N-j+i} x_i/x_j for i <= j
            let mut starts = vec![(i + nn, j)];
            if i < j {
                starts.push((j, i));
            }
            for (a0, b0) in starts {
                let mut a = a0;
                while a - b0 <= maxdeg {
                    fp.push_poch_ratio(Scalar::one(), b.clone(), q.clone(), &ratio_monomial(n, a, b0))?;
                    a += nn;
                }
            }
        }
    }
    fp.into_series(trunc)
}

/// Balanced `T`-operator: sum over multipartitions of
/// `t^{-|lam|} z^lam q^{Delta/2} T_{kappa,p} [Nekrasov ratios * prefactor * f]`,
/// with the balanced nome shift `z^alpha -> kappa^{|alpha|} z^alpha`.
pub fn apply_t_balanced(f: &TruncatedSeries, ctx: &OperatorContext, kappa: &Scalar, mode: &DeltaMode) -> Result<TruncatedSeries> {
    if f.nvars() != ctx.n {
        return Err(Error::Shape("balanced operator needs the cyclic chart".into()));
    }
    let trunc = f.truncation();
    let g = balanced_prefactor(ctx.n, &ctx.q, &ctx.t, trunc)?.mul(f)?;
    let shift = |h: &TruncatedSeries| apply_tkp_balanced(h, kappa);
    let lams: Vec<_> = enumerate_multipartitions(ctx.n, trunc.max_degree()).collect();
    let parts: Vec<TruncatedSeries> = lams
        .par_iter()
        .map(|l| theta_term(&l.monomial(), &gl_balanced_factors(l), &g, ctx, ChartKind::Balanced, mode, Some(&shift)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    sum_parts(parts, f)
}

/// `[T, D^sign]` applied to `f`: reports `T D f` against `D T f`.
pub fn check_commutativity(f: &TruncatedSeries, sign: i64, ctx: &OperatorContext, beta: i64) -> Result<EigenReport> {
    let mode = DeltaMode::Integer { beta };
    let left = apply_t_trig(&apply_d_trig(f, sign, ctx)?, ctx, &mode)?;
    let right = apply_d_trig(&apply_t_trig(f, ctx, &mode)?, sign, ctx)?;
    EigenReport::new(left, right)
}
