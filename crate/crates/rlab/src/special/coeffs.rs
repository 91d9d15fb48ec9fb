//! Coefficient formulas of the series, built as symbolic factor lists so the
//! same code serves numeric points, limits along curves and formal charts.

use crate::combinatorics::{MultiPartition, Partition, PeriodicThetaMatrix, ThetaMatrix};
use crate::error::Result;
use crate::series::Scalar;

use super::{Atom, FactorList, ParamPoint};

/// Coefficient of the trigonometric series at a block matrix.
pub fn cn_factors(theta: &ThetaMatrix) -> FactorList {
    let n = theta.n() as i64;
    let th = |i: i64, k: i64| theta.get(i, k) as i64;
    let mut f = FactorList::new(theta.n());
    for (i, k, len) in theta.nonzero() {
        let (i, k, len) = (i as i64, k as i64, len as i64);
        for j in i + 1..=k {
            let e: i64 = (k + 1..=n).map(|a| th(i, a) - th(j, a)).sum();
            f.poch(Atom::ratio(j, i).with_q(e).with_t(1), len, 1);
            f.poch(Atom::ratio(j, i).with_q(e + 1), len, -1);
        }
        for j in i..k {
            let e: i64 = -th(j, k) - (k + 1..=n).map(|a| th(j, a) - th(i, a)).sum::<i64>();
            f.poch(Atom::ratio(j, i).with_q(e + 1).with_t(-1), len, 1);
            f.poch(Atom::ratio(j, i).with_q(e), len, -1);
        }
    }
    f
}

/// Coefficient of the non-stationary series at a periodic matrix; the sums
/// over `a > k` run to the end of the band.
pub fn cn_inf_factors(theta: &PeriodicThetaMatrix) -> FactorList {
    let th = |i: i64, k: i64| theta.get(i, k) as i64;
    let mut f = FactorList::new(theta.n());
    for (i, k, len) in theta.nonzero() {
        let len = len as i64;
        for j in i + 1..=k {
            let e: i64 = (k + 1..=j + theta.width() as i64).map(|a| th(i, a) - th(j, a)).sum();
            f.poch(Atom::ratio(j, i).with_q(e).with_t(1), len, 1);
            f.poch(Atom::ratio(j, i).with_q(e + 1), len, -1);
        }
        for j in i..k {
            let e: i64 = -th(j, k) - (k + 1..=k + theta.width() as i64).map(|a| th(j, a) - th(i, a)).sum::<i64>();
            f.poch(Atom::ratio(j, i).with_q(e + 1).with_t(-1), len, 1);
            f.poch(Atom::ratio(j, i).with_q(e), len, -1);
        }
    }
    f
}

/// The same coefficient written through the multipartition of the matrix.
pub fn big_cn_inf_factors(lam: &MultiPartition) -> FactorList {
    let n = lam.n();
    let mut f = FactorList::new(n);
    for i in 1..=n as i64 {
        let li = lam.component(i);
        for d in 1..=li.len() as i64 {
            let len = li.part(d) - li.part(d + 1);
            if len == 0 {
                continue;
            }
            let k = i + d;
            for j in i + 1..=k {
                let lj = lam.component(j);
                let e = li.part(k - i + 1) - lj.part(k - j + 1);
                f.poch(Atom::ratio(j, i).with_q(e).with_t(1), len, 1);
                f.poch(Atom::ratio(j, i).with_q(e + 1), len, -1);
            }
            for j in i..k {
                let lj = lam.component(j);
                let e = -lj.part(k - j) + li.part(k - i + 1);
                f.poch(Atom::ratio(j, i).with_q(e + 1).with_t(-1), len, 1);
                f.poch(Atom::ratio(j, i).with_q(e), len, -1);
            }
        }
    }
    f
}

/// The Nekrasov-ratio form after the powers of `kappa` have cancelled, read
/// with `s_{j+N} = kappa s_j`.
pub fn ctilde_factors(lam: &MultiPartition) -> FactorList {
    let n = lam.n();
    let mut f = FactorList::new(n);
    let w = lam.weight() as i64;
    f.monomial(-w, w);
    for i in 1..=n as i64 {
        let li = lam.component(i);
        for d in 1..=li.len() as i64 {
            let len = li.part(d) - li.part(d + 1);
            if len == 0 {
                continue;
            }
            let k = i + d;
            for j in i..k {
                let lj = lam.component(j);
                let e = -lj.part(k - j) + li.part(k - i + 1);
                f.poch(Atom::ratio(j, i).with_q(e + 1).with_t(-1), len, 1);
                f.poch(Atom::ratio(j, i).with_q(e), len, -1);
            }
            for j in i + 1..=k {
                let lj = lam.component(j);
                let e = lj.part(k - j + 1) - li.part(k - i);
                f.poch(Atom::ratio(i, j).with_q(e + 1).with_t(-1), len, 1);
                f.poch(Atom::ratio(i, j).with_q(e), len, -1);
            }
        }
    }
    f
}

/// Nekrasov factor with argument `u` (an atom), as factors. Powers of the
/// Nekrasov `kappa` land in the atom's `kappa` slot.
pub fn nekrasov_factors(lam: &Partition, mu: &Partition, k: i64, n: usize, u: Atom, out: &mut FactorList, power: i32) {
    let nn = n as i64;
    for b in 1..=lam.len() as i64 {
        let len = lam.part(b) - lam.part(b + 1);
        for a in 1..=b {
            if (b - a - k).rem_euclid(nn) == 0 {
                out.poch(u.with_q(-mu.part(a) + lam.part(b + 1)).with_kappa(b - a), len, power);
            }
        }
    }
    for beta in 1..=mu.len() as i64 {
        let len = mu.part(beta) - mu.part(beta + 1);
        for alpha in 1..=beta {
            if (beta - alpha + k + 1).rem_euclid(nn) == 0 {
                out.poch(u.with_q(lam.part(alpha) - mu.part(beta)).with_kappa(alpha - beta - 1), len, power);
            }
        }
    }
}

/// The literal Nekrasov form, read with the atom `kappa` standing for the
/// `N`-th root of the periodicity parameter.
pub fn ctilde_nekrasov_factors(lam: &MultiPartition) -> FactorList {
    let n = lam.n();
    let nn = n as i64;
    let mut f = FactorList::new(n);
    let w = lam.weight() as i64;
    f.monomial(-w, w);
    for i in 1..=nn {
        for j in 1..=nn {
            let k = (j - i).rem_euclid(nn);
            let (li, lj) = (lam.component(i), lam.component(j));
            let base = Atom::ratio(j, i).with_kappa(i - j);
            nekrasov_factors(li, lj, k, n, base.with_q(1).with_t(-1), &mut f, 1);
            nekrasov_factors(li, lj, k, n, base, &mut f, -1);
        }
    }
    f
}

/// Coefficient of the balanced series: `t^{-|lam|}` times Nekrasov ratios,
/// with the Nekrasov `kappa` the balanced periodicity parameter.
pub fn gl_balanced_factors(lam: &MultiPartition) -> FactorList {
    let n = lam.n();
    let nn = n as i64;
    let mut f = FactorList::new(n);
    f.monomial(0, -(lam.weight() as i64));
    for i in 1..=nn {
        for j in 1..=nn {
            let k = (j - i).rem_euclid(nn);
            let (li, lj) = (lam.component(i), lam.component(j));
            let base = Atom::ratio(j, i);
            nekrasov_factors(li, lj, k, n, base.with_t(1), &mut f, 1);
            nekrasov_factors(li, lj, k, n, base, &mut f, -1);
        }
    }
    f
}

pub fn coeff_cn(theta: &ThetaMatrix, point: &ParamPoint) -> Result<Scalar> {
    cn_factors(theta).evaluate(point)
}

pub fn coeff_cn_inf(theta: &PeriodicThetaMatrix, point: &ParamPoint) -> Result<Scalar> {
    cn_inf_factors(theta).evaluate(point)
}

pub fn coeff_big_cn_inf(lam: &MultiPartition, point: &ParamPoint) -> Result<Scalar> {
    big_cn_inf_factors(lam).evaluate(point)
}

pub fn coeff_ctilde(lam: &MultiPartition, point: &ParamPoint) -> Result<Scalar> {
    ctilde_factors(lam).evaluate(point)
}

/// Literal Nekrasov form at `kappa = root^N`, given the root.
pub fn coeff_ctilde_nekrasov(lam: &MultiPartition, point: &ParamPoint, root: &Scalar) -> Result<Scalar> {
    let mut p = point.clone();
    p.kappa = root.clone();
    ctilde_nekrasov_factors(lam).evaluate(&p)
}

pub fn coeff_gl_balanced(lam: &MultiPartition, point: &ParamPoint) -> Result<Scalar> {
    gl_balanced_factors(lam).evaluate(point)
}
