//! Independent Macdonald polynomial oracle: a triangular eigen-solve of the
//! first Macdonald operator on monomial symmetric functions, using plain
//! polynomial arithmetic with exact division by Vandermonde factors.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::combinatorics::{partitions_of, Partition};
use crate::error::{Error, Result};
use crate::report::{CheckReport, Status};
use crate::series::{powi, Exponent, Scalar, TruncatedSeries, Truncation};
use crate::special::ParamPoint;

use super::{f_trig, SeriesRequest};

type Poly = BTreeMap<Vec<u32>, Scalar>;

fn add_into(p: &mut Poly, e: Vec<u32>, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let slot = p.entry(e.clone()).or_insert_with(Scalar::zero);
    *slot += c;
    if slot.is_zero() {
        p.remove(&e);
    }
}

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            let e = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
            add_into(&mut out, e, ca * cb);
        }
    }
    out
}

/// `ci x_i + cj x_j`.
fn binomial(n: usize, i: usize, ci: Scalar, j: usize, cj: Scalar) -> Poly {
    let mut p = Poly::new();
    let mut ei = vec![0; n];
    ei[i] = 1;
    let mut ej = vec![0; n];
    ej[j] = 1;
    add_into(&mut p, ei, ci);
    add_into(&mut p, ej, cj);
    p
}

/// Exact quotient by `x_a - x_b`; a nonzero remainder is an error.
fn divide_by_difference(p: &Poly, a: usize, b: usize) -> Result<Poly> {
    let mut rem = p.clone();
    let mut quot = Poly::new();
    while let Some((e, c)) = rem.iter().max_by_key(|(e, _)| (e[a], (*e).clone())).map(|(e, c)| (e.clone(), c.clone())) {
        if e[a] == 0 {
            return Err(Error::Shape(format!("polynomial not divisible by x{} - x{}", a + 1, b + 1)));
        }
        let mut qe = e.clone();
        qe[a] -= 1;
        add_into(&mut quot, qe.clone(), c.clone());
        // subtract c x^qe (x_a - x_b)
        add_into(&mut rem, e, -c.clone());
        let mut eb = qe;
        eb[b] += 1;
        add_into(&mut rem, eb, c);
    }
    Ok(quot)
}

fn qshift(p: &Poly, i: usize, q: &Scalar) -> Result<Poly> {
    p.iter().map(|(e, c)| Ok((e.clone(), c * powi(q, e[i] as i64)?))).collect()
}

/// Sum of the distinct permutations of `x^mu`.
fn monomial_symmetric(mu: &[u32]) -> Poly {
    let mut v = mu.to_vec();
    v.sort_unstable();
    let mut out = Poly::new();
    loop {
        out.insert(v.clone(), Scalar::one());
        if !next_permutation(&mut v) {
            break;
        }
    }
    out
}

fn next_permutation(v: &mut [u32]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else {
        return false;
    };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot exists");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// The first Macdonald operator written with an explicit Vandermonde:
/// `V^{-1} sum_i (-1)^{i-1} V_(i) prod_{j != i}(t x_i - x_j) f(q x_i)`.
fn macdonald_operator(p: &Poly, n: usize, q: &Scalar, t: &Scalar) -> Result<Poly> {
    let mut acc = Poly::new();
    for i in 0..n {
        let mut term = qshift(p, i, q)?;
        for j in 0..n {
            if j != i {
                term = mul(&term, &binomial(n, i, t.clone(), j, -Scalar::one()));
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if a != i && b != i {
                    term = mul(&term, &binomial(n, a, Scalar::one(), b, -Scalar::one()));
                }
            }
        }
        let sign = if i % 2 == 0 { Scalar::one() } else { -Scalar::one() };
        for (e, c) in term {
            add_into(&mut acc, e, c * &sign);
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            acc = divide_by_difference(&acc, a, b)?;
        }
    }
    Ok(acc)
}

/// A symmetric polynomial in `n` variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymPoly {
    pub n: usize,
    pub terms: BTreeMap<Vec<u32>, Scalar>,
}

impl SymPoly {
    pub fn coeff(&self, e: &[u32]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }
}

fn padded(p: &Partition, n: usize) -> Vec<u32> {
    let mut v = p.parts().to_vec();
    v.resize(n, 0);
    v
}

/// Monic-on-`m_lam` eigenpolynomial of the first Macdonald operator.
pub fn macdonald_oracle(lam: &Partition, n: usize, q: &Scalar, t: &Scalar) -> Result<SymPoly> {
    if lam.len() > n {
        return Err(Error::Invalid(format!("{lam} has more than {n} parts")));
    }
    let top = padded(lam, n);
    // dominance is refined by lex order, so solve downwards in lex order
    let mut basis: Vec<Vec<u32>> =
        partitions_of(lam.weight()).into_iter().filter(|p| p.len() <= n).map(|p| padded(&p, n)).collect();
    basis.sort_unstable_by(|a, b| b.cmp(a));
    basis.retain(|mu| *mu <= top);
    let images: Vec<Poly> = basis.iter().map(|mu| macdonald_operator(&monomial_symmetric(mu), n, q, t)).collect::<Result<_>>()?;
    let entry = |nu: &Vec<u32>, mu_idx: usize| images[mu_idx].get(nu).cloned().unwrap_or_else(Scalar::zero);
    let eigen = entry(&basis[0], 0);
    let mut coeffs = vec![Scalar::zero(); basis.len()];
    coeffs[0] = Scalar::one();
    for k in 1..basis.len() {
        let nu = &basis[k];
        let diag = entry(nu, k);
        let gap = &eigen - &diag;
        if gap.is_zero() {
            return Err(Error::Pole(format!("eigenvalue collision between {:?} and {:?}", top, nu)));
        }
        let rhs: Scalar = (0..k).map(|m| &coeffs[m] * entry(nu, m)).sum();
        coeffs[k] = rhs / gap;
    }
    let mut terms = Poly::new();
    for (mu, c) in basis.iter().zip(&coeffs) {
        for e in monomial_symmetric(mu).into_keys() {
            add_into(&mut terms, e, c.clone());
        }
    }
    Ok(SymPoly { n, terms })
}

/// The oracle polynomial divided by `x^lam` in the trigonometric chart.
fn chart_expansion(p: &SymPoly, lam: &[u32]) -> Result<Vec<(Exponent, Scalar)>> {
    let n = p.n;
    p.terms
        .iter()
        .map(|(e, c)| {
            let mut acc = 0i64;
            let mut alpha = Vec::with_capacity(n.saturating_sub(1));
            for i in 0..n - 1 {
                acc += lam[i] as i64 - e[i] as i64;
                alpha.push(acc);
            }
            let ex = Exponent::from_signed(&alpha)
                .ok_or_else(|| Error::Shape(format!("monomial {e:?} is not below x^{lam:?}")))?;
            Ok((ex, c.clone()))
        })
        .collect()
}

/// `x^lam f_trig` at `s_i = t^{N-i} q^{lam_i}` against the oracle polynomial.
pub fn check_macdonald_reduction(lam: &Partition, n: usize, r: &Scalar, t: &Scalar) -> Result<CheckReport> {
    let mut rep = CheckReport::new("macdonald", Status::Proven);
    let q = r * r;
    let p = macdonald_oracle(lam, n, &q, t)?;
    let top = padded(lam, n);
    let expected = chart_expansion(&p, &top)?;
    let d = expected.iter().map(|(e, _)| e.degree()).max().unwrap_or(0) + 1;
    let lam_i: Vec<i64> = top.iter().map(|&x| x as i64).collect();
    let point = ParamPoint::spectral(r.clone(), t.clone(), Scalar::one(), &lam_i)?;
    let f = f_trig(&SeriesRequest::new(point, d))?;
    let want = TruncatedSeries::from_terms(n - 1, Truncation::Total(d), expected)?;
    rep.compare(&format!("{lam} in {n} variables"), &f, &want)?;
    Ok(rep)
}
