//! Partitions, multipartitions and the strictly upper triangular index
//! matrices the series are summed over.

use std::fmt;

/// Weakly decreasing positive parts; reading past the end gives 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Drops trailing zeros; `None` unless weakly decreasing.
    pub fn new(mut parts: Vec<u32>) -> Option<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return None;
        }
        Some(Partition(parts))
    }

    pub fn empty() -> Self {
        Partition(Vec::new())
    }

    /// 1-based part, zero beyond the length (and for index 0 as a convenience
    /// for formulas that never read it).
    pub fn part(&self, k: i64) -> i64 {
        if k < 1 {
            return 0;
        }
        self.0.get(k as usize - 1).map_or(0, |&p| p as i64)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// An `N`-tuple of partitions, indexed cyclically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiPartition(Vec<Partition>);

impl MultiPartition {
    pub fn new(components: Vec<Partition>) -> Self {
        assert!(!components.is_empty(), "a multipartition needs at least one component");
        MultiPartition(components)
    }

    pub fn empty(n: usize) -> Self {
        MultiPartition(vec![Partition::empty(); n])
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    /// Component `i` (1-based, any integer, read modulo N).
    pub fn component(&self, i: i64) -> &Partition {
        &self.0[(i - 1).rem_euclid(self.0.len() as i64) as usize]
    }

    pub fn components(&self) -> &[Partition] {
        &self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(Partition::weight).sum()
    }

    /// Chart exponent of its monomial: box `k` of component `i` contributes
    /// one power of `z_{i+k-1}` (cyclic).
    pub fn monomial(&self) -> Vec<u32> {
        let n = self.n();
        let mut e = vec![0u32; n];
        for (i0, lam) in self.0.iter().enumerate() {
            for (k0, &part) in lam.parts().iter().enumerate() {
                e[(i0 + k0) % n] += part;
            }
        }
        e
    }
}

impl fmt::Display for MultiPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "]")
    }
}

/// Partitions of exactly `w`, largest first part first.
pub fn partitions_of(w: u32) -> Vec<Partition> {
    fn rec(rest: u32, cap: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(cur.clone()));
            return;
        }
        for p in (1..=rest.min(cap)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(w, w, &mut Vec::new(), &mut out);
    out
}

/// Every partition of weight at most `max_weight`, grouped by weight.
pub fn enumerate_partitions(max_weight: u32) -> impl Iterator<Item = Partition> {
    (0..=max_weight).flat_map(partitions_of)
}

/// Multipartitions of exactly weight `w` with `n` components.
pub fn multipartitions_of(n: usize, w: u32) -> Vec<MultiPartition> {
    fn rec(n: usize, w: u32) -> Vec<Vec<Partition>> {
        if n == 1 {
            return partitions_of(w).into_iter().map(|p| vec![p]).collect();
        }
        let mut out = Vec::new();
        for w1 in (0..=w).rev() {
            let tails = rec(n - 1, w - w1);
            for head in partitions_of(w1) {
                for tail in &tails {
                    let mut v = Vec::with_capacity(n);
                    v.push(head.clone());
                    v.extend(tail.iter().cloned());
                    out.push(v);
                }
            }
        }
        out
    }
    assert!(n >= 1);
    rec(n, w).into_iter().map(MultiPartition).collect()
}

/// Every multipartition of total weight at most `max_weight`, grouped by weight.
pub fn enumerate_multipartitions(n: usize, max_weight: u32) -> impl Iterator<Item = MultiPartition> {
    (0..=max_weight).flat_map(move |w| multipartitions_of(n, w))
}

/// Strictly upper triangular `N x N` matrix of nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaMatrix {
    n: usize,
    // row-major over pairs i < k
    entries: Vec<u32>,
}

fn pair_index(n: usize, i: usize, k: usize) -> usize {
    // rows 1..i-1 contribute (n - r) entries each
    let before: usize = (1..i).map(|r| n - r).sum();
    before + (k - i - 1)
}

impl ThetaMatrix {
    pub fn zero(n: usize) -> Self {
        ThetaMatrix { n, entries: vec![0; n * n.saturating_sub(1) / 2] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `theta_{ik}` with 1-based indices; zero off the strict upper triangle.
    pub fn get(&self, i: i64, k: i64) -> u32 {
        if i < 1 || k <= i || k > self.n as i64 {
            return 0;
        }
        self.entries[pair_index(self.n, i as usize, k as usize)]
    }

    pub fn set(&mut self, i: usize, k: usize, v: u32) {
        assert!(1 <= i && i < k && k <= self.n, "index ({i},{k}) outside the strict upper triangle");
        self.entries[pair_index(self.n, i, k)] = v;
    }

    /// Total degree of the monomial `prod (x_k/x_i)^{theta_ik}`.
    pub fn zdegree(&self) -> u32 {
        self.nonzero().map(|(i, k, v)| v * (k - i) as u32).sum()
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        (1..=self.n)
            .flat_map(move |i| (i + 1..=self.n).map(move |k| (i, k)))
            .map(move |(i, k)| (i, k, self.get(i as i64, k as i64)))
            .filter(|&(_, _, v)| v > 0)
    }

    /// As a periodic matrix supported inside one block.
    pub fn to_periodic(&self) -> PeriodicThetaMatrix {
        let mut p = PeriodicThetaMatrix::zero(self.n, self.n.saturating_sub(1) as u32);
        for (i, k, v) in self.nonzero() {
            p.set(i, (k - i) as u32, v);
        }
        p
    }
}

/// An `N`-periodic strictly upper triangular matrix, stored as rows `1..=N`
/// with `theta_{i,i+d}` for `1 <= d <= width`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PeriodicThetaMatrix {
    n: usize,
    width: u32,
    rows: Vec<Vec<u32>>,
}

impl PeriodicThetaMatrix {
    pub fn zero(n: usize, width: u32) -> Self {
        PeriodicThetaMatrix { n, width, rows: vec![vec![0; width as usize]; n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    /// `theta_{ik}` for any integers, using `theta_{i+N,k+N} = theta_{ik}`.
    pub fn get(&self, i: i64, k: i64) -> u32 {
        let d = k - i;
        if d < 1 || d > self.width as i64 {
            return 0;
        }
        let row = (i - 1).rem_euclid(self.n as i64) as usize;
        self.rows[row][d as usize - 1]
    }

    /// Sets `theta_{i,i+d}` for a row `1..=N`.
    pub fn set(&mut self, i: usize, d: u32, v: u32) {
        assert!(1 <= i && i <= self.n && d >= 1);
        if d > self.width {
            for row in &mut self.rows {
                row.resize(d as usize, 0);
            }
            self.width = d;
        }
        self.rows[i - 1][d as usize - 1] = v;
    }

    pub fn zdegree(&self) -> u32 {
        self.rows
            .iter()
            .flat_map(|r| r.iter().enumerate().map(|(d0, &v)| v * (d0 as u32 + 1)))
            .sum()
    }

    /// `(i, k, theta_ik)` over rows `1..=N` with nonzero entries.
    pub fn nonzero(&self) -> impl Iterator<Item = (i64, i64, u32)> + '_ {
        self.rows.iter().enumerate().flat_map(|(i0, r)| {
            r.iter()
                .enumerate()
                .filter(|&(_, &v)| v > 0)
                .map(move |(d0, &v)| (i0 as i64 + 1, i0 as i64 + 2 + d0 as i64, v))
        })
    }

    /// Largest column offset with a nonzero entry.
    pub fn support_width(&self) -> u32 {
        self.rows
            .iter()
            .filter_map(|r| r.iter().rposition(|&v| v > 0))
            .map(|d0| d0 as u32 + 1)
            .max()
            .unwrap_or(0)
    }

    /// Same matrix with the band cut to the support, for equality up to storage.
    pub fn normalized(&self) -> Self {
        let w = self.support_width();
        PeriodicThetaMatrix {
            n: self.n,
            width: w,
            rows: self.rows.iter().map(|r| r[..w as usize].to_vec()).collect(),
        }
    }

    /// The finite block part, if all entries sit inside rows and columns `1..=N`.
    pub fn to_block(&self) -> Option<ThetaMatrix> {
        let mut m = ThetaMatrix::zero(self.n);
        for (i, k, v) in self.nonzero() {
            if k > self.n as i64 {
                return None;
            }
            m.set(i as usize, k as usize, v);
        }
        Some(m)
    }
}

/// Nonnegative vectors over weighted slots with weighted sum at most `max`.
fn weighted_vectors(weights: &[u32], max: u32) -> Vec<(Vec<u32>, u32)> {
    fn rec(weights: &[u32], rest: u32, cur: &mut Vec<u32>, deg: u32, out: &mut Vec<(Vec<u32>, u32)>) {
        let Some((&w, tail)) = weights.split_first() else {
            out.push((cur.clone(), deg));
            return;
        };
        for v in 0..=rest / w {
            cur.push(v);
            rec(tail, rest - v * w, cur, deg + v * w, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(weights, max, &mut Vec::new(), 0, &mut out);
    out.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)));
    out
}

/// All of `M_N` up to the given degree, grouped by degree.
pub fn enumerate_theta(n: usize, max_zdegree: u32) -> Vec<ThetaMatrix> {
    let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |k| (i, k))).collect();
    let weights: Vec<u32> = pairs.iter().map(|&(i, k)| (k - i) as u32).collect();
    weighted_vectors(&weights, max_zdegree)
        .into_iter()
        .map(|(v, _)| {
            let mut m = ThetaMatrix::zero(n);
            for (&(i, k), &x) in pairs.iter().zip(&v) {
                if x > 0 {
                    m.set(i, k, x);
                }
            }
            m
        })
        .collect()
}

/// All band representatives of the periodic matrices up to the given degree.
/// The band width is `max_zdegree`, since longer offsets cost more.
pub fn enumerate_periodic_theta(n: usize, max_zdegree: u32) -> Vec<PeriodicThetaMatrix> {
    let slots: Vec<(usize, u32)> = (1..=n).flat_map(|i| (1..=max_zdegree).map(move |d| (i, d))).collect();
    let weights: Vec<u32> = slots.iter().map(|&(_, d)| d).collect();
    weighted_vectors(&weights, max_zdegree)
        .into_iter()
        .map(|(v, _)| {
            let mut m = PeriodicThetaMatrix::zero(n, max_zdegree);
            for (&(i, d), &x) in slots.iter().zip(&v) {
                if x > 0 {
                    m.set(i, d, x);
                }
            }
            m
        })
        .collect()
}

/// `lambda^(i)_d = sum_{d' >= d} theta_{i,i+d'}`.
pub fn theta_to_multipartition(theta: &PeriodicThetaMatrix) -> MultiPartition {
    let comps = (1..=theta.n())
        .map(|i| {
            let w = theta.support_width();
            let mut parts = vec![0u32; w as usize];
            let mut acc = 0;
            for d in (1..=w).rev() {
                acc += theta.get(i as i64, i as i64 + d as i64);
                parts[d as usize - 1] = acc;
            }
            Partition::new(parts).expect("suffix sums decrease")
        })
        .collect();
    MultiPartition(comps)
}

/// `theta_{i,i+d} = lambda^(i)_d - lambda^(i)_{d+1}`.
pub fn multipartition_to_theta(lam: &MultiPartition) -> PeriodicThetaMatrix {
    let n = lam.n();
    let width = lam.components().iter().map(|p| p.len() as u32).max().unwrap_or(0);
    let mut m = PeriodicThetaMatrix::zero(n, width);
    for i in 1..=n {
        let p = lam.component(i as i64);
        for d in 1..=p.len() as i64 {
            let v = p.part(d) - p.part(d + 1);
            if v > 0 {
                m.set(i, d as u32, v as u32);
            }
        }
    }
    m
}

/// Chart exponent of `prod (x_k/x_i)^{theta_ik}` in `nvars` variables
/// (`N` for the periodic chart, `N - 1` for block matrices).
pub fn theta_monomial(theta: &PeriodicThetaMatrix, nvars: usize) -> Vec<u32> {
    let n = theta.n();
    let mut e = vec![0u32; n];
    for (i, k, v) in theta.nonzero() {
        for c in i..k {
            e[((c - 1) as usize) % n] += v;
        }
    }
    e.truncate(nvars);
    e
}
