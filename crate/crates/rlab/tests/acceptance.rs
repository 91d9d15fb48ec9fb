//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
//! Conjecture-evidence criteria are asserted at the small orders listed here.

use std::process::ExitCode;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rlab::combinatorics::enumerate_partitions;
use rlab::convergence::{check_euler_identity, check_fraction_estimates, check_block_products};
use rlab::identities::{
    check_balanced_single, check_bounds, check_nonstat_eigen, check_e_eigen, check_balanced_eigen, check_intertwining, check_theta_forms,
    check_trig_eigen, check_nekrasov_forms, random_body, run, CheckConfig, Identity,
};
use rlab::operators::{check_commutativity, OperatorContext};
use rlab::report::{CheckReport, Status};
use rlab::ruijsenaars::{check_chi_duality, check_duality_nonstat, check_duality_trig, check_macdonald_reduction, check_nome_limit, SeriesRequest};
use rlab::series::{frac, int};
use rlab::special::{small_rational, ParamPoint};
use rlab::Result;

const SEED: u64 = 20_240_601;

/// Seeded pole-free points: redraws when a probe hits a pole.
fn points<F>(n: usize, count: usize, seed: u64, mut probe: F) -> Result<CheckReport>
where
    F: FnMut(&ParamPoint) -> Result<CheckReport>,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = CheckReport::new("points", Status::Proven);
    let mut done = 0;
    while done < count {
        let p = ParamPoint::random(&mut rng, n);
        match probe(&p) {
            Err(rlab::Error::Pole(_)) => continue,
            other => rep.merge(other?),
        }
        done += 1;
    }
    Ok(rep)
}

fn padded_partitions(n: usize, max_weight: u32) -> Vec<Vec<i64>> {
    enumerate_partitions(max_weight)
        .filter(|p| p.len() <= n)
        .map(|p| {
            let mut v: Vec<i64> = p.parts().iter().map(|&x| x as i64).collect();
            v.resize(n, 0);
            v
        })
        .collect()
}

fn theta_forms() -> Result<CheckReport> {
    let mut rep = CheckReport::new("matrix and multipartition coefficients", Status::Proven);
    for n in 1..=3 {
        rep.merge(points(n, 5, SEED + n as u64, |p| check_theta_forms(p, 6))?);
    }
    Ok(rep)
}

fn kappa_free_form() -> Result<CheckReport> {
    let mut rep = CheckReport::new("kappa-free coefficient form", Status::Proven);
    for n in 1..=3 {
        rep.merge(points(n, 5, SEED + 10 + n as u64, |p| check_nekrasov_forms(p, 6))?);
    }
    Ok(rep)
}

fn nome_limit() -> Result<CheckReport> {
    let mut rep = CheckReport::new("nome-free slice is the trigonometric series", Status::Proven);
    for n in 1..=3 {
        rep.merge(points(n, 2, SEED + 20 + n as u64, |p| check_nome_limit(&SeriesRequest::new(p.clone(), 8)))?);
    }
    Ok(rep)
}

fn macdonald_reduction() -> Result<CheckReport> {
    let mut rep = CheckReport::new("Macdonald polynomial reduction", Status::Proven);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 30);
    for n in 2..=3 {
        for lam in enumerate_partitions(4).filter(|p| p.len() <= n) {
            let mut done = 0;
            while done < 3 {
                let (r, t) = (small_rational(&mut rng), small_rational(&mut rng));
                match check_macdonald_reduction(&lam, n, &r, &t) {
                    Err(rlab::Error::Pole(_)) => continue,
                    other => rep.merge(other?),
                }
                done += 1;
            }
        }
    }
    Ok(rep)
}

fn modified_operator() -> Result<CheckReport> {
    let mut rep = CheckReport::new("modified operator eigenrelation", Status::Proven);
    for n in 1..=3 {
        rep.merge(points(n, 2, SEED + 40 + n as u64, |p| check_e_eigen(p, 8))?);
    }
    Ok(rep)
}

fn d_and_e_intertwining() -> Result<CheckReport> {
    let mut rep = CheckReport::new("D and E intertwining", Status::Proven);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 50);
    for n in 2..=3usize {
        for k in 0..10 {
            let ctx = OperatorContext::new(n, small_rational(&mut rng), small_rational(&mut rng));
            let lam = padded_partitions(n, 3)[k % padded_partitions(n, 3).len()].clone();
            let body = random_body(&mut rng, n - 1, 5, 8)?;
            rep.merge(check_intertwining(&ctx, &lam, &body)?);
        }
    }
    Ok(rep)
}

fn trig_operator() -> Result<CheckReport> {
    let mut rep = CheckReport::new("trigonometric T-operator eigenrelation and commutativity", Status::Proven);
    let r = frac(1, 2);
    for n in 2..=3usize {
        for beta in 1..=2 {
            for lam in padded_partitions(n, 3) {
                rep.merge(check_trig_eigen(n, &r, beta, &lam, 6)?);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 60);
    for n in 2..=3usize {
        let ctx = OperatorContext::with_beta(n, r.clone(), 1)?;
        for _ in 0..5 {
            let lam = vec![0; n];
            let body = random_body(&mut rng, n - 1, 4, 6)?.with_prefix(Some(lam.iter().map(|&l: &i64| int(l)).collect()));
            for sign in [1, -1] {
                let e = check_commutativity(&body, sign, &ctx, 1)?;
                let mut c = CheckReport::new("commutativity", Status::Proven);
                c.checked = e.lhs.len();
                if let Some(d) = &e.first_discrepancy {
                    c.fail(CheckReport::discrepancy("commutator", d));
                }
                rep.merge(c);
            }
        }
    }
    Ok(rep)
}

fn nonstat_operator() -> Result<CheckReport> {
    let mut rep = CheckReport::new("non-stationary T-operator eigenrelation (conjecture evidence)", Status::Conjecture);
    for lam in [vec![0, 0], vec![1, 0]] {
        rep.merge(check_nonstat_eigen(2, &frac(1, 2), 1, &frac(3, 7), &lam, 3)?);
    }
    Ok(rep)
}

fn balanced_operator() -> Result<CheckReport> {
    let mut rep = CheckReport::new("balanced T-operator eigenrelation (conjecture evidence)", Status::Conjecture);
    let r = frac(1, 2);
    let kappa = frac(3, 7);
    for n in 1..=2usize {
        for beta in [0, 2] {
            for lam in padded_partitions(n, 1) {
                rep.merge(check_balanced_eigen(n, &r, beta, &kappa, &lam, 2)?);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 90);
    for beta in [1, 2] {
        for _ in 0..3 {
            let body = random_body(&mut rng, 1, 2, 3)?.with_prefix(Some(vec![int(1)]));
            rep.merge(check_balanced_single(&r, beta, &kappa, &body)?);
        }
    }
    Ok(rep)
}

fn dualities() -> Result<CheckReport> {
    let mut rep = CheckReport::new("bispectral, Poincare and chi dualities", Status::Proven);
    for n in 2..=3 {
        rep.merge(points(n, 3, SEED + 100 + n as u64, |p| {
            let req = SeriesRequest::new(p.clone(), 4).dual(4);
            let mut r = check_duality_trig(&req)?;
            r.merge(check_chi_duality(&req)?);
            Ok(r)
        })?);
    }
    rep.merge(points(2, 2, SEED + 110, |p| check_duality_nonstat(&SeriesRequest::new(p.clone(), 2).dual(2)))?);
    Ok(rep)
}

fn bounds_and_sums() -> Result<CheckReport> {
    let mut rep = CheckReport::new("coefficient bounds and partial sums (float)", Status::Proven);
    for n in 2..=3 {
        rep.merge(check_bounds(n, 6, 10, SEED + 120 + n as u64)?);
    }
    Ok(rep)
}

fn fraction_estimates() -> Result<CheckReport> {
    let mut rep = CheckReport::new("fraction estimates (float)", Status::Proven);
    let b1 = check_fraction_estimates(200, SEED + 130);
    rep.checked = b1.a.samples + b1.b.samples + b1.c.samples;
    if !b1.passed() {
        rep.fail(format!("{b1:?}"));
    }
    Ok(rep)
}

fn euler_and_block_products() -> Result<CheckReport> {
    let mut rep = check_euler_identity(12)?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 140);
    for n in 1..=3 {
        let (a, b, q) = (small_rational(&mut rng), small_rational(&mut rng), small_rational(&mut rng));
        rep.merge(check_block_products(&a, &b, &q, n, 6)?);
    }
    // the named entry point runs the same ranges
    let mut cfg = CheckConfig::new(2, 6);
    cfg.seed = SEED;
    rep.merge(run(Identity::BlockProducts, &cfg)?);
    Ok(rep)
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Result<CheckReport>); 13] = [
        (1, theta_forms),
        (2, kappa_free_form),
        (3, nome_limit),
        (4, macdonald_reduction),
        (5, modified_operator),
        (6, d_and_e_intertwining),
        (7, trig_operator),
        (8, nonstat_operator),
        (9, balanced_operator),
        (10, dualities),
        (11, bounds_and_sums),
        (12, fraction_estimates),
        (13, euler_and_block_products),
    ];
    let mut failed = 0;
    for (k, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(rep) if rep.passed() => println!("PASS criterion {k:>2}: {} checks, {secs:.2}s", rep.checked),
            Ok(rep) => {
                failed += 1;
                println!("FAIL criterion {k:>2}: {}", rep.failure.unwrap_or_default());
            }
            Err(e) => {
                failed += 1;
                println!("FAIL criterion {k:>2}: error {e}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
