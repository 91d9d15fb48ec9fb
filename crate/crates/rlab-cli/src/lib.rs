//! Command line front end: `expand`, `check` and `bounds`, with JSON or
//! plain-text output and exit codes that separate theorem failures from
//! conjecture deviations.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use rlab::identities::{admissible_inputs, run as run_identity, CheckConfig, Identity};
use rlab::parse::{parse_config, parse_int_list, parse_list, parse_rational};
use rlab::report::{CheckReport, Status};
use rlab::ruijsenaars::{chi, f_gl_balanced, f_nonstat, f_trig, phi_nonstat, phi_trig, Representation, SeriesRequest};
use rlab::special::{small_rational, ParamPoint};
use rlab::{convergence, Error, Scalar, TruncatedSeries};

/// Exit code when a proven identity fails, or a conjecture deviates under `--strict`.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit code for bad input or a computation error such as a pole.
pub const EXIT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "rlab", version, about = "Exact series for Ruijsenaars functions and identity checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expand one series to the requested order.
    Expand {
        #[arg(value_enum, default_value_t = SeriesKind::FTrig)]
        series: SeriesKind,
        /// Sum used for the non-stationary series.
        #[arg(long, value_enum, default_value_t = Repr::Theta)]
        representation: Repr,
    },
    /// Run named identity checks (all of them when none are given).
    Check { identities: Vec<String> },
    /// Convergence constants, coefficient bounds and partial sums (floating point).
    Bounds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    #[value(name = "f_trig")]
    FTrig,
    #[value(name = "f_nonstat")]
    FNonstat,
    #[value(name = "f_gl")]
    FGl,
    #[value(name = "phi_trig")]
    PhiTrig,
    #[value(name = "phi_nonstat")]
    PhiNonstat,
    #[value(name = "chi")]
    Chi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Repr {
    Theta,
    Multipartition,
}

fn rational_arg(s: &str) -> Result<Scalar, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

/// A comma separated list kept as one flag value.
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarList(pub Vec<Scalar>);

/// A comma separated list of integers kept as one flag value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntList(pub Vec<i64>);

fn list_arg(s: &str) -> Result<ScalarList, String> {
    parse_list(s).map(ScalarList).map_err(|e| e.to_string())
}

fn int_list_arg(s: &str) -> Result<IntList, String> {
    parse_int_list(s).map(IntList).map_err(|e| e.to_string())
}

/// Flags shared by every command. Unset values come from `--config`, then defaults.
#[derive(Args, Debug, Clone, Default)]
pub struct Options {
    #[arg(long = "N", global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub order: Option<u32>,
    #[arg(long = "dual-order", global = true)]
    pub dual_order: Option<u32>,
    /// Square root of q.
    #[arg(long, global = true, value_parser = rational_arg)]
    pub r: Option<Scalar>,
    #[arg(long, global = true, value_parser = rational_arg)]
    pub t: Option<Scalar>,
    #[arg(long, global = true, value_parser = rational_arg)]
    pub kappa: Option<Scalar>,
    /// Spectral values, comma separated.
    #[arg(long, global = true, value_parser = list_arg)]
    pub s: Option<ScalarList>,
    /// Integer shifts; with `--beta` (or `--t`) they fix the spectral values.
    #[arg(long, global = true, value_parser = int_list_arg, allow_hyphen_values = true)]
    pub lambda: Option<IntList>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub beta: Option<i64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Points, bodies or samples per check.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Fail the run when a conjecture check deviates.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// File of `key = value` lines using the flag names.
    #[arg(long, global = true)]
    pub config: Option<std::path::PathBuf>,
    #[arg(long, global = true, conflicts_with = "plain")]
    pub json: bool,
    #[arg(long, global = true)]
    pub plain: bool,
}

/// Fully resolved inputs.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub n: usize,
    pub order: u32,
    pub dual_order: Option<u32>,
    pub r: Scalar,
    pub t: Option<Scalar>,
    pub kappa: Option<Scalar>,
    pub s: Option<Vec<Scalar>>,
    pub lambda: Option<Vec<i64>>,
    pub beta: Option<i64>,
    pub seed: u64,
    pub samples: usize,
    pub strict: bool,
    pub plain: bool,
}

fn from_config<T>(map: &BTreeMap<String, String>, key: &str, parse: impl Fn(&str) -> rlab::Result<T>) -> rlab::Result<Option<T>> {
    map.get(key).map(|v| parse(v)).transpose()
}

fn parse_num<T: std::str::FromStr>(v: &str) -> rlab::Result<T> {
    v.trim().parse().map_err(|_| Error::Parse(format!("not a number: {v:?}")))
}

impl RunConfig {
    /// Merges flags over an optional config text and validates the result.
    pub fn resolve(opts: &Options, config_text: Option<&str>) -> rlab::Result<Self> {
        let map = match config_text {
            Some(text) => parse_config(text)?,
            None => BTreeMap::new(),
        };
        const KNOWN: [&str; 11] = ["N", "order", "dual-order", "r", "t", "kappa", "s", "lambda", "beta", "seed", "samples"];
        if let Some(k) = map.keys().find(|k| !KNOWN.contains(&k.as_str())) {
            return Err(Error::Parse(format!("unknown config key {k:?}")));
        }
        let cfg = RunConfig {
            n: opts.n.or(from_config(&map, "N", parse_num)?).unwrap_or(2),
            order: opts.order.or(from_config(&map, "order", parse_num)?).unwrap_or(4),
            dual_order: opts.dual_order.or(from_config(&map, "dual-order", parse_num)?),
            r: opts.r.clone().or(from_config(&map, "r", parse_rational)?).unwrap_or_else(|| rlab::series::frac(1, 2)),
            t: opts.t.clone().or(from_config(&map, "t", parse_rational)?),
            kappa: opts.kappa.clone().or(from_config(&map, "kappa", parse_rational)?),
            s: opts.s.clone().map(|l| l.0).or(from_config(&map, "s", parse_list)?),
            lambda: opts.lambda.clone().map(|l| l.0).or(from_config(&map, "lambda", parse_int_list)?),
            beta: opts.beta.or(from_config(&map, "beta", parse_num)?),
            seed: opts.seed.or(from_config(&map, "seed", parse_num)?).unwrap_or(0),
            samples: opts.samples.or(from_config(&map, "samples", parse_num)?).unwrap_or(3),
            strict: opts.strict,
            plain: opts.plain,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> rlab::Result<()> {
        if self.n == 0 || self.n > 8 {
            return Err(Error::Invalid(format!("N = {} outside 1..=8", self.n)));
        }
        if self.order > 40 || self.dual_order.is_some_and(|d| d > 40) {
            return Err(Error::Invalid("orders above 40 are not supported".into()));
        }
        let zero = Scalar::from_integer(0.into());
        if self.r == zero || self.t.as_ref() == Some(&zero) || self.kappa.as_ref() == Some(&zero) {
            return Err(Error::Invalid("r, t and kappa must be nonzero".into()));
        }
        for (name, len) in [("s", self.s.as_ref().map(Vec::len)), ("lambda", self.lambda.as_ref().map(Vec::len))] {
            if let Some(len) = len {
                if len != self.n {
                    return Err(Error::Shape(format!("--{name} has {len} entries for N = {}", self.n)));
                }
            }
        }
        if self.s.is_some() && self.lambda.is_some() {
            return Err(Error::Invalid("give either --s or --lambda".into()));
        }
        Ok(())
    }

    /// The parameter point: explicit `s`, or spectral from `lambda`, or seeded values.
    pub fn point(&self, balanced: bool) -> rlab::Result<ParamPoint> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let t = self.t.clone().unwrap_or_else(|| small_rational(&mut rng));
        let kappa = self.kappa.clone().unwrap_or_else(|| small_rational(&mut rng));
        match (&self.s, &self.lambda, self.beta) {
            (Some(s), _, _) => ParamPoint::new(self.r.clone(), t, kappa, s.clone()),
            (None, Some(lam), Some(beta)) if balanced => ParamPoint::balanced_spectral_beta(self.r.clone(), beta, kappa, lam),
            (None, Some(lam), Some(beta)) => ParamPoint::spectral_beta(self.r.clone(), beta, kappa, lam),
            (None, Some(lam), None) => ParamPoint::spectral(self.r.clone(), t, kappa, lam),
            (None, None, _) => {
                let s = (0..self.n).map(|_| small_rational(&mut rng)).collect();
                ParamPoint::new(self.r.clone(), t, kappa, s)
            }
        }
    }

    fn check_config(&self) -> CheckConfig {
        let mut c = CheckConfig::new(self.n, self.order);
        c.dual_order = self.dual_order;
        c.r = self.r.clone();
        c.t = self.t.clone();
        c.kappa = self.kappa.clone();
        c.s = self.s.clone();
        c.lambda = self.lambda.clone();
        c.beta = self.beta.unwrap_or(1);
        c.seed = self.seed;
        c.samples = self.samples;
        c
    }
}

/// What a run prints and how it exits.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
}

fn rational(x: &Scalar) -> Value {
    json!({ "num": x.numer().to_string(), "den": x.denom().to_string() })
}

fn error_outcome(e: &Error, plain: bool) -> Outcome {
    let output = if plain {
        format!("error ({}): {e}\n", e.kind())
    } else {
        let doc = json!({ "error": { "kind": e.kind(), "message": e.to_string() } });
        format!("{}\n", serde_json::to_string_pretty(&doc).expect("json values serialize"))
    };
    Outcome { code: EXIT_ERROR, output }
}

fn render(doc: &Value) -> String {
    format!("{}\n", serde_json::to_string_pretty(doc).expect("json values serialize"))
}

fn point_json(p: &ParamPoint) -> Value {
    json!({
        "r": rational(&p.r),
        "q": rational(&p.q),
        "t": rational(&p.t),
        "kappa": rational(&p.kappa),
        "s": p.s.iter().map(rational).collect::<Vec<_>>(),
    })
}

fn variable_names(series: &TruncatedSeries, split: Option<usize>) -> Vec<String> {
    let split = split.unwrap_or(series.nvars());
    (0..series.nvars())
        .map(|i| if i < split { format!("z{}", i + 1) } else { format!("w{}", i - split + 1) })
        .collect()
}

fn expand(cfg: &RunConfig, kind: SeriesKind, repr: Repr) -> rlab::Result<Outcome> {
    let point = cfg.point(kind == SeriesKind::FGl)?;
    let mut req = SeriesRequest::new(point.clone(), cfg.order).representation(match repr {
        Repr::Theta => Representation::Theta,
        Repr::Multipartition => Representation::Multipartition,
    });
    let needs_dual = matches!(kind, SeriesKind::PhiTrig | SeriesKind::PhiNonstat | SeriesKind::Chi);
    if let Some(ds) = cfg.dual_order.or(needs_dual.then_some(cfg.order)) {
        req = req.dual(ds);
    }
    let (name, series, split) = match kind {
        SeriesKind::FTrig => ("f_trig", f_trig(&req)?, cfg.n - 1),
        SeriesKind::FNonstat => ("f_nonstat", f_nonstat(&req)?, cfg.n),
        SeriesKind::FGl => ("f_gl", f_gl_balanced(&req)?, cfg.n),
        SeriesKind::PhiTrig => ("phi_trig", phi_trig(&req)?, cfg.n - 1),
        SeriesKind::PhiNonstat => ("phi_nonstat", phi_nonstat(&req)?, cfg.n),
        SeriesKind::Chi => ("chi", chi(&req)?, cfg.n - 1),
    };
    let split = req.dual_order.map(|_| split);
    let names = variable_names(&series, split);
    if cfg.plain {
        let mut out = format!("{name} to order {} in {}\n", cfg.order, names.join(", "));
        let rows: Vec<(String, String)> = series.iter().map(|(e, c)| (format!("{:?}", e.entries()), c.to_string())).collect();
        let width = rows.iter().map(|(e, _)| e.len()).max().unwrap_or(0);
        for (e, c) in rows {
            let _ = writeln!(out, "{e:<width$}  {c}");
        }
        return Ok(Outcome { code: 0, output: out });
    }
    let terms: Vec<Value> = series
        .iter()
        .map(|(e, c)| json!({ "exponents": e.entries(), "num": c.numer().to_string(), "den": c.denom().to_string() }))
        .collect();
    let doc = json!({
        "series": name,
        "variables": names,
        "order": cfg.order,
        "dual_order": req.dual_order,
        "point": point_json(&point),
        "terms": terms,
    });
    Ok(Outcome { code: 0, output: render(&doc) })
}

fn verdict(rep: &CheckReport) -> &'static str {
    match (rep.status, rep.passed()) {
        (Status::Proven, true) => "pass",
        (Status::Proven, false) => "fail",
        (Status::Conjecture, true) => "consistent",
        (Status::Conjecture, false) => "deviates",
    }
}

fn check(cfg: &RunConfig, names: &[String]) -> rlab::Result<Outcome> {
    let ids: Vec<Identity> = if names.is_empty() {
        Identity::ALL.to_vec()
    } else {
        names.iter().map(|n| n.parse()).collect::<rlab::Result<_>>()?
    };
    let base = cfg.check_config();
    let reports = ids.iter().map(|&id| run_identity(id, &base)).collect::<rlab::Result<Vec<_>>>()?;
    let hard_fail = reports.iter().any(|r| !r.passed() && (r.status == Status::Proven || cfg.strict));
    let code = if hard_fail { EXIT_CHECK_FAILED } else { 0 };
    if cfg.plain {
        let mut out = String::new();
        for r in &reports {
            let _ = writeln!(out, "{r}");
        }
        return Ok(Outcome { code, output: out });
    }
    let checks: Vec<Value> = reports
        .iter()
        .map(|r| {
            json!({
                "identity": r.name,
                "kind": match r.status { Status::Proven => "proven", Status::Conjecture => "conjecture" },
                "status": verdict(r),
                "checked": r.checked,
                "max_degree": r.max_degree,
                "first_discrepancy": r.failure,
            })
        })
        .collect();
    let doc = json!({ "N": cfg.n, "order": cfg.order, "seed": cfg.seed, "strict": cfg.strict, "ok": code == 0, "checks": checks });
    Ok(Outcome { code, output: render(&doc) })
}

fn complex(z: num_complex::Complex64) -> Value {
    json!([z.re, z.im])
}

fn bounds(cfg: &RunConfig) -> rlab::Result<Outcome> {
    use num_traits::ToPrimitive;
    let to_f64 = |x: &Scalar| x.to_f64().ok_or_else(|| Error::Invalid(format!("{x} does not fit a float")));
    let mut inputs = admissible_inputs(cfg.n, cfg.samples, cfg.seed);
    for input in inputs.iter_mut() {
        if cfg.r != rlab::series::frac(1, 2) {
            input.q = to_f64(&(&cfg.r * &cfg.r))?;
        }
        if let Some(k) = &cfg.kappa {
            input.kappa = to_f64(k)?;
        }
        if let Some(t) = &cfg.t {
            input.t = num_complex::Complex64::new(to_f64(t)?, 0.0);
        }
    }
    let mut rows = Vec::new();
    let mut violations = 0;
    for mut input in inputs {
        let b = convergence::check_coeff_bound(&input, cfg.order)?;
        input.rho = b.rho_max / 2.0;
        let z: Vec<_> = (0..cfg.n).map(|i| num_complex::Complex64::from_polar(0.9 * input.rho, 0.7 * i as f64 + 0.3)).collect();
        let sums = convergence::partial_sums(&input, &z, cfg.order)?;
        violations += b.violations + sums.violations;
        rows.push(json!({
            "sigma": input.sigma,
            "q": input.q,
            "kappa": input.kappa,
            "t": complex(input.t),
            "s": input.s.iter().map(|&z| complex(z)).collect::<Vec<_>>(),
            "c1": b.c1,
            "c2": b.c2,
            "rho_max": b.rho_max,
            "worst_root": b.worst_root,
            "margin": b.margin,
            "coefficients_checked": b.checked,
            "coefficient_violations": b.violations,
            "rho": input.rho,
            "increments": sums.increments,
            "increment_violations": sums.violations,
        }));
    }
    let code = if violations > 0 { EXIT_CHECK_FAILED } else { 0 };
    if cfg.plain {
        let mut out = String::from("float results\n");
        for r in &rows {
            let _ = writeln!(
                out,
                "C1 = {:.6}  C2 = {:.6}  rho_max = {:.6e}  worst = {:.6}  violations = {}",
                r["c1"].as_f64().unwrap_or(f64::NAN),
                r["c2"].as_f64().unwrap_or(f64::NAN),
                r["rho_max"].as_f64().unwrap_or(f64::NAN),
                r["worst_root"].as_f64().unwrap_or(f64::NAN),
                r["coefficient_violations"].as_u64().unwrap_or(0) + r["increment_violations"].as_u64().unwrap_or(0),
            );
        }
        return Ok(Outcome { code, output: out });
    }
    let doc = json!({ "float": true, "N": cfg.n, "order": cfg.order, "seed": cfg.seed, "ok": code == 0, "inputs": rows });
    Ok(Outcome { code, output: render(&doc) })
}

/// Runs a parsed command line. Reads `--config` from disk when given.
pub fn run(cli: &Cli) -> Outcome {
    let config_text = match &cli.opts.config {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(text) => Some(text),
            Err(e) => return error_outcome(&Error::Invalid(format!("{}: {e}", path.display())), cli.opts.plain),
        },
        None => None,
    };
    let cfg = match RunConfig::resolve(&cli.opts, config_text.as_deref()) {
        Ok(cfg) => cfg,
        Err(e) => return error_outcome(&e, cli.opts.plain),
    };
    let result = match &cli.command {
        Command::Expand { series, representation } => expand(&cfg, *series, *representation),
        Command::Check { identities } => check(&cfg, identities),
        Command::Bounds => bounds(&cfg),
    };
    result.unwrap_or_else(|e| error_outcome(&e, cfg.plain))
}

/// Parses and runs an argument list; clap usage errors become exit code 2.
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => Outcome { code: e.exit_code(), output: e.to_string() },
    }
}
