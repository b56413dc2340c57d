mod output;

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex;
use rand::Rng as _;
use serde_json::{json, Value};

use hmtrace::calibration::{calibrate, multivariate_arc, sparse_signed, sparsity_target, littlewood_polynomial, PILOT_SEED_BASE};
use hmtrace::channel::{parse_trc, sample_trace_with, to_trc, ChannelParams, Trace};
use hmtrace::config::RunConfig;
use hmtrace::genfun::{exact_residual, rational_unit_point, verify_identity, verify_identity_exact};
use hmtrace::hypermatrix::{diff, parse_hmx_with, to_hmx, ComplexPoint, Hypermatrix, Pattern, SignedHypermatrix};
use hmtrace::littlewood::{corollary_bound, max_modulus_univariate, multivariate_bound, w_norm_survey, ArcSpec, BoundWitness};
use hmtrace::reconstruct::{
    all_candidates, reconstruct_among, trace_complexity_experiment, ExperimentConfig, LRule, StatisticCache, TraceSet,
};
use hmtrace::reduction::{classify, construct_witness, reduce};
use hmtrace::rng::{seeded, Rng, GENERATOR_NAME};

use output::RunDir;

type C64 = Complex<f64>;

#[derive(Parser)]
#[command(name = "hmtrace", version, about = "Trace reconstruction of binary hypermatrices under slice deletion")]
struct Cli {
    /// Deletion probability of the channel.
    #[arg(long, global = true)]
    q: Option<f64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, default_value = "hmtrace-out")]
    out: PathBuf,
    /// Draw a seed from the OS instead of requiring --seed. The seed is recorded.
    #[arg(long, global = true)]
    entropy: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug)]
struct PairInput {
    /// HMX file for X; drawn at random when absent.
    #[arg(long)]
    x: Option<PathBuf>,
    /// HMX file for Y; drawn at random when absent.
    #[arg(long)]
    y: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    d: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Draw traces of a hypermatrix.
    Simulate {
        #[arg(long)]
        x: Option<PathBuf>,
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 16)]
        count: usize,
    },
    /// Compare both sides of the generating identity at random torus points.
    IdentityCheck {
        #[command(flatten)]
        pair: PairInput,
        /// Use X alone instead of the difference X - Y.
        #[arg(long)]
        single: bool,
        /// HMX file for the pattern; random `l^r` bits when absent.
        #[arg(long)]
        pattern: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        l: usize,
        #[arg(long, default_value_t = 1)]
        r: usize,
        #[arg(long, default_value_t = 8)]
        points: usize,
        /// Exact rational mode with `q = NUM/DEN`; replaces --q.
        #[arg(long, value_name = "NUM/DEN")]
        exact: Option<String>,
    },
    /// Dimension reduction of a signed array or of X - Y.
    Reduce {
        /// Signed HMX file; overrides --x/--y.
        #[arg(long)]
        a: Option<PathBuf>,
        #[command(flatten)]
        pair: PairInput,
    },
    /// Witness pattern separating X from Y.
    Witness {
        #[command(flatten)]
        pair: PairInput,
        /// Odd witness side; the asymptotic rule when absent.
        #[arg(long)]
        l: Option<usize>,
    },
    /// Lower-bound searches for polynomials on arcs.
    Bound {
        #[arg(long, value_enum)]
        kind: BoundKind,
        /// Degree of the random +-1 polynomials.
        #[arg(long, default_value_t = 256)]
        degree: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        /// Signed HMX coefficient array for the multivariate kinds.
        #[arg(long)]
        coeffs: Option<PathBuf>,
        #[arg(long, default_value_t = 32)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 0.6)]
        mu: f64,
        /// Arc parameter L; `ceil(n^{1/5})` for multivariate, 1 for corollary.
        #[arg(long)]
        arc_l: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        delta: f64,
        /// Floor constant; the calibrated value when absent.
        #[arg(long)]
        constant: Option<f64>,
    },
    /// Recover a hypermatrix from its traces by pairwise tests.
    Reconstruct {
        /// Ground truth; drawn at random when neither this nor --trc-dir is given.
        #[arg(long)]
        x: Option<PathBuf>,
        /// Directory of `.trc` files to use instead of sampling.
        #[arg(long)]
        trc_dir: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 256)]
        traces: usize,
        /// Fixed odd witness side.
        #[arg(long)]
        l: Option<usize>,
    },
    /// Success rate against trace count.
    Experiment {
        #[arg(long, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 0.99)]
        target: f64,
        /// Largest count of the doubling schedule.
        #[arg(long, default_value_t = 4096)]
        max_t: usize,
        /// Explicit comma-separated schedule.
        #[arg(long, value_delimiter = ',')]
        schedule: Option<Vec<usize>>,
        /// Cycle through every ground truth instead of drawing them.
        #[arg(long)]
        enumerate: bool,
        #[arg(long)]
        l: Option<usize>,
    },
    /// Rerun the pilot suites and write a fresh calib.json.
    Calibrate {
        #[arg(long)]
        provenance: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BoundKind {
    Littlewood,
    Multivariate,
    Corollary,
    WSurvey,
}

struct Ctx {
    q: Option<f64>,
    seed: Option<u64>,
    seed_source: &'static str,
    config: RunConfig,
    config_path: Option<PathBuf>,
}

impl Ctx {
    fn seed(&self) -> Result<u64> {
        self.seed
            .context("this command is randomized: pass --seed <u64>, or --entropy to draw one")
    }

    fn rng(&self) -> Result<Rng> {
        Ok(seeded(self.seed()?))
    }

    fn q(&self) -> Result<f64> {
        self.q.context("--q is required for this command")
    }

    fn bits(&self, path: &Path) -> Result<Hypermatrix> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        parse_hmx_with(&text, &self.config.limits).with_context(|| format!("parsing {}", path.display()))
    }

    fn signed(&self, path: &Path) -> Result<SignedHypermatrix> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        parse_hmx_with(&text, &self.config.limits).with_context(|| format!("parsing {}", path.display()))
    }

    fn manifest(&self, command: &str, inputs: Value) -> Value {
        json!({
            "command": command,
            "version": env!("CARGO_PKG_VERSION"),
            "library_version": hmtrace::VERSION,
            "generator": GENERATOR_NAME,
            "seed": self.seed,
            "seed_source": self.seed_source,
            "q": self.q,
            "config_file": self.config_path,
            "config": self.config,
            "inputs": inputs,
        })
    }
}

fn random_bits(rng: &mut Rng, n: usize, d: usize) -> Hypermatrix {
    Hypermatrix::from_fn(vec![n; d], |_| rng.gen_range(0..2u8))
}

fn random_signed(rng: &mut Rng, n: usize, d: usize) -> SignedHypermatrix {
    loop {
        let a = SignedHypermatrix::from_fn(vec![n; d], |_| rng.gen_range(-1..=1i8));
        if !a.is_zero() {
            return a;
        }
    }
}

/// X and Y from files, the missing ones drawn at random; random pairs are
/// redrawn until they differ when `distinct` is set.
fn load_pair(ctx: &Ctx, input: &PairInput, distinct: bool) -> Result<(Hypermatrix, Hypermatrix)> {
    let fixed_x = input.x.as_deref().map(|p| ctx.bits(p)).transpose()?;
    let fixed_y = input.y.as_deref().map(|p| ctx.bits(p)).transpose()?;
    if let (Some(x), Some(y)) = (&fixed_x, &fixed_y) {
        return Ok((x.clone(), y.clone()));
    }
    let (n, d) = match (&fixed_x, &fixed_y) {
        (Some(a), _) | (_, Some(a)) => {
            (a.side().context("inputs must be cubes")?, a.ndim())
        }
        _ => (input.n, input.d),
    };
    ctx.config.limits.check(&vec![n; d])?;
    let mut rng = ctx.rng()?;
    for _ in 0..10_000 {
        let x = fixed_x.clone().unwrap_or_else(|| random_bits(&mut rng, n, d));
        let y = fixed_y.clone().unwrap_or_else(|| random_bits(&mut rng, n, d));
        if !distinct || x != y {
            return Ok((x, y));
        }
    }
    bail!("could not draw two distinct hypermatrices of shape {n}^{d}")
}

fn pair_inputs(input: &PairInput) -> Value {
    json!({"x": input.x, "y": input.y, "n": input.n, "d": input.d})
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let (config, config_path) = match &cli.config {
        Some(p) => (RunConfig::load(p).with_context(|| format!("loading {}", p.display()))?, Some(p.clone())),
        None => (RunConfig::default(), None),
    };
    let (seed, seed_source) = match (cli.seed, cli.entropy) {
        (Some(s), _) => (Some(s), "explicit"),
        (None, true) => (Some(rand::random::<u64>()), "entropy"),
        (None, false) => (None, "none"),
    };
    let ctx = Ctx {
        q: cli.q,
        seed,
        seed_source,
        config,
        config_path,
    };
    let run = RunDir::create(&cli.out)?;
    match cli.command {
        Command::Simulate { x, n, d, count } => simulate(&ctx, run, x, n, d, count),
        Command::IdentityCheck {
            pair,
            single,
            pattern,
            l,
            r,
            points,
            exact,
        } => identity_check(&ctx, run, &pair, single, pattern, l, r, points, exact),
        Command::Reduce { a, pair } => reduce_cmd(&ctx, run, a, &pair),
        Command::Witness { pair, l } => witness_cmd(&ctx, run, &pair, l),
        Command::Bound {
            kind,
            degree,
            count,
            coeffs,
            n,
            d,
            mu,
            arc_l,
            delta,
            constant,
        } => bound_cmd(&ctx, run, kind, degree, count, coeffs, n, d, mu, arc_l, delta, constant),
        Command::Reconstruct {
            x,
            trc_dir,
            n,
            d,
            traces,
            l,
        } => reconstruct_cmd(&ctx, run, x, trc_dir, n, d, traces, l),
        Command::Experiment {
            n,
            d,
            trials,
            target,
            max_t,
            schedule,
            enumerate,
            l,
        } => experiment_cmd(&ctx, run, n, d, trials, target, max_t, schedule, enumerate, l),
        Command::Calibrate { provenance } => calibrate_cmd(&ctx, run, provenance),
    }
}

fn simulate(ctx: &Ctx, mut run: RunDir, x: Option<PathBuf>, n: usize, d: usize, count: usize) -> Result<()> {
    let params = ChannelParams::oracle(ctx.q()?)?;
    let mut rng = ctx.rng()?;
    let truth = match &x {
        Some(p) => ctx.bits(p)?,
        None => {
            ctx.config.limits.check(&vec![n; d])?;
            random_bits(&mut rng, n, d)
        }
    };
    run.write_text("truth.hmx", &to_hmx(&truth))?;
    let mut rows = Vec::with_capacity(count);
    for i in 0..count {
        let t = sample_trace_with(&truth, &params, &mut rng);
        run.write_text(&format!("traces/trace_{i:05}.trc"), &to_trc(&t))?;
        let dims: Vec<String> = t.entries.dims().iter().map(usize::to_string).collect();
        let retained: Vec<String> = t
            .retained
            .iter()
            .map(|l| l.iter().map(usize::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        let ones = t.entries.entries().iter().filter(|&&b| b == 1).count();
        rows.push(vec![i.to_string(), dims.join("x"), retained.join("|"), ones.to_string()]);
    }
    run.write_csv("traces.csv", &["trace", "shape", "retained", "ones"], &rows)?;
    let manifest = ctx.manifest("simulate", json!({"x": x, "n": n, "d": d, "count": count}));
    run.finish(manifest, json!({"dims": truth.dims(), "traces": count}))
}

fn unit_torus(rng: &mut Rng, d: usize, l: usize, r: usize) -> ComplexPoint<f64> {
    let mut draw = || C64::from_polar(1.0, rng.gen_range(-PI..PI));
    ComplexPoint::new(
        (0..r).map(|_| (0..l).map(|_| draw()).collect()).collect(),
        (0..d - r).map(|_| draw()).collect(),
    )
}

fn parse_fraction(text: &str) -> Result<(u64, u64)> {
    let (a, b) = text.split_once('/').context("expected NUM/DEN")?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

#[allow(clippy::too_many_arguments)]
fn identity_check(
    ctx: &Ctx,
    mut run: RunDir,
    input: &PairInput,
    single: bool,
    pattern: Option<PathBuf>,
    l: usize,
    r: usize,
    points: usize,
    exact: Option<String>,
) -> Result<()> {
    let params = match &exact {
        Some(f) => {
            let (num, den) = parse_fraction(f)?;
            ChannelParams::rational(num, den)?
        }
        None => ChannelParams::oracle(ctx.q()?)?,
    };
    let (x, y) = load_pair(ctx, input, false)?;
    let mut rng = seeded(hmtrace::rng::derive_seed(ctx.seed()?, 1));
    let w = match &pattern {
        Some(p) => Pattern::from_grid(ctx.bits(p)?)?,
        None => {
            let cells = l.checked_pow(r as u32).context("pattern too large")?;
            Pattern::new(l, r, (0..cells).map(|_| rng.gen_range(0..2u8)).collect())?
        }
    };
    let (l, r) = (w.side(), w.rank());
    let d = x.ndim();
    let n = x.side().context("X must be a cube")?;
    ensure!(r <= d, "pattern rank {r} exceeds dimension {d}");
    let other = if single { None } else { Some(&y) };
    let mut records = Vec::with_capacity(points);
    let mut rows = Vec::with_capacity(points);
    let mut worst: f64 = 0.0;
    for i in 0..points {
        let (z, residual, equal) = if exact.is_some() {
            let mut draw = || (rng.gen_range(-24..=24i64), rng.gen_range(1..=24i64));
            let ts: Vec<Vec<(i64, i64)>> = (0..r).map(|_| (0..l).map(|_| draw()).collect()).collect();
            let tp: Vec<(i64, i64)> = (0..d - r).map(|_| draw()).collect();
            let zq = ComplexPoint::new(
                ts.iter().map(|row| row.iter().map(|&(a, b)| rational_unit_point(a, b)).collect()).collect(),
                tp.iter().map(|&(a, b)| rational_unit_point(a, b)).collect(),
            );
            let (lhs, rhs) = verify_identity_exact(&x, other, &w, &zq, &params)?;
            let approx = |(a, b): (i64, i64)| {
                let t = a as f64 / b as f64;
                C64::new((1.0 - t * t) / (1.0 + t * t), 2.0 * t / (1.0 + t * t))
            };
            let zf = ComplexPoint::new(
                ts.iter().map(|row| row.iter().map(|&p| approx(p)).collect()).collect(),
                tp.iter().map(|&p| approx(p)).collect(),
            );
            (zf, exact_residual(&lhs, &rhs), Some(lhs == rhs))
        } else {
            let z = unit_torus(&mut rng, d, l, r);
            let res = verify_identity(&x, other, &w, &z, &params)?;
            (z, res, None)
        };
        worst = worst.max(residual);
        rows.push(vec![i.to_string(), format!("{residual:e}"), equal.map(|e| e.to_string()).unwrap_or_default()]);
        records.push(json!({"n": n, "d": d, "r": r, "l": l, "q": params.q(), "z": z, "residual": residual, "exact_equal": equal}));
    }
    run.write_text("pattern.hmx", &to_hmx(w.grid()))?;
    run.write_csv("identity.csv", &["point", "residual", "exact_equal"], &rows)?;
    let mut inputs = pair_inputs(input);
    inputs["single"] = json!(single);
    inputs["pattern"] = json!(pattern);
    inputs["exact"] = json!(exact);
    inputs["points"] = json!(points);
    let manifest = ctx.manifest("identity-check", inputs);
    run.finish(manifest, json!({"max_residual": worst, "records": records}))
}

fn reduce_cmd(ctx: &Ctx, mut run: RunDir, a: Option<PathBuf>, input: &PairInput) -> Result<()> {
    let arr = match &a {
        Some(p) => ctx.signed(p)?,
        None if input.x.is_some() || input.y.is_some() => {
            let (x, y) = load_pair(ctx, input, true)?;
            diff(&x, &y)?
        }
        None => {
            ctx.config.limits.check(&vec![input.n; input.d])?;
            random_signed(&mut ctx.rng()?, input.n, input.d)
        }
    };
    let red = reduce(&arr)?;
    let rows: Vec<Vec<String>> = red
        .steps
        .iter()
        .map(|s| {
            vec![
                s.level.to_string(),
                s.axis.to_string(),
                s.high_side.to_string(),
                s.lambda.to_string(),
                format!("{:?}", s.transform.perm),
                format!("{:?}", s.transform.reversed),
            ]
        })
        .collect();
    run.write_text("input.hmx", &to_hmx(&arr))?;
    run.write_csv("steps.csv", &["level", "axis", "high_side", "lambda", "perm", "reversed"], &rows)?;
    let chain: Vec<String> = red.chain.iter().map(to_hmx).collect();
    let mut inputs = pair_inputs(input);
    inputs["a"] = json!(a);
    let manifest = ctx.manifest("reduce", inputs);
    run.finish(
        manifest,
        json!({
            "n": red.n,
            "d": red.d(),
            "lambdas": red.lambdas,
            "steps": red.steps,
            "global": red.global,
            "chain": chain,
        }),
    )
}

fn witness_cmd(ctx: &Ctx, mut run: RunDir, input: &PairInput, l: Option<usize>) -> Result<()> {
    let (x, y) = load_pair(ctx, input, true)?;
    ensure!(x != y, "X and Y are identical");
    let a = diff(&x, &y)?;
    let n = a.side().context("inputs must be cubes")?;
    let red = reduce(&a)?;
    let l = l.unwrap_or_else(|| LRule::Asymptotic.side(n, a.ndim()));
    let case_r = classify(&red.lambdas, l);
    let witness = if case_r == 0 {
        None
    } else {
        Some(construct_witness(&red.project(&x, case_r)?, &red.project(&y, case_r)?, l)?)
    };
    let pattern = witness.as_ref().map(|w| w.pattern.clone()).unwrap_or_else(Pattern::unit);
    let passed = witness.as_ref().map(|w| w.certificate.passed());
    run.write_text("x.hmx", &to_hmx(&x))?;
    run.write_text("y.hmx", &to_hmx(&y))?;
    run.write_text("pattern.hmx", &to_hmx(pattern.grid()))?;
    let cert = witness.as_ref().map(|w| &w.certificate);
    run.write_csv(
        "witness.csv",
        &["l", "case_r", "aperiodic", "h_nonzero", "sparse", "sparsity", "passed"],
        &[vec![
            l.to_string(),
            case_r.to_string(),
            cert.map(|c| c.aperiodic.to_string()).unwrap_or_default(),
            cert.map(|c| c.h_nonzero.to_string()).unwrap_or_default(),
            cert.map(|c| c.sparse.to_string()).unwrap_or_default(),
            cert.and_then(|c| c.sparsity).map(|s| s.to_string()).unwrap_or_default(),
            passed.map(|p| p.to_string()).unwrap_or_default(),
        ]],
    )?;
    let manifest = ctx.manifest("witness", pair_inputs(input));
    run.finish(
        manifest,
        json!({
            "lambdas": red.lambdas,
            "transform": red.global,
            "steps": red.steps,
            "l": l,
            "case_r": case_r,
            "pattern": to_hmx(pattern.grid()),
            "center": witness.as_ref().map(|w| &w.center),
            "corner": witness.as_ref().map(|w| w.corner()),
            "s": witness.as_ref().map(|w| w.s),
            "direction": witness.as_ref().map(|w| &w.direction),
            "chosen_from": witness.as_ref().map(|w| w.chosen_from),
            "certificate": cert,
            "passed": passed,
        }),
    )
}

#[allow(clippy::too_many_arguments)]
fn bound_cmd(
    ctx: &Ctx,
    mut run: RunDir,
    kind: BoundKind,
    degree: usize,
    count: usize,
    coeffs: Option<PathBuf>,
    n: usize,
    d: usize,
    mu: f64,
    arc_l: Option<f64>,
    delta: f64,
    constant: Option<f64>,
) -> Result<()> {
    let calib = ctx.config.calibration();
    let density = ctx.config.arc_density;
    let p = match ctx.q {
        Some(q) => 1.0 - q,
        None => calib.littlewood_p,
    };
    let mut records: Vec<BoundWitness> = Vec::new();
    let mut extra = json!({});
    let (used_constant, calibrated) = match kind {
        BoundKind::Littlewood => {
            let c = constant.unwrap_or(calib.littlewood_c);
            let arc = ArcSpec::littlewood(degree, p, density)?;
            let mut rng = ctx.rng()?;
            for _ in 0..count {
                let f = littlewood_polynomial(&mut rng, degree);
                records.push(max_modulus_univariate(&f, &arc, c)?);
            }
            extra = json!({"p": p, "arc_l": arc.l, "rho": arc.rho});
            (c, constant.is_none() && (p - calib.littlewood_p).abs() < 1e-12)
        }
        BoundKind::Multivariate | BoundKind::Corollary => {
            let fixed = coeffs.as_deref().map(|p| ctx.signed(p)).transpose()?;
            let mut rng = if fixed.is_none() { Some(ctx.rng()?) } else { None };
            let corollary = matches!(kind, BoundKind::Corollary);
            let c = constant.unwrap_or(if corollary { 0.0 } else { calib.multivariate_c });
            for _ in 0..count {
                let a = match (&fixed, rng.as_mut()) {
                    (Some(a), _) => a.clone(),
                    (None, Some(rng)) => {
                        ctx.config.limits.check(&vec![n; d])?;
                        sparse_signed(rng, n, d, sparsity_target(n, mu))
                    }
                    (None, None) => unreachable!(),
                };
                let side = a.side().context("coefficients must form a cube")?;
                let w = if corollary {
                    corollary_bound(&a, arc_l.unwrap_or(1.0), density, c)?
                } else {
                    multivariate_bound(&a, mu, arc_l.unwrap_or_else(|| multivariate_arc(side)), delta, density, c)?
                };
                records.push(w);
            }
            (c, constant.is_none() && !corollary)
        }
        BoundKind::WSurvey => {
            let base = (4.0 / p).ceil();
            let ls: Vec<f64> = (0..100).map(|i| base + 0.5 * i as f64).collect();
            let survey = w_norm_survey(p, &ls, 100)?;
            run.write_csv(
                "w_survey.csv",
                &["p", "points", "max_excess_on_shrunk_arc", "measured_c"],
                &[vec![
                    p.to_string(),
                    survey.points.to_string(),
                    format!("{:e}", survey.max_excess_on_shrunk_arc),
                    survey.measured_c.to_string(),
                ]],
            )?;
            extra = json!({"survey": survey});
            (0.0, false)
        }
    };
    let rows: Vec<Vec<String>> = records
        .iter()
        .enumerate()
        .map(|(i, w)| {
            vec![
                i.to_string(),
                w.value.to_string(),
                w.log_value.to_string(),
                w.log_floor.to_string(),
                w.meets_floor().to_string(),
                w.required_constant().to_string(),
            ]
        })
        .collect();
    if !records.is_empty() {
        run.write_csv(
            "bounds.csv",
            &["instance", "value", "log_value", "log_floor", "meets_floor", "required_constant"],
            &rows,
        )?;
    }
    let inputs = json!({
        "kind": format!("{kind:?}"), "degree": degree, "count": count, "coeffs": coeffs,
        "n": n, "d": d, "mu": mu, "arc_l": arc_l, "delta": delta, "constant": constant,
    });
    let mut manifest = ctx.manifest("bound", inputs);
    manifest["calibration"] = json!({
        "provenance": calib.provenance,
        "constant": used_constant,
        "calibrated": calibrated,
        "note": "floor constants are empirical values from a pilot run, not derived bounds",
    });
    run.finish(manifest, json!({"records": records, "details": extra}))
}

fn read_trc_dir(dir: &Path) -> Result<Vec<Trace>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == "trc"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p)?;
            parse_trc(&text).with_context(|| format!("parsing {}", p.display()))
        })
        .collect()
}

#[allow(clippy::too_many_arguments)]
fn reconstruct_cmd(
    ctx: &Ctx,
    mut run: RunDir,
    x: Option<PathBuf>,
    trc_dir: Option<PathBuf>,
    n: usize,
    d: usize,
    count: usize,
    l: Option<usize>,
) -> Result<()> {
    let params = ChannelParams::oracle(ctx.q()?)?;
    let truth = x.as_deref().map(|p| ctx.bits(p)).transpose()?;
    let (n, d) = match &truth {
        Some(t) => (t.side().context("ground truth must be a cube")?, t.ndim()),
        None => (n, d),
    };
    let mut traces = TraceSet::new();
    let truth = match (&trc_dir, truth) {
        (Some(dir), truth) => {
            for t in read_trc_dir(dir)? {
                ensure!(t.retained.len() == d, "trace with {} axes, expected {d}", t.retained.len());
                traces.push(t);
            }
            truth
        }
        (None, truth) => {
            let mut rng = ctx.rng()?;
            let truth = match truth {
                Some(t) => t,
                None => random_bits(&mut rng, n, d),
            };
            for _ in 0..count {
                traces.push(sample_trace_with(&truth, &params, &mut rng));
            }
            Some(truth)
        }
    };
    let rule = l.map(LRule::Fixed).unwrap_or(LRule::Asymptotic);
    let mut cache = StatisticCache::new(params, rule);
    let candidates = all_candidates(n, d, ctx.config.candidate_cap)?;
    let recovered = reconstruct_among(&traces, &candidates, &mut cache)?;
    let correct = truth.as_ref().map(|t| *t == recovered);
    run.write_text("recovered.hmx", &to_hmx(&recovered))?;
    if let Some(t) = &truth {
        run.write_text("truth.hmx", &to_hmx(t))?;
    }
    run.write_csv(
        "reconstruct.csv",
        &["n", "d", "traces", "distinct", "statistics", "correct"],
        &[vec![
            n.to_string(),
            d.to_string(),
            traces.len().to_string(),
            traces.distinct().to_string(),
            cache.len().to_string(),
            correct.map(|c| c.to_string()).unwrap_or_default(),
        ]],
    )?;
    let inputs = json!({"x": x, "trc_dir": trc_dir, "n": n, "d": d, "traces": count, "l": l});
    let manifest = ctx.manifest("reconstruct", inputs);
    run.finish(
        manifest,
        json!({
            "recovered": to_hmx(&recovered),
            "correct": correct,
            "traces": traces.len(),
            "distinct_traces": traces.distinct(),
            "statistics": cache.len(),
        }),
    )
}

#[allow(clippy::too_many_arguments)]
fn experiment_cmd(
    ctx: &Ctx,
    mut run: RunDir,
    n: usize,
    d: usize,
    trials: usize,
    target: f64,
    max_t: usize,
    schedule: Option<Vec<usize>>,
    enumerate: bool,
    l: Option<usize>,
) -> Result<()> {
    let config = ExperimentConfig {
        n,
        d,
        q: ctx.q()?,
        trials,
        target,
        schedule: schedule.unwrap_or_else(|| ExperimentConfig::doubling(max_t)),
        seed: ctx.seed()?,
        enumerate_truths: enumerate,
        rule: l.map(LRule::Fixed).unwrap_or(LRule::Asymptotic),
    };
    let report = trace_complexity_experiment(&config)?;
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                r.traces.to_string(),
                r.successes.to_string(),
                r.trials.to_string(),
                r.rate.to_string(),
                r.stderr.to_string(),
            ]
        })
        .collect();
    run.write_csv("experiment.csv", &["traces", "successes", "trials", "rate", "stderr"], &rows)?;
    let manifest = ctx.manifest("experiment", serde_json::to_value(&config)?);
    run.finish(manifest, serde_json::to_value(&report)?)
}

fn calibrate_cmd(ctx: &Ctx, mut run: RunDir, provenance: Option<String>) -> Result<()> {
    let provenance = provenance.unwrap_or_else(|| {
        format!("pilot run: `hmtrace calibrate`, pilot seed base {PILOT_SEED_BASE:#x}")
    });
    let calib = calibrate(&provenance)?;
    run.write_json("calib.json", &calib)?;
    let manifest = ctx.manifest("calibrate", json!({"pilot_seed_base": PILOT_SEED_BASE}));
    run.finish(manifest, serde_json::to_value(&calib)?)
}
