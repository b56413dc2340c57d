//! Empirical constants for the lower-bound floors and the trace counts used
//! by the desk-scale reconstruction runs.
//!
//! Each constant comes from a pilot suite on seeds that no check suite
//! uses. The rule is `C = max(0, pilot requirement) * margin + slack`, and
//! for trace counts the first doubling step whose pilot success rate
//! reaches the target, doubled once more. The frozen values live in
//! `calib.json` next to this crate's manifest.

use num_complex::Complex;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genfun::{decontiguize, eval_contiguous, ContiguousGenfunSpec, DecontigOptions, Source};
use crate::hypermatrix::{binomial, extract_block, HyperArray, Hypermatrix, Pattern, SignedHypermatrix};
use crate::littlewood::{max_modulus_univariate, multivariate_bound, ArcSpec};
use crate::reconstruct::{trace_complexity_experiment, ExperimentConfig, LRule};
use crate::rng::{derive_seed, seeded, Rng};

type C64 = Complex<f64>;

pub const FROZEN_JSON: &str = include_str!("../calib.json");

/// Seed bases of the pilot suites. Check suites must use other bases.
pub const PILOT_SEED_BASE: u64 = 0x5eed_0000_0000;

pub const MARGIN: f64 = 1.25;
pub const SLACK: f64 = 0.05;

/// Pilot sizes for the constant suites: ten times the instance counts of
/// the check suites (100 per degree, 25 per shape, 50 per q).
pub const PILOT_LITTLEWOOD_PER_DEGREE: usize = 1000;
pub const PILOT_SPARSE_PER_SHAPE: usize = 250;
pub const PILOT_DECONTIG_PER_Q: usize = 500;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub provenance: String,
    pub generator: String,
    pub pilot_seed_base: u64,
    pub margin: f64,
    pub slack: f64,
    /// Univariate floor `exp(-C m^{1/3})` on the shrunk arc, at `p = littlewood_p`.
    pub littlewood_c: f64,
    pub littlewood_p: f64,
    /// Multivariate floor `exp(-C delta L n^{1-mu} ln n)`.
    pub multivariate_c: f64,
    /// Per-step decontiguization floor constants.
    pub decontig_c1: f64,
    pub decontig_c2: f64,
    /// Trace counts for the two desk-scale reconstruction runs.
    pub traces_n2_q03: usize,
    pub traces_n3_q05: usize,
}

impl Calibration {
    pub fn frozen() -> Self {
        serde_json::from_str(FROZEN_JSON).expect("calib.json is valid")
    }
}

pub fn freeze(requirement: f64) -> f64 {
    requirement.max(0.0) * MARGIN + SLACK
}

/// Random `+-1` coefficient vectors of degree `m`.
pub fn littlewood_polynomial(rng: &mut Rng, m: usize) -> Vec<C64> {
    (0..=m)
        .map(|_| C64::new(if rng.gen_bool(0.5) { 1.0 } else { -1.0 }, 0.0))
        .collect()
}

/// Random signed array on `[n]^d` whose equal-sign entries are at
/// Chebyshev distance at least `s`; never zero.
pub fn sparse_signed(rng: &mut Rng, n: usize, d: usize, s: usize) -> SignedHypermatrix {
    let mut a = HyperArray::<i8>::cube(n, d);
    let mut placed: [Vec<Vec<usize>>; 2] = [Vec::new(), Vec::new()];
    let attempts = 3 * (n / s.max(1) + 1).pow(d as u32);
    for _ in 0..attempts {
        let k: Vec<usize> = (0..d).map(|_| rng.gen_range(0..n)).collect();
        if a.at(&k) != 0 {
            continue;
        }
        let class = rng.gen_range(0..2);
        let far = placed[class]
            .iter()
            .all(|p| p.iter().zip(&k).map(|(&x, &y)| x.abs_diff(y)).max().unwrap_or(0) >= s);
        if far {
            a.set(&k, if class == 0 { 1 } else { -1 }).expect("in range");
            placed[class].push(k);
        }
    }
    if a.is_zero() {
        a.set(&vec![0; d], 1).expect("in range");
    }
    a
}

pub fn sparsity_target(n: usize, mu: f64) -> usize {
    ((n as f64).powf(mu) - 1e-9).ceil() as usize
}

/// One decontiguization instance: two `n x n` binary matrices, a `l x l`
/// pattern cut from the first, and unit scalars with `h` nonzero there.
#[derive(Clone, Debug)]
pub struct DecontigInstance {
    pub x: Hypermatrix,
    pub y: Hypermatrix,
    pub w: Pattern,
    pub fixed: Vec<C64>,
    pub h_abs: f64,
}

pub fn decontig_instance(rng: &mut Rng, n: usize, l: usize) -> Result<DecontigInstance> {
    for _ in 0..1000 {
        let x = Hypermatrix::from_fn(vec![n, n], |_| rng.gen_range(0..2));
        let y = Hypermatrix::from_fn(vec![n, n], |_| rng.gen_range(0..2));
        let corner = [rng.gen_range(0..=n - l), rng.gen_range(0..=n - l)];
        let w = extract_block(&x, &corner, l)?;
        let spec = ContiguousGenfunSpec::new(Source::pair(&x, &y)?, w.clone())?;
        if spec.coefficients().is_zero() {
            continue;
        }
        for _ in 0..100 {
            let fixed: Vec<C64> = (0..2)
                .map(|_| C64::from_polar(1.0, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)))
                .collect();
            let h = eval_contiguous(&spec, &fixed)?.norm();
            if h > 1e-6 {
                return Ok(DecontigInstance { x, y, w, fixed, h_abs: h });
            }
        }
    }
    Err(Error::Consistency("no decontiguization instance with nonzero h".into()))
}

/// `c2` needed for `value >= start^{e} e^{-c2/(2p)} C(n,l)^{r(1-e)}`, `e = c1/(2p)`.
pub fn decontig_step_requirement(start: f64, value: f64, p: f64, n: usize, l: usize, r: usize, c1: f64) -> f64 {
    let e = c1 / (2.0 * p);
    let log_b = (binomial(n, l) as f64).ln();
    2.0 * p * (e * start.ln() + r as f64 * (1.0 - e) * log_b - value.ln())
}

pub const LITTLEWOOD_DEGREES: [usize; 3] = [64, 256, 1024];
pub const LITTLEWOOD_DENSITY: usize = 64;
pub const SPARSE_SHAPES: [(usize, usize); 4] = [(2, 32), (2, 64), (3, 32), (3, 64)];
pub const SPARSE_MU: f64 = 0.6;
pub const DECONTIG_QS: [f64; 3] = [0.3, 0.5, 0.7];

pub fn multivariate_arc(n: usize) -> f64 {
    (n as f64).powf(0.2).ceil()
}

/// Largest `-ln(value) / m^{1/3}` over `per_degree` polynomials per degree.
pub fn pilot_littlewood(seed: u64, per_degree: usize, p: f64) -> Result<f64> {
    let mut need: f64 = 0.0;
    for (di, &m) in LITTLEWOOD_DEGREES.iter().enumerate() {
        let arc = ArcSpec::littlewood(m, p, LITTLEWOOD_DENSITY)?;
        for i in 0..per_degree {
            let mut rng = seeded(derive_seed(seed, (di * 100_000 + i) as u64));
            let f = littlewood_polynomial(&mut rng, m);
            need = need.max(max_modulus_univariate(&f, &arc, 0.0)?.required_constant());
        }
    }
    Ok(need)
}

pub fn pilot_multivariate(seed: u64, per_shape: usize) -> Result<f64> {
    let mut need: f64 = 0.0;
    for (si, &(d, n)) in SPARSE_SHAPES.iter().enumerate() {
        for i in 0..per_shape {
            let mut rng = seeded(derive_seed(seed, (si * 100_000 + i) as u64));
            let a = sparse_signed(&mut rng, n, d, sparsity_target(n, SPARSE_MU));
            let w = multivariate_bound(&a, SPARSE_MU, multivariate_arc(n), 1.0, 64, 0.0)?;
            need = need.max(w.required_constant());
        }
    }
    Ok(need)
}

pub fn pilot_decontig(seed: u64, count: usize, c1: f64) -> Result<f64> {
    let mut need = f64::NEG_INFINITY;
    for (qi, &q) in DECONTIG_QS.iter().enumerate() {
        let p = 1.0 - q;
        for i in 0..count {
            let mut rng = seeded(derive_seed(seed, (qi * 100_000 + i) as u64));
            let inst = decontig_instance(&mut rng, 8, 3)?;
            let out = decontiguize(&inst.x, &inst.y, &inst.w, &inst.fixed, p, &DecontigOptions::default())?;
            for step in &out.steps {
                need = need.max(decontig_step_requirement(step.start, step.value, p, 8, 3, 2, c1));
            }
        }
    }
    Ok(need)
}

/// First scheduled trace count whose pilot rate reaches `target`.
pub fn pilot_traces(n: usize, q: f64, trials: usize, target: f64, seed: u64, max_t: usize) -> Result<Option<usize>> {
    let config = ExperimentConfig {
        n,
        d: 2,
        q,
        trials,
        target,
        schedule: ExperimentConfig::doubling(max_t),
        seed,
        enumerate_truths: true,
        rule: LRule::Asymptotic,
    };
    Ok(trace_complexity_experiment(&config)?.minimal_traces)
}

/// Runs every pilot suite and applies the freezing rule.
pub fn calibrate(provenance: &str) -> Result<Calibration> {
    let base = PILOT_SEED_BASE;
    let littlewood_p = 0.5;
    let c1 = 1.0;
    let t2 = pilot_traces(2, 0.3, 200, 0.99, base + 4, 1 << 14)?
        .ok_or_else(|| Error::Consistency("n = 2 pilot never reached its target".into()))?;
    let t3 = pilot_traces(3, 0.5, 512, 0.95, base + 5, 1 << 14)?
        .ok_or_else(|| Error::Consistency("n = 3 pilot never reached its target".into()))?;
    Ok(Calibration {
        provenance: provenance.to_string(),
        generator: crate::rng::GENERATOR_NAME.to_string(),
        pilot_seed_base: base,
        margin: MARGIN,
        slack: SLACK,
        littlewood_c: freeze(pilot_littlewood(base + 1, PILOT_LITTLEWOOD_PER_DEGREE, littlewood_p)?),
        littlewood_p,
        multivariate_c: freeze(pilot_multivariate(base + 2, PILOT_SPARSE_PER_SHAPE)?),
        decontig_c1: c1,
        decontig_c2: freeze(pilot_decontig(base + 3, PILOT_DECONTIG_PER_Q, c1)?),
        traces_n2_q03: 2 * t2,
        traces_n3_q05: 2 * t3,
    })
}
