//! Pairwise mean tests and exhaustive reconstruction.
//!
//! A [`Statistic`] for a pair `(X, Y)` is a pattern `W` and a position `j`
//! in the frame normalized by the pair's dimension reduction. Its indicator
//! reads a trace by applying the reduction's axis transform to the unpadded
//! trace, padding at the low corner and testing for `W` at `j`; the
//! expectations under `X` and `Y` are exact.

use std::collections::HashMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::channel::{exact_pattern_probs, sample_trace_with, ChannelParams, Trace};
use crate::error::{Error, Result};
use crate::hypermatrix::{
    diff, iter_positions, position_count, AxisTransform, Hypermatrix, Pattern, ScatterPosition,
};
use crate::reduction::{classify, construct_witness, reduce, Witness};
use crate::rng::{derive_seed, seeded, GENERATOR_NAME};

pub const DEFAULT_CANDIDATE_CAP: usize = 1 << 16;
pub const DEFAULT_POSITION_CAP: usize = 1 << 20;
const MAX_AXES: usize = 8;

/// Witness side `l` as a function of `(n, d)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LRule {
    /// `2n^{1/5}` for sequences, `4n^{1/7}+1`, `4n^{1/9}+1` for matrices and
    /// cubes, `4n^{3/5}+1` above; rounded up to odd and clamped.
    Asymptotic,
    Fixed(usize),
}

impl LRule {
    pub fn side(&self, n: usize, d: usize) -> usize {
        let raw = match self {
            LRule::Fixed(l) => *l as f64,
            LRule::Asymptotic => {
                let nf = n as f64;
                match d {
                    0 | 1 => 2.0 * nf.powf(0.2),
                    2 => 4.0 * nf.powf(1.0 / 7.0) + 1.0,
                    3 => 4.0 * nf.powf(1.0 / 9.0) + 1.0,
                    _ => 4.0 * nf.powf(0.6) + 1.0,
                }
            }
        };
        let mut l = raw.ceil().max(1.0) as usize;
        if l % 2 == 0 {
            l += 1;
        }
        let cap = (n.saturating_sub(1) / 2).max(1);
        if l > cap {
            l = if cap % 2 == 1 { cap } else { cap - 1 };
        }
        l.max(1)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Statistic {
    pub pattern: Pattern,
    /// Position in the normalized frame.
    pub position: ScatterPosition,
    /// Maps original coordinates to the normalized frame.
    pub transform: AxisTransform,
    pub lambdas: Vec<usize>,
    pub l: usize,
    /// Number of scattered axes chosen by the case split.
    pub case_r: usize,
    /// True when the case pipeline found no gap and the scalar scan was used.
    pub fallback: bool,
    pub witness: Option<Witness>,
    pub e_x: f64,
    pub e_y: f64,
    pub gap: f64,
    /// Size of the side of the hypermatrices compared.
    pub n: usize,
}

impl Statistic {
    pub fn indicator(&self, trace: &Trace) -> bool {
        let t = &trace.entries;
        let d = t.ndim();
        if d != self.transform.ndim() || d > MAX_AXES {
            return false;
        }
        let src_dims = t.dims();
        let r = self.position.rank();
        let l = self.position.side();
        let mut k = [0usize; MAX_AXES];
        let mut src = [0usize; MAX_AXES];
        k[r..d].copy_from_slice(&self.position.points);
        for (cell, want) in self.pattern.entries().iter().enumerate() {
            let mut rest = cell;
            for i in (0..r).rev() {
                k[i] = self.position.rows[i][rest % l];
                rest /= l;
            }
            let mut inside = true;
            for axis in 0..d {
                let p = self.transform.perm[axis];
                let len = src_dims[p];
                if k[axis] >= len {
                    inside = false;
                    break;
                }
                src[p] = if self.transform.reversed[axis] { len - 1 - k[axis] } else { k[axis] };
            }
            let got = if inside { t.at(&src[..d]) } else { 0 };
            if got != *want {
                return false;
            }
        }
        true
    }

    /// Nearer expectation to `mean`; ties go to `X`.
    pub fn decide(&self, mean: f64) -> Choice {
        if (mean - self.e_x).abs() <= (mean - self.e_y).abs() {
            Choice::X
        } else {
            Choice::Y
        }
    }

    /// Cells of the position in original coordinates, for traces padded in
    /// the normalized frame. On reversed axes the index counts from the far
    /// end of the trace.
    pub fn original_cells(&self) -> Vec<Vec<usize>> {
        let dims = vec![self.n; self.transform.ndim()];
        let r = self.position.rank();
        let l = self.position.side();
        let mut cells = Vec::new();
        for u in crate::hypermatrix::MultiIndex::new(&vec![l; r]) {
            let mut k: Vec<usize> = (0..r).map(|i| self.position.rows[i][u[i]]).collect();
            k.extend(&self.position.points);
            cells.push(self.transform.inverse().source_index(&k, &dims));
        }
        cells
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Choice {
    X,
    Y,
}

/// Exact probabilities for every position, in enumeration order, keeping at
/// most `cap` positions by stride when there are more.
fn best_position(
    x: &Hypermatrix,
    y: &Hypermatrix,
    w: &Pattern,
    params: &ChannelParams,
    cap: usize,
) -> Result<Option<(ScatterPosition, f64, f64)>> {
    let n = x.side().unwrap_or(1);
    let px = exact_pattern_probs(x, w, params)?;
    let py = exact_pattern_probs(y, w, params)?;
    let total = position_count(n, x.ndim(), w.side(), w.rank());
    let stride = (total / cap.max(1) as u128 + 1) as usize;
    let mut best: Option<(ScatterPosition, f64, f64)> = None;
    for (i, j) in iter_positions(n, x.ndim(), w.side(), w.rank())?.enumerate() {
        if i % stride != 0 {
            continue;
        }
        let gap = (px[i] - py[i]).abs();
        if gap > 0.0 && best.as_ref().map_or(true, |b| gap > (b.1 - b.2).abs()) {
            best = Some((j, px[i], py[i]));
        }
    }
    Ok(best)
}

/// Case pipeline: reduce `X - Y`, pick `l`, use the scalar pattern when no
/// `lambda_r >= l` and the reduced-pair witness otherwise, then the position
/// with the largest exact gap.
pub fn select_statistic(x: &Hypermatrix, y: &Hypermatrix, params: &ChannelParams, rule: LRule) -> Result<Statistic> {
    select_statistic_capped(x, y, params, rule, DEFAULT_POSITION_CAP)
}

pub fn select_statistic_capped(
    x: &Hypermatrix,
    y: &Hypermatrix,
    params: &ChannelParams,
    rule: LRule,
    position_cap: usize,
) -> Result<Statistic> {
    if x == y {
        return Err(Error::InvalidParameter("the two hypotheses are identical".into()));
    }
    let a = diff(x, y)?;
    let n = a
        .side()
        .ok_or_else(|| Error::InvalidParameter("hypotheses must be cubes".into()))?;
    let d = a.ndim();
    let red = reduce(&a)?;
    let l = rule.side(n, d);
    let case_r = classify(&red.lambdas, l);
    let tx = red.global.apply(x)?;
    let ty = red.global.apply(y)?;
    let (pattern, witness) = if case_r == 0 {
        (Pattern::unit(), None)
    } else {
        let w = construct_witness(&red.project(x, case_r)?, &red.project(y, case_r)?, l)?;
        (w.pattern.clone(), Some(w))
    };
    let found = best_position(&tx, &ty, &pattern, params, position_cap)?;
    let stat = |pattern, position, transform, fallback, witness, e_x, e_y: f64| Statistic {
        pattern,
        position,
        transform,
        lambdas: red.lambdas.clone(),
        l,
        case_r,
        fallback,
        witness,
        e_x,
        e_y,
        gap: (e_x - e_y).abs(),
        n,
    };
    if let Some((j, e_x, e_y)) = found {
        return Ok(stat(pattern, j, red.global.clone(), false, witness, e_x, e_y));
    }
    let identity = AxisTransform::identity(d);
    match best_position(x, y, &Pattern::unit(), params, usize::MAX)? {
        Some((j, e_x, e_y)) => Ok(stat(Pattern::unit(), j, identity, true, None, e_x, e_y)),
        None => Err(Error::ZeroGap),
    }
}

/// `ceil(2 ln(2 * 2^{n^d} / delta) / gap^2)`.
pub fn hoeffding_budget(gap: f64, n: usize, d: usize, delta: f64) -> Result<u64> {
    if !(gap > 0.0 && gap <= 1.0) || !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter(format!("gap {gap}, delta {delta}")));
    }
    let cells = (n as f64).powi(d as i32);
    let log_terms = (cells + 1.0) * std::f64::consts::LN_2 - delta.ln();
    Ok((2.0 * log_terms / (gap * gap)).ceil() as u64)
}

/// Traces grouped by content, in first-seen order.
#[derive(Clone, Debug, Default)]
pub struct TraceSet {
    groups: Vec<(Trace, usize)>,
    index: HashMap<Hypermatrix, usize>,
    total: usize,
}

impl TraceSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, trace: Trace) {
        self.total += 1;
        if let Some(&i) = self.index.get(&trace.entries) {
            self.groups[i].1 += 1;
        } else {
            self.index.insert(trace.entries.clone(), self.groups.len());
            self.groups.push((trace, 1));
        }
    }

    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    pub fn distinct(&self) -> usize {
        self.groups.len()
    }

    /// Fraction of traces on which `stat` fires; 0 for an empty set.
    pub fn mean(&self, stat: &Statistic) -> f64 {
        if self.total == 0 {
            return 0.0;
        }
        let hits: usize = self.groups.iter().filter(|(t, _)| stat.indicator(t)).map(|(_, c)| c).sum();
        hits as f64 / self.total as f64
    }
}

impl FromIterator<Trace> for TraceSet {
    fn from_iter<I: IntoIterator<Item = Trace>>(iter: I) -> Self {
        let mut set = TraceSet::new();
        for t in iter {
            set.push(t);
        }
        set
    }
}

pub fn pairwise_decide(traces: &TraceSet, stat: &Statistic) -> Choice {
    stat.decide(traces.mean(stat))
}

/// Statistics keyed by the ordered pair they separate.
#[derive(Debug)]
pub struct StatisticCache {
    params: ChannelParams,
    rule: LRule,
    map: HashMap<(Hypermatrix, Hypermatrix), Statistic>,
}

impl StatisticCache {
    pub fn new(params: ChannelParams, rule: LRule) -> Self {
        StatisticCache {
            params,
            rule,
            map: HashMap::new(),
        }
    }

    pub fn params(&self) -> &ChannelParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn get(&mut self, x: &Hypermatrix, y: &Hypermatrix) -> Result<&Statistic> {
        let key = (x.clone(), y.clone());
        if !self.map.contains_key(&key) {
            let stat = select_statistic(x, y, &self.params, self.rule)?;
            self.map.insert(key.clone(), stat);
        }
        Ok(&self.map[&key])
    }
}

/// Every binary `n^d` hypermatrix, in bit order.
pub fn all_candidates(n: usize, d: usize, cap: usize) -> Result<Vec<Hypermatrix>> {
    let cells = n.checked_pow(d as u32).unwrap_or(usize::MAX);
    if cells >= 64 || (1usize << cells) > cap {
        return Err(Error::CapExceeded {
            what: "candidate set",
            needed: 2f64.powf(cells as f64),
            cap: cap as f64,
        });
    }
    Ok((0..1u64 << cells).map(|b| Hypermatrix::from_bits(vec![n; d], b)).collect())
}

/// Single-elimination tournament: neighbours play in fixed order, an odd
/// one out advances unopposed.
pub fn reconstruct_among(traces: &TraceSet, candidates: &[Hypermatrix], cache: &mut StatisticCache) -> Result<Hypermatrix> {
    let mut round: Vec<&Hypermatrix> = candidates.iter().collect();
    if round.is_empty() {
        return Err(Error::InvalidParameter("empty candidate list".into()));
    }
    while round.len() > 1 {
        let mut next = Vec::with_capacity(round.len().div_ceil(2));
        for pair in round.chunks(2) {
            match pair {
                [x, y] => {
                    let winner = if x == y {
                        *x
                    } else {
                        match pairwise_decide(traces, cache.get(x, y)?) {
                            Choice::X => *x,
                            Choice::Y => *y,
                        }
                    };
                    next.push(winner);
                }
                [x] => next.push(*x),
                _ => unreachable!(),
            }
        }
        round = next;
    }
    Ok(round[0].clone())
}

pub fn reconstruct_exhaustive(traces: &TraceSet, n: usize, d: usize, cache: &mut StatisticCache) -> Result<Hypermatrix> {
    let candidates = all_candidates(n, d, DEFAULT_CANDIDATE_CAP)?;
    reconstruct_among(traces, &candidates, cache)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub n: usize,
    pub d: usize,
    pub q: f64,
    pub trials: usize,
    pub target: f64,
    /// Trace counts to test; traces for a trial are nested across counts.
    pub schedule: Vec<usize>,
    pub seed: u64,
    /// Cycle through all `2^{n^d}` ground truths instead of drawing them.
    pub enumerate_truths: bool,
    pub rule: LRule,
}

impl ExperimentConfig {
    pub fn doubling(max_t: usize) -> Vec<usize> {
        let mut s = vec![1];
        while *s.last().unwrap() < max_t {
            let next = (s.last().unwrap() * 2).min(max_t);
            s.push(next);
        }
        s
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub traces: usize,
    pub successes: usize,
    pub trials: usize,
    pub rate: f64,
    pub stderr: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub config: ExperimentConfig,
    pub generator: String,
    pub rows: Vec<ExperimentRow>,
    /// Smallest scheduled trace count whose raw rate reaches the target.
    pub minimal_traces: Option<usize>,
    /// No later rate falls more than 3 standard errors below an earlier one.
    pub monotone_within_3sigma: bool,
    pub statistics_cached: usize,
    pub wall_clock_ms: u128,
}

impl ExperimentReport {
    /// Equality ignoring the wall clock.
    pub fn same_outcome(&self, other: &ExperimentReport) -> bool {
        self.config == other.config
            && self.generator == other.generator
            && self.rows == other.rows
            && self.minimal_traces == other.minimal_traces
            && self.monotone_within_3sigma == other.monotone_within_3sigma
    }
}

pub fn isotonic_within(rows: &[ExperimentRow], sigmas: f64) -> bool {
    rows.iter().enumerate().all(|(i, a)| {
        rows[i + 1..].iter().all(|b| {
            let slack = sigmas * (a.stderr * a.stderr + b.stderr * b.stderr).sqrt();
            a.rate - b.rate <= slack + 1e-12
        })
    })
}

pub fn trace_complexity_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    let start = Instant::now();
    let params = ChannelParams::oracle(config.q)?;
    let candidates = all_candidates(config.n, config.d, DEFAULT_CANDIDATE_CAP)?;
    let mut cache = StatisticCache::new(params.clone(), config.rule);
    let max_t = config.schedule.iter().copied().max().unwrap_or(0);
    let mut successes = vec![0usize; config.schedule.len()];
    for trial in 0..config.trials {
        let mut rng = seeded(derive_seed(config.seed, trial as u64));
        let truth = if config.enumerate_truths {
            candidates[trial % candidates.len()].clone()
        } else {
            let bits: u64 = rand::Rng::gen_range(&mut rng, 0..candidates.len() as u64);
            candidates[bits as usize].clone()
        };
        let traces: Vec<Trace> = (0..max_t).map(|_| sample_trace_with(&truth, &params, &mut rng)).collect();
        for (slot, &t) in successes.iter_mut().zip(&config.schedule) {
            let set: TraceSet = traces[..t].iter().cloned().collect();
            if reconstruct_among(&set, &candidates, &mut cache)? == truth {
                *slot += 1;
            }
        }
    }
    let rows: Vec<ExperimentRow> = config
        .schedule
        .iter()
        .zip(&successes)
        .map(|(&t, &s)| {
            let trials = config.trials.max(1);
            let rate = s as f64 / trials as f64;
            ExperimentRow {
                traces: t,
                successes: s,
                trials: config.trials,
                rate,
                stderr: (rate * (1.0 - rate) / trials as f64).sqrt(),
            }
        })
        .collect();
    Ok(ExperimentReport {
        config: config.clone(),
        generator: GENERATOR_NAME.to_string(),
        minimal_traces: rows.iter().find(|r| r.rate >= config.target).map(|r| r.traces),
        monotone_within_3sigma: isotonic_within(&rows, 3.0),
        rows,
        statistics_cached: cache.len(),
        wall_clock_ms: start.elapsed().as_millis(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::exact_statistic_prob;
    use crate::channel::DEFAULT_ENUMERATION_CAP;
    use rand::Rng;

    fn hm(n: usize, d: usize, bits: u64) -> Hypermatrix {
        Hypermatrix::from_bits(vec![n; d], bits)
    }

    #[test]
    fn l_rule_values() {
        assert_eq!(LRule::Asymptotic.side(3, 2), 1);
        assert_eq!(LRule::Asymptotic.side(40, 2), 9);
        assert_eq!(LRule::Asymptotic.side(40, 1), 5);
        assert_eq!(LRule::Fixed(4).side(40, 2), 5);
        assert_eq!(LRule::Fixed(9).side(12, 2), 5);
        assert_eq!(LRule::Fixed(9).side(2, 2), 1);
    }

    #[test]
    fn hoeffding_examples() {
        assert_eq!(hoeffding_budget(1.0, 1, 1, 0.5).unwrap(), 5);
        let a = hoeffding_budget(0.2, 3, 2, 1e-3).unwrap();
        let b = hoeffding_budget(0.1, 3, 2, 1e-3).unwrap();
        assert!((b as f64 / a as f64 - 4.0).abs() < 0.01);
        let mut prev = 0;
        for k in 1..10 {
            let t = hoeffding_budget(0.3, 2, 2, 10f64.powi(-k)).unwrap();
            assert!(t > prev);
            prev = t;
        }
        assert!(hoeffding_budget(0.0, 1, 1, 0.5).is_err());
    }

    #[test]
    fn sequence_single_bit_gap() {
        let x = Hypermatrix::new(vec![3], vec![1, 0, 0]).unwrap();
        let y = Hypermatrix::cube(3, 1);
        let params = ChannelParams::new(0.4).unwrap();
        let s = select_statistic(&x, &y, &params, LRule::Asymptotic).unwrap();
        assert_eq!(s.case_r, 0);
        assert_eq!(s.pattern, Pattern::unit());
        assert!((s.gap - 0.6).abs() < 1e-12);
        assert!(s.indicator(&Trace::from_retained(&x, vec![vec![0]]).unwrap()));
    }

    #[test]
    fn identical_hypotheses_rejected() {
        let x = hm(2, 2, 5);
        let params = ChannelParams::new(0.5).unwrap();
        assert!(select_statistic(&x, &x, &params, LRule::Asymptotic).is_err());
    }

    /// The gap recomputed on the original `X` and `Y`, through the
    /// indicator, equals the one found in the normalized frame.
    #[test]
    fn gap_matches_original_frame_oracle() {
        let mut rng = seeded(12);
        let params = ChannelParams::new(0.45).unwrap();
        for _ in 0..60 {
            let n: usize = rng.gen_range(2..=4);
            let d = rng.gen_range(1..=2);
            let cells: usize = (n as usize).pow(d as u32);
            let x = hm(n, d, rng.gen_range(0..1u64 << cells));
            let y = hm(n, d, rng.gen_range(0..1u64 << cells));
            if x == y {
                continue;
            }
            let rule = if rng.gen_bool(0.5) { LRule::Asymptotic } else { LRule::Fixed(1) };
            let s = select_statistic(&x, &y, &params, rule).unwrap();
            let ex = exact_statistic_prob(&x, &params, DEFAULT_ENUMERATION_CAP, |t| s.indicator(t)).unwrap();
            let ey = exact_statistic_prob(&y, &params, DEFAULT_ENUMERATION_CAP, |t| s.indicator(t)).unwrap();
            assert!((ex - s.e_x).abs() < 1e-12 && (ey - s.e_y).abs() < 1e-12);
            assert!(s.gap > 0.0);
        }
    }

    #[test]
    fn witness_case_respects_certificate() {
        let mut rng = seeded(2);
        let params = ChannelParams::new(0.3).unwrap();
        let mut seen = 0;
        while seen < 10 {
            let x = Hypermatrix::from_fn(vec![7, 7], |_| rng.gen_range(0..2));
            let mut y = x.clone();
            let k = [rng.gen_range(2..5), rng.gen_range(2..5)];
            y.set(&k, 1 - y.at(&k)).unwrap();
            let s = select_statistic(&x, &y, &params, LRule::Fixed(1)).unwrap();
            if s.case_r >= 1 && !s.fallback {
                assert!(s.witness.as_ref().unwrap().certificate.passed());
                seen += 1;
            } else {
                assert!(s.case_r >= 1 || s.pattern == Pattern::unit());
            }
        }
    }

    #[test]
    fn decision_tie_and_empty() {
        let x = Hypermatrix::new(vec![2], vec![1, 0]).unwrap();
        let y = Hypermatrix::new(vec![2], vec![0, 1]).unwrap();
        let params = ChannelParams::new(0.5).unwrap();
        let mut s = select_statistic(&x, &y, &params, LRule::Asymptotic).unwrap();
        let empty = TraceSet::new();
        let expect = if s.e_x.abs() <= s.e_y.abs() { Choice::X } else { Choice::Y };
        assert_eq!(pairwise_decide(&empty, &s), expect);
        s.e_x = 0.25;
        s.e_y = 0.75;
        assert_eq!(s.decide(0.5), Choice::X);
    }

    #[test]
    fn oracle_mode_is_exact() {
        let params = ChannelParams::oracle(0.0).unwrap();
        let mut cache = StatisticCache::new(params.clone(), LRule::Asymptotic);
        for bits in 0..16 {
            let x = hm(2, 2, bits);
            let set: TraceSet = std::iter::once(sample_trace_with(&x, &params, &mut seeded(bits))).collect();
            assert_eq!(reconstruct_exhaustive(&set, 2, 2, &mut cache).unwrap(), x);
        }
        let only = [hm(2, 2, 9)];
        let set: TraceSet = std::iter::once(sample_trace_with(&hm(2, 2, 3), &params, &mut seeded(0))).collect();
        assert_eq!(reconstruct_among(&set, &only, &mut cache).unwrap(), only[0]);
    }

    #[test]
    fn trace_set_groups() {
        let x = hm(2, 2, 6);
        let params = ChannelParams::new(0.5).unwrap();
        let mut rng = seeded(1);
        let set: TraceSet = (0..500).map(|_| sample_trace_with(&x, &params, &mut rng)).collect();
        assert_eq!(set.len(), 500);
        assert!(set.distinct() <= 16);
    }

    #[test]
    fn experiment_is_deterministic_and_oracle_mode_needs_one_trace() {
        let config = ExperimentConfig {
            n: 2,
            d: 2,
            q: 0.0,
            trials: 16,
            target: 1.0,
            schedule: ExperimentConfig::doubling(4),
            seed: 5,
            enumerate_truths: true,
            rule: LRule::Asymptotic,
        };
        let a = trace_complexity_experiment(&config).unwrap();
        assert_eq!(a.minimal_traces, Some(1));
        let config = ExperimentConfig { q: 0.4, schedule: ExperimentConfig::doubling(64), ..config };
        let a = trace_complexity_experiment(&config).unwrap();
        let b = trace_complexity_experiment(&config).unwrap();
        assert!(a.same_outcome(&b));
        assert!(a.rows.iter().all(|r| (0.0..=1.0).contains(&r.rate)));
    }
}
