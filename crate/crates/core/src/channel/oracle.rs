//! Exact and Monte Carlo oracles for `E[1{padded trace at j = W}]`.

use num_traits::Num;

use super::{pad, sample_trace_with, ChannelParams, Trace};
use crate::error::{Error, Result};
use crate::hypermatrix::{iter_positions, matches_at, Hypermatrix, Pattern, ScatterPosition};
use crate::rng::seeded;

/// Default cap on the number of retained-subset combinations.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 24;

/// Kept indices per axis for one deletion outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetentionPattern {
    pub retained: Vec<Vec<usize>>,
}

/// `p^kept q^(n - kept)`.
pub fn subset_weight<S: Num + Clone>(p: &S, q: &S, kept: usize, n: usize) -> S {
    let mut w = S::one();
    for _ in 0..kept {
        w = w * p.clone();
    }
    for _ in kept..n {
        w = w * q.clone();
    }
    w
}

/// Visits every combination of per-axis retained subsets with its probability.
pub fn for_each_retention<S: Num + Clone>(
    dims: &[usize],
    p: &S,
    q: &S,
    cap: u64,
    mut visit: impl FnMut(&RetentionPattern, &S),
) -> Result<()> {
    let total_bits: usize = dims.iter().sum();
    if total_bits >= 63 || (1u64 << total_bits) > cap {
        return Err(Error::CapExceeded {
            what: "retention enumeration",
            needed: 2f64.powi(total_bits as i32),
            cap: cap as f64,
        });
    }
    // Per-axis tables: (retained list, weight) for every mask.
    let tables: Vec<Vec<(Vec<usize>, S)>> = dims
        .iter()
        .map(|&n| {
            (0u64..1 << n)
                .map(|mask| {
                    let kept: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                    let w = subset_weight(p, q, kept.len(), n);
                    (kept, w)
                })
                .collect()
        })
        .collect();
    let d = dims.len();
    let mut choice = vec![0usize; d];
    let mut pattern = RetentionPattern {
        retained: tables.iter().map(|t| t[0].0.clone()).collect(),
    };
    loop {
        let mut weight = S::one();
        for (a, &c) in choice.iter().enumerate() {
            pattern.retained[a].clone_from(&tables[a][c].0);
            weight = weight * tables[a][c].1.clone();
        }
        visit(&pattern, &weight);
        let mut axis = d;
        loop {
            if axis == 0 {
                return Ok(());
            }
            axis -= 1;
            choice[axis] += 1;
            if choice[axis] < tables[axis].len() {
                break;
            }
            choice[axis] = 0;
        }
    }
}

/// Exact probability, for every position in enumeration order, that the
/// padded trace matches `w` there. `p` and `q` are passed in the scalar type
/// of the caller so the same routine serves floats and exact rationals.
pub fn exact_pattern_probs_in<S: Num + Clone>(
    x: &Hypermatrix,
    w: &Pattern,
    p: &S,
    q: &S,
    cap: u64,
) -> Result<Vec<S>> {
    probs_by_enumeration(x, w, p, q, cap, false)
}

/// Like [`exact_pattern_probs_in`], but a match only counts when every cell
/// of the position lies inside the unpadded trace.
pub fn exact_retained_probs_in<S: Num + Clone>(
    x: &Hypermatrix,
    w: &Pattern,
    p: &S,
    q: &S,
    cap: u64,
) -> Result<Vec<S>> {
    probs_by_enumeration(x, w, p, q, cap, true)
}

fn probs_by_enumeration<S: Num + Clone>(
    x: &Hypermatrix,
    w: &Pattern,
    p: &S,
    q: &S,
    cap: u64,
    inside_only: bool,
) -> Result<Vec<S>> {
    let n = x.side().ok_or_else(|| Error::InvalidParameter("source must be a cube".into()))?;
    let positions: Vec<ScatterPosition> =
        iter_positions(n, x.ndim(), w.side(), w.rank())?.collect();
    let mut probs = vec![S::zero(); positions.len()];
    for_each_retention(x.dims(), p, q, cap, |pattern, weight| {
        let trace = Trace::from_retained(x, pattern.retained.clone()).expect("valid retention");
        let padded = pad(&trace, x.dims()).expect("trace fits");
        for (slot, j) in probs.iter_mut().zip(&positions) {
            if inside_only && !j.fits(trace.entries.dims()) {
                continue;
            }
            if matches_at(&padded, j, w) {
                *slot = slot.clone() + weight.clone();
            }
        }
    })?;
    Ok(probs)
}

pub fn exact_pattern_probs(x: &Hypermatrix, w: &Pattern, params: &ChannelParams) -> Result<Vec<f64>> {
    exact_pattern_probs_in(x, w, &params.p(), &params.q(), DEFAULT_ENUMERATION_CAP)
}

/// `E[1{padded trace of x matches w at j}]` by full enumeration.
pub fn exact_pattern_prob(
    x: &Hypermatrix,
    w: &Pattern,
    j: &ScatterPosition,
    params: &ChannelParams,
) -> Result<f64> {
    if j.rank() != w.rank() || j.side() != w.side() || !j.fits(x.dims()) {
        return Err(Error::InvalidParameter(format!(
            "position {j:?} incompatible with pattern rank {} side {} and dims {:?}",
            w.rank(),
            w.side(),
            x.dims()
        )));
    }
    exact_statistic_prob(x, params, DEFAULT_ENUMERATION_CAP, |trace| {
        let padded = pad(trace, x.dims()).expect("trace fits");
        matches_at(&padded, j, w)
    })
}

/// Exact probability that an arbitrary trace predicate holds.
pub fn exact_statistic_prob(
    x: &Hypermatrix,
    params: &ChannelParams,
    cap: u64,
    mut event: impl FnMut(&Trace) -> bool,
) -> Result<f64> {
    let mut total = 0.0;
    for_each_retention(x.dims(), &params.p(), &params.q(), cap, |pattern, weight| {
        let trace = Trace::from_retained(x, pattern.retained.clone()).expect("valid retention");
        if event(&trace) {
            total += weight;
        }
    })?;
    Ok(total)
}

/// Sample mean of the match indicator over `trials` traces, with its
/// binomial standard error.
pub fn mc_pattern_prob(
    x: &Hypermatrix,
    w: &Pattern,
    j: &ScatterPosition,
    params: &ChannelParams,
    trials: u64,
    seed: u64,
) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::InvalidParameter("at least one trial required".into()));
    }
    let mut rng = seeded(seed);
    let hits = (0..trials)
        .filter(|_| {
            let t = sample_trace_with(x, params, &mut rng);
            let padded = pad(&t, x.dims()).expect("trace fits");
            matches_at(&padded, j, w)
        })
        .count();
    let m = hits as f64 / trials as f64;
    Ok((m, (m * (1.0 - m) / trials as f64).sqrt()))
}
