//! The slice-deletion channel: every slice along every axis is deleted
//! independently with probability `q`.

mod oracle;
mod trc;

use num_rational::BigRational;
use num_traits::One;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypermatrix::Hypermatrix;
use crate::rng::{seeded, Rng};

pub use oracle::{
    exact_pattern_prob, exact_pattern_probs, exact_pattern_probs_in, exact_retained_probs_in, exact_statistic_prob, for_each_retention,
    mc_pattern_prob, subset_weight, RetentionPattern, DEFAULT_ENUMERATION_CAP,
};
pub use trc::{parse_trc, to_trc};

/// Deletion probability `q` and retention probability `p = 1 - q`.
///
/// `new` accepts the open interval used for sampling; `oracle` also allows the
/// degenerate endpoints. When `q` was given as a fraction the exact value is
/// kept for rational-arithmetic oracles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams {
    q: f64,
    p: f64,
    #[serde(skip)]
    exact_q: Option<BigRational>,
}

impl ChannelParams {
    pub fn new(q: f64) -> Result<Self> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::InvalidParameter(format!("deletion probability {q} not in (0, 1)")));
        }
        Ok(Self::unchecked(q))
    }

    pub fn oracle(q: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&q) {
            return Err(Error::InvalidParameter(format!("deletion probability {q} not in [0, 1]")));
        }
        Ok(Self::unchecked(q))
    }

    /// `q = num / den`, kept exactly.
    pub fn rational(num: u64, den: u64) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidParameter(format!("{num}/{den} is not a probability")));
        }
        let mut params = Self::oracle(num as f64 / den as f64)?;
        params.exact_q = Some(BigRational::new(num.into(), den.into()));
        Ok(params)
    }

    fn unchecked(q: f64) -> Self {
        ChannelParams {
            q,
            p: 1.0 - q,
            exact_q: None,
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn exact_q(&self) -> Option<&BigRational> {
        self.exact_q.as_ref()
    }

    pub fn exact_p(&self) -> Option<BigRational> {
        self.exact_q.as_ref().map(|q| BigRational::one() - q)
    }

    pub fn is_degenerate(&self) -> bool {
        self.q == 0.0 || self.q == 1.0
    }
}

/// The sub-hypermatrix left after slice deletion, with the kept indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Trace {
    pub retained: Vec<Vec<usize>>,
    pub entries: Hypermatrix,
}

impl Trace {
    pub fn from_retained(x: &Hypermatrix, retained: Vec<Vec<usize>>) -> Result<Self> {
        for list in &retained {
            if list.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::NotIncreasing(list.clone()));
            }
        }
        let entries = x.restrict(&retained)?;
        Ok(Trace { retained, entries })
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Draws one trace: axes in order, indices increasing, one uniform per slice.
pub fn sample_trace_with(x: &Hypermatrix, params: &ChannelParams, rng: &mut Rng) -> Trace {
    let retained = x
        .dims()
        .iter()
        .map(|&n| (0..n).filter(|_| rng.gen::<f64>() >= params.q).collect())
        .collect();
    Trace::from_retained(x, retained).expect("sampled indices are valid")
}

pub fn sample_trace(x: &Hypermatrix, params: &ChannelParams, seed: u64) -> Trace {
    sample_trace_with(x, params, &mut seeded(seed))
}

/// Places the trace at the all-low corner of a zero hypermatrix of `dims`.
pub fn pad(t: &Trace, dims: &[usize]) -> Result<Hypermatrix> {
    t.entries.embed(dims)
}
