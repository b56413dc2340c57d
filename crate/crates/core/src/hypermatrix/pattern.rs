use serde::{Deserialize, Serialize};

use super::{Hypermatrix, MultiIndex};
use crate::error::{Error, Result};

/// Binary block of shape `side^rank` used as the matching statistic.
/// Rank 0 is the single-cell pattern.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Pattern {
    side: usize,
    grid: Hypermatrix,
}

impl Pattern {
    pub fn new(side: usize, rank: usize, entries: Vec<u8>) -> Result<Self> {
        if side == 0 {
            return Err(Error::InvalidParameter("pattern side must be positive".into()));
        }
        let grid = Hypermatrix::new(vec![side; rank], entries)?;
        // Side is meaningless for the scalar pattern.
        let side = if rank == 0 { 1 } else { side };
        if grid.entries().iter().any(|&b| b > 1) {
            return Err(Error::InvalidParameter("pattern entries must be bits".into()));
        }
        Ok(Pattern { side, grid })
    }

    /// The scalar pattern `W = 1`.
    pub fn unit() -> Self {
        Pattern {
            side: 1,
            grid: Hypermatrix::new(vec![], vec![1]).expect("scalar shape"),
        }
    }

    pub fn from_grid(grid: Hypermatrix) -> Result<Self> {
        let side = match grid.side() {
            Some(s) => s,
            None if grid.ndim() == 0 => 1,
            None => return Err(Error::InvalidParameter("pattern must be a cube".into())),
        };
        Pattern::new(side, grid.ndim(), grid.entries().to_vec())
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn rank(&self) -> usize {
        self.grid.ndim()
    }

    pub fn entries(&self) -> &[u8] {
        self.grid.entries()
    }

    pub fn grid(&self) -> &Hypermatrix {
        &self.grid
    }
}

fn is_period(w: &Pattern, t: &[i64]) -> bool {
    let l = w.side() as i64;
    let mut shifted = vec![0usize; t.len()];
    for k in MultiIndex::new(w.grid.dims()) {
        let mut inside = true;
        for ((slot, &ki), &ti) in shifted.iter_mut().zip(&k).zip(t) {
            let v = ki as i64 + ti;
            if !(0..l).contains(&v) {
                inside = false;
                break;
            }
            *slot = v as usize;
        }
        if inside && w.grid.at(&k) != w.grid.at(&shifted) {
            return false;
        }
    }
    true
}

/// Smallest period `t` in `[-s, s]^r` among sign-canonical vectors (first
/// nonzero component positive), in lexicographic order. Periods come in
/// `+-t` pairs so the canonical half suffices.
pub fn find_period(w: &Pattern, s: usize) -> Option<Vec<i64>> {
    let r = w.rank();
    if r == 0 || s == 0 {
        return None;
    }
    let span = vec![2 * s + 1; r];
    MultiIndex::new(&span)
        .map(|k| k.iter().map(|&v| v as i64 - s as i64).collect::<Vec<_>>())
        .filter(|t| t.iter().find(|&&v| v != 0).is_some_and(|&v| v > 0))
        .find(|t| is_period(w, t))
}
