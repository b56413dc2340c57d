use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{Hypermatrix, MultiIndex, Pattern};
use crate::error::{Error, Result};

/// An element of the scattered position set: `r` strictly increasing
/// `l`-tuples for the leading axes and `d - r` plain indices for the rest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScatterPosition {
    pub rows: Vec<Vec<usize>>,
    pub points: Vec<usize>,
}

impl ScatterPosition {
    pub fn new(rows: Vec<Vec<usize>>, points: Vec<usize>) -> Result<Self> {
        let side = rows.first().map(Vec::len);
        for row in &rows {
            if Some(row.len()) != side || row.is_empty() {
                return Err(Error::InvalidParameter("ragged row tuples".into()));
            }
            if row.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::NotIncreasing(row.clone()));
            }
        }
        Ok(ScatterPosition { rows, points })
    }

    /// Contiguous block `corner + [l]^r` with trailing point coordinates.
    pub fn block(corner: &[usize], l: usize, r: usize) -> Self {
        let rows = corner[..r].iter().map(|&c| (c..c + l).collect()).collect();
        ScatterPosition {
            rows,
            points: corner[r..].to_vec(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ndim(&self) -> usize {
        self.rows.len() + self.points.len()
    }

    pub fn side(&self) -> usize {
        self.rows.first().map_or(1, Vec::len)
    }

    /// Largest coordinate used on each axis.
    fn extent(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows
            .iter()
            .map(|r| *r.last().expect("nonempty row"))
            .chain(self.points.iter().copied())
    }

    pub fn fits(&self, dims: &[usize]) -> bool {
        dims.len() == self.ndim() && self.extent().zip(dims).all(|(k, &n)| k < n)
    }
}

/// An evaluation point shaped like a [`ScatterPosition`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "Complex<S>: Serialize",
    deserialize = "Complex<S>: Deserialize<'de>"
))]
pub struct ComplexPoint<S = f64> {
    pub rows: Vec<Vec<Complex<S>>>,
    pub points: Vec<Complex<S>>,
}

impl<S: Clone> ComplexPoint<S> {
    pub fn new(rows: Vec<Vec<Complex<S>>>, points: Vec<Complex<S>>) -> Self {
        ComplexPoint { rows, points }
    }

    /// Same value in every slot.
    pub fn constant(value: Complex<S>, d: usize, l: usize, r: usize) -> Self {
        ComplexPoint {
            rows: vec![vec![value.clone(); l]; r],
            points: vec![value; d - r],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ndim(&self) -> usize {
        self.rows.len() + self.points.len()
    }

    pub fn map<T>(&self, mut f: impl FnMut(&Complex<S>) -> Complex<T>) -> ComplexPoint<T> {
        ComplexPoint {
            rows: self
                .rows
                .iter()
                .map(|row| row.iter().map(&mut f).collect())
                .collect(),
            points: self.points.iter().map(f).collect(),
        }
    }

    pub fn components(&self) -> impl Iterator<Item = &Complex<S>> {
        self.rows.iter().flatten().chain(self.points.iter())
    }
}

/// `C(n, k)` saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// `C(n, l)^r * n^(d - r)`, saturating.
pub fn position_count(n: usize, d: usize, l: usize, r: usize) -> u128 {
    let c = binomial(n, l);
    let mut acc: u128 = 1;
    for _ in 0..r {
        acc = acc.saturating_mul(c);
    }
    for _ in r..d {
        acc = acc.saturating_mul(n as u128);
    }
    acc
}

/// Lexicographic enumerator over all scattered positions.
#[derive(Clone, Debug)]
pub struct Positions {
    n: usize,
    next: Option<ScatterPosition>,
}

pub fn iter_positions(n: usize, d: usize, l: usize, r: usize) -> Result<Positions> {
    if r > d || l == 0 || l > n {
        return Err(Error::InvalidParameter(format!(
            "positions need 0 <= r <= d and 1 <= l <= n (n={n}, d={d}, l={l}, r={r})"
        )));
    }
    let first = ScatterPosition {
        rows: vec![(0..l).collect(); r],
        points: vec![0; d - r],
    };
    Ok(Positions {
        n,
        next: Some(first),
    })
}

fn next_combination(row: &mut [usize], n: usize) -> bool {
    let l = row.len();
    for i in (0..l).rev() {
        if row[i] < n - l + i {
            row[i] += 1;
            for j in i + 1..l {
                row[j] = row[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

impl Iterator for Positions {
    type Item = ScatterPosition;

    fn next(&mut self) -> Option<ScatterPosition> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for p in succ.points.iter_mut().rev() {
            *p += 1;
            if *p < self.n {
                self.next = Some(succ);
                return Some(current);
            }
            *p = 0;
        }
        for row in succ.rows.iter_mut().rev() {
            if next_combination(row, self.n) {
                self.next = Some(succ);
                return Some(current);
            }
            row.iter_mut().enumerate().for_each(|(i, v)| *v = i);
        }
        Some(current)
    }
}

/// Whether `x` restricted to position `k` equals `w`, without allocating.
pub fn matches_at(x: &Hypermatrix, k: &ScatterPosition, w: &Pattern) -> bool {
    let r = k.rank();
    let l = k.side();
    let dims = x.dims();
    let mut base = 0usize;
    let mut strides = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * dims[i + 1];
    }
    for (i, &p) in k.points.iter().enumerate() {
        base += p * strides[r + i];
    }
    let entries = x.entries();
    let target = w.entries();
    if r == 0 {
        return entries[base] == target[0];
    }
    let mut u = vec![0usize; r];
    for &want in target {
        let off: usize = base
            + u
                .iter()
                .enumerate()
                .map(|(i, &ui)| k.rows[i][ui] * strides[i])
                .sum::<usize>();
        if entries[off] != want {
            return false;
        }
        for i in (0..r).rev() {
            u[i] += 1;
            if u[i] < l {
                break;
            }
            u[i] = 0;
        }
    }
    true
}

/// The sub-hypermatrix `X_k` as a pattern.
pub fn gather(x: &Hypermatrix, k: &ScatterPosition) -> Result<Pattern> {
    if !k.fits(x.dims()) {
        return Err(Error::IndexOutOfRange {
            index: k.rows.iter().flatten().chain(&k.points).copied().collect(),
            dims: x.dims().to_vec(),
        });
    }
    let r = k.rank();
    let l = k.side();
    let mut full = vec![0; x.ndim()];
    full[r..].copy_from_slice(&k.points);
    let entries = MultiIndex::new(&vec![l; r])
        .map(|u| {
            for (i, &ui) in u.iter().enumerate() {
                full[i] = k.rows[i][ui];
            }
            x.at(&full)
        })
        .collect();
    Pattern::new(l, r, entries)
}

/// The contiguous `l^r` block of an r-dimensional hypermatrix at `corner`.
pub fn extract_block(x: &Hypermatrix, corner: &[usize], l: usize) -> Result<Pattern> {
    let dims = x.dims();
    if corner.len() != dims.len() || corner.iter().zip(dims).any(|(&c, &n)| c + l > n) || l == 0 {
        return Err(Error::BlockOutOfBounds {
            corner: corner.to_vec(),
            side: l,
            dims: dims.to_vec(),
        });
    }
    let mut full = vec![0; dims.len()];
    let entries = MultiIndex::new(&vec![l; dims.len()])
        .map(|u| {
            for (slot, (&c, &ui)) in full.iter_mut().zip(corner.iter().zip(&u)) {
                *slot = c + ui;
            }
            x.at(&full)
        })
        .collect();
    Pattern::new(l, dims.len(), entries)
}
