//! Dense binary and signed hypermatrices.
//!
//! Storage is row-major: axis 0 varies slowest, so the flat offset of
//! `k = (k_0, ..., k_{d-1})` is `sum_i k_i * stride_i` with the last stride 1.

mod hmx;
mod pattern;
mod position;
mod sparsity;
mod transform;

use std::fmt::Debug;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use hmx::{parse_hmx, parse_hmx_with, to_hmx};
pub use pattern::{find_period, Pattern};
pub use position::{
    binomial, extract_block, gather, iter_positions, matches_at, position_count, ComplexPoint, Positions,
    ScatterPosition,
};
pub use sparsity::{sparsity_index, sparsity_index_strict, support_split};
pub use transform::AxisTransform;

/// Default caps on dimension and side length.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Limits {
    pub max_dim: usize,
    pub max_side: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_dim: 8,
            max_side: 64,
        }
    }
}

impl Limits {
    pub fn check(&self, dims: &[usize]) -> Result<()> {
        if dims.len() > self.max_dim {
            return Err(Error::InvalidParameter(format!(
                "dimension {} exceeds cap {}",
                dims.len(),
                self.max_dim
            )));
        }
        if let Some(&side) = dims.iter().find(|&&n| n > self.max_side) {
            return Err(Error::InvalidParameter(format!(
                "side {side} exceeds cap {}",
                self.max_side
            )));
        }
        Ok(())
    }
}

/// Cell symbol of a hypermatrix.
pub trait Entry: Copy + Default + PartialEq + Eq + std::hash::Hash + Debug {
    fn parse_symbol(s: &str) -> Option<Self>;
    fn symbol(self) -> &'static str;
    fn is_zero(self) -> bool {
        self == Self::default()
    }
}

impl Entry for u8 {
    fn parse_symbol(s: &str) -> Option<Self> {
        match s {
            "0" => Some(0),
            "1" => Some(1),
            _ => None,
        }
    }

    fn symbol(self) -> &'static str {
        if self == 0 {
            "0"
        } else {
            "1"
        }
    }
}

impl Entry for i8 {
    fn parse_symbol(s: &str) -> Option<Self> {
        match s {
            "-1" => Some(-1),
            "0" => Some(0),
            "1" => Some(1),
            _ => None,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            -1 => "-1",
            0 => "0",
            _ => "1",
        }
    }
}

/// A dense d-dimensional array of symbols.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HyperArray<T> {
    dims: Vec<usize>,
    data: Vec<T>,
}

/// Binary hypermatrix with entries in {0, 1}.
pub type Hypermatrix = HyperArray<u8>;
/// Hypermatrix with entries in {-1, 0, +1}.
pub type SignedHypermatrix = HyperArray<i8>;

impl<T: Debug> Debug for HyperArray<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HyperArray{:?}{:?}", self.dims, self.data)
    }
}

impl<T: Entry> HyperArray<T> {
    pub fn new(dims: Vec<usize>, data: Vec<T>) -> Result<Self> {
        let len: usize = dims.iter().product();
        if len != data.len() {
            return Err(Error::InvalidParameter(format!(
                "{} entries for dims {:?}",
                data.len(),
                dims
            )));
        }
        Ok(HyperArray { dims, data })
    }

    pub fn zeros(dims: Vec<usize>) -> Self {
        let len = dims.iter().product();
        HyperArray {
            dims,
            data: vec![T::default(); len],
        }
    }

    /// Cube of side `n` in `d` dimensions.
    pub fn cube(n: usize, d: usize) -> Self {
        Self::zeros(vec![n; d])
    }

    pub fn from_fn(dims: Vec<usize>, mut f: impl FnMut(&[usize]) -> T) -> Self {
        let data = MultiIndex::new(&dims).map(|k| f(&k)).collect();
        HyperArray { dims, data }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn ndim(&self) -> usize {
        self.dims.len()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    /// Common side length when all axes agree.
    pub fn side(&self) -> Option<usize> {
        let first = *self.dims.first()?;
        self.dims.iter().all(|&n| n == first).then_some(first)
    }

    pub fn offset(&self, index: &[usize]) -> Option<usize> {
        if index.len() != self.dims.len() {
            return None;
        }
        let mut off = 0;
        for (&k, &n) in index.iter().zip(&self.dims) {
            if k >= n {
                return None;
            }
            off = off * n + k;
        }
        Some(off)
    }

    pub fn get(&self, index: &[usize]) -> Option<T> {
        self.offset(index).map(|o| self.data[o])
    }

    /// Unchecked-shape read; panics on a bad index.
    pub fn at(&self, index: &[usize]) -> T {
        match self.get(index) {
            Some(v) => v,
            None => panic!("index {index:?} outside {:?}", self.dims),
        }
    }

    pub fn set(&mut self, index: &[usize], value: T) -> Result<()> {
        let off = self.offset(index).ok_or_else(|| Error::IndexOutOfRange {
            index: index.to_vec(),
            dims: self.dims.clone(),
        })?;
        self.data[off] = value;
        Ok(())
    }

    pub fn indices(&self) -> MultiIndex {
        MultiIndex::new(&self.dims)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Positions of the nonzero entries, in row-major order.
    pub fn support(&self) -> Vec<Vec<usize>> {
        self.indices()
            .zip(&self.data)
            .filter(|(_, v)| !v.is_zero())
            .map(|(k, _)| k)
            .collect()
    }

    /// The (d-1)-dimensional slice with `axis` fixed at `index`.
    pub fn slice(&self, axis: usize, index: usize) -> Result<Self> {
        if axis >= self.ndim() || index >= self.dims[axis] {
            return Err(Error::IndexOutOfRange {
                index: vec![axis, index],
                dims: self.dims.clone(),
            });
        }
        let mut dims = self.dims.clone();
        dims.remove(axis);
        let mut full = Vec::with_capacity(self.ndim());
        Ok(Self::from_fn(dims, |k| {
            full.clear();
            full.extend_from_slice(&k[..axis]);
            full.push(index);
            full.extend_from_slice(&k[axis..]);
            self.at(&full)
        }))
    }

    /// Sub-hypermatrix on the Cartesian product of per-axis index lists.
    pub fn restrict(&self, keep: &[Vec<usize>]) -> Result<Self> {
        if keep.len() != self.ndim() {
            return Err(Error::ShapeMismatch(
                keep.iter().map(Vec::len).collect(),
                self.dims.clone(),
            ));
        }
        for (axis, list) in keep.iter().enumerate() {
            if let Some(&bad) = list.iter().find(|&&k| k >= self.dims[axis]) {
                return Err(Error::IndexOutOfRange {
                    index: vec![axis, bad],
                    dims: self.dims.clone(),
                });
            }
        }
        let dims = keep.iter().map(Vec::len).collect();
        let mut src = vec![0; self.ndim()];
        Ok(Self::from_fn(dims, |k| {
            for (axis, &ki) in k.iter().enumerate() {
                src[axis] = keep[axis][ki];
            }
            self.at(&src)
        }))
    }

    /// Copy into a zero array of `dims` anchored at the all-low corner.
    pub fn embed(&self, dims: &[usize]) -> Result<Self> {
        if dims.len() != self.ndim() || self.dims.iter().zip(dims).any(|(a, b)| a > b) {
            return Err(Error::ShapeMismatch(self.dims.clone(), dims.to_vec()));
        }
        let mut out = Self::zeros(dims.to_vec());
        for (k, &v) in self.indices().zip(&self.data) {
            let off = out.offset(&k).expect("embedded index in range");
            out.data[off] = v;
        }
        Ok(out)
    }
}

impl Hypermatrix {
    /// Bits packed little-endian in row-major order; only for arrays of at most 64 cells.
    pub fn to_bits(&self) -> u64 {
        debug_assert!(self.len() <= 64);
        self.data
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    pub fn from_bits(dims: Vec<usize>, bits: u64) -> Self {
        let len: usize = dims.iter().product();
        let data = (0..len).map(|i| ((bits >> i) & 1) as u8).collect();
        HyperArray { dims, data }
    }
}

/// Entrywise difference `x - y`.
pub fn diff(x: &Hypermatrix, y: &Hypermatrix) -> Result<SignedHypermatrix> {
    if x.dims != y.dims {
        return Err(Error::ShapeMismatch(x.dims.clone(), y.dims.clone()));
    }
    let data = x
        .data
        .iter()
        .zip(&y.data)
        .map(|(&a, &b)| a as i8 - b as i8)
        .collect();
    Ok(HyperArray {
        dims: x.dims.clone(),
        data,
    })
}

/// Row-major odometer over `[dims_0] x ... x [dims_{d-1}]`.
#[derive(Clone, Debug)]
pub struct MultiIndex {
    dims: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl MultiIndex {
    pub fn new(dims: &[usize]) -> Self {
        let next = if dims.iter().any(|&n| n == 0) {
            None
        } else {
            Some(vec![0; dims.len()])
        };
        MultiIndex {
            dims: dims.to_vec(),
            next,
        }
    }
}

impl Iterator for MultiIndex {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut axis = self.dims.len();
        loop {
            if axis == 0 {
                break;
            }
            axis -= 1;
            succ[axis] += 1;
            if succ[axis] < self.dims[axis] {
                self.next = Some(succ);
                break;
            }
            succ[axis] = 0;
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diff_of_equal_is_zero() {
        let x = Hypermatrix::from_fn(vec![3, 3], |k| ((k[0] + 2 * k[1]) % 2) as u8);
        let a = diff(&x, &x).unwrap();
        assert!(a.is_zero());
    }

    #[test]
    fn diff_ones_minus_zeros() {
        let x = Hypermatrix::new(vec![2, 2], vec![1; 4]).unwrap();
        let y = Hypermatrix::cube(2, 2);
        assert_eq!(diff(&x, &y).unwrap().entries(), &[1, 1, 1, 1]);
    }

    #[test]
    fn diff_single_difference_support() {
        let x = Hypermatrix::from_fn(vec![3, 3], |k| ((k[0] * 7 + k[1] * 3) % 2) as u8);
        let mut y = x.clone();
        let flipped = 1 - x.at(&[1, 2]);
        y.set(&[1, 2], flipped).unwrap();
        assert_eq!(diff(&x, &y).unwrap().support(), vec![vec![1, 2]]);
    }

    #[test]
    fn diff_shape_mismatch() {
        let x = Hypermatrix::cube(2, 2);
        let y = Hypermatrix::cube(3, 2);
        assert!(matches!(diff(&x, &y), Err(Error::ShapeMismatch(..))));
    }

    #[test]
    fn odometer_is_row_major() {
        let all: Vec<_> = MultiIndex::new(&[2, 3]).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[1], vec![0, 1]);
        assert_eq!(all[3], vec![1, 0]);
        assert_eq!(MultiIndex::new(&[]).count(), 1);
        assert_eq!(MultiIndex::new(&[3, 0]).count(), 0);
    }

    #[test]
    fn slice_and_restrict() {
        let x = Hypermatrix::from_fn(vec![3, 3], |k| (k[0] == k[1]) as u8);
        let s = x.slice(0, 1).unwrap();
        assert_eq!(s.entries(), &[0, 1, 0]);
        let r = x.restrict(&[vec![0, 2], vec![0, 2]]).unwrap();
        assert_eq!(r.entries(), &[1, 0, 0, 1]);
    }

    #[test]
    fn bits_roundtrip() {
        let x = Hypermatrix::from_fn(vec![3, 3], |k| ((k[0] * 5 + k[1]) % 3 == 0) as u8);
        assert_eq!(Hypermatrix::from_bits(vec![3, 3], x.to_bits()), x);
    }
}
