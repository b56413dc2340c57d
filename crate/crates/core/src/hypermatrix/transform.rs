use serde::{Deserialize, Serialize};

use super::{Entry, HyperArray};
use crate::error::{Error, Result};

/// Axis relabelling plus optional reversal. Applying it to `A` gives `B`
/// with `B[k] = A[k']`, where `k'[perm[a]] = k[a]`, or `len - 1 - k[a]` on
/// reversed axes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AxisTransform {
    /// `perm[a]` is the source axis feeding output axis `a`.
    pub perm: Vec<usize>,
    pub reversed: Vec<bool>,
}

impl AxisTransform {
    pub fn identity(d: usize) -> Self {
        AxisTransform {
            perm: (0..d).collect(),
            reversed: vec![false; d],
        }
    }

    pub fn new(perm: Vec<usize>, reversed: Vec<bool>) -> Result<Self> {
        let mut seen = vec![false; perm.len()];
        for &p in &perm {
            if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation")));
            }
        }
        if reversed.len() != perm.len() {
            return Err(Error::InvalidParameter("reversal flags length".into()));
        }
        Ok(AxisTransform { perm, reversed })
    }

    pub fn ndim(&self) -> usize {
        self.perm.len()
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(a, &p)| a == p) && !self.reversed.iter().any(|&r| r)
    }

    pub fn apply<T: Entry>(&self, a: &HyperArray<T>) -> Result<HyperArray<T>> {
        if a.ndim() != self.ndim() {
            return Err(Error::ShapeMismatch(a.dims().to_vec(), self.perm.clone()));
        }
        let src_dims = a.dims();
        let dims: Vec<usize> = self.perm.iter().map(|&p| src_dims[p]).collect();
        let mut src = vec![0; a.ndim()];
        Ok(HyperArray::from_fn(dims.clone(), |k| {
            for (axis, &ka) in k.iter().enumerate() {
                let p = self.perm[axis];
                src[p] = if self.reversed[axis] { dims[axis] - 1 - ka } else { ka };
            }
            a.at(&src)
        }))
    }

    /// Source index read by output index `k` when the source has `dims`.
    pub fn source_index(&self, k: &[usize], dims: &[usize]) -> Vec<usize> {
        let mut src = vec![0; k.len()];
        for (axis, &ka) in k.iter().enumerate() {
            let p = self.perm[axis];
            src[p] = if self.reversed[axis] { dims[p] - 1 - ka } else { ka };
        }
        src
    }

    /// Pads with identity axes up to `d` dimensions.
    pub fn extend(&self, d: usize) -> Self {
        let mut perm = self.perm.clone();
        let mut reversed = self.reversed.clone();
        perm.extend(self.ndim()..d);
        reversed.resize(d.max(self.ndim()), false);
        AxisTransform { perm, reversed }
    }

    pub fn inverse(&self) -> Self {
        let d = self.ndim();
        let mut perm = vec![0; d];
        let mut reversed = vec![false; d];
        for (axis, &p) in self.perm.iter().enumerate() {
            perm[p] = axis;
            reversed[p] = self.reversed[axis];
        }
        AxisTransform { perm, reversed }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &AxisTransform) -> Self {
        let perm: Vec<usize> = next.perm.iter().map(|&p| self.perm[p]).collect();
        let reversed = next
            .perm
            .iter()
            .enumerate()
            .map(|(a, &p)| self.reversed[p] ^ next.reversed[a])
            .collect();
        AxisTransform { perm, reversed }
    }
}
