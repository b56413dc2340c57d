//! Dimension reduction `A = A^d -> A^{d-1} -> ... -> A^0` and the witness
//! pattern built from the reduced pair.
//!
//! Each step finds the smallest margin `lambda_i` of the support to the
//! boundary, moves the realizing axis to the last position (reversing it
//! when the margin is on the high side), and slices at `lambda_i`. Every
//! step's transform is recorded, together with their composition on the
//! full `d` axes, so that `A^i` is the slice of `T(A)` at
//! `k_{i+1..d} = (lambda_{i+1}, ..., lambda_d)`.

use num_complex::Complex;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::genfun::{position_monomial, ContiguousGenfunSpec, GenfunSpec, Source, DEFAULT_EVAL_CAP};
use crate::hypermatrix::{
    diff, extract_block, find_period, sparsity_index, AxisTransform, ComplexPoint, Entry, HyperArray, Hypermatrix,
    Pattern, SignedHypermatrix,
};
use crate::rng::seeded;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionStep {
    /// Dimension `i` of the array being reduced at this step.
    pub level: usize,
    /// Axis of `A^i` (before the step's transform) realizing the margin.
    pub axis: usize,
    pub high_side: bool,
    pub lambda: usize,
    pub transform: AxisTransform,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ReductionResult {
    pub n: usize,
    /// `A^d, A^{d-1}, ..., A^0` in the final normalized frame.
    pub chain: Vec<SignedHypermatrix>,
    /// `lambdas[i - 1]` is `lambda_i`.
    pub lambdas: Vec<usize>,
    /// In processing order, `level = d` first.
    pub steps: Vec<ReductionStep>,
    /// Composition of every step transform on the full `d` axes.
    pub global: AxisTransform,
}

impl ReductionResult {
    pub fn d(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambda(&self, i: usize) -> usize {
        self.lambdas[i - 1]
    }

    /// `A^i` in the normalized frame.
    pub fn level(&self, i: usize) -> &SignedHypermatrix {
        &self.chain[self.d() - i]
    }

    /// Applies the global transform and slices down to dimension `i`, so
    /// that `project(X, i) - project(Y, i) = A^i` when `A = X - Y`.
    pub fn project<T: Entry>(&self, x: &HyperArray<T>, i: usize) -> Result<HyperArray<T>> {
        if x.ndim() != self.d() || i > self.d() {
            return Err(Error::ShapeMismatch(x.dims().to_vec(), vec![self.n; self.d()]));
        }
        let mut cur = self.global.apply(x)?;
        for level in (i + 1..=self.d()).rev() {
            cur = cur.slice(level - 1, self.lambda(level))?;
        }
        Ok(cur)
    }
}

/// Margin of the support to the boundary, with the realizing axis and side.
fn margin(a: &SignedHypermatrix, n: usize) -> (usize, usize, bool) {
    let d = a.ndim();
    let mut low = vec![usize::MAX; d];
    let mut high = vec![usize::MAX; d];
    for k in a.support() {
        for (axis, &ka) in k.iter().enumerate() {
            low[axis] = low[axis].min(ka);
            high[axis] = high[axis].min(n - 1 - ka);
        }
    }
    let mut best = (usize::MAX, 0, false);
    for axis in 0..d {
        if low[axis] < best.0 {
            best = (low[axis], axis, false);
        }
        if high[axis] < best.0 {
            best = (high[axis], axis, true);
        }
    }
    best
}

pub fn reduce(a: &SignedHypermatrix) -> Result<ReductionResult> {
    if a.is_zero() {
        return Err(Error::ZeroInput);
    }
    let n = a
        .side()
        .ok_or_else(|| Error::InvalidParameter(format!("reduction needs a cube, got {:?}", a.dims())))?;
    let d = a.ndim();
    let mut lambdas = vec![0; d];
    let mut steps = Vec::with_capacity(d);
    let mut global = AxisTransform::identity(d);
    let mut cur = a.clone();
    for level in (1..=d).rev() {
        let (lambda, axis, high_side) = margin(&cur, n);
        let mut perm: Vec<usize> = (0..level).filter(|&b| b != axis).collect();
        perm.push(axis);
        let mut reversed = vec![false; level];
        reversed[level - 1] = high_side;
        let transform = AxisTransform::new(perm, reversed)?;
        let normalized = transform.apply(&cur)?;
        global = global.then(&transform.extend(d));
        cur = normalized.slice(level - 1, lambda)?;
        if cur.is_zero() {
            return Err(Error::Consistency(format!("slice at level {level} vanished")));
        }
        lambdas[level - 1] = lambda;
        steps.push(ReductionStep {
            level,
            axis,
            high_side,
            lambda,
            transform,
        });
    }
    let mut result = ReductionResult {
        n,
        chain: Vec::new(),
        lambdas,
        steps,
        global,
    };
    // Later steps permute the leading axes of earlier levels, so the chain is
    // rebuilt in the final frame.
    result.chain = (0..=d).rev().map(|i| result.project(a, i)).collect::<Result<_>>()?;
    Ok(result)
}

/// Largest `r` with `lambda_r >= l`, or 0.
pub fn classify(lambdas: &[usize], l: usize) -> usize {
    (1..=lambdas.len()).rev().find(|&r| lambdas[r - 1] >= l).unwrap_or(0)
}

/// Minimizer of the all-ones functional, ties to the lexicographically
/// smallest point. Returns the point and the functional.
pub fn find_tangent_point(h: &[Vec<usize>]) -> Option<(Vec<usize>, Vec<i64>)> {
    let j = h
        .iter()
        .min_by(|a, b| {
            let sa: usize = a.iter().sum();
            let sb: usize = b.iter().sum();
            sa.cmp(&sb).then_with(|| a.cmp(b))
        })?
        .clone();
    let direction = vec![1; j.len()];
    Some((j, direction))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessSource {
    X,
    Y,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub aperiodic: bool,
    pub h_nonzero: bool,
    /// Sparsity index of the coefficients of `h`, when nonzero.
    pub sparsity: Option<usize>,
    pub sparse: bool,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.aperiodic && self.h_nonzero && self.sparse
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Witness {
    pub pattern: Pattern,
    pub center: Vec<usize>,
    pub s: usize,
    pub direction: Vec<i64>,
    pub chosen_from: WitnessSource,
    pub certificate: Certificate,
}

impl Witness {
    pub fn corner(&self) -> Vec<usize> {
        let half = (self.pattern.side() - 1) / 2;
        self.center.iter().map(|&c| c - half).collect()
    }
}

/// Centred `l`-blocks of `xr` and `yr` at the tangent point of `xr - yr`;
/// the first one without a period in `[-s, s]^r` wins.
pub fn construct_witness(xr: &Hypermatrix, yr: &Hypermatrix, l: usize) -> Result<Witness> {
    if l % 2 == 0 {
        return Err(Error::InvalidParameter(format!("witness side {l} must be odd")));
    }
    let a = diff(xr, yr)?;
    let support = a.support();
    let (center, direction) = find_tangent_point(&support).ok_or(Error::ZeroInput)?;
    let half = (l - 1) / 2;
    let dims = xr.dims();
    if center.iter().zip(dims).any(|(&c, &n)| c < half || c + half >= n) {
        return Err(Error::BlockOutOfBounds {
            corner: center.iter().map(|&c| c.saturating_sub(half)).collect(),
            side: l,
            dims: dims.to_vec(),
        });
    }
    let corner: Vec<usize> = center.iter().map(|&c| c - half).collect();
    let s = (l - 1) / 4;
    let w1 = extract_block(xr, &corner, l)?;
    let w2 = extract_block(yr, &corner, l)?;
    let (pattern, chosen_from) = if find_period(&w1, s).is_none() {
        (w1, WitnessSource::X)
    } else if find_period(&w2, s).is_none() {
        (w2, WitnessSource::Y)
    } else {
        return Err(Error::BothPeriodic {
            s,
            dump: format!(
                "center {center:?}, l {l}\nX:\n{}Y:\n{}",
                crate::hypermatrix::to_hmx(xr),
                crate::hypermatrix::to_hmx(yr)
            ),
        });
    };
    let certificate = certify(xr, yr, &pattern, s)?;
    Ok(Witness {
        pattern,
        center,
        s,
        direction,
        chosen_from,
        certificate,
    })
}

/// Recomputes the certificate checks for `pattern` against the pair.
pub fn certify(xr: &Hypermatrix, yr: &Hypermatrix, pattern: &Pattern, s: usize) -> Result<Certificate> {
    let h = ContiguousGenfunSpec::new(Source::pair(xr, yr)?, pattern.clone())?.coefficients();
    let h_nonzero = !h.is_zero();
    let sparsity = if h_nonzero { Some(sparsity_index(&h)?) } else { None };
    Ok(Certificate {
        aperiodic: find_period(pattern, s).is_none(),
        h_nonzero,
        sparsity,
        sparse: sparsity.is_some_and(|v| v >= s),
    })
}

/// Checks `g_{i+1} = z_{i+1}^{lambda_{i+1}} (g_i + z_{i+1} * ...)` for
/// `r <= i < d` on random torus points, where `g_i` is the generating
/// function of `(X^i, Y^i)` with pattern `w`. Returns the largest residual:
/// either a nonzero coefficient below `lambda_{i+1}` or the gap between the
/// coefficient at `lambda_{i+1}` and `g_i`.
pub fn genfun_recursion_check(
    result: &ReductionResult,
    x: &Hypermatrix,
    y: &Hypermatrix,
    w: &Pattern,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    let r = w.rank();
    let d = result.d();
    let l = w.side();
    if r > d {
        return Err(Error::InvalidParameter(format!("pattern rank {r} exceeds dimension {d}")));
    }
    let mut rng = seeded(seed);
    let mut worst = 0.0f64;
    for i in r..d {
        let upper = GenfunSpec::new(Source::pair(&result.project(x, i + 1)?, &result.project(y, i + 1)?)?, w.clone())?;
        let lower = GenfunSpec::new(Source::pair(&result.project(x, i)?, &result.project(y, i)?)?, w.clone())?;
        let lambda = result.lambda(i + 1);
        let upper_terms = upper.terms(DEFAULT_EVAL_CAP)?;
        let lower_terms = lower.terms(DEFAULT_EVAL_CAP)?;
        if upper_terms.iter().any(|(k, _)| k.points[i - r] < lambda) {
            return Ok(f64::INFINITY);
        }
        for _ in 0..samples {
            let mut draw = || Complex::from_polar(1.0, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
            let z = ComplexPoint::new(
                (0..r).map(|_| (0..l).map(|_| draw()).collect()).collect(),
                (0..i - r).map(|_| draw()).collect(),
            );
            let lead: Complex<f64> = upper_terms
                .iter()
                .filter(|(k, _)| k.points[i - r] == lambda)
                .map(|(k, c)| {
                    let mut k = k.clone();
                    k.points.pop();
                    position_monomial(&z, &k) * f64::from(*c)
                })
                .sum();
            let g: Complex<f64> =
                lower_terms.iter().map(|(k, c)| position_monomial(&z, k) * f64::from(*c)).sum();
            worst = worst.max((lead - g).norm());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn single(n: usize, d: usize, at: &[usize], v: i8) -> SignedHypermatrix {
        HyperArray::from_fn(vec![n; d], |k| if k == at { v } else { 0 })
    }

    #[test]
    fn single_centre_entry() {
        let a = single(5, 2, &[2, 2], 1);
        let res = reduce(&a).unwrap();
        assert_eq!(res.lambdas, vec![2, 2]);
        assert_eq!(res.level(1).dims(), &[5]);
        assert_eq!(res.level(1).entries(), &[0, 0, 1, 0, 0]);
        assert_eq!(res.level(0).entries(), &[1]);
    }

    #[test]
    fn boundary_and_all_ones() {
        let a = single(6, 3, &[3, 0, 2], -1);
        assert_eq!(reduce(&a).unwrap().lambda(3), 0);
        let ones = HyperArray::from_fn(vec![4, 4], |_| 1i8);
        assert_eq!(reduce(&ones).unwrap().lambdas, vec![0, 0]);
        assert!(matches!(reduce(&HyperArray::<i8>::cube(3, 2)), Err(Error::ZeroInput)));
    }

    #[test]
    fn high_side_is_reversed() {
        // Support hugs the high end of axis 1 only.
        let a = single(7, 2, &[3, 5], 1);
        let res = reduce(&a).unwrap();
        assert_eq!(res.steps[0].axis, 1);
        assert!(res.steps[0].high_side);
        assert_eq!(res.lambdas, vec![3, 1]);
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&[5, 2], 3), 1);
        assert_eq!(classify(&[2, 1], 3), 0);
        assert_eq!(classify(&[4, 4, 3], 3), 3);
    }

    #[test]
    fn tangent_point_examples() {
        assert_eq!(find_tangent_point(&[vec![3, 1]]).unwrap().0, vec![3, 1]);
        assert_eq!(find_tangent_point(&[vec![1, 1], vec![0, 0]]).unwrap().0, vec![0, 0]);
        assert_eq!(find_tangent_point(&[vec![1, 0], vec![0, 1]]).unwrap().0, vec![0, 1]);
        assert!(find_tangent_point(&[]).is_none());
    }

    #[test]
    fn witness_single_centre_one() {
        let xr = Hypermatrix::from_fn(vec![9, 9], |k| (k == [4, 4]) as u8);
        let yr = Hypermatrix::cube(9, 2);
        let w = construct_witness(&xr, &yr, 5).unwrap();
        assert_eq!(w.chosen_from, WitnessSource::X);
        assert_eq!(w.pattern.entries().iter().filter(|&&e| e == 1).count(), 1);
        assert_eq!(w.pattern.grid().at(&[2, 2]), 1);
        assert!(w.certificate.passed());
        let h = ContiguousGenfunSpec::new(Source::pair(&xr, &yr).unwrap(), w.pattern.clone())
            .unwrap()
            .coefficients();
        assert_eq!(h.support().len(), 1);
        assert!(matches!(construct_witness(&xr, &xr, 5), Err(Error::ZeroInput)));
        assert!(construct_witness(&xr, &yr, 4).is_err());
    }

    #[test]
    fn recursion_residual_zero_on_single_entry() {
        let x = Hypermatrix::from_fn(vec![5, 5], |k| (k == [2, 2]) as u8);
        let y = Hypermatrix::cube(5, 2);
        let res = reduce(&diff(&x, &y).unwrap()).unwrap();
        let v = genfun_recursion_check(&res, &x, &y, &Pattern::unit(), 8, 1).unwrap();
        assert!(v < 1e-12);
    }

    /// Independent recomputation: each level's margin from scratch.
    fn brute_check(a: &SignedHypermatrix, res: &ReductionResult) {
        let n = res.n;
        let d = a.ndim();
        for i in (1..=d).rev() {
            let ai = res.level(i);
            let mut lam = usize::MAX;
            for k in ai.indices() {
                if ai.at(&k) != 0 {
                    for &c in &k {
                        lam = lam.min(c).min(n - 1 - c);
                    }
                }
            }
            assert_eq!(res.lambda(i), lam);
            let mut hit = false;
            for k in ai.indices() {
                if ai.at(&k) != 0 {
                    assert!(k[i - 1] >= lam);
                    hit |= k[i - 1] == lam;
                }
            }
            assert!(hit);
            if i < d {
                assert!(res.lambda(i) >= res.lambda(i + 1));
            }
        }
        assert!(!res.level(0).is_zero());
        assert_eq!(&res.global.apply(a).unwrap(), res.level(d));
        assert_eq!(&res.project(a, 0).unwrap(), res.level(0));
    }

    #[test]
    fn witness_certificate_random_suite() {
        let mut rng = seeded(77);
        for case in 0..200 {
            let n = rng.gen_range(8..=32);
            let l = [1, 3, 5, 7][case % 4].min(if (n - 1) / 2 % 2 == 1 { (n - 1) / 2 } else { (n - 1) / 2 - 1 });
            let density = rng.gen_range(0.1..0.9);
            let x = Hypermatrix::from_fn(vec![n, n], |_| rng.gen_bool(density) as u8);
            let mut y = x.clone();
            let inner = l..n - l;
            let flips = rng.gen_range(1..6);
            for _ in 0..flips {
                let k = [rng.gen_range(inner.clone()), rng.gen_range(inner.clone())];
                y.set(&k, 1 - y.at(&k)).unwrap();
            }
            if x == y {
                continue;
            }
            let w = construct_witness(&x, &y, l).unwrap();
            assert!(w.certificate.passed(), "case {case}: {:?}", w.certificate);
            assert_eq!(certify(&x, &y, &w.pattern, w.s).unwrap(), w.certificate);
        }
    }

    #[test]
    fn recursion_random_cubes() {
        let mut rng = seeded(3);
        for _ in 0..40 {
            let x = Hypermatrix::from_fn(vec![4, 4, 4], |_| rng.gen_range(0..2));
            let mut y = x.clone();
            let k = [rng.gen_range(0..4), rng.gen_range(0..4), rng.gen_range(0..4)];
            y.set(&k, 1 - y.at(&k)).unwrap();
            if rng.gen_bool(0.5) {
                y = Hypermatrix::from_fn(vec![4, 4, 4], |_| rng.gen_range(0..2));
            }
            let Ok(res) = reduce(&diff(&x, &y).unwrap()) else { continue };
            let r = rng.gen_range(0..=2);
            let l = if r == 0 { 1 } else { rng.gen_range(1..=2) };
            let w = Pattern::new(l, r, (0..l.pow(r as u32)).map(|_| rng.gen_range(0..2)).collect()).unwrap();
            let v = genfun_recursion_check(&res, &x, &y, &w, 4, 9).unwrap();
            assert!(v <= 1e-9, "residual {v}");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn reduction_invariants(n in 1usize..7, d in 1usize..4, seed in any::<u64>()) {
            let mut rng = seeded(seed);
            let mut a = HyperArray::from_fn(vec![n; d], |_| if rng.gen_bool(0.15) { [-1i8, 1][rng.gen_range(0..2)] } else { 0 });
            if a.is_zero() {
                let k: Vec<usize> = (0..d).map(|_| rng.gen_range(0..n)).collect();
                a.set(&k, 1).unwrap();
            }
            let res = reduce(&a).unwrap();
            brute_check(&a, &res);
        }
    }
}
