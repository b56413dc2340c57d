//! W-generating functions and their contiguous restriction.

mod decontig;
mod identity;

use num_complex::Complex;
use num_traits::{Num, One, Zero};

use crate::error::{Error, Result};
use crate::hypermatrix::{
    iter_positions, matches_at, position_count, ComplexPoint, Hypermatrix, MultiIndex, Pattern,
    ScatterPosition, SignedHypermatrix,
};
use crate::poly::horner_nd;

pub use decontig::{borwein_erdelyi_floor, decontiguize, Decontiguized, DecontigOptions, DecontigStep};
pub use identity::{exact_residual, identity_sides, rational_unit_point, verify_identity, verify_identity_exact};

/// Default cap on the number of positions summed by [`eval_genfun`].
pub const DEFAULT_EVAL_CAP: u128 = 10_000_000;

/// The hypermatrix whose pattern occurrences are counted. A pair stands for
/// the difference of the two generating functions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Single(Hypermatrix),
    Pair(Hypermatrix, Hypermatrix),
}

impl Source {
    pub fn pair(x: &Hypermatrix, y: &Hypermatrix) -> Result<Self> {
        if x.dims() != y.dims() {
            return Err(Error::ShapeMismatch(x.dims().to_vec(), y.dims().to_vec()));
        }
        Ok(Source::Pair(x.clone(), y.clone()))
    }

    pub fn primary(&self) -> &Hypermatrix {
        match self {
            Source::Single(x) | Source::Pair(x, _) => x,
        }
    }

    /// Side length; a scalar source counts as side 1.
    pub fn side(&self) -> Result<usize> {
        if self.primary().ndim() == 0 {
            return Ok(1);
        }
        self.primary()
            .side()
            .ok_or_else(|| Error::InvalidParameter("source must be a cube".into()))
    }

    /// `1{X_k = W} - 1{Y_k = W}`.
    pub fn coefficient(&self, k: &ScatterPosition, w: &Pattern) -> i8 {
        match self {
            Source::Single(x) => matches_at(x, k, w) as i8,
            Source::Pair(x, y) => matches_at(x, k, w) as i8 - matches_at(y, k, w) as i8,
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenfunSpec {
    pub source: Source,
    pub pattern: Pattern,
}

impl GenfunSpec {
    pub fn new(source: Source, pattern: Pattern) -> Result<Self> {
        let n = source.side()?;
        if pattern.rank() > source.primary().ndim() || pattern.side() > n {
            return Err(Error::InvalidParameter(format!(
                "pattern of rank {} side {} does not fit a source of dims {:?}",
                pattern.rank(),
                pattern.side(),
                source.primary().dims()
            )));
        }
        Ok(GenfunSpec { source, pattern })
    }

    pub fn d(&self) -> usize {
        self.source.primary().ndim()
    }

    /// Nonzero coefficients with their positions, in enumeration order.
    pub fn terms(&self, cap: u128) -> Result<Vec<(ScatterPosition, i8)>> {
        let n = self.source.side()?;
        let (d, l, r) = (self.d(), self.pattern.side(), self.pattern.rank());
        let count = position_count(n, d, l, r);
        if count > cap {
            return Err(Error::CapExceeded {
                what: "generating-function evaluation",
                needed: count as f64,
                cap: cap as f64,
            });
        }
        Ok(iter_positions(n, d, l, r)?
            .filter_map(|k| {
                let c = self.source.coefficient(&k, &self.pattern);
                (c != 0).then_some((k, c))
            })
            .collect())
    }
}

/// `z_0^{k_0} * prod_i z_i^{k_i - k_{i-1} - 1}`.
pub fn odot_power<S: Num + Clone>(z: &[Complex<S>], k: &[usize]) -> Result<Complex<S>> {
    if z.len() != k.len() {
        return Err(Error::InvalidParameter(format!(
            "tuple lengths differ: {} vs {}",
            z.len(),
            k.len()
        )));
    }
    if k.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::NotIncreasing(k.to_vec()));
    }
    Ok(odot_unchecked(z, k))
}

fn odot_unchecked<S: Num + Clone>(z: &[Complex<S>], k: &[usize]) -> Complex<S> {
    let mut acc = Complex::one();
    let mut prev: Option<usize> = None;
    for (zi, &ki) in z.iter().zip(k) {
        let e = match prev {
            None => ki,
            Some(p) => ki - p - 1,
        };
        acc = acc * zi.powu(e as u32);
        prev = Some(ki);
    }
    acc
}

/// The monomial attached to position `k` at point `z`.
pub fn position_monomial<S: Num + Clone>(z: &ComplexPoint<S>, k: &ScatterPosition) -> Complex<S> {
    let rows = z
        .rows
        .iter()
        .zip(&k.rows)
        .fold(Complex::one(), |acc, (zi, ki)| acc * odot_unchecked(zi, ki));
    z.points
        .iter()
        .zip(&k.points)
        .fold(rows, |acc, (zi, &ki)| acc * zi.powu(ki as u32))
}

fn check_point_shape<S>(spec: &GenfunSpec, z: &ComplexPoint<S>) -> Result<()> {
    let (d, l, r) = (spec.d(), spec.pattern.side(), spec.pattern.rank());
    if z.rows.len() != r || z.points.len() != d - r || z.rows.iter().any(|row| row.len() != l) {
        return Err(Error::InvalidParameter(format!(
            "point shape does not match d={d}, l={l}, r={r}"
        )));
    }
    Ok(())
}

/// `g(z) = sum_k (1{X_k = W} - 1{Y_k = W}) z^{odot k}` by direct summation.
pub fn eval_genfun<S: Num + Clone>(spec: &GenfunSpec, z: &ComplexPoint<S>) -> Result<Complex<S>> {
    eval_genfun_capped(spec, z, DEFAULT_EVAL_CAP)
}

pub fn eval_genfun_capped<S: Num + Clone>(
    spec: &GenfunSpec,
    z: &ComplexPoint<S>,
    cap: u128,
) -> Result<Complex<S>> {
    check_point_shape(spec, z)?;
    Ok(spec
        .terms(cap)?
        .iter()
        .fold(Complex::zero(), |acc, (k, c)| acc + signed(position_monomial(z, k), *c)))
}

fn signed<S: Num + Clone>(v: Complex<S>, c: i8) -> Complex<S> {
    match c {
        1 => v,
        -1 => Complex::<S>::zero() - v,
        _ => Complex::<S>::zero(),
    }
}

/// Source and pattern of equal rank for the contiguous generating function.
#[derive(Clone, Debug)]
pub struct ContiguousGenfunSpec {
    pub source: Source,
    pub pattern: Pattern,
}

impl ContiguousGenfunSpec {
    pub fn new(source: Source, pattern: Pattern) -> Result<Self> {
        let n = source.side()?;
        if pattern.rank() != source.primary().ndim() || pattern.side() > n {
            return Err(Error::InvalidParameter(
                "contiguous pattern must have the source's rank and fit inside it".into(),
            ));
        }
        Ok(ContiguousGenfunSpec { source, pattern })
    }

    /// Block-match coefficients `c_k` for every corner `k` in `[n]^r`;
    /// blocks that leave the hypermatrix contribute 0.
    pub fn coefficients(&self) -> SignedHypermatrix {
        let n = self.source.side().expect("validated cube");
        let r = self.pattern.rank();
        let l = self.pattern.side();
        SignedHypermatrix::from_fn(vec![n; r], |corner| {
            if corner.iter().any(|&c| c + l > n) {
                return 0;
            }
            self.source
                .coefficient(&ScatterPosition::block(corner, l, r), &self.pattern)
        })
    }
}

/// `h(z) = sum_k c_k z_1^{k_1} ... z_r^{k_r}`, summed term by term in row-major order.
pub fn eval_contiguous(spec: &ContiguousGenfunSpec, z: &[Complex<f64>]) -> Result<Complex<f64>> {
    let coeffs = spec.coefficients();
    if z.len() != coeffs.ndim() {
        return Err(Error::InvalidParameter(format!(
            "{} variables for a rank-{} contiguous function",
            z.len(),
            coeffs.ndim()
        )));
    }
    Ok(contiguous_sum(&coeffs, z))
}

pub(crate) fn contiguous_sum(coeffs: &SignedHypermatrix, z: &[Complex<f64>]) -> Complex<f64> {
    let mut acc = Complex::zero();
    for (k, &c) in MultiIndex::new(coeffs.dims()).zip(coeffs.entries()) {
        if c == 0 {
            continue;
        }
        let mono = k
            .iter()
            .zip(z)
            .fold(Complex::one(), |m: Complex<f64>, (&e, zi)| m * zi.powu(e as u32));
        acc += signed(mono, c);
    }
    acc
}

/// Nested-Horner evaluation of the same contiguous function.
pub fn eval_contiguous_horner(spec: &ContiguousGenfunSpec, z: &[Complex<f64>]) -> Complex<f64> {
    let coeffs = spec.coefficients();
    let c: Vec<Complex<f64>> = coeffs
        .entries()
        .iter()
        .map(|&v| Complex::new(v as f64, 0.0))
        .collect();
    horner_nd(&c, coeffs.dims(), z)
}
