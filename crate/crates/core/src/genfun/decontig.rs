//! Removing the contiguity constraint one axis at a time.
//!
//! Starting from fixed unit scalars `z_{i0}` where the contiguous function
//! `h` is nonzero, each stage ties the gap variables of one axis to a single
//! real `t`, so that the partial sum `gbar(t)` over positions contiguous on
//! the earlier axes satisfies `gbar(0) =` the previous stage's value. `t` is
//! then chosen to maximize `|gbar|` on `[1 - 2p, 1]`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{contiguous_sum, eval_genfun, ContiguousGenfunSpec, GenfunSpec, Source, DEFAULT_EVAL_CAP};
use crate::error::{Error, Result};
use crate::hypermatrix::{binomial, ComplexPoint, Hypermatrix, Pattern, ScatterPosition};
use crate::optimize::grid_then_refine;
use crate::poly::horner;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecontigOptions {
    pub grid_points: usize,
    pub rel_tol: f64,
}

impl Default for DecontigOptions {
    fn default() -> Self {
        DecontigOptions {
            grid_points: 4096,
            rel_tol: 1e-6,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DecontigStep {
    pub axis: usize,
    /// `|gbar(0)|`, the value carried in from the previous stage.
    pub start: f64,
    pub tie: f64,
    pub value: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Decontiguized {
    pub point: ComplexPoint<f64>,
    pub h_value: Complex<f64>,
    /// `|g_r|` at `point`.
    pub value: f64,
    pub steps: Vec<DecontigStep>,
}

/// Floor `|start|^{c1/2p} e^{-c2/2p} C(n,l)^{r(1 - c1/2p)}` for one stage.
pub fn borwein_erdelyi_floor(start: f64, p: f64, n: usize, l: usize, r: usize, c1: f64, c2: f64) -> f64 {
    let e = c1 / (2.0 * p);
    let ln = e * start.ln() - c2 / (2.0 * p) + r as f64 * (1.0 - e) * (binomial(n, l) as f64).ln();
    ln.exp()
}

struct Terms<'a> {
    terms: Vec<(ScatterPosition, i8)>,
    fixed: &'a [Complex<f64>],
    l: usize,
}

impl Terms<'_> {
    fn contiguous(k: &[usize]) -> bool {
        k.windows(2).all(|w| w[1] == w[0] + 1)
    }

    /// Axis factor `z0^{k_0} * t^{gap}`; contiguous axes below `first_free` use `z0^{k_0}` alone.
    fn factor(&self, axis: usize, k: &[usize], tie: Option<f64>) -> (Complex<f64>, usize) {
        let lead = self.fixed[axis].powu(k[0] as u32);
        match tie {
            None => (lead, 0),
            Some(t) => {
                let gap = k[self.l - 1] - k[0] - (self.l - 1);
                (lead * Complex::new(t, 0.0).powu(gap as u32), gap)
            }
        }
    }

    /// Direct sum over positions contiguous on axes `< first_free`, with the
    /// remaining axes evaluated at their ties.
    fn partial_sum(&self, first_free: usize, ties: &[f64]) -> Complex<f64> {
        let mut acc = Complex::new(0.0, 0.0);
        for (k, c) in &self.terms {
            if !k.rows[..first_free].iter().all(|row| Self::contiguous(row)) {
                continue;
            }
            let mono = k.rows.iter().enumerate().fold(Complex::new(1.0, 0.0), |m, (axis, row)| {
                let tie = (axis >= first_free).then(|| ties[axis]);
                m * self.factor(axis, row, tie).0
            });
            acc += if *c > 0 { mono } else { -mono };
        }
        acc
    }

    /// Coefficients of `gbar` as a polynomial in the tie of `axis`.
    fn stage_poly(&self, axis: usize, ties: &[f64], degree: usize) -> Vec<Complex<f64>> {
        let mut coef = vec![Complex::new(0.0, 0.0); degree + 1];
        for (k, c) in &self.terms {
            if !k.rows[..axis].iter().all(|row| Self::contiguous(row)) {
                continue;
            }
            let mut gap = 0;
            let mono = k.rows.iter().enumerate().fold(Complex::new(1.0, 0.0), |m, (a, row)| {
                if a == axis {
                    let (f, g) = self.factor(a, row, Some(1.0));
                    gap = g;
                    m * f
                } else {
                    let tie = (a > axis).then(|| ties[a]);
                    m * self.factor(a, row, tie).0
                }
            });
            coef[gap] += if *c > 0 { mono } else { -mono };
        }
        coef
    }
}

/// Runs the stages for axes `r-1, ..., 0` and returns the filled point.
pub fn decontiguize(
    x: &Hypermatrix,
    y: &Hypermatrix,
    w: &Pattern,
    fixed: &[Complex<f64>],
    p: f64,
    opts: &DecontigOptions,
) -> Result<Decontiguized> {
    let r = w.rank();
    let l = w.side();
    if x.ndim() != r || fixed.len() != r {
        return Err(Error::InvalidParameter(format!(
            "need rank-{r} sources and {r} fixed scalars"
        )));
    }
    if let Some(z) = fixed.iter().find(|z| (z.norm() - 1.0).abs() > 1e-12) {
        return Err(Error::InvalidParameter(format!("fixed scalar {z} is not on the unit circle")));
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::InvalidParameter(format!("retention probability {p}")));
    }
    let source = Source::pair(x, y)?;
    let n = source.side()?;
    let h_spec = ContiguousGenfunSpec::new(source.clone(), w.clone())?;
    let h_value = contiguous_sum(&h_spec.coefficients(), fixed);
    if h_value.norm() == 0.0 {
        return Err(Error::ZeroInput);
    }
    let spec = GenfunSpec::new(source, w.clone())?;
    let terms = Terms {
        terms: spec.terms(DEFAULT_EVAL_CAP)?,
        fixed,
        l,
    };

    let mut ties = vec![1.0; r];
    let mut steps = Vec::with_capacity(r);
    let mut carried = terms.partial_sum(r, &ties);
    if carried != h_value {
        return Err(Error::Consistency(format!(
            "contiguous partial sum {carried} differs from h = {h_value}"
        )));
    }
    if l > 1 {
        let degree = n - l;
        for axis in (0..r).rev() {
            ties[axis] = 0.0;
            let at_zero = terms.partial_sum(axis, &ties);
            if at_zero != carried {
                return Err(Error::Consistency(format!(
                    "axis {axis}: gbar(0) = {at_zero} but previous stage value is {carried}"
                )));
            }
            let coef = terms.stage_poly(axis, &ties, degree);
            let (t, _) = grid_then_refine(
                |t| horner(&coef, &Complex::new(t, 0.0)).norm(),
                1.0 - 2.0 * p,
                1.0,
                opts.grid_points,
                8,
                opts.rel_tol,
            );
            ties[axis] = t;
            let value = terms.partial_sum(axis, &ties);
            steps.push(DecontigStep {
                axis,
                start: carried.norm(),
                tie: t,
                value: value.norm(),
            });
            carried = value;
        }
    }

    let point = ComplexPoint::new(
        (0..r)
            .map(|i| {
                let mut row = vec![fixed[i]];
                row.extend(std::iter::repeat(Complex::new(ties[i], 0.0)).take(l - 1));
                row
            })
            .collect(),
        vec![],
    );
    let direct = eval_genfun(&spec, &point)?;
    if (direct - carried).norm() > 1e-9 * direct.norm().max(1.0) {
        return Err(Error::Consistency(format!(
            "stage value {carried} disagrees with direct evaluation {direct}"
        )));
    }
    Ok(Decontiguized {
        point,
        h_value,
        value: carried.norm(),
        steps,
    })
}
