//! Grid searches realizing the polynomial lower bounds: maximum modulus on
//! the arc `rho * gamma(L)`, the lattice substitution `z_i = u^{b_i} (v)`
//! for sparse multivariate polynomials, the two-axis arc search and the
//! unit-disk search.
//!
//! Every result carries `scale`, the quantity that the constant `C`
//! multiplies in the floor `exp(-C * scale)`, so constants can be
//! calibrated from `-ln(value) / scale`.

use std::f64::consts::PI;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypermatrix::{binomial, sparsity_index, support_split, MultiIndex, SignedHypermatrix};
use crate::optimize::{golden_max, grid_then_refine};
use crate::poly::{eval_signed_sparse, horner};

type C64 = Complex<f64>;

pub const MAX_DEGREE: usize = 1_000_000;
pub const MAX_LATTICE_BOX: f64 = 5e7;

/// `w = (z - q) / p` and `ell(w) = max(|w|, 1)`.
pub fn lift_w(z: C64, p: f64, q: f64) -> Result<(C64, f64)> {
    if p <= 0.0 {
        return Err(Error::InvalidParameter("lift needs p > 0".into()));
    }
    let w = (z - q) / p;
    Ok((w, w.norm().max(1.0)))
}

/// The arc `rho * gamma(L)` sampled with `density` points per unit of `L`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcSpec {
    pub l: f64,
    pub rho: f64,
    pub density: usize,
}

impl ArcSpec {
    pub fn new(l: f64, rho: f64, density: usize) -> Result<Self> {
        if !(l >= 1.0) || !(rho > 0.0 && rho <= 1.0) || density < 64 {
            return Err(Error::InvalidParameter(format!(
                "arc needs L >= 1, rho in (0, 1], density >= 64 (got {l}, {rho}, {density})"
            )));
        }
        Ok(ArcSpec { l, rho, density })
    }

    /// `L = max(ceil(m^{1/3}), ceil(4/p))` and `rho = 1 - 7/(p L^2)`. The
    /// lower limit `4/p` keeps `|w| <= 1` on the arc.
    pub fn littlewood(m: usize, p: f64, density: usize) -> Result<Self> {
        let l = ((m.max(1) as f64).cbrt().ceil()).max((4.0 / p).ceil());
        ArcSpec::new(l, 1.0 - 7.0 / (p * l * l), density)
    }

    pub fn half_angle(&self) -> f64 {
        PI / self.l
    }

    pub fn contains_angle(&self, theta: f64) -> bool {
        theta.abs() <= self.half_angle()
    }

    pub fn grid_points(&self) -> usize {
        (self.density as f64 * self.l.ceil()) as usize
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BoundWitness {
    /// One entry per variable.
    pub point: Vec<C64>,
    pub value: f64,
    pub log_value: f64,
    /// The floor is `exp(-constant * scale)`.
    pub scale: f64,
    pub constant: f64,
    pub log_floor: f64,
    /// Substitution data for the multivariate pipelines.
    pub u: Option<C64>,
    pub direction: Option<Vec<i64>>,
    pub v_axis: Option<usize>,
    pub contacts: Vec<Vec<usize>>,
}

impl BoundWitness {
    fn new(point: Vec<C64>, value: f64, scale: f64, constant: f64) -> Self {
        BoundWitness {
            point,
            value,
            log_value: value.ln(),
            scale,
            constant,
            log_floor: -constant * scale,
            u: None,
            direction: None,
            v_axis: None,
            contacts: Vec::new(),
        }
    }

    pub fn meets_floor(&self) -> bool {
        self.log_value >= self.log_floor
    }

    /// Smallest constant for which this witness meets its floor.
    pub fn required_constant(&self) -> f64 {
        if self.scale > 0.0 {
            (-self.log_value / self.scale).max(0.0)
        } else {
            0.0
        }
    }
}

/// Best `(theta, |f(rho e^{i theta})|)` over `|theta| <= half_angle`.
fn search_arc(coeffs: &[C64], rho: f64, half_angle: f64, points: usize) -> (f64, f64) {
    let f = |theta: f64| horner(coeffs, &C64::from_polar(rho, theta)).norm();
    grid_then_refine(f, -half_angle, half_angle, points, 8, 1e-12)
}

/// Maximum of `|f|` on `rho * gamma(L)`, with `scale = m^{1/3}`.
pub fn max_modulus_univariate(coeffs: &[C64], arc: &ArcSpec, constant: f64) -> Result<BoundWitness> {
    if coeffs.len() > MAX_DEGREE + 1 {
        return Err(Error::CapExceeded {
            what: "polynomial degree",
            needed: coeffs.len() as f64 - 1.0,
            cap: MAX_DEGREE as f64,
        });
    }
    if coeffs.iter().all(|c| c.norm() == 0.0) {
        return Err(Error::ZeroInput);
    }
    let (theta, _) = search_arc(coeffs, arc.rho, arc.half_angle(), arc.grid_points());
    let z = C64::from_polar(arc.rho, theta);
    let value = horner(coeffs, &z).norm();
    let m = coeffs.len().saturating_sub(1).max(1);
    Ok(BoundWitness::new(vec![z], value, (m as f64).cbrt(), constant))
}

/// Summary of the `|w|` facts on a grid of arcs.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WNormSurvey {
    pub p: f64,
    pub points: usize,
    /// Largest `|w| - 1` over `rho * gamma(L)`, `rho = 1 - 7/(pL^2)`.
    pub max_excess_on_shrunk_arc: f64,
    /// Largest `L^2 ln ell(w)` over `gamma(L)`.
    pub measured_c: f64,
}

/// Evaluates both `|w|` facts on `ls x thetas` with `thetas` points per arc
/// spread uniformly over `[-pi/L, pi/L]`.
pub fn w_norm_survey(p: f64, ls: &[f64], thetas: usize) -> Result<WNormSurvey> {
    let q = 1.0 - p;
    let mut excess = f64::NEG_INFINITY;
    let mut c: f64 = 0.0;
    let mut points = 0;
    for &l in ls {
        if l < 4.0 / p {
            return Err(Error::InvalidParameter(format!("L = {l} is below 4/p")));
        }
        let rho = 1.0 - 7.0 / (p * l * l);
        for i in 0..thetas {
            let theta = -PI / l + 2.0 * PI / l * i as f64 / (thetas.max(2) - 1) as f64;
            let (w, _) = lift_w(C64::from_polar(rho, theta), p, q)?;
            excess = excess.max(w.norm() - 1.0);
            let (_, ell) = lift_w(C64::from_polar(1.0, theta), p, q)?;
            c = c.max(l * l * ell.ln());
            points += 1;
        }
    }
    Ok(WNormSurvey {
        p,
        points,
        max_excess_on_shrunk_arc: excess,
        measured_c: c,
    })
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Primitive integer vectors of Euclidean norm at most `radius`, first
/// nonzero component positive, in lexicographic order.
pub fn primitive_vectors(radius: f64, d: usize) -> Result<Vec<Vec<i64>>> {
    if !(radius >= 1.0) || d == 0 || d > 8 {
        return Err(Error::InvalidParameter(format!("radius {radius}, dimension {d}")));
    }
    let r = radius.floor() as i64;
    let side = (2 * r + 1) as usize;
    let volume = (side as f64).powi(d as i32);
    if volume > MAX_LATTICE_BOX {
        return Err(Error::CapExceeded {
            what: "lattice box",
            needed: volume,
            cap: MAX_LATTICE_BOX,
        });
    }
    let r2 = radius * radius;
    let mut out = Vec::new();
    for k in MultiIndex::new(&vec![side; d]) {
        let b: Vec<i64> = k.iter().map(|&c| c as i64 - r).collect();
        match b.iter().find(|&&c| c != 0) {
            Some(&first) if first > 0 => {}
            _ => continue,
        }
        if b.iter().map(|&c| (c * c) as f64).sum::<f64>() > r2 {
            continue;
        }
        if b.iter().fold(0, |g, &c| gcd(g, c)) == 1 {
            out.push(b);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Facet {
    pub b: Vec<i64>,
    pub m0: i64,
    pub contacts: Vec<Vec<usize>>,
}

fn dot(b: &[i64], k: &[usize]) -> i64 {
    b.iter().zip(k).map(|(&bi, &ki)| bi * ki as i64).sum()
}

/// Search order over `+-N(R)`: norm, then reverse lexicographic, `+b`
/// before `-b`.
fn ordered_directions(radius: f64, d: usize) -> Result<Vec<Vec<i64>>> {
    let mut dirs = primitive_vectors(radius, d)?;
    dirs.sort_by(|a, b| {
        let na: i64 = a.iter().map(|c| c * c).sum();
        let nb: i64 = b.iter().map(|c| c * c).sum();
        na.cmp(&nb).then_with(|| b.cmp(a))
    });
    Ok(dirs
        .into_iter()
        .flat_map(|b| {
            let neg = b.iter().map(|c| -c).collect();
            [b, neg]
        })
        .collect())
}

/// First direction whose supporting hyperplane touches `h1` and `h2` at
/// most `per_class` times each and at most `total` times overall.
fn search_facet(h1: &[Vec<usize>], h2: &[Vec<usize>], radius: f64, per_class: usize, total: usize) -> Result<Facet> {
    let d = h1.iter().chain(h2).next().ok_or(Error::ZeroInput)?.len();
    for b in ordered_directions(radius, d)? {
        let m0 = h1.iter().chain(h2).map(|k| dot(&b, k)).min().unwrap_or(0);
        let c1: Vec<&Vec<usize>> = h1.iter().filter(|k| dot(&b, k) == m0).collect();
        let c2: Vec<&Vec<usize>> = h2.iter().filter(|k| dot(&b, k) == m0).collect();
        if c1.len() <= per_class && c2.len() <= per_class && c1.len() + c2.len() <= total {
            let contacts = c1.into_iter().chain(c2).cloned().collect();
            return Ok(Facet { b, m0, contacts });
        }
    }
    Err(Error::NoAdmissibleDirection {
        radius: radius.floor() as usize,
        support: h1.iter().chain(h2).cloned().collect(),
    })
}

/// Property (P): at most one contact per sign class.
pub fn tangent_facet(h1: &[Vec<usize>], h2: &[Vec<usize>], radius: f64) -> Result<Facet> {
    search_facet(h1, h2, radius, 1, 2)
}

/// A direction exposing a single support point.
pub fn exposed_vertex(h1: &[Vec<usize>], h2: &[Vec<usize>], radius: f64) -> Result<Facet> {
    search_facet(h1, h2, radius, 1, 1)
}

/// `hbar(u) = sum_k c_k v^{k_axis} u^{b.k}`, stored from the lowest exponent.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Substituted {
    pub offset: i64,
    pub coeffs: Vec<C64>,
}

impl Substituted {
    /// The lowest-exponent coefficient `C_v`.
    pub fn lowest(&self) -> C64 {
        self.coeffs.first().copied().unwrap_or_default()
    }

    pub fn eval(&self, u: C64) -> C64 {
        let base = horner(&self.coeffs, &u);
        if self.offset >= 0 {
            base * u.powu(self.offset as u32)
        } else {
            base * u.inv().powu((-self.offset) as u32)
        }
    }
}

pub fn substitute(coeffs: &SignedHypermatrix, b: &[i64], v: C64, v_axis: usize) -> Result<Substituted> {
    if b.len() != coeffs.ndim() || v_axis >= b.len().max(1) {
        return Err(Error::ShapeMismatch(coeffs.dims().to_vec(), vec![b.len()]));
    }
    let terms: Vec<(i64, C64)> = coeffs
        .indices()
        .filter_map(|k| {
            let c = coeffs.at(&k);
            (c != 0).then(|| {
                let vk = if k.is_empty() { C64::new(1.0, 0.0) } else { v.powu(k[v_axis] as u32) };
                (dot(b, &k), vk * f64::from(c))
            })
        })
        .collect();
    let lo = terms.iter().map(|t| t.0).min().unwrap_or(0);
    let hi = terms.iter().map(|t| t.0).max().unwrap_or(0);
    let mut out = vec![C64::new(0.0, 0.0); (hi - lo + 1) as usize];
    for (e, c) in terms {
        out[(e - lo) as usize] += c;
    }
    Ok(Substituted { offset: lo, coeffs: out })
}

/// Shared tail of the substitution pipelines: maximize `|hbar|` on an arc
/// of half-angle `half_u`, map back and check against direct evaluation.
#[allow(clippy::too_many_arguments)]
fn substitution_search(
    coeffs: &SignedHypermatrix,
    facet: Facet,
    v_angle: f64,
    v_axis: usize,
    arc_l: f64,
    half_u: f64,
    points: usize,
    scale: f64,
    constant: f64,
) -> Result<BoundWitness> {
    let v = C64::from_polar(1.0, v_angle);
    let sub = substitute(coeffs, &facet.b, v, v_axis)?;
    if sub.lowest().norm() == 0.0 {
        return Err(Error::Consistency(format!("lowest coefficient vanished for b = {:?}", facet.b)));
    }
    let (theta_u, _) = search_arc(&sub.coeffs, 1.0, half_u, points);
    let u = C64::from_polar(1.0, theta_u);
    let limit = PI / arc_l;
    let mut point = Vec::with_capacity(facet.b.len());
    for (axis, &bi) in facet.b.iter().enumerate() {
        let theta = bi as f64 * theta_u + if axis == v_axis { v_angle } else { 0.0 };
        if theta.abs() > limit {
            return Err(Error::OutsideArc { axis, theta, limit });
        }
        point.push(C64::from_polar(1.0, theta));
    }
    let via_u = sub.eval(u).norm();
    let value = eval_signed_sparse(coeffs, &point).norm();
    if (value - via_u).abs() > 1e-9 * value.max(via_u).max(f64::MIN_POSITIVE) {
        return Err(Error::Consistency(format!(
            "substituted value {via_u} differs from direct value {value}"
        )));
    }
    let mut w = BoundWitness::new(point, value, scale, constant);
    w.u = Some(u);
    w.direction = Some(facet.b);
    w.v_axis = Some(v_axis);
    w.contacts = facet.contacts;
    Ok(w)
}

/// Largest `|h|` found on `gamma(L)^d` for an `n^mu`-sparse `h` with
/// coefficients in `{0, +-1}`, via `z_i = u^{b_i}` times `v` on one axis.
/// Requires `1 <= L <= n^delta`. `scale = delta L n^{1-mu} ln n`.
pub fn multivariate_bound(
    coeffs: &SignedHypermatrix,
    mu: f64,
    arc_l: f64,
    delta: f64,
    density: usize,
    constant: f64,
) -> Result<BoundWitness> {
    let n = coeffs
        .side()
        .ok_or_else(|| Error::InvalidParameter("coefficients must form a cube".into()))?;
    let d = coeffs.ndim();
    let nf = n as f64;
    if !(arc_l >= 1.0 && arc_l <= nf.powf(delta) * (1.0 + 1e-12)) {
        return Err(Error::InvalidParameter(format!("need 1 <= L <= n^delta, got L = {arc_l}")));
    }
    let sparsity = sparsity_index(coeffs)?;
    if (sparsity as f64) < nf.powf(mu) * (1.0 - 1e-12) {
        return Err(Error::InvalidParameter(format!(
            "sparsity index {sparsity} is below n^mu = {}",
            nf.powf(mu)
        )));
    }
    let radius = (d as f64 * nf.powf(1.0 - mu)).ceil();
    let (h1, h2) = support_split(coeffs);
    let facet = tangent_facet(&h1, &h2, radius)?;
    let v_axis = match facet.contacts.as_slice() {
        [a, b] => (0..d).find(|&i| a[i] != b[i]).unwrap_or(0),
        _ => 0,
    };
    let v_angle = PI / (2.0 * nf.powf(delta));
    // |b_i| <= radius, so |b_i theta_u| <= pi/(2L) and adding v stays in gamma(L).
    let arc_u = 2.0 * arc_l * radius;
    let half_u = PI / arc_u * (1.0 - 1e-12);
    let points = density * arc_u.ceil() as usize;
    let scale = delta * arc_l * nf.powf(1.0 - mu) * nf.ln();
    substitution_search(coeffs, facet, v_angle, v_axis, arc_l, half_u, points, scale, constant)
}

/// The `mu = 0` path: `R = d n`, an exposed vertex and no `v` factor.
/// `scale = L n ln n`.
pub fn corollary_bound(coeffs: &SignedHypermatrix, arc_l: f64, density: usize, constant: f64) -> Result<BoundWitness> {
    let n = coeffs
        .side()
        .ok_or_else(|| Error::InvalidParameter("coefficients must form a cube".into()))?;
    if coeffs.is_zero() {
        return Err(Error::ZeroInput);
    }
    if !(arc_l >= 1.0) {
        return Err(Error::InvalidParameter(format!("L = {arc_l}")));
    }
    let d = coeffs.ndim();
    let radius = (d * n) as f64;
    let (h1, h2) = support_split(coeffs);
    let facet = exposed_vertex(&h1, &h2, radius)?;
    let arc_u = corollary_arc(arc_l, d, n);
    let half_u = PI / arc_u * (1.0 - 1e-12);
    let points = density * arc_u.ceil() as usize;
    let nf = n as f64;
    let scale = arc_l * nf * nf.max(2.0).ln();
    substitution_search(coeffs, facet, 0.0, 0, arc_l, half_u, points, scale, constant)
}

/// Arc parameter for `u` in [`corollary_bound`].
pub fn corollary_arc(arc_l: f64, d: usize, n: usize) -> f64 {
    arc_l * (d * n) as f64
}

/// Best `(z2, z3, |g|)` on `gamma(L) x gamma(L)`: a `density^2` grid, then
/// alternating golden refinement on each coordinate.
pub fn two_axis_arc_search(g: impl Fn(C64, C64) -> C64, arc_l: f64, density: usize) -> (C64, C64, f64) {
    let half = PI / arc_l;
    let step = 2.0 * half / (density.max(2) - 1) as f64;
    let mut best = (0.0, 0.0, g(C64::new(1.0, 0.0), C64::new(1.0, 0.0)).norm());
    for i in 0..density.max(2) {
        let a = -half + step * i as f64;
        for j in 0..density.max(2) {
            let b = -half + step * j as f64;
            let v = g(C64::from_polar(1.0, a), C64::from_polar(1.0, b)).norm();
            if v > best.2 {
                best = (a, b, v);
            }
        }
    }
    for _ in 0..4 {
        let (a0, b0, _) = best;
        let (a, va) = golden_max(
            |a| g(C64::from_polar(1.0, a), C64::from_polar(1.0, b0)).norm(),
            (a0 - step).max(-half),
            (a0 + step).min(half),
            1e-12,
        );
        if va > best.2 {
            best = (a, b0, va);
        }
        let (a1, _, _) = best;
        let (b, vb) = golden_max(
            |b| g(C64::from_polar(1.0, a1), C64::from_polar(1.0, b)).norm(),
            (b0 - step).max(-half),
            (b0 + step).min(half),
            1e-12,
        );
        if vb > best.2 {
            best = (a1, b, vb);
        }
    }
    let z2 = C64::from_polar(1.0, best.0);
    let z3 = C64::from_polar(1.0, best.1);
    (z2, z3, g(z2, z3).norm())
}

/// `ln` of `|g_1|^{L^2} / (n^2 C(n, l))^{L^2 - 1}`.
pub fn two_axis_log_floor(g1: f64, n: usize, l: usize, arc_l: usize) -> f64 {
    let l2 = (arc_l * arc_l) as f64;
    l2 * g1.ln() - (l2 - 1.0) * ((n * n) as f64 * binomial(n, l) as f64).ln()
}

/// Best `(w, |g(pw + q)|)` over the closed unit disk: `w = 0`, a polar grid,
/// and the arcs `rho * gamma(L)` for `L = 1, 2, 4, ...` that keep `|w| <= 1`.
pub fn disk_extension_search(g: impl Fn(C64) -> C64, p: f64, q: f64, density: usize) -> Result<(C64, f64)> {
    if p <= 0.0 {
        return Err(Error::InvalidParameter("disk search needs p > 0".into()));
    }
    let at = |w: C64| g(w * p + q).norm();
    let mut best = (C64::new(0.0, 0.0), at(C64::new(0.0, 0.0)));
    let consider = |w: C64, best: &mut (C64, f64)| {
        if w.norm() <= 1.0 {
            let v = at(w);
            if v > best.1 {
                *best = (w, v);
            }
        }
    };
    let rings = density.max(8);
    for i in 1..=rings {
        let r = i as f64 / rings as f64;
        for j in 0..density.max(8) {
            let w = C64::from_polar(r, 2.0 * PI * j as f64 / density.max(8) as f64);
            consider(w, &mut best);
        }
    }
    let mut l = 1.0;
    while l <= 1024.0 {
        if l >= 4.0 / p {
            let rho = 1.0 - 7.0 / (p * l * l);
            let (theta, _) = grid_then_refine(
                |t| {
                    let w = (C64::from_polar(rho, t) - q) / p;
                    if w.norm() <= 1.0 { at(w) } else { 0.0 }
                },
                -PI / l,
                PI / l,
                density.max(64),
                4,
                1e-12,
            );
            consider((C64::from_polar(rho, theta) - q) / p, &mut best);
        }
        l *= 2.0;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypermatrix::HyperArray;
    use crate::rng::seeded;
    use proptest::prelude::*;
    use rand::Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn lift_examples() {
        assert!((lift_w(c(1.0), 0.3, 0.7).unwrap().0 - c(1.0)).norm() < 1e-15);
        assert!(lift_w(c(0.7), 0.3, 0.7).unwrap().0.norm() < 1e-15);
        assert!(lift_w(c(1.0), 0.0, 1.0).is_err());
    }

    #[test]
    fn w_norm_facts_on_grid() {
        for p in [0.1f64, 0.3, 0.5, 0.9] {
            let ls: Vec<f64> = (0..100).map(|i| (4.0 / p).ceil() + i as f64 * 0.73).collect();
            let s = w_norm_survey(p, &ls, 100).unwrap();
            assert_eq!(s.points, 10_000);
            assert!(s.max_excess_on_shrunk_arc <= 1e-12, "p {p}: {}", s.max_excess_on_shrunk_arc);
            assert!(s.measured_c.is_finite());
        }
    }

    #[test]
    fn univariate_trivial_cases() {
        let arc = ArcSpec::new(5.0, 0.9, 64).unwrap();
        let one = max_modulus_univariate(&[c(1.0)], &arc, 1.0).unwrap();
        assert!((one.value - 1.0).abs() < 1e-15);
        let mut mono = vec![c(0.0); 8];
        mono[7] = c(1.0);
        let w = max_modulus_univariate(&mono, &arc, 1.0).unwrap();
        assert!((w.value - 0.9f64.powi(7)).abs() < 1e-12);
        assert!(ArcSpec::new(5.0, 0.9, 10).is_err());
        assert!(max_modulus_univariate(&[c(0.0)], &arc, 1.0).is_err());
    }

    #[test]
    fn density_doubling_never_hurts_much() {
        let mut rng = seeded(21);
        for _ in 0..10 {
            let f: Vec<C64> = (0..200).map(|_| c(if rng.gen_bool(0.5) { 1.0 } else { -1.0 })).collect();
            let mut prev = 0.0;
            for density in [64, 128, 256, 512] {
                let arc = ArcSpec::new(6.0, 0.97, density).unwrap();
                let v = max_modulus_univariate(&f, &arc, 1.0).unwrap().value;
                assert!(v >= prev * (1.0 - 1e-9), "density {density}: {v} < {prev}");
                prev = prev.max(v);
            }
        }
    }

    #[test]
    fn primitive_vector_examples() {
        assert_eq!(primitive_vectors(1.0, 2).unwrap(), vec![vec![0, 1], vec![1, 0]]);
        assert_eq!(primitive_vectors(3.0, 1).unwrap(), vec![vec![1]]);
        let mut count = 0;
        for a in -10i64..=10 {
            for b in -10i64..=10 {
                let canon = a > 0 || (a == 0 && b > 0);
                if canon && a * a + b * b <= 100 && gcd(a, b) == 1 {
                    count += 1;
                }
            }
        }
        assert_eq!(primitive_vectors(10.0, 2).unwrap().len(), count);
    }

    #[test]
    fn facet_examples() {
        let f = tangent_facet(&[vec![2, 3]], &[], 1.0).unwrap();
        assert_eq!(f.b, vec![1, 0]);
        assert_eq!(f.contacts, vec![vec![2, 3]]);
        let f = tangent_facet(&[vec![0, 0], vec![3, 0]], &[], 3.0).unwrap();
        assert_eq!(f.contacts.len(), 1);
        // A square's two low corners on both axes at R = 1: each of the four
        // unit directions touches two equal-sign points.
        let sq = [vec![0, 0], vec![0, 2], vec![2, 0], vec![2, 2]];
        assert!(matches!(tangent_facet(&sq, &[], 1.0), Err(Error::NoAdmissibleDirection { .. })));
        assert!(tangent_facet(&sq, &[], 2.0).is_ok());
    }

    #[test]
    fn substitute_examples() {
        let h = HyperArray::from_fn(vec![2, 2], |k| (k == [1, 1]) as i8);
        let s = substitute(&h, &[1, 1], c(1.0), 0).unwrap();
        assert_eq!((s.offset, s.coeffs.clone()), (2, vec![c(1.0)]));
        let h = HyperArray::from_fn(vec![2, 2], |k| match k {
            [1, 0] => 1,
            [0, 1] => -1,
            _ => 0,
        });
        let v = C64::from_polar(1.0, 0.37);
        let s = substitute(&h, &[2, 1], v, 0).unwrap();
        assert_eq!(s.offset, 1);
        assert_eq!(s.coeffs, vec![c(-1.0), v]);
        let h = HyperArray::from_fn(vec![3, 3], |k| (k == [2, 0] || k == [0, 2]) as i8);
        let s = substitute(&h, &[1, 1], v, 0).unwrap();
        assert_eq!(s.coeffs.len(), 1);
        assert!((s.coeffs[0] - (v * v + 1.0)).norm() < 1e-15);
    }

    #[test]
    fn substitute_mass() {
        let mut rng = seeded(8);
        for _ in 0..50 {
            let h: SignedHypermatrix = HyperArray::from_fn(vec![5, 5], |_| rng.gen_range(-1..=1));
            let b = [rng.gen_range(-3i64..=3), rng.gen_range(-3i64..=3)];
            let v = C64::from_polar(1.0, rng.gen_range(-1.0..1.0));
            let s = substitute(&h, &b, v, 1).unwrap();
            let mass: f64 = s.coeffs.iter().map(|c| c.norm()).sum();
            let total = h.entries().iter().filter(|&&e| e != 0).count() as f64;
            assert!(mass <= total + 1e-9);
        }
        // Distinct exponents, no collisions: mass is conserved.
        let h = HyperArray::from_fn(vec![4, 4], |k| if (k[0] + k[1]) % 3 == 0 { 1 } else { 0 });
        let s = substitute(&h, &[1, 4], c(1.0), 0).unwrap();
        let mass: f64 = s.coeffs.iter().map(|c| c.norm()).sum();
        assert_eq!(mass, h.entries().iter().filter(|&&e| e != 0).count() as f64);
    }

    #[test]
    fn multivariate_single_monomial() {
        let h = HyperArray::from_fn(vec![8, 8], |k| (k == [3, 5]) as i8);
        let w = multivariate_bound(&h, 0.6, 2.0, 1.0, 64, 1.0).unwrap();
        assert!((w.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn binomial_contact_chain() {
        // h = 1 - z_1^t: lowest coefficient of the substitution is 1 - v^t.
        let n = 32usize;
        let t = 3;
        let h = HyperArray::from_fn(vec![n, n], |k| match k {
            [0, 0] => 1,
            [a, 0] if *a == t => -1,
            _ => 0,
        });
        let v = C64::from_polar(1.0, PI / (2.0 * n as f64));
        let s = substitute(&h, &[0, 1], v, 0).unwrap();
        let lowest = s.lowest().norm();
        assert!((lowest - (c(1.0) - v.powu(t as u32)).norm()).abs() < 1e-12);
        assert!(lowest >= (c(1.0) - v).norm());
        let w = multivariate_bound(&h, 0.3, 2.0, 1.0, 64, 1.0).unwrap();
        assert!(w.value >= (c(1.0) - v).norm() * (1.0 - 1e-12));
    }

    #[test]
    fn corollary_single_monomial_and_line() {
        let h = HyperArray::from_fn(vec![4, 4], |k| (k == [1, 2]) as i8);
        assert!((corollary_bound(&h, 2.0, 64, 1.0).unwrap().value - 1.0).abs() < 1e-12);
        let mut rng = seeded(4);
        let line: SignedHypermatrix = HyperArray::from_fn(vec![12], |_| rng.gen_range(-1..=1));
        let line = if line.is_zero() { HyperArray::from_fn(vec![12], |k| (k[0] == 0) as i8) } else { line };
        let w = corollary_bound(&line, 3.0, 64, 1.0).unwrap();
        let coeffs: Vec<C64> = line.entries().iter().map(|&e| c(f64::from(e))).collect();
        let arc = ArcSpec::new(corollary_arc(3.0, 1, 12), 1.0, 64).unwrap();
        let direct = max_modulus_univariate(&coeffs, &arc, 1.0).unwrap();
        assert!((w.value - direct.value).abs() <= 1e-9 * direct.value);
    }

    #[test]
    fn two_axis_and_disk_trivial() {
        let (_, _, v) = two_axis_arc_search(|a, b| a * b, 4.0, 32);
        assert!((v - 1.0).abs() < 1e-12);
        let (_, _, v) = two_axis_arc_search(|_, _| c(0.25), 4.0, 32);
        assert_eq!(v, 0.25);
        let (w, v) = disk_extension_search(|_| c(0.5), 0.4, 0.6, 32).unwrap();
        assert_eq!((w, v), (c(0.0), 0.5));
        let (w, v) = disk_extension_search(|z| z.powu(40), 0.4, 0.6, 32).unwrap();
        assert!((w - c(1.0)).norm() < 1e-6 && (v - 1.0).abs() < 1e-6);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn random_sparse_pipeline_stays_in_arc(seed in any::<u64>()) {
            let mut rng = seeded(seed);
            let n = 16usize;
            let step = 4;
            let h: SignedHypermatrix = HyperArray::from_fn(vec![n, n], |k| {
                if k[0] % step == 0 && k[1] % step == 0 && rng.gen_bool(0.6) { [-1, 1][rng.gen_range(0..2)] } else { 0 }
            });
            prop_assume!(!h.is_zero());
            let w = multivariate_bound(&h, 0.5, 2.0, 1.0, 64, 1.0).unwrap();
            for z in &w.point {
                prop_assert!(z.arg().abs() <= PI / 2.0);
            }
            prop_assert!(w.contacts.len() <= 2);
        }
    }
}
