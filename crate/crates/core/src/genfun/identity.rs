//! Numeric check of the W-generating identity
//! `E[sum_j 1{trace_j = W} w^{odot j}] = p^{rl + d - r} g(z)` with `z = p w + q`.
//! The indicator only counts positions lying inside the unpadded trace;
//! matches that reach into the zero padding have no counterpart in `g`.

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

use super::{eval_genfun, position_monomial, GenfunSpec, Source};
use crate::channel::{exact_retained_probs_in, ChannelParams, DEFAULT_ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::hypermatrix::{iter_positions, ComplexPoint, Hypermatrix, Pattern};

/// Both sides of the identity in the scalar type `S`.
pub fn identity_sides<S: Num + Clone>(
    x: &Hypermatrix,
    y: Option<&Hypermatrix>,
    w: &Pattern,
    z: &ComplexPoint<S>,
    p: &S,
    q: &S,
) -> Result<(Complex<S>, Complex<S>)> {
    let source = match y {
        Some(y) => Source::pair(x, y)?,
        None => Source::Single(x.clone()),
    };
    let spec = GenfunSpec::new(source, w.clone())?;
    let rhs_g = eval_genfun(&spec, z)?;
    let n = spec.source.side()?;
    let (d, l, r) = (x.ndim(), w.side(), w.rank());

    let mut scale = Complex::<S>::one();
    for _ in 0..(r * l + d - r) {
        scale = scale * Complex::new(p.clone(), S::zero());
    }
    let rhs = scale * rhs_g;

    // With p = 0 the map z -> w is undefined; every slice is deleted, so take w = 0.
    let w_point: ComplexPoint<S> = if p.is_zero() {
        z.map(|_| Complex::zero())
    } else {
        let qc = Complex::new(q.clone(), S::zero());
        z.map(|zi| (zi.clone() - qc.clone()) / p.clone())
    };

    let px = exact_retained_probs_in(x, w, p, q, DEFAULT_ENUMERATION_CAP)?;
    let py = match y {
        Some(y) => exact_retained_probs_in(y, w, p, q, DEFAULT_ENUMERATION_CAP)?,
        None => vec![S::zero(); px.len()],
    };
    let lhs = iter_positions(n, d, l, r)?
        .zip(px.into_iter().zip(py))
        .fold(Complex::zero(), |acc, (j, (a, b))| {
            acc + position_monomial(&w_point, &j) * (a - b)
        });
    Ok((lhs, rhs))
}

/// `|LHS - RHS|` in double precision.
pub fn verify_identity(
    x: &Hypermatrix,
    y: Option<&Hypermatrix>,
    w: &Pattern,
    z: &ComplexPoint<f64>,
    params: &ChannelParams,
) -> Result<f64> {
    let (lhs, rhs) = identity_sides(x, y, w, z, &params.p(), &params.q())?;
    Ok((lhs - rhs).norm())
}

/// Both sides in exact rational arithmetic; requires a rational `q`.
pub fn verify_identity_exact(
    x: &Hypermatrix,
    y: Option<&Hypermatrix>,
    w: &Pattern,
    z: &ComplexPoint<BigRational>,
    params: &ChannelParams,
) -> Result<(Complex<BigRational>, Complex<BigRational>)> {
    let q = params
        .exact_q()
        .ok_or_else(|| Error::InvalidParameter("exact mode needs a rational q".into()))?
        .clone();
    let p = BigRational::one() - &q;
    identity_sides(x, y, w, z, &p, &q)
}

/// `|LHS - RHS|` of an exact evaluation, rounded to `f64` only at the end.
pub fn exact_residual(lhs: &Complex<BigRational>, rhs: &Complex<BigRational>) -> f64 {
    let diff = lhs - rhs;
    let sq = &diff.re * &diff.re + &diff.im * &diff.im;
    sq.to_f64().unwrap_or(f64::INFINITY).sqrt()
}

/// The rational point `((1 - t^2) / (1 + t^2), 2t / (1 + t^2))` on the unit
/// circle for `t = num / den`.
pub fn rational_unit_point(num: i64, den: i64) -> Complex<BigRational> {
    let t = BigRational::new(BigInt::from(num), BigInt::from(den));
    let t2 = &t * &t;
    let one = BigRational::one();
    let denom = &one + &t2;
    Complex::new((&one - &t2) / &denom, (BigRational::from_integer(2.into()) * t) / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypermatrix::Pattern;
    use crate::rng::seeded;
    use rand::Rng;

    fn unit_torus(rng: &mut impl Rng, d: usize, l: usize, r: usize) -> ComplexPoint<f64> {
        let mut draw = || Complex::from_polar(1.0, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI));
        ComplexPoint::new(
            (0..r).map(|_| (0..l).map(|_| draw()).collect()).collect(),
            (0..d - r).map(|_| draw()).collect(),
        )
    }

    #[test]
    fn single_cell_scalar_pattern() {
        let x = Hypermatrix::new(vec![1], vec![1]).unwrap();
        let params = ChannelParams::new(0.35).unwrap();
        let z = ComplexPoint::new(vec![], vec![Complex::new(0.2, -0.9)]);
        let (lhs, rhs) = identity_sides(&x, None, &Pattern::unit(), &z, &0.65, &0.35).unwrap();
        assert!((lhs - Complex::new(0.65, 0.0)).norm() < 1e-15);
        assert!((rhs - Complex::new(0.65, 0.0)).norm() < 1e-15);
        assert!(verify_identity(&x, None, &Pattern::unit(), &z, &params).unwrap() < 1e-15);
    }

    #[test]
    fn retention_zero_gives_zero_sides() {
        let x = Hypermatrix::from_fn(vec![3, 3], |k| (k[0] <= k[1]) as u8);
        let w = Pattern::new(2, 1, vec![1, 1]).unwrap();
        let params = ChannelParams::oracle(1.0).unwrap();
        let z = ComplexPoint::constant(Complex::new(0.0, 1.0), 2, 2, 1);
        let (lhs, rhs) = identity_sides(&x, None, &w, &z, &params.p(), &params.q()).unwrap();
        assert_eq!(lhs, Complex::new(0.0, 0.0));
        assert_eq!(rhs, Complex::new(0.0, 0.0));
    }

    #[test]
    fn float_identity_small_random_suite() {
        let mut rng = seeded(11);
        for _ in 0..40 {
            let n = rng.gen_range(1..=3);
            let d = rng.gen_range(1..=2);
            let x = Hypermatrix::from_fn(vec![n; d], |_| rng.gen_range(0..2));
            let y = Hypermatrix::from_fn(vec![n; d], |_| rng.gen_range(0..2));
            let l = rng.gen_range(1..=n);
            let r = rng.gen_range(0..=d);
            let w = Pattern::new(l, r, (0..l.pow(r as u32)).map(|_| rng.gen_range(0..2)).collect()).unwrap();
            let z = unit_torus(&mut rng, d, w.side(), r);
            let params = ChannelParams::new(rng.gen_range(0.1..0.9)).unwrap();
            let res = verify_identity(&x, Some(&y), &w, &z, &params).unwrap();
            assert!(res <= 1e-9, "residual {res}");
        }
    }

    #[test]
    fn rational_points_lie_on_circle() {
        let z = rational_unit_point(3, 7);
        assert!((z.re.clone() * z.re.clone() + z.im.clone() * z.im.clone()).is_one());
    }

    #[test]
    fn exact_identity_holds_with_equality() {
        let params = ChannelParams::rational(1, 3).unwrap();
        let x = Hypermatrix::from_fn(vec![3, 3], |k| ((k[0] * 2 + k[1]) % 3 == 1) as u8);
        let y = Hypermatrix::from_fn(vec![3, 3], |k| (k[0] == 2 || k[1] == 0) as u8);
        let w = Pattern::new(2, 1, vec![1, 0]).unwrap();
        let z = ComplexPoint::new(
            vec![vec![rational_unit_point(1, 2), rational_unit_point(-2, 5)]],
            vec![rational_unit_point(4, 3)],
        );
        let (lhs, rhs) = verify_identity_exact(&x, Some(&y), &w, &z, &params).unwrap();
        assert_eq!(lhs, rhs);
        assert!(!rhs.is_zero());
        assert!(verify_identity_exact(&x, Some(&y), &w, &z, &ChannelParams::new(0.5).unwrap()).is_err());
    }
}
