//! One-dimensional maximization used by every grid search.

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of a unimodal-on-bracket function.
/// Returns the best point seen, never worse than the bracket midpoint.
pub fn golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, rel_tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let scale = a.abs().max(b.abs()).max(1e-300);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    let mut best = if fc >= fd { (c, fc) } else { (d, fd) };
    let mut iters = 0;
    while (b - a) > rel_tol * scale && iters < 200 {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
            if fc > best.1 {
                best = (c, fc);
            }
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
            if fd > best.1 {
                best = (d, fd);
            }
        }
        iters += 1;
    }
    best
}

/// Uniform grid of `points` samples on `[lo, hi]` (both ends included),
/// followed by golden refinement around the best few local maxima.
pub fn grid_then_refine(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    points: usize,
    refine: usize,
    rel_tol: f64,
) -> (f64, f64) {
    let points = points.max(2);
    let step = (hi - lo) / (points - 1) as f64;
    let xs: Vec<f64> = (0..points).map(|i| if i + 1 == points { hi } else { lo + step * i as f64 }).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut peaks: Vec<usize> = (0..points)
        .filter(|&i| (i == 0 || ys[i] >= ys[i - 1]) && (i + 1 == points || ys[i] >= ys[i + 1]))
        .collect();
    peaks.sort_by(|&i, &j| ys[j].total_cmp(&ys[i]).then(i.cmp(&j)));
    let mut best = (xs[peaks[0]], ys[peaks[0]]);
    for &i in peaks.iter().take(refine) {
        let a = xs[i.saturating_sub(1)];
        let b = xs[(i + 1).min(points - 1)];
        let cand = golden_max(&mut f, a, b, rel_tol);
        if cand.1 > best.1 {
            best = cand;
        }
    }
    best
}
