//! The frozen constants must be reproducible from their pilot suites.

use hmtrace::calibration::{
    freeze, pilot_decontig, pilot_littlewood, pilot_multivariate, pilot_traces, Calibration, PILOT_DECONTIG_PER_Q,
    PILOT_LITTLEWOOD_PER_DEGREE, PILOT_SEED_BASE, PILOT_SPARSE_PER_SHAPE,
};

#[test]
fn frozen_constants_match_pilots() {
    let c = Calibration::frozen();
    assert_eq!(c.pilot_seed_base, PILOT_SEED_BASE);
    let base = c.pilot_seed_base;
    let lw = pilot_littlewood(base + 1, PILOT_LITTLEWOOD_PER_DEGREE, c.littlewood_p).unwrap();
    assert_eq!(freeze(lw), c.littlewood_c);
    let mv = pilot_multivariate(base + 2, PILOT_SPARSE_PER_SHAPE).unwrap();
    assert_eq!(freeze(mv), c.multivariate_c);
    let dc = pilot_decontig(base + 3, PILOT_DECONTIG_PER_Q, c.decontig_c1).unwrap();
    assert_eq!(freeze(dc), c.decontig_c2);
    assert!(c.littlewood_c >= lw && c.multivariate_c >= mv && c.decontig_c2 >= dc);
}

#[test]
fn small_trace_count_matches_pilot() {
    let c = Calibration::frozen();
    let t = pilot_traces(2, 0.3, 200, 0.99, c.pilot_seed_base + 4, 1 << 14).unwrap();
    assert_eq!(t.map(|t| 2 * t), Some(c.traces_n2_q03));
}
