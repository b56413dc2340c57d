//! `TRC v1`: a `TRC v1` line, the number of axes, one line per axis with the
//! count of retained indices followed by the indices, then the HMX block of
//! the trace entries.

use super::Trace;
use crate::error::{Error, Result};
use crate::hypermatrix::{parse_hmx, to_hmx};

pub fn to_trc(t: &Trace) -> String {
    let mut out = format!("TRC v1\n{}\n", t.retained.len());
    for list in &t.retained {
        out.push_str(&list.len().to_string());
        for i in list {
            out.push(' ');
            out.push_str(&i.to_string());
        }
        out.push('\n');
    }
    out.push_str(&to_hmx(&t.entries));
    out
}

pub fn parse_trc(text: &str) -> Result<Trace> {
    let bad = |line: usize, msg: &str| Error::Parse {
        line,
        msg: msg.to_string(),
    };
    let mut lines = text.lines();
    if lines.next().map(str::trim) != Some("TRC v1") {
        return Err(bad(1, "missing TRC v1 header"));
    }
    let d: usize = lines
        .next()
        .and_then(|l| l.trim().parse().ok())
        .ok_or_else(|| bad(2, "bad axis count"))?;
    let mut retained = Vec::with_capacity(d);
    for axis in 0..d {
        let line = lines.next().ok_or_else(|| bad(3 + axis, "missing axis line"))?;
        let nums: Vec<usize> = line
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| bad(3 + axis, "bad index")))
            .collect::<Result<_>>()?;
        match nums.split_first() {
            Some((&count, rest)) if rest.len() == count => retained.push(rest.to_vec()),
            _ => return Err(bad(3 + axis, "count does not match index list")),
        }
    }
    let body: Vec<&str> = lines.collect();
    let entries = parse_hmx(&body.join("\n"))?;
    let shape: Vec<usize> = retained.iter().map(Vec::len).collect();
    if entries.dims() != shape.as_slice() {
        return Err(Error::ShapeMismatch(entries.dims().to_vec(), shape));
    }
    if retained.iter().any(|l| l.windows(2).any(|w| w[0] >= w[1])) {
        return Err(bad(3, "retained indices must increase"));
    }
    Ok(Trace { retained, entries })
}
