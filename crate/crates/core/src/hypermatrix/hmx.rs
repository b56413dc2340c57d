//! `HMX v1` text format: a header line `d n_1 ... n_d` followed by the
//! row-major entries, one last-axis run per line.

use super::{Entry, HyperArray, Limits};
use crate::error::{Error, Result};

pub fn to_hmx<T: Entry>(a: &HyperArray<T>) -> String {
    let mut out = a.ndim().to_string();
    for n in a.dims() {
        out.push(' ');
        out.push_str(&n.to_string());
    }
    out.push('\n');
    let run = a.dims().last().copied().unwrap_or(1).max(1);
    for row in a.entries().chunks(run) {
        let line: Vec<&str> = row.iter().map(|v| v.symbol()).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_hmx<T: Entry>(text: &str) -> Result<HyperArray<T>> {
    parse_hmx_with(text, &Limits::default())
}

pub fn parse_hmx_with<T: Entry>(text: &str, limits: &Limits) -> Result<HyperArray<T>> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let mut fields = header.split_whitespace().map(|t| {
        t.parse::<usize>().map_err(|e| Error::Parse {
            line: 1,
            msg: format!("bad header field {t:?}: {e}"),
        })
    });
    let d = fields.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty header".into(),
    })??;
    let dims = fields.collect::<Result<Vec<_>>>()?;
    if dims.len() != d {
        return Err(Error::Parse {
            line: 1,
            msg: format!("header declares d = {d} but lists {} sides", dims.len()),
        });
    }
    limits.check(&dims)?;
    let mut data = Vec::with_capacity(dims.iter().product());
    for (lineno, line) in lines {
        for tok in line.split_whitespace() {
            let v = T::parse_symbol(tok).ok_or_else(|| Error::Parse {
                line: lineno + 1,
                msg: format!("bad symbol {tok:?}"),
            })?;
            data.push(v);
        }
    }
    HyperArray::new(dims, data).map_err(|e| Error::Parse {
        line: 0,
        msg: e.to_string(),
    })
}
