//! Serialization of command results.

use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use flatcurve_core::{HolonomySet, SaddleSegment, Scalar, ZeroWindow};
use serde_json::Value;

/// Serialized result of a subcommand.
pub struct Output(pub String);

impl Output {
    pub fn json(v: &Value) -> Self {
        let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
        s.push('\n');
        Output(s)
    }

    pub fn write(&self, out: Option<&Path>) -> Result<()> {
        let Output(s) = self;
        match out {
            Some(p) => fs::write(p, s).with_context(|| format!("writing {}", p.display())),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(s.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}

/// Rationals as `p/q`, floats in shortest round-trip form.
pub fn cell<T: Scalar>(x: &T) -> String {
    match x.to_json() {
        Value::String(s) => s,
        other => other.to_string(),
    }
}

pub fn saddles_csv<T: Scalar>(w: &ZeroWindow<T>, segs: &[SaddleSegment<T>]) -> Result<String> {
    let mut wr = csv::Writer::from_writer(Vec::new());
    wr.write_record([
        "from_re",
        "from_im",
        "to_re",
        "to_im",
        "hol_re",
        "hol_im",
        "provisional",
    ])?;
    for s in segs {
        let (a, b) = (&w.points()[s.from_idx], &w.points()[s.to_idx]);
        wr.write_record([
            cell(&a.re),
            cell(&a.im),
            cell(&b.re),
            cell(&b.im),
            cell(&s.holonomy.re),
            cell(&s.holonomy.im),
            (!s.certified).to_string(),
        ])?;
    }
    Ok(String::from_utf8(wr.into_inner()?)?)
}

pub fn holonomy_csv<T: Scalar>(h: &HolonomySet<T>) -> Result<String> {
    let mut wr = csv::Writer::from_writer(Vec::new());
    wr.write_record(["hol_re", "hol_im", "provisional"])?;
    for (i, v) in h.vectors().iter().enumerate() {
        wr.write_record([cell(&v.re), cell(&v.im), (!h.is_certified(i)).to_string()])?;
    }
    Ok(String::from_utf8(wr.into_inner()?)?)
}
