//! Building windows from sequence names or JSON files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use flatcurve_core::zseq::{parse_point, parse_point_list, validate};
use flatcurve_core::{generate, GeneratorSpec, Mat2, Scalar, ZPoint, ZeroWindow};
use serde_json::Value;

use crate::args::{Common, ModeArg};
use crate::usage;

pub const SEQUENCES: &[&str] = &[
    "positive-integers",
    "all-integers",
    "odd-4n13",
    "gaussian-lattice",
    "integers-plus-minus-i",
    "orbit",
    "explicit",
];

/// Arithmetic mode for this run: the input file decides when one is given.
pub fn run_mode(c: &Common) -> Result<ModeArg> {
    match &c.input {
        Some(path) => match read_json(path)?.get("mode").and_then(Value::as_str) {
            Some("exact") => Ok(ModeArg::Exact),
            Some("float") => Ok(ModeArg::Float),
            _ => Err(flatcurve_core::Error::Parse(format!(
                "{}: missing or unknown \"mode\"",
                path.display()
            ))
            .into()),
        },
        None => Ok(c.mode),
    }
}

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text)
        .map_err(|e| flatcurve_core::Error::Parse(format!("{}: {e}", path.display())).into())
}

/// The primary window of a run.
pub fn load<T: Scalar>(c: &Common) -> Result<ZeroWindow<T>> {
    match (&c.input, &c.sequence) {
        (Some(path), _) => {
            let w = ZeroWindow::from_json(&read_json(path)?, c.eps)?;
            check_radius_arg(c, Some(w.radius()))?;
            Ok(w)
        }
        (None, Some(name)) => {
            let radius = check_radius_arg(c, None)?;
            build(name, &c.params, radius, c.eps)
        }
        (None, None) => Err(usage("one of --sequence or --input is required")),
    }
}

/// Radius from the flags, checked against the inner radius.
fn check_radius_arg(c: &Common, from_file: Option<f64>) -> Result<f64> {
    let r = match (from_file, c.radius) {
        (Some(r), _) => r,
        (None, Some(r)) => r,
        (None, None) => return Err(usage("--radius is required with --sequence")),
    };
    if !(r.is_finite() && r > 0.0) {
        return Err(usage(format!("--radius must be positive, got {r}")));
    }
    if let Some(inner) = c.inner {
        if !(inner > 0.0 && inner < r) {
            return Err(usage(format!("--inner must lie in (0, {r}), got {inner}")));
        }
    }
    if c.m < 2 {
        return Err(usage(format!("--m must be at least 2, got {}", c.m)));
    }
    if !(c.eps.is_finite() && c.eps > 0.0) {
        return Err(usage(format!("--eps must be positive, got {}", c.eps)));
    }
    Ok(r)
}

/// Generates a named sequence. The `shift` parameter moves every raw term
/// by a fixed complex number before the radius cut.
pub fn build<T: Scalar>(
    name: &str,
    params: &[String],
    radius: f64,
    eps: f64,
) -> Result<ZeroWindow<T>> {
    let mut params = parse_params(params)?;
    let shift = params
        .remove("shift")
        .map(|s| point::<T>(&s, "shift"))
        .transpose()?;
    let spec = spec_for::<T>(name, &mut params)?;
    if let Some(key) = params.keys().next() {
        return Err(usage(format!(
            "unknown parameter {key:?} for sequence {name}"
        )));
    }
    match shift {
        None => Ok(generate(&spec, radius, eps)?),
        Some(b) => {
            // Cover every raw term that can land in the ball after the shift.
            let wide = generate(&spec, radius + b.norm() + 1.0, eps)?;
            let moved: Vec<ZPoint<T>> = wide.raw_points().map(|z| &z + &b).collect();
            Ok(generate(&GeneratorSpec::Explicit(moved), radius, eps)?)
        }
    }
}

fn parse_params(raw: &[String]) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for p in raw {
        let (k, v) = p
            .split_once('=')
            .ok_or_else(|| usage(format!("parameter {p:?} is not of the form key=value")))?;
        if out
            .insert(k.trim().to_string(), v.trim().to_string())
            .is_some()
        {
            return Err(usage(format!("parameter {k:?} given twice")));
        }
    }
    Ok(out)
}

fn spec_for<T: Scalar>(
    name: &str,
    params: &mut BTreeMap<String, String>,
) -> Result<GeneratorSpec<T>> {
    Ok(match name {
        "positive-integers" => GeneratorSpec::PositiveIntegers,
        "all-integers" => GeneratorSpec::AllIntegers,
        "odd-4n13" => {
            let all_n = match params.remove("n").as_deref() {
                None | Some("positive") => false,
                Some("all") => true,
                Some(other) => {
                    return Err(usage(format!(
                        "n must be `positive` or `all`, got {other:?}"
                    )))
                }
            };
            GeneratorSpec::Odd4n13 { all_n }
        }
        "gaussian-lattice" => GeneratorSpec::GaussianLattice,
        "integers-plus-minus-i" => GeneratorSpec::IntegersPlusMinusI,
        "orbit" => {
            let seeds = params
                .remove("seeds")
                .ok_or_else(|| usage("orbit needs seeds=x,y;x,y;…"))?;
            let gens = params
                .remove("gens")
                .ok_or_else(|| usage("orbit needs gens=a,b,c,d;…"))?;
            let words = params.remove("words").unwrap_or_else(|| "4".into());
            GeneratorSpec::Orbit {
                seeds: points::<T>(&seeds, "seeds")?,
                generators: matrices::<T>(&gens)?,
                max_word_length: words.parse().map_err(|_| {
                    usage(format!(
                        "words must be a nonnegative integer, got {words:?}"
                    ))
                })?,
            }
        }
        "explicit" => {
            let pts = params
                .remove("points")
                .ok_or_else(|| usage("explicit needs points=x,y;x,y;…"))?;
            GeneratorSpec::Explicit(points::<T>(&pts, "points")?)
        }
        other => {
            return Err(usage(format!(
                "unknown sequence {other:?}; expected one of {}",
                SEQUENCES.join(", ")
            )))
        }
    })
}

pub fn point<T: Scalar>(s: &str, what: &str) -> Result<ZPoint<T>> {
    parse_point(s).map_err(|e| usage(format!("{what}: {e}")))
}

pub fn points<T: Scalar>(s: &str, what: &str) -> Result<Vec<ZPoint<T>>> {
    parse_point_list(s).map_err(|e| usage(format!("{what}: {e}")))
}

/// Parses `a,b,c,d;…` into row-major matrices.
fn matrices<T: Scalar>(s: &str) -> Result<Vec<Mat2<T>>> {
    s.split(';')
        .map(str::trim)
        .filter(|m| !m.is_empty())
        .map(|m| {
            let e: Vec<T> = m
                .split(',')
                .map(|x| T::parse(x.trim()))
                .collect::<Result<_, _>>()
                .map_err(|e| usage(format!("gens: {e}")))?;
            match <[T; 4]>::try_from(e) {
                Ok([a, b, c, d]) => Ok(Mat2::new(a, b, c, d)),
                Err(_) => Err(usage(format!("gens: {m:?} needs four entries"))),
            }
        })
        .collect()
}

/// Refuses windows that break their own invariants.
pub fn ensure_valid<T: Scalar>(w: &ZeroWindow<T>) -> Result<()> {
    let v = validate(w);
    if v.is_empty() {
        Ok(())
    } else {
        let codes: Vec<&str> = v.iter().map(|x| x.code()).collect();
        Err(flatcurve_core::Error::InvalidInput(format!(
            "window fails validation: {}",
            codes.join(", ")
        ))
        .into())
    }
}
