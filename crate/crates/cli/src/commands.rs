//! Subcommand dispatch.

use anyhow::Result;
use flatcurve_core::cover::CutSystem;
use flatcurve_core::weierstrass::{DegreeRule, Rect};
use flatcurve_core::zseq::{point_json, validate};
use flatcurve_core::*;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::args::{Command, Common, Format, ProductArgs, SearchArgs};
use crate::output::{holonomy_csv, saddles_csv, Output};
use crate::svg;
use crate::usage;
use crate::window::{build, ensure_valid, load, point, points, read_json};

pub fn exec<T: Scalar>(cmd: &Command, c: &Common) -> Result<Output> {
    let w: ZeroWindow<T> = load(c)?;
    if let Command::Validate = cmd {
        let v = validate(&w);
        return json_only(
            c,
            json!({
                "valid": v.is_empty(),
                "points": w.len(),
                "violations": v.iter().map(|x| x.to_json()).collect::<Vec<_>>(),
            }),
        );
    }
    ensure_valid(&w)?;
    let inner = c.inner.unwrap_or(w.radius() / 3.0);
    match cmd {
        Command::Validate => unreachable!(),
        Command::Gen => json_only(c, w.to_json()),
        Command::Eval { at, product } => {
            let spec = product_spec(&w, product)?;
            let z = point::<f64>(at, "--at")?.to_complex();
            let e = eval_f(&spec, z)?;
            json_only(
                c,
                json!({
                    "at": [z.re, z.im],
                    "value": [e.value.re, e.value.im],
                    "log10mag": e.log10_magnitude,
                    "origin_exponent": spec.origin_exponent(),
                    "factors": spec.factors(),
                    "degrees": spec.degrees().to_json(),
                }),
            )
        }
        Command::VerifyZeros {
            rect,
            samples,
            product,
        } => {
            let spec = product_spec(&w, product)?;
            json_only(
                c,
                verify_zeros(&spec, inner, rect.as_deref(), *samples, c.seed)?,
            )
        }
        Command::Saddles => {
            let segs = saddle_connections(&w, c.m)?;
            match c.format {
                Format::Csv => Ok(Output(saddles_csv(&w, &segs)?)),
                Format::Json => Ok(Output::json(&json!({
                    "m": c.m,
                    "window_radius": w.radius(),
                    "segments": segs.iter().map(|s| s.to_json()).collect::<Vec<_>>(),
                }))),
                Format::Svg => Err(svg_only_via_plot()),
            }
        }
        Command::Hol => {
            let h = holonomy(&w);
            match c.format {
                Format::Csv => Ok(Output(holonomy_csv(&h)?)),
                Format::Json => Ok(Output::json(&h.to_json())),
                Format::Svg => Err(svg_only_via_plot()),
            }
        }
        Command::Directions => json_only(c, direction_profile(&holonomy(&w)).to_json()),
        Command::Lift {
            path,
            sheet,
            saddle,
        } => json_only(
            c,
            lift(&w, c.m, path.as_deref(), *sheet, saddle.as_deref())?,
        ),
        Command::ConeAngle { zero, circle } => {
            json_only(c, cone_angle(*zero, &w, c.m, *circle)?.to_json())
        }
        Command::Classify { search } => {
            json_only(c, classify(&w, &search_cfg(inner, search))?.to_json())
        }
        Command::Sandwich { search } => {
            let cfg = search_cfg(inner, search);
            let report = sandwich_report(&w, &cfg)?;
            let mut out = report.to_json();
            let closure = match group_closure_check(&report.lower, &w, &cfg) {
                Ok(r) => r.to_json(),
                Err(e) => json!({"error": e.code(), "detail": e.to_string()}),
            };
            out["closure"] = closure;
            json_only(c, out)
        }
        Command::Equiv {
            with,
            with_sequence,
            with_params,
            affine,
            search,
        } => {
            if *affine {
                let maps = affine_automorphisms(&w, &search_cfg(inner, search))?;
                return json_only(
                    c,
                    json!({"automorphisms": maps.iter().map(|m| m.to_json()).collect::<Vec<_>>()}),
                );
            }
            let other: ZeroWindow<T> = match (with, with_sequence) {
                (Some(path), _) => ZeroWindow::from_json(&read_json(path)?, c.eps)?,
                (None, Some(name)) => build(name, with_params, w.radius(), c.eps)?,
                (None, None) => {
                    return Err(usage("equiv needs --with, --with-sequence or --affine"))
                }
            };
            ensure_valid(&other)?;
            json_only(c, translation_equiv(&w, &other)?.to_json())
        }
        Command::Moduli { action } => {
            let form = moduli_canonical(&w)?;
            let mut out = form.to_json();
            if let Some(b) = action {
                let b = point::<T>(b, "--action")?;
                let moved = moduli_action(&form.c0_coords, &b)?;
                out["action"] = json!({
                    "b": point_json(&b),
                    "c0_coords": moved.iter().map(point_json).collect::<Vec<_>>(),
                });
            }
            json_only(c, out)
        }
        Command::Plot { kind } => {
            if c.format == Format::Csv {
                return Err(usage("plot writes SVG only"));
            }
            let segs = saddle_connections(&w, c.m)?;
            Ok(Output(svg::render(&w, &segs, &holonomy(&w), *kind)))
        }
    }
}

fn json_only(c: &Common, v: Value) -> Result<Output> {
    match c.format {
        Format::Json => Ok(Output::json(&v)),
        Format::Csv => Err(usage("CSV output is available for saddles and hol only")),
        Format::Svg => Err(svg_only_via_plot()),
    }
}

fn svg_only_via_plot() -> anyhow::Error {
    usage("SVG output is produced by the plot subcommand")
}

fn search_cfg(inner: f64, s: &SearchArgs) -> StabilizerSearchConfig {
    let mut cfg = StabilizerSearchConfig::new(inner);
    if let Some(b) = s.entry_bound {
        cfg = cfg.with_entry_bound(b);
    }
    cfg.require_non_contracting = !s.allow_contracting;
    cfg
}

fn product_spec<T: Scalar>(w: &ZeroWindow<T>, p: &ProductArgs) -> Result<ProductSpec> {
    let degrees = match p.degrees.as_str() {
        "linear" => Degrees::Linear,
        "auto" => flatcurve_core::weierstrass::choose_degrees(w, DegreeRule::Auto)?.degrees,
        k => Degrees::Uniform(k.parse().map_err(|_| {
            usage(format!(
                "--degrees must be linear, auto or an integer, got {k:?}"
            ))
        })?),
    };
    Ok(ProductSpec::from_window(w, degrees, p.factors, p.raw)?)
}

/// Newton checks for every active zero within the inner radius. Each start
/// sits in a seeded direction at a tenth of the local gap, moving ten times
/// closer after every failed attempt down to a millionth of the gap.
fn verify_zeros(
    spec: &ProductSpec,
    inner: f64,
    rect: Option<&str>,
    samples: usize,
    seed: u64,
) -> Result<Value> {
    let zeros = spec.active_zeros();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    for (i, z) in zeros.iter().enumerate() {
        if z.norm() > inner {
            continue;
        }
        let gap = zeros
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, o)| (o - z).norm())
            .fold(f64::INFINITY, f64::min);
        let gap = if gap.is_finite() { gap } else { 1.0 };
        let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let mut offset = gap / 10.0;
        let check = loop {
            match refine_zero(spec, z + Complex64::from_polar(offset, phi)) {
                Ok(c) if c.zero == *z => break c,
                Ok(_) | Err(flatcurve_core::Error::NoConvergence { .. }) if offset > gap * 1e-6 => {
                    offset /= 10.0
                }
                Ok(c) => {
                    return Err(anyhow::anyhow!(
                        "Newton from near {z} converged to {}",
                        c.zero
                    ))
                }
                Err(e) => return Err(e.into()),
            }
        };
        let mut v = check.to_json();
        v["start_offset"] = json!(offset);
        checks.push(v);
    }
    let mut out = json!({"inner_radius": inner, "seed": seed, "checks": checks});
    if let Some(r) = rect {
        let v: Vec<f64> = r
            .split(',')
            .map(|x| x.trim().parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| usage(format!("--rect must be x0,y0,x1,y1, got {r:?}")))?;
        let [x0, y0, x1, y1] =
            <[f64; 4]>::try_from(v).map_err(|_| usage("--rect needs four numbers"))?;
        let rect = Rect::new(x0, y0, x1, y1);
        out["rect"] =
            json!({"corners": [x0, y0, x1, y1], "count": count_zeros(spec, &rect, samples)?});
    }
    Ok(out)
}

fn lift<T: Scalar>(
    w: &ZeroWindow<T>,
    m: u32,
    path: Option<&str>,
    sheet: u32,
    saddle: Option<&str>,
) -> Result<Value> {
    let cuts = CutSystem::new(w, m)?;
    if let Some(p) = path {
        let poly: Vec<Complex64> = points::<f64>(p, "--path")?
            .iter()
            .map(ZPoint::to_complex)
            .collect();
        let first = *poly.first().ok_or_else(|| usage("--path is empty"))?;
        if sheet >= m {
            return Err(usage(format!("--sheet must be below m = {m}")));
        }
        return Ok(cuts
            .lift_path(&poly, &cover::CoverPoint::regular(first, sheet))?
            .to_json());
    }
    let s = saddle.unwrap_or_default();
    let (i, j) = s
        .split_once(',')
        .and_then(|(a, b)| {
            Some((
                a.trim().parse::<usize>().ok()?,
                b.trim().parse::<usize>().ok()?,
            ))
        })
        .ok_or_else(|| usage(format!("--saddle must be i,j, got {s:?}")))?;
    let seg = saddle_connections(w, m)?
        .into_iter()
        .find(|g| (g.from_idx, g.to_idx) == (i, j) || (g.from_idx, g.to_idx) == (j, i))
        .ok_or(flatcurve_core::Error::NotVisible { from: i, to: j })?;
    let lifts = lift_saddle(&seg, w, &cuts)?;
    Ok(
        json!({"segment": seg.to_json(), "lifts": lifts.iter().map(|l| l.to_json()).collect::<Vec<_>>()}),
    )
}
