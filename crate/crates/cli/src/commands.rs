use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use csl_core::covering::{
    approx_submonoid_cover, chromatic_finite_cover, chromatic_semilinear_cover,
    finite_plus_monoid_cover, inhomogeneous_cover, submonoid_exact_cover,
};
use csl_core::io::{
    certificate_from_json, certificate_to_json, layer_report_to_json, profile_to_json,
    report_to_json, set_to_json, tuple_file_from_json, TupleFile,
};
use csl_core::layers::{decompose_layer, representation_function, LayerStructure};
use csl_core::sumset::{chromatic_sumset, chromatic_sumset_window};
use csl_core::{ColorClass, ColorTuple, CoveringCertificate, FiniteSet, HVector, Status, Window};
use serde_json::{json, Value};

use crate::{fail, Io, MethodArg, UNSUPPORTED, USAGE, VERIFICATION_FAILED};

pub fn read_json(path: &Path) -> Result<Value> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn read_tuple(path: &Path) -> Result<TupleFile> {
    let v = read_json(path)?;
    tuple_file_from_json(&v).with_context(|| format!("reading tuple from {}", path.display()))
}

/// Writes to the output file, or stdout.
pub fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<()> {
    match output {
        Some(p) => fs::write(p, bytes).with_context(|| format!("writing {}", p.display())),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
            Ok(())
        }
    }
}

fn emit_json(output: Option<&Path>, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    emit(output, text.as_bytes())
}

pub fn parse_list(s: &str, what: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|x| {
            x.trim().parse::<u64>().map_err(|_| {
                fail(
                    USAGE,
                    format!("--{what}: `{x}` is not a nonnegative integer"),
                )
            })
        })
        .collect()
}

pub fn parse_h(s: &str, t: &ColorTuple) -> Result<HVector> {
    let h = HVector::new(parse_list(s, "h")?);
    if h.len() != t.len() {
        return Err(fail(
            USAGE,
            format!(
                "--h has {} entries but the tuple has {} colors",
                h.len(),
                t.len()
            ),
        ));
    }
    Ok(h)
}

pub fn parse_window(s: &str) -> Result<Window> {
    let bounds = s
        .split(',')
        .map(|part| {
            let (lo, hi) = part
                .split_once(':')
                .ok_or_else(|| fail(USAGE, format!("--window: `{part}` is not lo:hi")))?;
            let num = |v: &str| {
                v.trim()
                    .parse::<i64>()
                    .map_err(|_| fail(USAGE, format!("--window: `{v}` is not an integer")))
            };
            Ok((num(lo)?, num(hi)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Window::new(bounds)?)
}

pub fn window_for(t: &ColorTuple, window: Option<&str>) -> Result<Option<Window>> {
    let w = window.map(parse_window).transpose()?;
    if let Some(w) = &w {
        w.check_rank(t.ambient())?;
    }
    Ok(w)
}

pub fn sumset(io: &Io, h: &str, window: Option<&str>) -> Result<()> {
    let file = read_tuple(&io.input)?;
    let t = &file.tuple;
    let h = parse_h(h, t)?;
    let w = window_for(t, window)?;
    let s = match (&w, t.all_finite()) {
        (Some(w), _) => chromatic_sumset_window(t, &h, w)?,
        (None, true) => chromatic_sumset(t, &h)?,
        (None, false) => return Err(fail(UNSUPPORTED, "structured colors need --window")),
    };
    emit_json(io.output.as_deref(), &set_to_json(&s))
}

fn kinds_all(t: &ColorTuple, f: fn(&ColorClass) -> bool) -> bool {
    t.colors().iter().all(f)
}

/// The method `auto` stands for on this tuple.
pub fn resolve(t: &ColorTuple, method: MethodArg) -> Result<MethodArg> {
    if method != MethodArg::Auto {
        return Ok(method);
    }
    if kinds_all(t, |c| matches!(c, ColorClass::TranslatedMonoid { .. })) {
        Ok(MethodArg::Submonoid)
    } else if kinds_all(t, |c| matches!(c, ColorClass::FinitePlusMonoid { .. })) {
        Ok(MethodArg::FinitePlusMonoid)
    } else if kinds_all(t, |c| matches!(c, ColorClass::Finite(_))) {
        Ok(MethodArg::Finite)
    } else if kinds_all(t, |c| matches!(c, ColorClass::Semilinear(_))) {
        Ok(MethodArg::Semilinear)
    } else {
        Err(fail(
            UNSUPPORTED,
            "tuples mixing color kinds have no cover construction",
        ))
    }
}

fn require_kind(
    t: &ColorTuple,
    ok: fn(&ColorClass) -> bool,
    method: &str,
    kind: &str,
) -> Result<()> {
    match t.colors().iter().position(|c| !ok(c)) {
        None => Ok(()),
        Some(i) => Err(fail(
            USAGE,
            format!(
                "method {method} needs {kind} colors, but color {i} is {}",
                t.colors()[i].kind()
            ),
        )),
    }
}

/// Builds the (unverified) certificate for one `h`.
pub fn build(
    file: &TupleFile,
    r: u64,
    h: &HVector,
    method: MethodArg,
    w: Option<&Window>,
) -> Result<CoveringCertificate> {
    let t = &file.tuple;
    let mut cert = match resolve(t, method)? {
        MethodArg::Finite => {
            require_kind(
                t,
                |c| matches!(c, ColorClass::Finite(_)),
                "finite",
                "finite",
            )?;
            chromatic_finite_cover(t, r, h)?
        }
        MethodArg::Submonoid => {
            require_kind(
                t,
                |c| matches!(c, ColorClass::TranslatedMonoid { .. }),
                "submonoid",
                "translated_monoid",
            )?;
            submonoid_exact_cover(t, r, h)?
        }
        MethodArg::FinitePlusMonoid => {
            require_kind(
                t,
                |c| matches!(c, ColorClass::FinitePlusMonoid { .. }),
                "finite-plus-monoid",
                "finite_plus_monoid",
            )?;
            finite_plus_monoid_cover(t, r, h)?
        }
        MethodArg::Semilinear => {
            require_kind(
                t,
                |c| matches!(c, ColorClass::Semilinear(_)),
                "semilinear",
                "semilinear",
            )?;
            chromatic_semilinear_cover(t, r, h)?
        }
        MethodArg::ApproxSubmonoid => {
            let colors = file
                .approx_colors()
                .map_err(|e| fail(USAGE, e.to_string()))?;
            approx_submonoid_cover(t.ambient(), &colors, r, h, w)?
        }
        MethodArg::Inhomogeneous => {
            let shift = file.shift.as_ref().ok_or_else(|| {
                fail(
                    USAGE,
                    "method inhomogeneous needs a `shift` entry in the tuple file",
                )
            })?;
            let base = build(file, r, h, MethodArg::Auto, w)?;
            inhomogeneous_cover(&base, shift, r)?
        }
        MethodArg::Auto => unreachable!("resolved above"),
    };
    if let Some(w) = w {
        cert.window = Some(w.clone());
    }
    Ok(cert)
}

pub fn cover(
    io: &Io,
    r: u64,
    h: &str,
    method: MethodArg,
    verify: bool,
    window: Option<&str>,
) -> Result<()> {
    let file = read_tuple(&io.input)?;
    let h = parse_h(h, &file.tuple)?;
    let w = window_for(&file.tuple, window)?;
    let mut cert = build(&file, r, &h, method, w.as_ref())?;
    if verify {
        let report = cert.verify()?;
        eprintln!("{report}");
    }
    emit_json(io.output.as_deref(), &certificate_to_json(&cert))?;
    if cert.status == Status::Failed {
        return Err(fail(VERIFICATION_FAILED, "verification failed"));
    }
    Ok(())
}

pub fn verify(io: &Io) -> Result<()> {
    let v = read_json(&io.input)?;
    let mut cert = certificate_from_json(&v)
        .with_context(|| format!("reading certificate from {}", io.input.display()))?;
    let report = cert.verify()?;
    eprintln!("{report}");
    let mut out = certificate_to_json(&cert);
    out["report"] = report_to_json(cert.tuple.ambient(), &report);
    emit_json(io.output.as_deref(), &out)?;
    if cert.status != Status::Verified {
        return Err(fail(VERIFICATION_FAILED, "verification failed"));
    }
    Ok(())
}

/// Decomposes the layer after shifting the tuple to minimum 0; for a
/// normalized tuple this is the plain decomposition with `H = Σ h_i max A_i`.
pub fn layer_structure_of(
    t: &ColorTuple,
    h: &HVector,
    thr: u64,
    layer: &FiniteSet,
) -> Result<LayerStructure> {
    let colors = t.finite_colors()?;
    let (mut lo, mut hi) = (0i64, 0i64);
    for (c, &hi_c) in colors.iter().zip(h.entries()) {
        let v = c.to_ints().expect("integer tuple");
        lo += v[0] * hi_c as i64;
        hi += v[v.len() - 1] * hi_c as i64;
    }
    let shifted = FiniteSet::integers(
        layer
            .to_ints()
            .expect("integer layer")
            .into_iter()
            .map(|n| n - lo),
    )?;
    Ok(LayerStructure {
        h: h.clone(),
        threshold: thr,
        decomposition: decompose_layer(&shifted, hi - lo)?,
    })
}

pub fn layers(io: &Io, h: &str, thr: u64, structure: bool) -> Result<()> {
    if thr == 0 {
        return Err(fail(USAGE, "--t must be at least 1"));
    }
    let file = read_tuple(&io.input)?;
    let t = &file.tuple;
    let h = parse_h(h, t)?;
    let profile = representation_function(t, &h)?;
    let layer = FiniteSet::integers(profile.layer(thr))?;
    let mut out = json!({
        "h": h.entries(),
        "t": thr,
        "profile": profile_to_json(&profile)["counts"],
        "layer": set_to_json(&layer),
    });
    if structure {
        out["structure"] = layer_report_to_json(&layer_structure_of(t, &h, thr, &layer)?);
    }
    emit_json(io.output.as_deref(), &out)
}
