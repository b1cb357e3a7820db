//! JSON encodings of elements, tuples, certificates and layer reports.
//!
//! Elements of `Z` are bare integers, elements of `Z^d` are arrays, and
//! anything with torsion is `{"free": [..], "torsion": [..]}`.

use serde_json::{json, Map, Value};

use crate::covering::{ApproxColor, CoveringCertificate, Inclusion, Method, Status};
use crate::error::{Error, Result};
use crate::group::{AmbientGroup, Element};
use crate::layers::{LayerStructure, RepProfile};
use crate::oracle::VerificationReport;
use crate::set_model::{
    ColorClass, ColorTuple, FiniteSet, HVector, LinearSet, MonoidDesc, SemilinearSet, Window,
};

fn bad(msg: impl Into<String>) -> Error {
    Error::Structural(msg.into())
}

fn field<'a>(obj: &'a Value, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| bad(format!("missing field `{key}`")))
}

fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| bad(format!("{what} must be an integer, got {v}")))
}

fn as_u64(v: &Value, what: &str) -> Result<u64> {
    v.as_u64()
        .ok_or_else(|| bad(format!("{what} must be a nonnegative integer, got {v}")))
}

fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| bad(format!("{what} must be an array")))
}

fn int_list(v: &Value, what: &str) -> Result<Vec<i64>> {
    as_array(v, what)?.iter().map(|x| as_i64(x, what)).collect()
}

/// Large counts are written as strings once they no longer fit a JSON integer.
pub fn big_to_json(v: u128) -> Value {
    match u64::try_from(v) {
        Ok(small) => json!(small),
        Err(_) => json!(v.to_string()),
    }
}

pub fn big_from_json(v: &Value) -> Result<u128> {
    match v {
        Value::String(s) => s
            .parse()
            .map_err(|_| bad(format!("`{s}` is not a nonnegative integer"))),
        other => Ok(as_u64(other, "bound")? as u128),
    }
}

pub fn element_to_json(g: &AmbientGroup, x: &Element) -> Value {
    if g.torsion_moduli().is_empty() {
        if g.free_rank() == 1 {
            json!(x.free()[0])
        } else {
            json!(x.free())
        }
    } else {
        json!({ "free": x.free(), "torsion": x.torsion() })
    }
}

pub fn element_from_json(g: &AmbientGroup, v: &Value) -> Result<Element> {
    match v {
        Value::Number(_)
            if g.is_integers() || (g.free_rank() == 0 && g.torsion_moduli().len() == 1) =>
        {
            g.int(as_i64(v, "element")?)
        }
        Value::Array(_) if g.torsion_moduli().is_empty() => {
            g.element(&int_list(v, "element")?, &[])
        }
        Value::Object(_) => g.element(
            &int_list(v.get("free").unwrap_or(&json!([])), "free part")?,
            &int_list(v.get("torsion").unwrap_or(&json!([])), "torsion part")?,
        ),
        other => Err(bad(format!("`{other}` is not an element of this group"))),
    }
}

pub fn set_to_json(s: &FiniteSet) -> Value {
    Value::Array(s.iter().map(|x| element_to_json(s.ambient(), x)).collect())
}

pub fn set_from_json(g: &AmbientGroup, v: &Value) -> Result<FiniteSet> {
    let elems = as_array(v, "element list")?
        .iter()
        .map(|x| element_from_json(g, x))
        .collect::<Result<Vec<_>>>()?;
    FiniteSet::new(g.clone(), elems)
}

fn elements_from_json(g: &AmbientGroup, v: &Value) -> Result<Vec<Element>> {
    as_array(v, "element list")?
        .iter()
        .map(|x| element_from_json(g, x))
        .collect()
}

fn elements_to_json(g: &AmbientGroup, xs: &[Element]) -> Value {
    Value::Array(xs.iter().map(|x| element_to_json(g, x)).collect())
}

pub fn ambient_to_json(g: &AmbientGroup) -> Value {
    json!({ "free_rank": g.free_rank(), "torsion": g.torsion_moduli() })
}

pub fn ambient_from_json(v: &Value) -> Result<AmbientGroup> {
    let rank = as_u64(field(v, "free_rank")?, "free_rank")? as usize;
    let torsion = match v.get("torsion") {
        Some(t) => int_list(t, "torsion")?,
        None => Vec::new(),
    };
    AmbientGroup::new(rank, &torsion)
}

pub fn color_to_json(g: &AmbientGroup, c: &ColorClass) -> Value {
    match c {
        ColorClass::Finite(s) => json!({ "kind": "finite", "elements": set_to_json(s) }),
        ColorClass::Semilinear(s) => {
            let pieces: Vec<Value> = s
                .pieces
                .iter()
                .map(|p| {
                    let mut obj = Map::new();
                    obj.insert("base".into(), element_to_json(g, &p.base));
                    obj.insert("generators".into(), elements_to_json(g, &p.generators));
                    if let Some(b) = &p.bounds {
                        obj.insert("bounds".into(), json!(b));
                    }
                    Value::Object(obj)
                })
                .collect();
            json!({ "kind": "semilinear", "pieces": pieces })
        }
        ColorClass::FinitePlusMonoid { core, monoid } => json!({
            "kind": "finite_plus_monoid",
            "core": set_to_json(core),
            "monoid": elements_to_json(g, &monoid.generators),
        }),
        ColorClass::TranslatedMonoid { base, monoid } => json!({
            "kind": "translated_monoid",
            "base": element_to_json(g, base),
            "monoid": elements_to_json(g, &monoid.generators),
        }),
    }
}

pub fn color_from_json(g: &AmbientGroup, v: &Value) -> Result<ColorClass> {
    let kind = field(v, "kind")?
        .as_str()
        .ok_or_else(|| bad("color `kind` must be a string"))?;
    Ok(match kind {
        "finite" => ColorClass::Finite(set_from_json(g, field(v, "elements")?)?),
        "semilinear" => {
            let pieces = as_array(field(v, "pieces")?, "pieces")?
                .iter()
                .map(|p| {
                    let base = element_from_json(g, field(p, "base")?)?;
                    let gens = elements_from_json(g, field(p, "generators")?)?;
                    match p.get("bounds") {
                        None | Some(Value::Null) => Ok(LinearSet::unbounded(base, gens)),
                        Some(b) => {
                            let bounds = as_array(b, "bounds")?
                                .iter()
                                .map(|x| as_u64(x, "bound"))
                                .collect::<Result<Vec<_>>>()?;
                            LinearSet::bounded(base, gens, bounds)
                        }
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            ColorClass::Semilinear(SemilinearSet::new(pieces)?)
        }
        "finite_plus_monoid" => ColorClass::FinitePlusMonoid {
            core: set_from_json(g, field(v, "core")?)?,
            monoid: MonoidDesc::new(elements_from_json(g, field(v, "monoid")?)?),
        },
        "translated_monoid" => ColorClass::TranslatedMonoid {
            base: element_from_json(g, field(v, "base")?)?,
            monoid: MonoidDesc::new(elements_from_json(g, field(v, "monoid")?)?),
        },
        other => return Err(bad(format!("unknown color kind `{other}`"))),
    })
}

pub fn tuple_to_json(t: &ColorTuple) -> Value {
    let colors: Vec<Value> = t
        .colors()
        .iter()
        .map(|c| color_to_json(t.ambient(), c))
        .collect();
    json!({ "ambient": ambient_to_json(t.ambient()), "colors": colors })
}

pub fn tuple_from_json(v: &Value) -> Result<ColorTuple> {
    let g = ambient_from_json(field(v, "ambient")?)?;
    let colors = as_array(field(v, "colors")?, "colors")?
        .iter()
        .map(|c| color_from_json(&g, c))
        .collect::<Result<Vec<_>>>()?;
    ColorTuple::new(g, colors)
}

/// A tuple file with its optional extras: per-color witness sets `F_i`
/// (for approximate submonoids) and a shift set `B` (for inhomogeneous covers).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleFile {
    pub tuple: ColorTuple,
    pub witnesses: Option<Vec<FiniteSet>>,
    pub shift: Option<FiniteSet>,
}

impl TupleFile {
    /// The colors as `a_i + M_i` with witnesses `F_i`: a translated monoid
    /// splits into its base and monoid, any other class is taken with base 0.
    pub fn approx_colors(&self) -> Result<Vec<ApproxColor>> {
        let witnesses = self
            .witnesses
            .as_ref()
            .ok_or_else(|| bad("approximate submonoid covers need a `witnesses` entry"))?;
        if witnesses.len() != self.tuple.len() {
            return Err(bad("`witnesses` needs one set per color"));
        }
        let g = self.tuple.ambient();
        Ok(self
            .tuple
            .colors()
            .iter()
            .zip(witnesses)
            .map(|(c, w)| match c {
                ColorClass::TranslatedMonoid { base, monoid } => ApproxColor {
                    base: base.clone(),
                    body: ColorClass::TranslatedMonoid {
                        base: g.zero(),
                        monoid: monoid.clone(),
                    },
                    witness: w.clone(),
                },
                other => ApproxColor {
                    base: g.zero(),
                    body: other.clone(),
                    witness: w.clone(),
                },
            })
            .collect())
    }
}

pub fn tuple_file_from_json(v: &Value) -> Result<TupleFile> {
    let tuple = tuple_from_json(v)?;
    let g = tuple.ambient();
    let witnesses = match v.get("witnesses") {
        None | Some(Value::Null) => None,
        Some(w) => Some(
            as_array(w, "witnesses")?
                .iter()
                .map(|s| set_from_json(g, s))
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    let shift = match v.get("shift") {
        None | Some(Value::Null) => None,
        Some(s) => Some(set_from_json(g, s)?),
    };
    Ok(TupleFile {
        tuple,
        witnesses,
        shift,
    })
}

pub fn window_to_json(w: &Window) -> Value {
    Value::Array(w.bounds().iter().map(|&(lo, hi)| json!([lo, hi])).collect())
}

pub fn window_from_json(v: &Value) -> Result<Window> {
    let bounds = as_array(v, "window")?
        .iter()
        .map(|b| {
            let pair = int_list(b, "window bound")?;
            match pair.as_slice() {
                &[lo, hi] => Ok((lo, hi)),
                _ => Err(bad("window bounds are [lo, hi] pairs")),
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Window::new(bounds)
}

pub fn h_to_json(h: &HVector) -> Value {
    json!(h.entries())
}

pub fn h_from_json(v: &Value) -> Result<HVector> {
    Ok(HVector::new(
        as_array(v, "h")?
            .iter()
            .map(|x| as_u64(x, "h entry"))
            .collect::<Result<_>>()?,
    ))
}

pub fn certificate_to_json(cert: &CoveringCertificate) -> Value {
    let mut obj = Map::new();
    obj.insert("method".into(), json!(cert.method.as_str()));
    obj.insert("r".into(), json!(cert.r));
    obj.insert("h".into(), h_to_json(&cert.h));
    obj.insert("X".into(), set_to_json(&cert.cover));
    if let Some(w) = &cert.window {
        obj.insert("window".into(), window_to_json(w));
    }
    obj.insert("bound".into(), big_to_json(cert.bound));
    obj.insert("status".into(), json!(cert.status.as_str()));
    obj.insert("size".into(), json!(cert.size()));
    match &cert.inclusion {
        Inclusion::Chromatic => {}
        Inclusion::Layer { threshold } => {
            obj.insert("threshold".into(), json!(threshold));
        }
        Inclusion::Inhomogeneous { shift } => {
            obj.insert("shift".into(), set_to_json(shift));
        }
    }
    obj.insert("tuple".into(), tuple_to_json(&cert.tuple));
    Value::Object(obj)
}

pub fn certificate_from_json(v: &Value) -> Result<CoveringCertificate> {
    let tuple = tuple_from_json(field(v, "tuple")?)?;
    let g = tuple.ambient().clone();
    let method = Method::parse(
        field(v, "method")?
            .as_str()
            .ok_or_else(|| bad("`method` must be a string"))?,
    )?;
    let r = as_u64(field(v, "r")?, "r")?;
    let h = h_from_json(field(v, "h")?)?;
    tuple.check_h(&h)?;
    let inclusion = match (v.get("threshold"), v.get("shift")) {
        (Some(t), None) => Inclusion::Layer {
            threshold: as_u64(t, "threshold")?,
        },
        (None, Some(s)) => Inclusion::Inhomogeneous {
            shift: set_from_json(&g, s)?,
        },
        (None, None) => Inclusion::Chromatic,
        (Some(_), Some(_)) => {
            return Err(bad(
                "a certificate has either `threshold` or `shift`, not both",
            ))
        }
    };
    let window = match v.get("window") {
        None | Some(Value::Null) => None,
        Some(w) => Some(window_from_json(w)?),
    };
    let status = Status::parse(
        field(v, "status")?
            .as_str()
            .ok_or_else(|| bad("`status` must be a string"))?,
    )?;
    Ok(CoveringCertificate {
        method,
        cover: set_from_json(&g, field(v, "X")?)?,
        tuple,
        r,
        h,
        inclusion,
        window,
        bound: big_from_json(field(v, "bound")?)?,
        status,
    })
}

pub fn layer_report_to_json(s: &LayerStructure) -> Value {
    let d = &s.decomposition;
    let (c, dd) = match d.run {
        Some((c, dd)) => (json!(c), json!(dd)),
        None => (Value::Null, Value::Null),
    };
    json!({
        "h": h_to_json(&s.h),
        "t": s.threshold,
        "H": d.max_sum,
        "C": d.below,
        "c": c,
        "d": dd,
        "D": d.above,
        "stabilized": d.stabilized(),
    })
}

pub fn profile_to_json(p: &RepProfile) -> Value {
    let counts: Vec<Value> = p
        .counts
        .iter()
        .map(|(&n, &c)| json!([n, big_to_json(c)]))
        .collect();
    json!({ "h": h_to_json(&p.h), "counts": counts })
}

pub fn report_to_json(g: &AmbientGroup, r: &VerificationReport) -> Value {
    let mut obj = Map::new();
    obj.insert("inclusion".into(), json!(r.inclusion));
    if let Some(w) = &r.window {
        obj.insert("window".into(), window_to_json(w));
    }
    obj.insert("passed".into(), json!(r.passed));
    if let Some(x) = &r.counterexample {
        obj.insert("counterexample".into(), element_to_json(g, x));
    }
    obj.insert("lhs_count".into(), json!(r.lhs_count));
    obj.insert("rhs_count".into(), json!(r.rhs_count));
    if let Some(e) = r.equality {
        obj.insert("equality".into(), json!(e));
    }
    Value::Object(obj)
}
