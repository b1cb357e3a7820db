use anyhow::Result;
use csl_core::capacity::Capacity;
use csl_core::layers::{
    box_points, first_stable, layer_cover_general, threshold_layer, LayerStructure,
};
use csl_core::oracle::min_translate_cover;
use csl_core::sumset::chromatic_sumset;
use csl_core::{ColorTuple, CoveringCertificate, Error, HVector, Status, Window};
use rayon::prelude::*;

use crate::commands::{build, emit, layer_structure_of, parse_list, read_tuple, window_for};
use crate::{fail, Io, MethodArg, UNSUPPORTED, USAGE};

#[derive(Debug, Default)]
struct Row {
    method: String,
    size: Option<usize>,
    bound: Option<u128>,
    oracle_min: Option<usize>,
    status: String,
    structure: Option<LayerStructure>,
}

fn status_of(err: &anyhow::Error) -> Result<String> {
    match err.downcast_ref::<Error>() {
        Some(Error::Threshold { .. }) => Ok("threshold".into()),
        Some(Error::NotReady(_)) => Ok("not-ready".into()),
        Some(Error::Capacity { .. }) | Some(Error::Overflow { .. }) => Ok("capacity".into()),
        _ => Err(anyhow::anyhow!("{err:#}")),
    }
}

fn bounds(s: &str, q: usize, what: &str) -> Result<Vec<u64>> {
    let v = parse_list(s, what)?;
    match v.len() {
        1 => Ok(vec![v[0]; q]),
        n if n == q => Ok(v),
        n => Err(fail(
            USAGE,
            format!("--{what} has {n} entries but the tuple has {q} colors"),
        )),
    }
}

/// Minimum translate cover size, skipped when the target is over the search limit.
fn oracle_min(s: &csl_core::FiniteSet, t: &csl_core::FiniteSet) -> Result<Option<usize>> {
    if s.is_empty() || t.is_empty() || s.len() > Capacity::global().min_cover {
        return Ok(None);
    }
    Ok(Some(min_translate_cover(s, t)?.len()))
}

fn certificate_row(
    cert: Result<CoveringCertificate>,
) -> Result<(Row, Option<CoveringCertificate>)> {
    match cert {
        Ok(mut cert) => {
            cert.verify()?;
            let row = Row {
                method: cert.method.as_str().into(),
                size: Some(cert.size()),
                bound: Some(cert.bound),
                status: cert.status.as_str().into(),
                ..Row::default()
            };
            Ok((row, Some(cert)))
        }
        Err(e) => Ok((
            Row {
                status: status_of(&e)?,
                ..Row::default()
            },
            None,
        )),
    }
}

fn cover_row(
    file: &csl_core::io::TupleFile,
    r: u64,
    h: &HVector,
    method: MethodArg,
    w: Option<&Window>,
) -> Result<Row> {
    let (mut row, cert) = certificate_row(build(file, r, h, method, w))?;
    if let Some(cert) = cert {
        if cert.tuple.all_finite() && method != MethodArg::Inhomogeneous {
            let t = &cert.tuple;
            row.oracle_min = oracle_min(
                &chromatic_sumset(t, &h.scaled(r))?,
                &chromatic_sumset(t, h)?,
            )?;
        }
    } else if row.method.is_empty() {
        row.method = "-".into();
    }
    Ok(row)
}

fn layer_row(t: &ColorTuple, thr: u64, r: u64, h: &HVector) -> Result<Row> {
    let (mut row, _) = certificate_row(layer_cover_general(t, thr, r, h).map_err(Into::into))?;
    row.method = "layer".into();
    let here = threshold_layer(t, h, thr)?;
    row.oracle_min = oracle_min(&threshold_layer(t, &h.scaled(r), thr)?, &here)?;
    row.structure = Some(layer_structure_of(t, h, thr, &here)?);
    Ok(row)
}

fn cell<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn scan(
    io: &Io,
    r: u64,
    thr: Option<u64>,
    h_min: &str,
    h_max: &str,
    method: MethodArg,
    window: Option<&str>,
) -> Result<()> {
    if r == 0 || thr == Some(0) {
        return Err(fail(USAGE, "--r and --t must be at least 1"));
    }
    let file = read_tuple(&io.input)?;
    let t = &file.tuple;
    let q = t.len();
    let lo = bounds(h_min, q, "h-min")?;
    let hi = bounds(h_max, q, "h-max")?;
    let w = window_for(t, window)?;
    if !t.all_finite() && w.is_none() {
        return Err(fail(
            UNSUPPORTED,
            "scans of structured colors need --window",
        ));
    }
    if thr.is_some() && !t.all_finite() {
        return Err(fail(UNSUPPORTED, "layer scans need finite colors"));
    }
    let points = box_points(&lo, &hi);
    let rows = points
        .par_iter()
        .map(|h| match thr {
            Some(thr) => layer_row(t, thr, r, h),
            None => cover_row(&file, r, h, method, w.as_ref()),
        })
        .collect::<Result<Vec<_>>>()?;

    let first = if thr.is_some() {
        let mut order: Vec<usize> = (0..points.len()).collect();
        order.sort_by(|&a, &b| {
            points[a]
                .total()
                .cmp(&points[b].total())
                .then_with(|| points[a].entries().cmp(points[b].entries()))
        });
        let ordered: Vec<_> = order
            .iter()
            .map(|&i| {
                (
                    &points[i],
                    &rows[i]
                        .structure
                        .as_ref()
                        .expect("layer rows carry structure")
                        .decomposition,
                )
            })
            .collect();
        first_stable(&ordered, &hi).map(|k| order[k])
    } else {
        None
    };

    let mut out = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = (1..=q).map(|i| format!("h{i}")).collect();
    header.extend(["method", "size", "bound", "oracle_min", "status"].map(String::from));
    if thr.is_some() {
        header.push("stabilized".into());
    }
    out.write_record(&header)?;
    for (i, (h, row)) in points.iter().zip(&rows).enumerate() {
        let mut rec: Vec<String> = h.entries().iter().map(u64::to_string).collect();
        rec.push(row.method.clone());
        rec.push(cell(row.size));
        rec.push(cell(row.bound));
        rec.push(cell(row.oracle_min));
        rec.push(row.status.clone());
        if let Some(s) = &row.structure {
            let flag = if first == Some(i) {
                "first"
            } else if s.stabilized() {
                "yes"
            } else {
                "no"
            };
            rec.push(flag.into());
        }
        out.write_record(&rec)?;
    }
    let bytes = out.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
    emit(io.output.as_deref(), &bytes)?;
    if rows.iter().any(|r| r.status == Status::Failed.as_str()) {
        eprintln!("some rows failed verification");
    }
    Ok(())
}
