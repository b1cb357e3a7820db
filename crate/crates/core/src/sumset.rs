//! Minkowski sums, h-fold sumsets and chromatic sumsets.
//!
//! Over `Z` the sums go through a word-level bitset whenever the result span is
//! small relative to the number of pairs; otherwise pairs are summed directly.
//! Both routes produce the same sorted, deduplicated set.

use std::collections::BTreeSet;

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::group::{AmbientGroup, Element};
use crate::set_model::{enumerate_window, same_ambient, ColorTuple, FiniteSet, HVector, Window};

/// `X + Y`.
pub fn minkowski_sum(x: &FiniteSet, y: &FiniteSet) -> Result<FiniteSet> {
    sum_below(x, y, None)
}

/// `hA`, with `0A = {0}`. Computed by repeated doubling.
pub fn h_fold(a: &FiniteSet, h: u64) -> Result<FiniteSet> {
    let mut result = FiniteSet::zero(a.ambient().clone());
    let mut power = a.clone();
    let mut rest = h;
    while rest > 0 {
        if rest & 1 == 1 {
            result = minkowski_sum(&result, &power)?;
        }
        rest >>= 1;
        if rest > 0 {
            power = minkowski_sum(&power, &power)?;
        }
    }
    Ok(result)
}

/// `h_1 A_1 + ... + h_q A_q` for a tuple of finite colors.
pub fn chromatic_sumset(t: &ColorTuple, h: &HVector) -> Result<FiniteSet> {
    t.check_h(h)?;
    let colors = t.finite_colors()?;
    let mut acc = FiniteSet::zero(t.ambient().clone());
    for (color, &hi) in colors.iter().zip(h.entries()) {
        if hi > 0 {
            acc = minkowski_sum(&acc, &h_fold(color, hi)?)?;
        }
    }
    Ok(acc)
}

/// `(h . A) ∩ w` for any tuple satisfying the orthant restriction.
///
/// Every element of color `i` is at least its lower bound `m_i` coordinatewise,
/// so a sum landing below `hi(w)` only ever uses summands below
/// `hi(w) - (lower bounds of the remaining summands)`. Each color is enumerated
/// and folded inside that bound, which keeps the computation finite and exact.
pub fn chromatic_sumset_window(t: &ColorTuple, h: &HVector, w: &Window) -> Result<FiniteSet> {
    t.check_h(h)?;
    let ambient = t.ambient();
    w.check_rank(ambient)?;
    let rank = ambient.free_rank();
    let hi = w.hi();
    let lower: Vec<Vec<i64>> = t.colors().iter().map(|c| c.free_lower_bound()).collect();
    let contrib: Vec<Vec<i128>> = lower
        .iter()
        .zip(h.entries())
        .map(|(lb, &hc)| lb.iter().map(|&v| v as i128 * hc as i128).collect())
        .collect();
    let total: Vec<i128> = (0..rank)
        .map(|j| contrib.iter().map(|c| c[j]).sum())
        .collect();

    let mut processed = vec![0i128; rank];
    let mut acc = FiniteSet::zero(ambient.clone());
    for (i, color) in t.colors().iter().enumerate() {
        let hc = h.entries()[i];
        if hc == 0 {
            continue;
        }
        let lb = &lower[i];
        let color_upper: Vec<i64> = (0..rank)
            .map(|j| clamp(hi[j] as i128 - (total[j] - contrib[i][j])))
            .collect();
        let elem_upper: Vec<i64> = (0..rank)
            .map(|j| clamp(color_upper[j] as i128 - (hc as i128 - 1) * lb[j] as i128))
            .collect();
        let Some(elem_window) = Window::from_corners(lb, &elem_upper) else {
            return Ok(FiniteSet::empty(ambient.clone()));
        };
        let elems = enumerate_window(ambient, color, &elem_window)?;
        let folded = h_fold_below(&elems, hc, lb, &color_upper)?;
        for j in 0..rank {
            processed[j] += contrib[i][j];
        }
        let acc_upper: Vec<i64> = (0..rank)
            .map(|j| clamp(hi[j] as i128 - (total[j] - processed[j])))
            .collect();
        acc = sum_below(&acc, &folded, Some(&acc_upper))?;
    }
    Ok(acc.filter(|x| w.contains(x)))
}

fn clamp(v: i128) -> i64 {
    v.clamp((i64::MIN / 4) as i128, (i64::MAX / 4) as i128) as i64
}

/// `hA` restricted to sums below `upper`, where every element of `A` is at least `lower`.
pub(crate) fn h_fold_below(
    a: &FiniteSet,
    h: u64,
    lower: &[i64],
    upper: &[i64],
) -> Result<FiniteSet> {
    let mut acc = FiniteSet::zero(a.ambient().clone());
    for k in 1..=h {
        let remaining = (h - k) as i128;
        let bound: Vec<i64> = upper
            .iter()
            .zip(lower)
            .map(|(&u, &l)| clamp(u as i128 - remaining * l as i128))
            .collect();
        acc = sum_below(&acc, a, Some(&bound))?;
        if acc.is_empty() {
            break;
        }
    }
    Ok(acc)
}

/// `{x + y : x in X, y in Y, x + y <= upper}` (free coordinates, when given).
pub(crate) fn sum_below(x: &FiniteSet, y: &FiniteSet, upper: Option<&[i64]>) -> Result<FiniteSet> {
    same_ambient(x.ambient(), y.ambient())?;
    let ambient = x.ambient();
    if ambient.is_integers() {
        let xs = x.to_ints().expect("integer ambient");
        let ys = y.to_ints().expect("integer ambient");
        let vals = int_sum(&xs, &ys, upper.map(|u| u[0]), ambient.coord_limit())?;
        return ints_to_set(ambient, vals);
    }
    let mut out = BTreeSet::new();
    for a in x.iter() {
        for b in y.iter() {
            let s = ambient.add_unchecked(a, b)?;
            if upper.is_none_or(|u| s.free().iter().zip(u).all(|(v, m)| v <= m)) {
                out.insert(s);
            }
        }
    }
    Ok(FiniteSet::from_trusted(ambient.clone(), out))
}

pub(crate) fn ints_to_set(ambient: &AmbientGroup, vals: Vec<i64>) -> Result<FiniteSet> {
    let elements = vals
        .into_iter()
        .map(|v| ambient.int(v))
        .collect::<Result<BTreeSet<Element>>>()?;
    Ok(FiniteSet::from_trusted(ambient.clone(), elements))
}

/// Sorted sumset of two sorted integer lists, clipped above at `upper`.
pub(crate) fn int_sum(xs: &[i64], ys: &[i64], upper: Option<i64>, limit: i64) -> Result<Vec<i64>> {
    let (Some(&x0), Some(&y0)) = (xs.first(), ys.first()) else {
        return Ok(Vec::new());
    };
    let lo = x0 as i128 + y0 as i128;
    let mut hi = *xs.last().unwrap() as i128 + *ys.last().unwrap() as i128;
    if let Some(u) = upper {
        hi = hi.min(u as i128);
    }
    if hi < lo {
        return Ok(Vec::new());
    }
    for v in [lo, hi] {
        if v.abs() > limit as i128 {
            return Err(Error::Overflow { value: v, limit });
        }
    }
    let span = (hi - lo + 1) as u128;
    let y_span = (*ys.last().unwrap() as i128 - y0 as i128 + 1) as u128;
    let dense =
        span <= Capacity::global().dense_span as u128 && y_span / 64 <= 4 * ys.len() as u128 + 1;
    if !dense {
        let (lo, hi) = (lo as i64, hi as i64);
        let mut out: Vec<i64> = Vec::with_capacity(xs.len() * ys.len());
        for &a in xs {
            for &b in ys {
                let s = a + b;
                if s > hi {
                    break;
                }
                if s >= lo {
                    out.push(s);
                }
            }
        }
        out.sort_unstable();
        out.dedup();
        return Ok(out);
    }

    let span = span as usize;
    let mut ybits = vec![0u64; (y_span as usize).div_ceil(64)];
    for &b in ys {
        let p = (b - y0) as usize;
        ybits[p >> 6] |= 1 << (p & 63);
    }
    let mut res = vec![0u64; span.div_ceil(64)];
    for &a in xs {
        let shift = (a - x0) as usize;
        if shift >= span {
            break;
        }
        for (wi, &word) in ybits.iter().enumerate() {
            if word == 0 {
                continue;
            }
            let pos = wi * 64 + shift;
            let tw = pos >> 6;
            if tw >= res.len() {
                break;
            }
            let sb = pos & 63;
            res[tw] |= word << sb;
            if sb != 0 && tw + 1 < res.len() {
                res[tw + 1] |= word >> (64 - sb);
            }
        }
    }
    let base = lo as i64;
    let mut out = Vec::new();
    for (wi, &word) in res.iter().enumerate() {
        let mut w = word;
        while w != 0 {
            let b = w.trailing_zeros() as usize;
            let p = wi * 64 + b;
            if p >= span {
                break;
            }
            out.push(base + p as i64);
            w &= w - 1;
        }
    }
    Ok(out)
}
