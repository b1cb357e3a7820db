//! Brute-force checks that share no code with the constructions they check.

mod brute;
mod set_cover;

use std::fmt;

use crate::covering::{CoveringCertificate, Inclusion};
use crate::error::{Error, Result};
use crate::group::{AmbientGroup, Element};
use crate::layers::threshold_layer;
use crate::set_model::{ColorTuple, FiniteSet, HVector, Window};
use crate::sumset::{
    chromatic_sumset, chromatic_sumset_window, h_fold, h_fold_below, minkowski_sum, sum_below,
};

pub use brute::{brute_rep_function, brute_rep_function_with};
pub use set_cover::{min_translate_cover, min_translate_cover_with};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerificationReport {
    /// The inclusion that was checked, in readable form.
    pub inclusion: String,
    pub window: Option<Window>,
    pub passed: bool,
    /// Least element of the left side missing from the right side.
    pub counterexample: Option<Element>,
    pub lhs_count: usize,
    pub rhs_count: usize,
    /// Whether both sides agree (inside the window, when there is one).
    pub equality: Option<bool>,
}

impl VerificationReport {
    fn compare(
        inclusion: String,
        window: Option<Window>,
        lhs: &FiniteSet,
        rhs: &FiniteSet,
    ) -> Self {
        let counterexample = lhs.iter().find(|x| !rhs.contains(x)).cloned();
        VerificationReport {
            inclusion,
            window,
            passed: counterexample.is_none(),
            counterexample,
            lhs_count: lhs.len(),
            rhs_count: rhs.len(),
            equality: Some(lhs == rhs),
        }
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: ", self.inclusion)?;
        match &self.counterexample {
            None => write!(
                f,
                "pass ({} <= {} elements)",
                self.lhs_count, self.rhs_count
            )?,
            Some(x) => write!(f, "FAIL at {x}")?,
        }
        if let Some(w) = &self.window {
            write!(f, " in window {w}")?;
        }
        Ok(())
    }
}

fn describe(lhs: &str, rhs: &str, r: u64, h: &HVector) -> String {
    format!("{lhs} ⊆ {rhs} with r = {r}, h = {h}")
}

/// The free parts of `x` lie in a box; returns its corners.
fn free_span(x: &FiniteSet) -> (Vec<i64>, Vec<i64>) {
    match (x.free_min(), x.free_max()) {
        (Some(lo), Some(hi)) => (lo, hi),
        _ => {
            let rank = x.ambient().free_rank();
            (vec![0; rank], vec![0; rank])
        }
    }
}

fn restrict(s: FiniteSet, w: Option<&Window>) -> FiniteSet {
    match w {
        Some(w) => s.filter(|x| w.contains(x)),
        None => s,
    }
}

fn require_window<'a>(t: &ColorTuple, w: Option<&'a Window>) -> Result<Option<&'a Window>> {
    if let Some(w) = w {
        w.check_rank(t.ambient())?;
    }
    if !t.all_finite() && w.is_none() {
        return Err(Error::unsupported(
            "structured tuples are only verified inside a window",
        ));
    }
    Ok(w)
}

/// `h·A ∩ [lo, hi]`, computed exactly.
fn sumset_in_box(t: &ColorTuple, h: &HVector, lo: &[i64], hi: &[i64]) -> Result<FiniteSet> {
    match Window::from_corners(lo, hi) {
        Some(b) => sumset_in(t, h, Some(&b)),
        None => Ok(FiniteSet::empty(t.ambient().clone())),
    }
}

fn sumset_in(t: &ColorTuple, h: &HVector, w: Option<&Window>) -> Result<FiniteSet> {
    match w {
        Some(w) if !t.all_finite() => chromatic_sumset_window(t, h, w),
        _ => Ok(restrict(chromatic_sumset(t, h)?, w)),
    }
}

/// Checks `(rh)·A ⊆ X + h·A`, inside `w` when given (and `w` is required for
/// structured tuples).
///
/// The right side is computed on the window widened by the extent of `X`, so
/// every `x - ξ` that could matter is present.
pub fn verify_cover(
    t: &ColorTuple,
    r: u64,
    h: &HVector,
    x: &FiniteSet,
    w: Option<&Window>,
) -> Result<VerificationReport> {
    t.check_h(h)?;
    if r == 0 {
        return Err(Error::structural("r must be at least 1"));
    }
    let w = require_window(t, w)?;
    let lhs = sumset_in(t, &h.scaled(r), w)?;
    let base = match w {
        Some(w) => {
            let (xlo, xhi) = free_span(x);
            let wide = w.widened(&xlo, &xhi);
            sumset_in_box(t, h, &wide.lo(), &wide.hi())?
        }
        None => chromatic_sumset(t, h)?,
    };
    let rhs = restrict(minkowski_sum(x, &base)?, w);
    Ok(VerificationReport::compare(
        describe("(rh)·A", "X + h·A", r, h),
        w.cloned(),
        &lhs,
        &rhs,
    ))
}

/// Checks `((rh)·A)^(t) ⊆ X + (h·A)^(t)` over `Z`.
pub fn verify_layer_cover(
    t: &ColorTuple,
    thr: u64,
    r: u64,
    h: &HVector,
    x: &FiniteSet,
) -> Result<VerificationReport> {
    let lhs = threshold_layer(t, &h.scaled(r), thr)?;
    let rhs = minkowski_sum(x, &threshold_layer(t, h, thr)?)?;
    let mut report = VerificationReport::compare(
        describe(
            &format!("((rh)·A)^({thr})"),
            &format!("X + (h·A)^({thr})"),
            r,
            h,
        ),
        None,
        &lhs,
        &rhs,
    );
    report.equality = None;
    Ok(report)
}

/// Checks `r(h·A + B) ⊆ Y + h·A + B`, inside `w` when given.
pub fn verify_inhomogeneous(
    t: &ColorTuple,
    b: &FiniteSet,
    r: u64,
    h: &HVector,
    y: &FiniteSet,
    w: Option<&Window>,
) -> Result<VerificationReport> {
    t.check_h(h)?;
    if r == 0 {
        return Err(Error::structural("r must be at least 1"));
    }
    let w = require_window(t, w)?;
    let (lhs, rhs) = match w {
        None => {
            let s = minkowski_sum(&chromatic_sumset(t, h)?, b)?;
            (h_fold(&s, r)?, minkowski_sum(y, &s)?)
        }
        Some(w) => {
            let rank = t.ambient().free_rank();
            let (blo, bhi) = free_span(b);
            let (ylo, yhi) = free_span(y);
            let sum_lb: Vec<i64> = (0..rank)
                .map(|j| {
                    t.colors()
                        .iter()
                        .zip(h.entries())
                        .map(|(c, &hi)| c.free_lower_bound()[j] * hi as i64)
                        .sum()
                })
                .collect();
            let s_lb: Vec<i64> = (0..rank).map(|j| sum_lb[j] + blo[j]).collect();
            // r-fold sums landing in w only use summands of S below hi - (r-1)·lb(S).
            let s_hi: Vec<i64> = (0..rank)
                .map(|j| w.hi()[j] - (r as i64 - 1) * s_lb[j])
                .collect();
            let a_hi: Vec<i64> = (0..rank).map(|j| s_hi[j] - blo[j]).collect();
            let s = sum_below(&sumset_in_box(t, h, &sum_lb, &a_hi)?, b, Some(&s_hi))?;
            let lhs = h_fold_below(&s, r, &s_lb, &w.hi())?.filter(|x| w.contains(x));

            let lo: Vec<i64> = (0..rank).map(|j| w.lo()[j] - yhi[j] - bhi[j]).collect();
            let hi: Vec<i64> = (0..rank).map(|j| w.hi()[j] - ylo[j] - blo[j]).collect();
            let s = minkowski_sum(&sumset_in_box(t, h, &lo, &hi)?, b)?;
            let rhs = minkowski_sum(y, &s)?.filter(|x| w.contains(x));
            (lhs, rhs)
        }
    };
    Ok(VerificationReport::compare(
        describe("r(h·A + B)", "Y + h·A + B", r, h),
        w.cloned(),
        &lhs,
        &rhs,
    ))
}

/// Checks `Σ_{rh}(f) ⊆ X + Σ_h^+(f)`, where `Σ_h(f)` collects the sums
/// `Σ c_i f_i` with `c_i >= 0`, `Σ c_i = h`, and `Σ_h^+` additionally has `c_i >= 1`.
pub fn verify_shell_cover(
    ambient: &AmbientGroup,
    f: &[Element],
    r: u64,
    h: u64,
    x: &FiniteSet,
) -> Result<VerificationReport> {
    let k = f.len() as u64;
    if k == 0 || h < k {
        return Err(Error::structural("positive shells need 1 <= k <= h"));
    }
    let set = FiniteSet::new(ambient.clone(), f.iter().cloned())?;
    let lhs = h_fold(&set, r * h)?;
    let mut all_once = ambient.zero();
    for fi in f {
        all_once = ambient.add(&all_once, fi)?;
    }
    let positive = h_fold(&set, h - k)?.translate(&all_once)?;
    let rhs = minkowski_sum(x, &positive)?;
    Ok(VerificationReport::compare(
        format!("Σ_(rh)(f) ⊆ X + Σ_h^+(f) with r = {r}, h = {h}"),
        None,
        &lhs,
        &rhs,
    ))
}

/// Re-runs the inclusion a certificate claims.
pub fn verify_certificate(cert: &CoveringCertificate) -> Result<VerificationReport> {
    let w = cert.window.as_ref();
    match &cert.inclusion {
        Inclusion::Chromatic => verify_cover(&cert.tuple, cert.r, &cert.h, &cert.cover, w),
        Inclusion::Layer { threshold } => {
            verify_layer_cover(&cert.tuple, *threshold, cert.r, &cert.h, &cert.cover)
        }
        Inclusion::Inhomogeneous { shift } => {
            verify_inhomogeneous(&cert.tuple, shift, cert.r, &cert.h, &cert.cover, w)
        }
    }
}
