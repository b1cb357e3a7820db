use crate::error::{Error, Result};
use crate::group::{AmbientGroup, Element};
use crate::oracle::verify_cover;
use crate::set_model::{
    member_up_to_bound, refine_to_unbounded, ColorClass, ColorTuple, FiniteSet, HVector,
    SemilinearSet, Window,
};
use crate::sumset::{h_fold, minkowski_sum};

use super::lattice::shell_threshold;
use super::{
    binomial, check_r, finite_set_cover, lambda_bound, lift_colorwise, positive_shell_cover,
    product_bound, CoveringCertificate, Inclusion, Method,
};

fn scaled_sum(
    g: &AmbientGroup,
    coeffs: impl IntoIterator<Item = (u64, Element)>,
) -> Result<Element> {
    let mut acc = g.zero();
    for (c, x) in coeffs {
        let c = i64::try_from(c).map_err(|_| Error::structural("coefficient too large"))?;
        acc = g.add(&acc, &g.scale(c, &x)?)?;
    }
    Ok(acc)
}

/// Translated submonoids `a_i + M_i`: the singleton `{(r-1) sum h_i a_i}` covers
/// with equality.
pub fn submonoid_exact_cover(t: &ColorTuple, r: u64, h: &HVector) -> Result<CoveringCertificate> {
    check_r(r)?;
    t.check_h(h)?;
    let g = t.ambient();
    let mut terms = Vec::with_capacity(t.len());
    for (c, &hi) in t.colors().iter().zip(h.entries()) {
        match c {
            ColorClass::TranslatedMonoid { base, .. } => terms.push(((r - 1) * hi, base.clone())),
            other => {
                return Err(Error::unsupported(format!(
                    "submonoid cover needs translated monoids, found {}",
                    other.kind()
                )))
            }
        }
    }
    let x = scaled_sum(g, terms)?;
    let cover = FiniteSet::new(g.clone(), [x])?;
    Ok(CoveringCertificate::new(
        Method::Submonoid,
        t.clone(),
        r,
        h.clone(),
        cover,
        1,
    ))
}

/// One color `a + M` where `M` is only approximately closed: `M + M ⊆ F + M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxColor {
    pub base: Element,
    /// The set `M`; must contain 0.
    pub body: ColorClass,
    /// The witness `F`.
    pub witness: FiniteSet,
}

/// Colors `a_i + M_i` with `M_i + M_i ⊆ F_i + M_i`; the cover is
/// `sum_i ((r-1)h_i a_i + (r-1)h_i F_i)`.
///
/// The witness inclusions are checked first (inside `window` when some `M_i`
/// is infinite).
pub fn approx_submonoid_cover(
    ambient: &AmbientGroup,
    colors: &[ApproxColor],
    r: u64,
    h: &HVector,
    window: Option<&Window>,
) -> Result<CoveringCertificate> {
    check_r(r)?;
    if colors.len() != h.len() {
        return Err(Error::structural("one h entry per color is required"));
    }
    let mut classes = Vec::with_capacity(colors.len());
    let mut covers = Vec::with_capacity(colors.len());
    let mut factors = Vec::new();
    for (i, (c, &hi)) in colors.iter().zip(h.entries()).enumerate() {
        if c.witness.is_empty() {
            return Err(Error::InvalidWitness(format!(
                "color {i}: empty witness set"
            )));
        }
        check_witness(ambient, i, c, window)?;
        classes.push(c.body.translate(ambient, &c.base)?);
        let s = (r - 1) * hi;
        let shift = ambient.scale(s as i64, &c.base)?;
        covers.push(h_fold(&c.witness, s)?.translate(&shift)?);
        if hi > 0 {
            let k = c.witness.len() as u64;
            factors.push(binomial(s + k - 1, k - 1));
        }
    }
    let tuple = ColorTuple::new(ambient.clone(), classes)?;
    let cover = lift_colorwise(&covers)?;
    let bound = product_bound(factors)?;
    let mut cert =
        CoveringCertificate::new(Method::ApproxSubmonoid, tuple, r, h.clone(), cover, bound);
    cert.window = window.cloned();
    Ok(cert)
}

fn check_witness(
    ambient: &AmbientGroup,
    i: usize,
    c: &ApproxColor,
    window: Option<&Window>,
) -> Result<()> {
    let body = ColorTuple::new(ambient.clone(), vec![c.body.clone()])?;
    let zero = ambient.zero();
    let has_zero = match &c.body {
        ColorClass::Finite(s) => s.contains(&zero),
        other => {
            let at_zero = Window::new(vec![(0, 0); ambient.free_rank()])?;
            member_up_to_bound(ambient, other, &zero, &at_zero)?
        }
    };
    if !has_zero {
        return Err(Error::InvalidWitness(format!(
            "color {i}: the set M does not contain 0"
        )));
    }
    if !body.all_finite() && window.is_none() {
        return Err(Error::unsupported(
            "checking an infinite witness inclusion needs a window",
        ));
    }
    // M + M ⊆ F + M is the covering inclusion with r = 2, h = 1.
    let report = verify_cover(&body, 2, &HVector::new(vec![1]), &c.witness, window)?;
    if !report.passed {
        return Err(Error::InvalidWitness(format!(
            "color {i}: M + M is not inside F + M{}",
            report
                .counterexample
                .map(|x| format!(" (counterexample {x})"))
                .unwrap_or_default()
        )));
    }
    Ok(())
}

/// Colors `F_i + M_i`: lift of the finite-set covers of the cores.
pub fn finite_plus_monoid_cover(
    t: &ColorTuple,
    r: u64,
    h: &HVector,
) -> Result<CoveringCertificate> {
    check_r(r)?;
    t.check_h(h)?;
    let mut covers = Vec::with_capacity(t.len());
    let mut factors = Vec::with_capacity(t.len());
    for (c, &hi) in t.colors().iter().zip(h.entries()) {
        let ColorClass::FinitePlusMonoid { core, .. } = c else {
            return Err(Error::unsupported(format!(
                "finite-plus-monoid cover needs F + M colors, found {}",
                c.kind()
            )));
        };
        covers.push(finite_set_cover(core, r, hi)?);
        factors.push(lambda_bound(r, core.len() as u64));
    }
    let cover = lift_colorwise(&covers)?;
    let bound = product_bound(factors)?;
    Ok(CoveringCertificate::new(
        Method::FinitePlusMonoid,
        t.clone(),
        r,
        h.clone(),
        cover,
        bound,
    ))
}

fn union_linear_parts(
    ambient: &AmbientGroup,
    a: &SemilinearSet,
    r: u64,
    h: u64,
    color: Option<usize>,
) -> Result<(FiniteSet, u128)> {
    if !a.is_refined() {
        return Err(Error::unsupported(
            "semilinear set has bounded pieces; refine it first",
        ));
    }
    let k = a.pieces.len() as u64;
    let required = shell_threshold(r, k);
    if h < required {
        return Err(Error::Threshold {
            color,
            required,
            got: h,
        });
    }
    let bases: Vec<Element> = a.pieces.iter().map(|p| p.base.clone()).collect();
    Ok((
        positive_shell_cover(ambient, &bases, r, h)?,
        lambda_bound(r, k)?,
    ))
}

/// One color, a union of `k` unbounded linear sets; needs `h >= r(k-1)^2 + k`.
pub fn union_linear_cover(
    ambient: &AmbientGroup,
    a: &SemilinearSet,
    r: u64,
    h: u64,
) -> Result<CoveringCertificate> {
    check_r(r)?;
    let (cover, bound) = union_linear_parts(ambient, a, r, h, None)?;
    let tuple = ColorTuple::new(ambient.clone(), vec![ColorClass::Semilinear(a.clone())])?;
    Ok(CoveringCertificate::new(
        Method::Semilinear,
        tuple,
        r,
        HVector::new(vec![h]),
        cover,
        bound,
    ))
}

/// Semilinear colors (bounded pieces are refined first); each `h_i` must meet
/// its color's threshold `r(s_i-1)^2 + s_i`.
pub fn chromatic_semilinear_cover(
    t: &ColorTuple,
    r: u64,
    h: &HVector,
) -> Result<CoveringCertificate> {
    check_r(r)?;
    t.check_h(h)?;
    let g = t.ambient();
    let mut covers = Vec::with_capacity(t.len());
    let mut factors = Vec::with_capacity(t.len());
    for (i, (c, &hi)) in t.colors().iter().zip(h.entries()).enumerate() {
        let ColorClass::Semilinear(s) = c else {
            return Err(Error::unsupported(format!(
                "semilinear cover needs semilinear colors, found {}",
                c.kind()
            )));
        };
        let refined = refine_to_unbounded(g, s)?;
        let (x, bound) = union_linear_parts(g, &refined, r, hi, Some(i))?;
        covers.push(x);
        factors.push(Ok(bound));
    }
    let cover = lift_colorwise(&covers)?;
    let bound = product_bound(factors)?;
    Ok(CoveringCertificate::new(
        Method::Semilinear,
        t.clone(),
        r,
        h.clone(),
        cover,
        bound,
    ))
}

/// `Y_h = X_h + Z` with `rB ⊆ Z + B`, covering `r(h·A + B)` by `Y_h + h·A + B`.
pub fn inhomogeneous_cover(
    base: &CoveringCertificate,
    b: &FiniteSet,
    r: u64,
) -> Result<CoveringCertificate> {
    if base.r != r {
        return Err(Error::structural(format!(
            "base certificate has r = {}, not {r}",
            base.r
        )));
    }
    if base.inclusion != Inclusion::Chromatic {
        return Err(Error::unsupported(
            "inhomogeneous covers extend plain chromatic certificates only",
        ));
    }
    if b.is_empty() {
        return Err(Error::structural("the shift set B must be nonempty"));
    }
    let z = finite_set_cover(b, r, 1)?;
    let cover = minkowski_sum(&base.cover, &z)?;
    let bound = product_bound([Ok(base.bound), lambda_bound(r, b.len() as u64)])?;
    let mut cert = CoveringCertificate::new(
        Method::Inhomogeneous,
        base.tuple.clone(),
        r,
        base.h.clone(),
        cover,
        bound,
    );
    cert.inclusion = Inclusion::Inhomogeneous { shift: b.clone() };
    cert.window = base.window.clone();
    Ok(cert)
}
