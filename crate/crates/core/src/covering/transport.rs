use crate::error::{Error, Result};
use crate::group::{Element, Homomorphism};
use crate::set_model::{ColorClass, ColorTuple, Window};

use super::{CoveringCertificate, Inclusion, Method, Status};

fn require_transportable(cert: &CoveringCertificate) -> Result<()> {
    if cert.status != Status::Verified {
        return Err(Error::structural(
            "only verified certificates can be transported",
        ));
    }
    if cert.inclusion != Inclusion::Chromatic {
        return Err(Error::unsupported(
            "only plain chromatic certificates can be transported",
        ));
    }
    Ok(())
}

/// Pushes a verified certificate through `φ`: `X' = φ(X)` for `φ(A_1), .., φ(A_q)`.
/// The result is re-verified in the target group.
pub fn transport_hom(
    cert: &CoveringCertificate,
    phi: &Homomorphism,
) -> Result<CoveringCertificate> {
    require_transportable(cert)?;
    if phi.source() != cert.tuple.ambient() {
        return Err(Error::structural(
            "homomorphism source differs from the certificate's group",
        ));
    }
    let target = phi.target();
    let colors = cert
        .tuple
        .finite_colors()?
        .into_iter()
        .map(|a| a.map(target, |x| phi.apply(x)).map(ColorClass::Finite))
        .collect::<Result<Vec<_>>>()?;
    let tuple = ColorTuple::new(target.clone(), colors)?;
    let cover = cert.cover.map(target, |x| phi.apply(x))?;
    CoveringCertificate::new(
        Method::HomImage,
        tuple,
        cert.r,
        cert.h.clone(),
        cover,
        cert.bound,
    )
    .verified()
}

/// Transports a verified certificate to `A'_i = d A_i + b_i`:
/// `X' = dX + (r-1) Σ h_i b_i`. The result is re-verified.
pub fn transport_affine(
    cert: &CoveringCertificate,
    d: i64,
    b: &[Element],
) -> Result<CoveringCertificate> {
    require_transportable(cert)?;
    if d < 1 {
        return Err(Error::structural("dilation must be positive"));
    }
    if b.len() != cert.tuple.len() {
        return Err(Error::structural(format!(
            "expected {} translation vectors, got {}",
            cert.tuple.len(),
            b.len()
        )));
    }
    let g = cert.tuple.ambient();
    let colors = cert
        .tuple
        .colors()
        .iter()
        .zip(b)
        .map(|(c, bi)| c.dilate_translate(g, d, bi))
        .collect::<Result<Vec<_>>>()?;
    let tuple = ColorTuple::new(g.clone(), colors)?;
    let mut beta = g.zero();
    for (bi, &hi) in b.iter().zip(cert.h.entries()) {
        let hi = i64::try_from(hi).map_err(|_| Error::structural("h entry too large"))?;
        beta = g.add(&beta, &g.scale(hi, bi)?)?;
    }
    let r = i64::try_from(cert.r).map_err(|_| Error::structural("r too large"))?;
    let cover = cert.cover.dilate_translate(d, &g.scale(r - 1, &beta)?)?;
    let mut out = CoveringCertificate::new(
        Method::AffineImage,
        tuple,
        cert.r,
        cert.h.clone(),
        cover,
        cert.bound,
    );
    if let Some(w) = &cert.window {
        // (rh)·A' = d (rh)·A + rβ
        let shift = g.scale(r, &beta)?;
        let bounds = w
            .bounds()
            .iter()
            .zip(shift.free())
            .map(|(&(lo, hi), &s)| (d * lo + s, d * hi + s))
            .collect();
        out.window = Some(Window::new(bounds)?);
    }
    out.verified()
}
