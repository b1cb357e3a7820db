//! Covering constructions and certificates.
//!
//! Every constructor returns an unverified [`CoveringCertificate`]; running
//! [`CoveringCertificate::verify`] hands it to the oracle, which recomputes
//! both sides of the covering inclusion from the tuple alone.

mod lattice;
mod structured;
mod transport;

use std::fmt;

use crate::error::{Error, Result};
use crate::oracle::{verify_certificate, VerificationReport};
use crate::set_model::{ColorTuple, FiniteSet, HVector, Window};
use crate::sumset::minkowski_sum;

pub use lattice::{
    finite_set_cover, free_monochrome_cover, positive_shell_cover, shell_threshold,
    simplex_lattice_cover, SimplexCoverPlan,
};
pub use structured::{
    approx_submonoid_cover, chromatic_semilinear_cover, finite_plus_monoid_cover,
    inhomogeneous_cover, submonoid_exact_cover, union_linear_cover, ApproxColor,
};
pub use transport::{transport_affine, transport_hom};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Finite,
    Submonoid,
    ApproxSubmonoid,
    FinitePlusMonoid,
    Semilinear,
    Inhomogeneous,
    Layer,
    HomImage,
    AffineImage,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Finite => "finite",
            Method::Submonoid => "submonoid",
            Method::ApproxSubmonoid => "approx-submonoid",
            Method::FinitePlusMonoid => "finite-plus-monoid",
            Method::Semilinear => "semilinear",
            Method::Inhomogeneous => "inhomogeneous",
            Method::Layer => "layer",
            Method::HomImage => "hom-image",
            Method::AffineImage => "affine-image",
        }
    }

    pub fn parse(s: &str) -> Result<Method> {
        [
            Method::Finite,
            Method::Submonoid,
            Method::ApproxSubmonoid,
            Method::FinitePlusMonoid,
            Method::Semilinear,
            Method::Inhomogeneous,
            Method::Layer,
            Method::HomImage,
            Method::AffineImage,
        ]
        .into_iter()
        .find(|m| m.as_str() == s)
        .ok_or_else(|| Error::structural(format!("unknown method `{s}`")))
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Which inclusion a certificate claims.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Inclusion {
    /// `(rh)·A ⊆ X + h·A`.
    Chromatic,
    /// `((rh)·A)^(t) ⊆ X + (h·A)^(t)` for the threshold layer `t`.
    Layer { threshold: u64 },
    /// `r(h·A + B) ⊆ X + h·A + B`.
    Inhomogeneous { shift: FiniteSet },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Unverified,
    Verified,
    Failed,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Unverified => "unverified",
            Status::Verified => "verified",
            Status::Failed => "failed",
        }
    }

    pub fn parse(s: &str) -> Result<Status> {
        match s {
            "unverified" => Ok(Status::Unverified),
            "verified" => Ok(Status::Verified),
            "failed" => Ok(Status::Failed),
            other => Err(Error::structural(format!("unknown status `{other}`"))),
        }
    }
}

/// A witness `X` for one covering inclusion at one `(r, h)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringCertificate {
    pub method: Method,
    pub tuple: ColorTuple,
    pub r: u64,
    pub h: HVector,
    pub cover: FiniteSet,
    pub inclusion: Inclusion,
    /// Verification window; required when the tuple has infinite colors.
    pub window: Option<Window>,
    /// The proved upper bound on `|X|`.
    pub bound: u128,
    pub status: Status,
}

impl CoveringCertificate {
    pub(crate) fn new(
        method: Method,
        tuple: ColorTuple,
        r: u64,
        h: HVector,
        cover: FiniteSet,
        bound: u128,
    ) -> Self {
        CoveringCertificate {
            method,
            tuple,
            r,
            h,
            cover,
            inclusion: Inclusion::Chromatic,
            window: None,
            bound,
            status: Status::Unverified,
        }
    }

    pub fn with_window(mut self, w: Window) -> Self {
        self.window = Some(w);
        self
    }

    pub fn size(&self) -> usize {
        self.cover.len()
    }

    pub fn within_bound(&self) -> bool {
        self.cover.len() as u128 <= self.bound
    }

    /// Submonoid certificates assert set equality, not just inclusion.
    pub fn claims_equality(&self) -> bool {
        self.method == Method::Submonoid
    }

    /// Runs the oracle and records the outcome in `status`.
    pub fn verify(&mut self) -> Result<VerificationReport> {
        let report = verify_certificate(self)?;
        self.status = if report.passed && (!self.claims_equality() || report.equality == Some(true))
        {
            Status::Verified
        } else {
            Status::Failed
        };
        Ok(report)
    }

    pub fn verified(mut self) -> Result<Self> {
        self.verify()?;
        Ok(self)
    }
}

/// `C(n, k)`, exact.
pub fn binomial(n: u64, k: u64) -> Result<u128> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 1..=k as u128 {
        // c * (n - k + i) is divisible by i at every step
        c = c
            .checked_mul(n as u128 - k as u128 + i)
            .ok_or(Error::Capacity {
                what: "binomial coefficient",
                needed: u128::MAX,
                limit: u128::MAX,
            })?
            / i;
    }
    Ok(c)
}

/// `λ_r(k) = C((r+1)(k-1), k-1)`.
pub fn lambda_bound(r: u64, k: u64) -> Result<u128> {
    if r == 0 || k == 0 {
        return Err(Error::structural("λ_r(k) needs r, k >= 1"));
    }
    binomial((r + 1) * (k - 1), k - 1)
}

pub(crate) fn product_bound(factors: impl IntoIterator<Item = Result<u128>>) -> Result<u128> {
    factors.into_iter().try_fold(1u128, |acc, f| {
        acc.checked_mul(f?).ok_or(Error::Capacity {
            what: "cover size bound",
            needed: u128::MAX,
            limit: u128::MAX,
        })
    })
}

pub(crate) fn check_r(r: u64) -> Result<()> {
    if r == 0 {
        Err(Error::structural("r must be at least 1"))
    } else {
        Ok(())
    }
}

/// Minkowski sum of per-color covers.
pub fn lift_colorwise(covers: &[FiniteSet]) -> Result<FiniteSet> {
    let (first, rest) = covers
        .split_first()
        .ok_or_else(|| Error::structural("lifting needs at least one per-color cover"))?;
    rest.iter()
        .try_fold(first.clone(), |acc, x| minkowski_sum(&acc, x))
}

/// Colorwise lift of the finite-set covers: `|X| <= prod λ_r(|A_i|)`.
pub fn chromatic_finite_cover(t: &ColorTuple, r: u64, h: &HVector) -> Result<CoveringCertificate> {
    check_r(r)?;
    t.check_h(h)?;
    let colors = t.finite_colors()?;
    let covers = colors
        .iter()
        .zip(h.entries())
        .map(|(a, &hi)| finite_set_cover(a, r, hi))
        .collect::<Result<Vec<_>>>()?;
    let cover = lift_colorwise(&covers)?;
    let bound = product_bound(colors.iter().map(|a| lambda_bound(r, a.len() as u64)))?;
    Ok(CoveringCertificate::new(
        Method::Finite,
        t.clone(),
        r,
        h.clone(),
        cover,
        bound,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vals(s: &FiniteSet) -> Vec<i64> {
        s.to_ints().unwrap()
    }

    #[test]
    fn lambda_examples() {
        for r in 1..6 {
            assert_eq!(lambda_bound(r, 1).unwrap(), 1);
        }
        assert_eq!(lambda_bound(2, 2).unwrap(), 3);
        assert_eq!(lambda_bound(1, 3).unwrap(), 6);
        assert_eq!(lambda_bound(2, 3).unwrap(), 15);
        assert!(lambda_bound(0, 3).is_err());
    }

    #[test]
    fn binomial_matches_pascal() {
        let mut row = vec![1u128];
        for n in 0..40u64 {
            for (k, &c) in row.iter().enumerate() {
                assert_eq!(binomial(n, k as u64).unwrap(), c);
            }
            let mut next = vec![1u128; row.len() + 1];
            for k in 1..row.len() {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
        }
    }

    #[test]
    fn lift_examples() {
        let a = FiniteSet::integers([0, 3]).unwrap();
        assert_eq!(lift_colorwise(std::slice::from_ref(&a)).unwrap(), a);
        let b = FiniteSet::integers([0, 2]).unwrap();
        assert_eq!(
            vals(&lift_colorwise(&[a.clone(), b]).unwrap()),
            vec![0, 2, 3, 5]
        );
        let zero = FiniteSet::integers([0]).unwrap();
        assert_eq!(lift_colorwise(&[zero, a.clone()]).unwrap(), a);
        assert!(lift_colorwise(&[]).is_err());
    }

    #[test]
    fn chromatic_finite_examples() {
        let t = ColorTuple::integers(&[&[0, 1]]).unwrap();
        let cert = chromatic_finite_cover(&t, 2, &HVector::new(vec![3]))
            .unwrap()
            .verified()
            .unwrap();
        assert_eq!(cert.status, Status::Verified);
        assert!(cert.size() <= 3);
        assert_eq!(cert.bound, 3);

        let t = ColorTuple::integers(&[&[0, 1], &[0, 2]]).unwrap();
        let cert = chromatic_finite_cover(&t, 2, &HVector::new(vec![3, 2]))
            .unwrap()
            .verified()
            .unwrap();
        assert_eq!(cert.status, Status::Verified);
        assert_eq!(cert.bound, 9);
        assert!(cert.within_bound());

        let cert = chromatic_finite_cover(&t, 2, &HVector::zero(2))
            .unwrap()
            .verified()
            .unwrap();
        assert_eq!(vals(&cert.cover), vec![0]);
        assert_eq!(cert.status, Status::Verified);
    }

    #[test]
    fn single_color_reduces_to_finite_set_cover() {
        let a = FiniteSet::integers([-2, 1, 3]).unwrap();
        let t = ColorTuple::finite(vec![a.clone()]).unwrap();
        for h in 0..5 {
            let cert = chromatic_finite_cover(&t, 3, &HVector::new(vec![h])).unwrap();
            assert_eq!(cert.cover, finite_set_cover(&a, 3, h).unwrap());
        }
    }

    #[test]
    fn method_names_round_trip() {
        for m in [
            Method::Finite,
            Method::ApproxSubmonoid,
            Method::FinitePlusMonoid,
            Method::AffineImage,
        ] {
            assert_eq!(Method::parse(m.as_str()).unwrap(), m);
        }
        assert!(Method::parse("bogus").is_err());
    }
}
