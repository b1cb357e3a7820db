//! Chromatic sumsets of tuples of subsets of finitely generated abelian groups,
//! explicit covering certificates `(rh)·A ⊆ X + h·A`, threshold layers of
//! chromatic representation functions over `Z`, and brute-force oracles that
//! check all of it.

pub mod capacity;
pub mod covering;
pub mod error;
pub mod group;
pub mod io;
pub mod layers;
pub mod oracle;
pub mod set_model;
pub mod sumset;

pub use capacity::Capacity;
pub use covering::{CoveringCertificate, Inclusion, Method, Status};
pub use error::{Error, Result};
pub use group::{AffineMap, AmbientGroup, Element, Homomorphism};
pub use layers::{LayerDecomposition, LayerStructure, RepProfile, Stabilization};
pub use oracle::VerificationReport;
pub use set_model::{
    ColorClass, ColorTuple, FiniteSet, HVector, LinearSet, MonoidDesc, NormalizationRecord,
    SemilinearSet, Window,
};
