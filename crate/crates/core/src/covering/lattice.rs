//! Lattice covers of simplices and the covers built from them.
//!
//! `Δ_d(R) ∩ Z^d` is covered by translates of the half-open simplex
//! `Δ_d(t)° ∩ Z^d`; a point `x` is caught by the translate indexed by
//! `m_i = floor(d x_i / t)`, namely `u_i = ceil(t m_i / d)`, and the index
//! vectors satisfy `sum m_i <= floor(dR/t)`.

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::group::{AmbientGroup, Element};
use crate::set_model::FiniteSet;

use super::{binomial, check_r};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplexCoverPlan {
    pub dimension: usize,
    pub radius: u64,
    pub tile: u64,
    /// `floor(dR/t)`.
    pub m_max: u64,
    /// Number of index vectors `m`, i.e. `C(m_max + d, d)`, before deduplication.
    pub index_count: u128,
    /// Distinct translates `u(m)`, sorted.
    pub translates: Vec<Vec<i64>>,
}

impl SimplexCoverPlan {
    /// The translate the construction assigns to `x`.
    pub fn assigned_translate(&self, x: &[i64]) -> Vec<i64> {
        let d = self.dimension as i64;
        let t = self.tile as i64;
        x.iter()
            .map(|&xi| {
                let m = (d * xi).div_euclid(t);
                (t * m + d - 1).div_euclid(d)
            })
            .collect()
    }

    /// Whether `x` lies in `u + (Δ_d(t)° ∩ Z^d)`.
    pub fn tile_contains(&self, u: &[i64], x: &[i64]) -> bool {
        let mut total = 0i64;
        for (&ui, &xi) in u.iter().zip(x) {
            if xi < ui {
                return false;
            }
            total += xi - ui;
        }
        total < self.tile as i64
    }
}

/// Enumerates `m` in `N_0^d` with `sum m <= m_max` in lexicographic order.
fn index_vectors(d: usize, m_max: u64, f: &mut impl FnMut(&[u64])) {
    fn rec(prefix: &mut Vec<u64>, d: usize, left: u64, f: &mut impl FnMut(&[u64])) {
        if prefix.len() == d {
            f(prefix);
            return;
        }
        for v in 0..=left {
            prefix.push(v);
            rec(prefix, d, left - v, f);
            prefix.pop();
        }
    }
    rec(&mut Vec::with_capacity(d), d, m_max, f);
}

pub fn simplex_lattice_cover(d: usize, radius: u64, tile: u64) -> Result<SimplexCoverPlan> {
    if d == 0 || radius == 0 || tile == 0 {
        return Err(Error::structural("simplex cover needs d, R, t >= 1"));
    }
    let m_max = d as u64 * radius / tile;
    let index_count = binomial(m_max + d as u64, d as u64)?;
    let limit = Capacity::global().window_points as u128;
    if index_count > limit {
        return Err(Error::Capacity {
            what: "simplex cover translates",
            needed: index_count,
            limit,
        });
    }
    let dd = d as u64;
    let mut translates = Vec::with_capacity(index_count as usize);
    index_vectors(d, m_max, &mut |m| {
        translates.push(
            m.iter()
                .map(|&mi| (tile * mi).div_ceil(dd) as i64)
                .collect::<Vec<i64>>(),
        );
    });
    translates.sort();
    translates.dedup();
    Ok(SimplexCoverPlan {
        dimension: d,
        radius,
        tile,
        m_max,
        index_count,
        translates,
    })
}

/// `Y_h ⊆ Z^k` with `rhB ⊆ Y_h + hB` for the standard basis `B`.
pub fn free_monochrome_cover(k: usize, r: u64, h: u64) -> Result<FiniteSet> {
    check_r(r)?;
    if k == 0 {
        return Err(Error::structural("free cover needs k >= 1"));
    }
    let g = AmbientGroup::free(k);
    if h == 0 {
        return Ok(FiniteSet::zero(g));
    }
    let top = to_i64((r - 1) as u128 * h as u128, &g)?;
    if k == 1 {
        return FiniteSet::new(g.clone(), [g.element(&[top], &[])?]);
    }
    let plan = simplex_lattice_cover(k - 1, r * h, h)?;
    // f(v) - (0, .., 0, h) = (v, (r-1)h - sum v)
    let points = plan
        .translates
        .iter()
        .map(|v| {
            let mut y = v.clone();
            y.push(top - v.iter().sum::<i64>());
            g.element(&y, &[])
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteSet::new(g, points)
}

fn to_i64(v: u128, g: &AmbientGroup) -> Result<i64> {
    if v > g.coord_limit() as u128 {
        Err(Error::Overflow {
            value: v as i128,
            limit: g.coord_limit(),
        })
    } else {
        Ok(v as i64)
    }
}

/// Projection of free-group points along `e_j -> a_j`.
fn project(ambient: &AmbientGroup, images: &[Element], ys: &FiniteSet) -> Result<FiniteSet> {
    ys.map(ambient, |y| ambient.combination(y.free(), images))
}

/// `X_h` with `r(hA) ⊆ X_h + hA` and `|X_h| <= λ_r(|A|)`.
///
/// The elements of `A` are taken in ascending order as the images of the basis.
pub fn finite_set_cover(a: &FiniteSet, r: u64, h: u64) -> Result<FiniteSet> {
    if a.is_empty() {
        return Err(Error::structural("finite_set_cover needs a nonempty set"));
    }
    let ys = free_monochrome_cover(a.len(), r, h)?;
    let images: Vec<Element> = a.iter().cloned().collect();
    project(a.ambient(), &images, &ys)
}

/// Shell threshold `r(k-1)^2 + k`.
pub fn shell_threshold(r: u64, k: u64) -> u64 {
    r * (k - 1) * (k - 1) + k
}

/// `X_h` with `Σ_{rh}(f) ⊆ X_h + Σ_h^+(f)` and `|X_h| <= λ_r(k)`.
pub fn positive_shell_cover(
    ambient: &AmbientGroup,
    f: &[Element],
    r: u64,
    h: u64,
) -> Result<FiniteSet> {
    check_r(r)?;
    for x in f {
        ambient.require(x)?;
    }
    let k = f.len();
    if k == 0 {
        return Err(Error::structural("positive shells need k >= 1"));
    }
    let required = shell_threshold(r, k as u64);
    if h < required {
        return Err(Error::Threshold {
            color: None,
            required,
            got: h,
        });
    }
    let free = AmbientGroup::free(k);
    let top = to_i64((r - 1) as u128 * h as u128, &free)?;
    if k == 1 {
        return FiniteSet::new(ambient.clone(), [ambient.scale(top, &f[0])?]);
    }
    let d = k - 1;
    let plan = simplex_lattice_cover(d, r * h, h - d as u64)?;
    debug_assert!(plan.m_max <= d as u64 * r);
    // f(v) - (1, .., 1, h - d) = (v - 1, rh - sum v - (h - d))
    let last_base = to_i64(r as u128 * h as u128, &free)? - (h as i64 - d as i64);
    let ys = plan
        .translates
        .iter()
        .map(|v| {
            let mut y: Vec<i64> = v.iter().map(|vi| vi - 1).collect();
            y.push(last_base - v.iter().sum::<i64>());
            free.element(&y, &[])
        })
        .collect::<Result<Vec<_>>>()?;
    let ys = FiniteSet::new(free, ys)?;
    project(ambient, f, &ys)
}
