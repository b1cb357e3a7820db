//! Chromatic representation functions over `Z` and their threshold layers.
//!
//! `r_{A,h}(n)` counts the ways to write `n` as a sum of `h_i` elements of
//! `A_i` for every color, where the summands of one color form a multiset.
//! The layer `(h·A)^(t)` collects the `n` with at least `t` representations.

use std::collections::BTreeMap;
use std::fmt;

use itertools::Itertools;

use crate::capacity::Capacity;
use crate::covering::{binomial, CoveringCertificate, Inclusion, Method};
use crate::error::{Error, Result};
use crate::group::AmbientGroup;
use crate::set_model::{is_normalized, normalize_tuple, ColorTuple, FiniteSet, HVector};

/// `n -> r_{A,h}(n)` on its support.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RepProfile {
    pub h: HVector,
    pub counts: BTreeMap<i64, u128>,
}

impl RepProfile {
    pub fn get(&self, n: i64) -> u128 {
        self.counts.get(&n).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u128 {
        self.counts.values().sum()
    }

    pub fn max_count(&self) -> u128 {
        self.counts.values().copied().max().unwrap_or(0)
    }

    /// The `n` with at least `thr` representations, ascending.
    pub fn layer(&self, thr: u64) -> Vec<i64> {
        self.counts
            .iter()
            .filter(|&(_, &c)| c >= thr as u128)
            .map(|(&n, _)| n)
            .collect()
    }
}

/// `Π_i C(|A_i| + h_i - 1, h_i)`, the number of representations summed over all `n`.
pub fn representation_mass(sizes: &[usize], h: &HVector) -> Result<u128> {
    sizes
        .iter()
        .zip(h.entries())
        .try_fold(1u128, |acc, (&k, &hi)| {
            let m = binomial(k as u64 + hi - 1, hi)?;
            acc.checked_mul(m).ok_or(Error::Capacity {
                what: "representation count",
                needed: u128::MAX,
                limit: u128::MAX,
            })
        })
}

pub(crate) fn integer_colors(t: &ColorTuple) -> Result<Vec<Vec<i64>>> {
    if !t.ambient().is_integers() {
        return Err(Error::unsupported(
            "representation functions are defined over Z",
        ));
    }
    Ok(t.finite_colors()?
        .into_iter()
        .map(|c| c.to_ints().expect("integer ambient"))
        .collect())
}

/// Counts of multisets of size `h` from `a` by their sum: `(offset, counts)`,
/// where `counts[s]` is the number with sum `offset + s`.
fn multiset_sums(a: &[i64], h: u64) -> Result<(i64, Vec<u128>)> {
    let min = a[0];
    let span = (a[a.len() - 1] - min) as u128;
    let width = span * h as u128 + 1;
    let cells = width * (h as u128 + 1);
    let limit = Capacity::global().window_points as u128;
    if cells > limit {
        return Err(Error::Capacity {
            what: "representation table cells",
            needed: cells,
            limit,
        });
    }
    let (h, width) = (h as usize, width as usize);
    // dp[j][s]: multisets of size j with shifted sum s
    let mut dp = vec![vec![0u128; width]; h + 1];
    dp[0][0] = 1;
    for &x in a {
        let e = (x - min) as usize;
        for j in 1..=h {
            let (done, rest) = dp.split_at_mut(j);
            let prev = &done[j - 1];
            for s in e..width {
                rest[0][s] += prev[s - e];
            }
        }
    }
    let offset = min.checked_mul(h as i64).ok_or(Error::Overflow {
        value: min as i128 * h as i128,
        limit: i64::MAX,
    })?;
    Ok((offset, dp.swap_remove(h)))
}

fn convolve(x: &(i64, Vec<u128>), y: &(i64, Vec<u128>)) -> (i64, Vec<u128>) {
    let mut out = vec![0u128; x.1.len() + y.1.len() - 1];
    for (i, &a) in x.1.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in y.1.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    (x.0 + y.0, out)
}

/// Exact `r_{A,h}` by a multiset dynamic program per color, convolved across colors.
pub fn representation_function(t: &ColorTuple, h: &HVector) -> Result<RepProfile> {
    t.check_h(h)?;
    let colors = integer_colors(t)?;
    // Every count is at most the total, so checking the total rules out overflow.
    representation_mass(&colors.iter().map(Vec::len).collect::<Vec<_>>(), h)?;
    let mut acc = (0i64, vec![1u128]);
    for (a, &hi) in colors.iter().zip(h.entries()) {
        if hi > 0 {
            acc = convolve(&acc, &multiset_sums(a, hi)?);
        }
    }
    let counts = acc
        .1
        .into_iter()
        .enumerate()
        .filter(|&(_, c)| c > 0)
        .map(|(s, c)| (acc.0 + s as i64, c))
        .collect();
    Ok(RepProfile {
        h: h.clone(),
        counts,
    })
}

/// `(h·A)^(thr) = {n : r_{A,h}(n) >= thr}`.
pub fn threshold_layer(t: &ColorTuple, h: &HVector, thr: u64) -> Result<FiniteSet> {
    if thr == 0 {
        return Err(Error::structural("the layer threshold must be at least 1"));
    }
    let profile = representation_function(t, h)?;
    FiniteSet::integers(profile.layer(thr))
}

/// A layer `S ⊆ [0, H]` written as `C ∪ [c, H - d] ∪ (H - D)`.
///
/// The central run is the maximal run of consecutive members of `S` through
/// `floor(H/2)`; `C` holds the members below it and `D` the reflections
/// `H - s` of the members above it. Without a member at `floor(H/2)` there
/// is no run and the layer is not stabilized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerDecomposition {
    pub max_sum: i64,
    /// `C`, ascending. Holds all of `S` when there is no central run.
    pub below: Vec<i64>,
    /// `(c, d)` when the central run exists.
    pub run: Option<(i64, i64)>,
    /// `D`, ascending.
    pub above: Vec<i64>,
}

impl LayerDecomposition {
    pub fn stabilized(&self) -> bool {
        self.run.is_some()
    }

    /// `(C, c, d, D)` when stabilized.
    pub fn data(&self) -> Option<(&[i64], i64, i64, &[i64])> {
        self.run
            .map(|(c, d)| (self.below.as_slice(), c, d, self.above.as_slice()))
    }

    /// The layer this decomposition describes.
    pub fn points(&self) -> Vec<i64> {
        let mut out = self.below.clone();
        if let Some((c, d)) = self.run {
            out.extend(c..=self.max_sum - d);
        }
        out.extend(self.above.iter().rev().map(|e| self.max_sum - e));
        out
    }
}

pub fn decompose_layer(s: &FiniteSet, max_sum: i64) -> Result<LayerDecomposition> {
    let vals = s
        .to_ints()
        .ok_or_else(|| Error::unsupported("layer decompositions are defined over Z"))?;
    if let Some(bad) = vals.iter().find(|&&v| v < 0 || v > max_sum) {
        return Err(Error::structural(format!(
            "layer element {bad} lies outside [0, {max_sum}]"
        )));
    }
    let mid = max_sum.div_euclid(2);
    let Ok(at) = vals.binary_search(&mid) else {
        return Ok(LayerDecomposition {
            max_sum,
            below: vals,
            run: None,
            above: Vec::new(),
        });
    };
    let mut lo = at;
    while lo > 0 && vals[lo - 1] == vals[lo] - 1 {
        lo -= 1;
    }
    let mut hi = at;
    while hi + 1 < vals.len() && vals[hi + 1] == vals[hi] + 1 {
        hi += 1;
    }
    Ok(LayerDecomposition {
        max_sum,
        below: vals[..lo].to_vec(),
        run: Some((vals[lo], max_sum - vals[hi])),
        above: vals[hi + 1..].iter().rev().map(|v| max_sum - v).collect(),
    })
}

/// The decomposition of one layer together with where it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayerStructure {
    pub h: HVector,
    pub threshold: u64,
    pub decomposition: LayerDecomposition,
}

impl LayerStructure {
    pub fn stabilized(&self) -> bool {
        self.decomposition.stabilized()
    }
}

/// `Σ h_i max(A_i)` for a tuple over `Z`.
pub fn max_sum(t: &ColorTuple, h: &HVector) -> Result<i64> {
    t.check_h(h)?;
    let colors = integer_colors(t)?;
    Ok(colors
        .iter()
        .zip(h.entries())
        .map(|(a, &hi)| a[a.len() - 1] * hi as i64)
        .sum())
}

/// Computes and decomposes `(h·A)^(thr)` for a normalized tuple.
pub fn layer_structure(t: &ColorTuple, h: &HVector, thr: u64) -> Result<LayerStructure> {
    let big_h = max_sum(t, h)?;
    let layer = threshold_layer(t, h, thr)?;
    Ok(LayerStructure {
        h: h.clone(),
        threshold: thr,
        decomposition: decompose_layer(&layer, big_h)?,
    })
}

fn require_normalized(t: &ColorTuple) -> Result<()> {
    if !is_normalized(t) {
        return Err(Error::structural(
            "tuple must be normalized (every minimum 0, joint gcd 1, every maximum at least 1)",
        ));
    }
    if integer_colors(t)?.iter().any(|a| a[a.len() - 1] < 1) {
        return Err(Error::structural("every color needs a positive maximum"));
    }
    Ok(())
}

/// Outcome of a stabilization search over the box `[h_min, h_max]^q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilization {
    pub threshold: u64,
    pub h_min: u64,
    pub h_max: u64,
    /// The least grid point from which `(C, c, d, D)` is constant, with its structure.
    pub from: Option<LayerStructure>,
}

impl Stabilization {
    pub fn stabilized(&self) -> bool {
        self.from.is_some()
    }
}

impl fmt::Display for Stabilization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.from {
            Some(s) => write!(f, "t = {}: stable from h = {}", self.threshold, s.h),
            None => write!(
                f,
                "t = {}: inconclusive on [{}, {}]",
                self.threshold, self.h_min, self.h_max
            ),
        }
    }
}

/// Points of the box `lo ⪯ h ⪯ hi`, lexicographically. Empty if any `lo_i > hi_i`.
pub fn box_points(lo: &[u64], hi: &[u64]) -> Vec<HVector> {
    if lo.len() != hi.len() || lo.iter().zip(hi).any(|(l, h)| l > h) {
        return Vec::new();
    }
    lo.iter()
        .zip(hi)
        .map(|(&l, &h)| l..=h)
        .multi_cartesian_product()
        .map(HVector::new)
        .collect()
}

/// Points of `[lo, hi]^q` in order of coordinate sum, then lexicographically.
pub fn grid_points(q: usize, lo: u64, hi: u64) -> Vec<HVector> {
    let mut pts = box_points(&vec![lo; q], &vec![hi; q]);
    pts.sort_by(|a, b| {
        a.total()
            .cmp(&b.total())
            .then_with(|| a.entries().cmp(b.entries()))
    });
    pts
}

/// Searches the box `[h_min, h_max]^q` for the least `g` (by coordinate sum,
/// then lexicographically) such that every grid point `h ⪰ g` has a
/// stabilized layer with the same `(C, c, d, D)` as `g`.
///
/// `g` must sit strictly below `h_max` in every coordinate, so the agreement
/// is seen on at least two values per coordinate; otherwise the result is
/// inconclusive.
pub fn detect_stabilization(
    t: &ColorTuple,
    thr: u64,
    h_min: u64,
    h_max: u64,
) -> Result<Stabilization> {
    require_normalized(t)?;
    let grid = grid_points(t.len(), h_min, h_max);
    let structures = grid
        .iter()
        .map(|h| layer_structure(t, h, thr))
        .collect::<Result<Vec<_>>>()?;
    let points: Vec<_> = structures
        .iter()
        .map(|s| (&s.h, &s.decomposition))
        .collect();
    let from = first_stable(&points, &vec![h_max; t.len()]).map(|i| structures[i].clone());
    Ok(Stabilization {
        threshold: thr,
        h_min,
        h_max,
        from,
    })
}

/// Index of the least grid point `g` (points must come in grid order) that
/// lies strictly below `h_max` in every coordinate and whose decomposition
/// data is shared by every point `h ⪰ g`.
pub fn first_stable(points: &[(&HVector, &LayerDecomposition)], h_max: &[u64]) -> Option<usize> {
    points.iter().position(|(g, dec)| {
        let Some(data) = dec.data() else {
            return false;
        };
        g.entries().iter().zip(h_max).all(|(v, m)| v < m)
            && points
                .iter()
                .filter(|(h, _)| g.precedes(h))
                .all(|(_, other)| other.data() == Some(data))
    })
}

/// `{0, L, 2L, .., rL}` with `L = H - c - d + 1`, whose translates of
/// `[c, H - d]` tile `[c, rH - d]`.
pub fn interval_cover_translates(c: i64, d: i64, big_h: i64, r: u64) -> Result<FiniteSet> {
    if r == 0 || c < 0 || d < 0 {
        return Err(Error::structural(
            "interval covers need r >= 1 and c, d >= 0",
        ));
    }
    let r = r as i64;
    let required = (r * (c + d) - r).max(c + d);
    if big_h < required {
        return Err(Error::Threshold {
            color: None,
            required: required as u64,
            got: big_h.max(0) as u64,
        });
    }
    let len = big_h - c - d + 1;
    // consecutive translates are adjacent, so only the right end needs checking
    if big_h - d + r * len < r * big_h - d {
        return Err(Error::structural(
            "interval translates fall short of rH - d",
        ));
    }
    FiniteSet::integers((0..=r).map(|j| j * len))
}

/// `X = {0, L, .., rL, (r-1)H}` with `((rh)·A)^(t) ⊆ X + (h·A)^(t)`, for a
/// normalized tuple whose layers at `h` and `rh` are stabilized with equal data.
pub fn layer_cover(t: &ColorTuple, thr: u64, r: u64, h: &HVector) -> Result<CoveringCertificate> {
    if r == 0 {
        return Err(Error::structural("r must be at least 1"));
    }
    require_normalized(t)?;
    let here = layer_structure(t, h, thr)?;
    let there = layer_structure(t, &h.scaled(r), thr)?;
    let (Some(data), Some(data_r)) = (here.decomposition.data(), there.decomposition.data()) else {
        return Err(Error::NotReady(format!(
            "layer t = {thr} is not stabilized at h = {} and r·h; increase h",
            h
        )));
    };
    if data != data_r {
        return Err(Error::NotReady(format!(
            "layer t = {thr} decompositions at h = {h} and r·h differ; increase h"
        )));
    }
    let (_, c, d, _) = data;
    let big_h = here.decomposition.max_sum;
    let mut cover = interval_cover_translates(c, d, big_h, r)?;
    cover.insert(t.ambient().int((r as i64 - 1) * big_h)?)?;
    let bound = r as u128 + 2;
    let mut cert = CoveringCertificate::new(Method::Layer, t.clone(), r, h.clone(), cover, bound);
    cert.inclusion = Inclusion::Layer { threshold: thr };
    Ok(cert)
}

/// Layer covers for any tuple of nonempty finite integer sets, via
/// normalization: `X = d·Y + (r-1) Σ h_i min(A_i)`.
pub fn layer_cover_general(
    t: &ColorTuple,
    thr: u64,
    r: u64,
    h: &HVector,
) -> Result<CoveringCertificate> {
    if r == 0 || thr == 0 {
        return Err(Error::structural("r and the threshold must be at least 1"));
    }
    t.check_h(h)?;
    let (normal, record) = normalize_tuple(t)?;
    let shift = (r as i64 - 1) * record.shift(h);
    let z = AmbientGroup::integers();
    let cover = match normal {
        // every color is a singleton: one representation at Σ h_i a_i
        None if thr == 1 => FiniteSet::new(z.clone(), [z.int(shift)?])?,
        None => FiniteSet::zero(z.clone()),
        Some(normal) => {
            let inner = layer_cover(&normal, thr, r, &record.restrict(h))?;
            inner
                .cover
                .dilate_translate(record.divisor, &z.int(shift)?)?
        }
    };
    let bound = r as u128 + 2;
    let mut cert = CoveringCertificate::new(Method::Layer, t.clone(), r, h.clone(), cover, bound);
    cert.inclusion = Inclusion::Layer { threshold: thr };
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::covering::Status;
    use crate::sumset::chromatic_sumset;

    fn tuple(sets: &[&[i64]]) -> ColorTuple {
        ColorTuple::integers(sets).unwrap()
    }

    fn counts(p: &RepProfile) -> Vec<(i64, u128)> {
        p.counts.iter().map(|(&n, &c)| (n, c)).collect()
    }

    fn ints(s: &FiniteSet) -> Vec<i64> {
        s.to_ints().unwrap()
    }

    #[test]
    fn representation_examples() {
        let p = representation_function(&tuple(&[&[0, 1]]), &HVector::new(vec![2])).unwrap();
        assert_eq!(counts(&p), vec![(0, 1), (1, 1), (2, 1)]);

        let p = representation_function(&tuple(&[&[0, 1, 2]]), &HVector::new(vec![2])).unwrap();
        assert_eq!(counts(&p), vec![(0, 1), (1, 1), (2, 2), (3, 1), (4, 1)]);
        assert_eq!(p.total(), 6);

        let p = representation_function(&tuple(&[&[0, 1], &[0, 2]]), &HVector::zero(2)).unwrap();
        assert_eq!(counts(&p), vec![(0, 1)]);

        let p =
            representation_function(&tuple(&[&[-2, 3], &[5]]), &HVector::new(vec![2, 1])).unwrap();
        assert_eq!(counts(&p), vec![(1, 1), (6, 1), (11, 1)]);
    }

    #[test]
    fn layer_examples() {
        let t = tuple(&[&[0, 1]]);
        assert_eq!(
            ints(&threshold_layer(&t, &HVector::new(vec![3]), 1).unwrap()),
            vec![0, 1, 2, 3]
        );
        let t = tuple(&[&[0, 1, 2]]);
        let h = HVector::new(vec![2]);
        assert_eq!(ints(&threshold_layer(&t, &h, 2).unwrap()), vec![2]);
        assert!(threshold_layer(&t, &h, 3).unwrap().is_empty());
        assert!(threshold_layer(&t, &h, 0).is_err());

        let t = tuple(&[&[0, 1, 3], &[0, 2]]);
        let h = HVector::new(vec![2, 3]);
        assert_eq!(
            threshold_layer(&t, &h, 1).unwrap(),
            chromatic_sumset(&t, &h).unwrap()
        );
    }

    #[test]
    fn decompose_examples() {
        let full = FiniteSet::integers(0..=7).unwrap();
        let d = decompose_layer(&full, 7).unwrap();
        assert_eq!(d.data(), Some((&[][..], 0, 0, &[][..])));

        let s = FiniteSet::integers([0, 2, 3, 4, 6]).unwrap();
        let d = decompose_layer(&s, 6).unwrap();
        assert_eq!(d.data(), Some((&[0][..], 2, 2, &[0][..])));
        assert_eq!(d.points(), vec![0, 2, 3, 4, 6]);

        let s = FiniteSet::integers([0, 4]).unwrap();
        assert!(!decompose_layer(&s, 4).unwrap().stabilized());

        let s = FiniteSet::integers([0, 9]).unwrap();
        assert!(matches!(decompose_layer(&s, 4), Err(Error::Structural(_))));
    }

    #[test]
    fn stabilization_examples() {
        let s = detect_stabilization(&tuple(&[&[0, 1]]), 1, 1, 6).unwrap();
        let from = s.from.unwrap();
        assert_eq!(from.h, HVector::new(vec![1]));
        assert_eq!(from.decomposition.data(), Some((&[][..], 0, 0, &[][..])));

        let s = detect_stabilization(&tuple(&[&[0, 1, 3]]), 1, 1, 8).unwrap();
        let from = s.from.unwrap();
        assert_eq!(from.decomposition.max_sum, 3 * from.h.entries()[0] as i64);

        let s = detect_stabilization(&tuple(&[&[0, 1]]), 50, 1, 6).unwrap();
        assert!(!s.stabilized());

        assert!(detect_stabilization(&tuple(&[&[1, 2]]), 1, 1, 4).is_err());
    }

    #[test]
    fn grid_order() {
        let g: Vec<Vec<u64>> = grid_points(2, 0, 1)
            .into_iter()
            .map(|h| h.entries().to_vec())
            .collect();
        assert_eq!(g, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert!(grid_points(2, 3, 2).is_empty());
    }

    #[test]
    fn interval_examples() {
        assert_eq!(
            ints(&interval_cover_translates(0, 0, 5, 2).unwrap()),
            vec![0, 6, 12]
        );
        assert_eq!(
            ints(&interval_cover_translates(1, 1, 4, 2).unwrap()),
            vec![0, 3, 6]
        );
        assert_eq!(
            ints(&interval_cover_translates(2, 1, 3, 1).unwrap()),
            vec![0, 1]
        );
        assert!(matches!(
            interval_cover_translates(3, 3, 5, 2),
            Err(Error::Threshold {
                required: 10,
                got: 5,
                ..
            })
        ));
    }

    #[test]
    fn layer_cover_examples() {
        let t = tuple(&[&[0, 1]]);
        let cert = layer_cover(&t, 1, 2, &HVector::new(vec![4]))
            .unwrap()
            .verified()
            .unwrap();
        assert_eq!(ints(&cert.cover), vec![0, 4, 5, 10]);
        assert_eq!(cert.status, Status::Verified);

        let t = tuple(&[&[0, 1, 3]]);
        let cert = layer_cover(&t, 1, 2, &HVector::new(vec![6]))
            .unwrap()
            .verified()
            .unwrap();
        assert!(cert.size() <= 4);
        assert_eq!(cert.status, Status::Verified);

        let t = tuple(&[&[0, 1, 3], &[0, 2]]);
        let mut checked = 0;
        for a in 1..=8 {
            for b in 1..=8 {
                match layer_cover(&t, 2, 2, &HVector::new(vec![a, b])) {
                    Ok(cert) => {
                        let cert = cert.verified().unwrap();
                        assert_eq!(cert.status, Status::Verified, "h = ({a},{b})");
                        assert!(cert.size() <= 4);
                        checked += 1;
                    }
                    Err(Error::NotReady(_)) | Err(Error::Threshold { .. }) => {}
                    Err(e) => panic!("{e}"),
                }
            }
        }
        assert!(checked > 0);
    }

    #[test]
    fn layer_cover_not_ready() {
        // ({0, 2, 3}) at h = 1: {0, 2, 3} has no member at floor(3/2) = 1.
        let t = tuple(&[&[0, 2, 3]]);
        assert!(matches!(
            layer_cover(&t, 1, 2, &HVector::new(vec![1])),
            Err(Error::NotReady(_))
        ));
    }

    #[test]
    fn layer_cover_general_examples() {
        let t = tuple(&[&[5]]);
        let cert = layer_cover_general(&t, 2, 2, &HVector::new(vec![3]))
            .unwrap()
            .verified()
            .unwrap();
        assert_eq!(ints(&cert.cover), vec![0]);
        assert_eq!(cert.status, Status::Verified);

        let cert = layer_cover_general(&t, 1, 2, &HVector::new(vec![3]))
            .unwrap()
            .verified()
            .unwrap();
        assert_eq!(ints(&cert.cover), vec![15]);
        assert_eq!(cert.status, Status::Verified);

        let t = tuple(&[&[4, 6]]);
        let cert = layer_cover_general(&t, 1, 2, &HVector::new(vec![3]))
            .unwrap()
            .verified()
            .unwrap();
        assert_eq!(cert.status, Status::Verified);
        assert!(cert.size() <= 4);

        let t = tuple(&[&[5], &[0, 3, 9]]);
        let cert = layer_cover_general(&t, 1, 2, &HVector::new(vec![2, 6]))
            .unwrap()
            .verified()
            .unwrap();
        assert_eq!(cert.status, Status::Verified);
    }
}
