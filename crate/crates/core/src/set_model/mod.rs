//! Color classes and tuples.
//!
//! Infinite classes (linear, semilinear, finite-plus-monoid, translated monoid)
//! are described by generators whose free parts lie in the nonnegative orthant.
//! Under that restriction every partial sum of generators is coordinatewise
//! monotone in the free part, so truncating to a window is exact.

mod enumerate;
mod normalize;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::group::{AmbientGroup, Element};

pub use enumerate::{
    enumerate_window, member_up_to_bound, refine_to_unbounded, refine_to_unbounded_with,
};
pub use normalize::{is_normalized, normalize_tuple, NormalizationRecord};

/// A finite set of elements of one ambient group, kept sorted and deduplicated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSet {
    ambient: AmbientGroup,
    elements: BTreeSet<Element>,
}

impl FiniteSet {
    pub fn new(ambient: AmbientGroup, elements: impl IntoIterator<Item = Element>) -> Result<Self> {
        let elements: BTreeSet<Element> = elements.into_iter().collect();
        for x in &elements {
            ambient.require(x)?;
        }
        Ok(FiniteSet { ambient, elements })
    }

    pub(crate) fn from_trusted(ambient: AmbientGroup, elements: BTreeSet<Element>) -> Self {
        FiniteSet { ambient, elements }
    }

    pub fn empty(ambient: AmbientGroup) -> Self {
        FiniteSet {
            ambient,
            elements: BTreeSet::new(),
        }
    }

    /// `{0}`.
    pub fn zero(ambient: AmbientGroup) -> Self {
        let zero = ambient.zero();
        FiniteSet {
            ambient,
            elements: BTreeSet::from([zero]),
        }
    }

    /// A set of integers in `Z`.
    pub fn integers(values: impl IntoIterator<Item = i64>) -> Result<Self> {
        let g = AmbientGroup::integers();
        let elements = values
            .into_iter()
            .map(|v| g.int(v))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(FiniteSet {
            ambient: g,
            elements,
        })
    }

    /// A set of residues in a one-coordinate group.
    pub fn ints_in(ambient: &AmbientGroup, values: impl IntoIterator<Item = i64>) -> Result<Self> {
        let elements = values
            .into_iter()
            .map(|v| ambient.int(v))
            .collect::<Result<BTreeSet<_>>>()?;
        Ok(FiniteSet {
            ambient: ambient.clone(),
            elements,
        })
    }

    pub fn ambient(&self) -> &AmbientGroup {
        &self.ambient
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = &Element> + ExactSizeIterator {
        self.elements.iter()
    }

    pub fn elements(&self) -> &BTreeSet<Element> {
        &self.elements
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.elements.contains(x)
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.elements.is_subset(&other.elements)
    }

    /// Integer values, when the ambient group is `Z`.
    pub fn to_ints(&self) -> Option<Vec<i64>> {
        self.ambient
            .is_integers()
            .then(|| self.elements.iter().map(|x| x.free()[0]).collect())
    }

    pub fn min(&self) -> Option<&Element> {
        self.elements.first()
    }

    pub fn max(&self) -> Option<&Element> {
        self.elements.last()
    }

    pub fn insert(&mut self, x: Element) -> Result<()> {
        self.ambient.require(&x)?;
        self.elements.insert(x);
        Ok(())
    }

    pub fn union(&self, other: &FiniteSet) -> Result<FiniteSet> {
        same_ambient(&self.ambient, &other.ambient)?;
        Ok(FiniteSet::from_trusted(
            self.ambient.clone(),
            self.elements.union(&other.elements).cloned().collect(),
        ))
    }

    /// Image under `f`, into `target`.
    pub fn map(
        &self,
        target: &AmbientGroup,
        mut f: impl FnMut(&Element) -> Result<Element>,
    ) -> Result<FiniteSet> {
        let elements = self
            .elements
            .iter()
            .map(&mut f)
            .collect::<Result<Vec<_>>>()?;
        FiniteSet::new(target.clone(), elements)
    }

    pub fn translate(&self, b: &Element) -> Result<FiniteSet> {
        let g = self.ambient.clone();
        self.map(&g, |x| g.add(x, b))
    }

    /// `{d*x + b : x in self}`.
    pub fn dilate_translate(&self, d: i64, b: &Element) -> Result<FiniteSet> {
        let g = self.ambient.clone();
        self.map(&g, |x| g.add(&g.scale(d, x)?, b))
    }

    pub fn filter(&self, mut keep: impl FnMut(&Element) -> bool) -> FiniteSet {
        FiniteSet::from_trusted(
            self.ambient.clone(),
            self.elements.iter().filter(|x| keep(x)).cloned().collect(),
        )
    }

    /// Coordinatewise minimum of the free parts.
    pub fn free_min(&self) -> Option<Vec<i64>> {
        coord_extreme(self.elements.iter(), i64::min)
    }

    /// Coordinatewise maximum of the free parts.
    pub fn free_max(&self) -> Option<Vec<i64>> {
        coord_extreme(self.elements.iter(), i64::max)
    }
}

fn coord_extreme<'a>(
    mut it: impl Iterator<Item = &'a Element>,
    pick: fn(i64, i64) -> i64,
) -> Option<Vec<i64>> {
    let first = it.next()?.free().to_vec();
    Some(it.fold(first, |mut acc, x| {
        for (a, &v) in acc.iter_mut().zip(x.free()) {
            *a = pick(*a, v);
        }
        acc
    }))
}

impl fmt::Display for FiniteSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.elements.iter().map(Element::to_string).collect();
        write!(f, "{{{}}}", items.join(", "))
    }
}

pub(crate) fn same_ambient(a: &AmbientGroup, b: &AmbientGroup) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::structural(format!(
            "ambient groups differ: {a} vs {b}"
        )))
    }
}

fn check_orthant(ambient: &AmbientGroup, generators: &[Element]) -> Result<()> {
    for g in generators {
        ambient.require(g)?;
        if g.free().iter().any(|&v| v < 0) {
            return Err(Error::unsupported(format!(
                "generator {g} has a negative free coordinate; only nonnegative-orthant generators are supported"
            )));
        }
    }
    Ok(())
}

/// The monoid of all `N_0`-combinations of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonoidDesc {
    pub generators: Vec<Element>,
}

impl MonoidDesc {
    pub fn new(generators: Vec<Element>) -> Self {
        MonoidDesc { generators }
    }

    /// The trivial monoid `{0}`.
    pub fn trivial() -> Self {
        MonoidDesc {
            generators: Vec::new(),
        }
    }
}

/// `P(a; b_1..b_d)`, optionally with per-generator coefficient bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSet {
    pub base: Element,
    pub generators: Vec<Element>,
    pub bounds: Option<Vec<u64>>,
}

impl LinearSet {
    pub fn unbounded(base: Element, generators: Vec<Element>) -> Self {
        LinearSet {
            base,
            generators,
            bounds: None,
        }
    }

    pub fn bounded(base: Element, generators: Vec<Element>, bounds: Vec<u64>) -> Result<Self> {
        if bounds.len() != generators.len() {
            return Err(Error::structural(
                "one coefficient bound per generator is required",
            ));
        }
        Ok(LinearSet {
            base,
            generators,
            bounds: Some(bounds),
        })
    }

    pub fn singleton(base: Element) -> Self {
        LinearSet::unbounded(base, Vec::new())
    }

    pub fn is_bounded(&self) -> bool {
        self.bounds.is_some()
    }
}

/// A finite union of linear sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearSet {
    pub pieces: Vec<LinearSet>,
}

impl SemilinearSet {
    pub fn new(pieces: Vec<LinearSet>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::structural(
                "a semilinear set needs at least one piece",
            ));
        }
        Ok(SemilinearSet { pieces })
    }

    pub fn is_refined(&self) -> bool {
        self.pieces.iter().all(|p| !p.is_bounded())
    }
}

/// One color's set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ColorClass {
    Finite(FiniteSet),
    Semilinear(SemilinearSet),
    FinitePlusMonoid { core: FiniteSet, monoid: MonoidDesc },
    TranslatedMonoid { base: Element, monoid: MonoidDesc },
}

impl ColorClass {
    pub fn kind(&self) -> &'static str {
        match self {
            ColorClass::Finite(_) => "finite",
            ColorClass::Semilinear(_) => "semilinear",
            ColorClass::FinitePlusMonoid { .. } => "finite_plus_monoid",
            ColorClass::TranslatedMonoid { .. } => "translated_monoid",
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteSet> {
        match self {
            ColorClass::Finite(s) => Some(s),
            _ => None,
        }
    }

    /// Checks membership of all data in `ambient`, nonemptiness and the orthant restriction.
    pub fn validate(&self, ambient: &AmbientGroup) -> Result<()> {
        match self {
            ColorClass::Finite(s) => {
                same_ambient(ambient, s.ambient())?;
                if s.is_empty() {
                    return Err(Error::structural("color classes must be nonempty"));
                }
            }
            ColorClass::Semilinear(s) => {
                if s.pieces.is_empty() {
                    return Err(Error::structural(
                        "a semilinear set needs at least one piece",
                    ));
                }
                for p in &s.pieces {
                    ambient.require(&p.base)?;
                    check_orthant(ambient, &p.generators)?;
                    if let Some(b) = &p.bounds {
                        if b.len() != p.generators.len() {
                            return Err(Error::structural(
                                "one coefficient bound per generator is required",
                            ));
                        }
                    }
                }
            }
            ColorClass::FinitePlusMonoid { core, monoid } => {
                same_ambient(ambient, core.ambient())?;
                if core.is_empty() {
                    return Err(Error::structural("finite core must be nonempty"));
                }
                check_orthant(ambient, &monoid.generators)?;
            }
            ColorClass::TranslatedMonoid { base, monoid } => {
                ambient.require(base)?;
                check_orthant(ambient, &monoid.generators)?;
            }
        }
        Ok(())
    }

    /// Coordinatewise lower bound on the free parts of all elements.
    pub fn free_lower_bound(&self) -> Vec<i64> {
        let mins = |it: &mut dyn Iterator<Item = &Element>| {
            coord_extreme(it, i64::min).expect("nonempty class")
        };
        match self {
            ColorClass::Finite(s) => s.free_min().expect("nonempty class"),
            ColorClass::Semilinear(s) => mins(&mut s.pieces.iter().map(|p| &p.base)),
            ColorClass::FinitePlusMonoid { core, .. } => core.free_min().expect("nonempty class"),
            ColorClass::TranslatedMonoid { base, .. } => base.free().to_vec(),
        }
    }

    /// `{d*x + b : x in self}`, in the same structural class.
    pub fn dilate_translate(&self, g: &AmbientGroup, d: i64, b: &Element) -> Result<ColorClass> {
        let point = |x: &Element| g.add(&g.scale(d, x)?, b);
        let gens = |gs: &[Element]| gs.iter().map(|x| g.scale(d, x)).collect::<Result<Vec<_>>>();
        Ok(match self {
            ColorClass::Finite(s) => ColorClass::Finite(s.dilate_translate(d, b)?),
            ColorClass::Semilinear(s) => ColorClass::Semilinear(SemilinearSet {
                pieces: s
                    .pieces
                    .iter()
                    .map(|p| {
                        Ok(LinearSet {
                            base: point(&p.base)?,
                            generators: gens(&p.generators)?,
                            bounds: p.bounds.clone(),
                        })
                    })
                    .collect::<Result<_>>()?,
            }),
            ColorClass::FinitePlusMonoid { core, monoid } => ColorClass::FinitePlusMonoid {
                core: core.dilate_translate(d, b)?,
                monoid: MonoidDesc::new(gens(&monoid.generators)?),
            },
            ColorClass::TranslatedMonoid { base, monoid } => ColorClass::TranslatedMonoid {
                base: point(base)?,
                monoid: MonoidDesc::new(gens(&monoid.generators)?),
            },
        })
    }

    pub fn translate(&self, g: &AmbientGroup, b: &Element) -> Result<ColorClass> {
        self.dilate_translate(g, 1, b)
    }
}

/// The tuple `(A_1, ..., A_q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColorTuple {
    ambient: AmbientGroup,
    colors: Vec<ColorClass>,
}

impl ColorTuple {
    pub fn new(ambient: AmbientGroup, colors: Vec<ColorClass>) -> Result<Self> {
        if colors.is_empty() {
            return Err(Error::structural("a tuple needs at least one color"));
        }
        for c in &colors {
            c.validate(&ambient)?;
        }
        Ok(ColorTuple { ambient, colors })
    }

    /// A tuple of finite colors; the ambient group is taken from the first set.
    pub fn finite(sets: Vec<FiniteSet>) -> Result<Self> {
        let ambient = sets
            .first()
            .ok_or_else(|| Error::structural("a tuple needs at least one color"))?
            .ambient()
            .clone();
        ColorTuple::new(ambient, sets.into_iter().map(ColorClass::Finite).collect())
    }

    /// A tuple of integer sets.
    pub fn integers(sets: &[&[i64]]) -> Result<Self> {
        ColorTuple::finite(
            sets.iter()
                .map(|s| FiniteSet::integers(s.iter().copied()))
                .collect::<Result<_>>()?,
        )
    }

    pub fn ambient(&self) -> &AmbientGroup {
        &self.ambient
    }

    pub fn colors(&self) -> &[ColorClass] {
        &self.colors
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn all_finite(&self) -> bool {
        self.colors.iter().all(|c| c.as_finite().is_some())
    }

    /// The colors as finite sets, or an unsupported-structure error.
    pub fn finite_colors(&self) -> Result<Vec<&FiniteSet>> {
        self.colors
            .iter()
            .map(|c| {
                c.as_finite().ok_or_else(|| {
                    Error::unsupported(format!("expected finite colors, found {}", c.kind()))
                })
            })
            .collect()
    }

    pub fn check_h(&self, h: &HVector) -> Result<()> {
        if h.len() == self.colors.len() {
            Ok(())
        } else {
            Err(Error::structural(format!(
                "h has {} entries but the tuple has {} colors",
                h.len(),
                self.colors.len()
            )))
        }
    }
}

/// A vector parameter `h` in `N_0^q`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HVector(Vec<u64>);

impl HVector {
    pub fn new(entries: Vec<u64>) -> Self {
        HVector(entries)
    }

    pub fn zero(q: usize) -> Self {
        HVector(vec![0; q])
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&h| h == 0)
    }

    /// `r * h`.
    pub fn scaled(&self, r: u64) -> HVector {
        HVector(self.0.iter().map(|h| h * r).collect())
    }

    /// The coordinatewise order.
    pub fn precedes(&self, other: &HVector) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

impl From<Vec<u64>> for HVector {
    fn from(v: Vec<u64>) -> Self {
        HVector(v)
    }
}

impl fmt::Display for HVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "({})", items.join(","))
    }
}

/// Inclusive bounds on each free coordinate. Torsion is never truncated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    bounds: Vec<(i64, i64)>,
}

impl Window {
    pub fn new(bounds: Vec<(i64, i64)>) -> Result<Self> {
        if let Some((lo, hi)) = bounds.iter().find(|(lo, hi)| lo > hi) {
            return Err(Error::structural(format!(
                "window bound {lo}:{hi} is empty"
            )));
        }
        Ok(Window { bounds })
    }

    /// A one-dimensional window `[lo, hi]`.
    pub fn interval(lo: i64, hi: i64) -> Result<Self> {
        Window::new(vec![(lo, hi)])
    }

    pub(crate) fn from_corners(lo: &[i64], hi: &[i64]) -> Option<Self> {
        let bounds: Vec<_> = lo.iter().copied().zip(hi.iter().copied()).collect();
        bounds
            .iter()
            .all(|(l, h)| l <= h)
            .then_some(Window { bounds })
    }

    pub fn bounds(&self) -> &[(i64, i64)] {
        &self.bounds
    }

    pub fn lo(&self) -> Vec<i64> {
        self.bounds.iter().map(|b| b.0).collect()
    }

    pub fn hi(&self) -> Vec<i64> {
        self.bounds.iter().map(|b| b.1).collect()
    }

    pub fn contains(&self, x: &Element) -> bool {
        x.free().len() == self.bounds.len()
            && x.free()
                .iter()
                .zip(&self.bounds)
                .all(|(v, (lo, hi))| lo <= v && v <= hi)
    }

    pub fn check_rank(&self, ambient: &AmbientGroup) -> Result<()> {
        if self.bounds.len() == ambient.free_rank() {
            Ok(())
        } else {
            Err(Error::structural(format!(
                "window has {} coordinates but the free rank is {}",
                self.bounds.len(),
                ambient.free_rank()
            )))
        }
    }

    /// `[lo - hi_shift, hi - lo_shift]` per coordinate: every `x - s` with
    /// `x` in the window and `lo_shift <= s <= hi_shift` lies inside.
    pub fn widened(&self, lo_shift: &[i64], hi_shift: &[i64]) -> Window {
        Window {
            bounds: self
                .bounds
                .iter()
                .zip(lo_shift.iter().zip(hi_shift))
                .map(|(&(lo, hi), (&sl, &sh))| (lo.saturating_sub(sh), hi.saturating_sub(sl)))
                .collect(),
        }
    }
}

impl fmt::Display for Window {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .bounds
            .iter()
            .map(|(lo, hi)| format!("{lo}:{hi}"))
            .collect();
        write!(f, "{}", items.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hvector_order_and_scaling() {
        let a = HVector::new(vec![1, 2]);
        let b = HVector::new(vec![2, 2]);
        assert!(a.precedes(&b));
        assert!(!b.precedes(&a));
        assert_eq!(a.scaled(3), HVector::new(vec![3, 6]));
    }

    #[test]
    fn negative_generators_are_rejected() {
        let g = AmbientGroup::integers();
        let class = ColorClass::TranslatedMonoid {
            base: g.int(0).unwrap(),
            monoid: MonoidDesc::new(vec![g.int(-1).unwrap()]),
        };
        assert!(matches!(
            ColorTuple::new(g, vec![class]),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn empty_colors_are_rejected() {
        let g = AmbientGroup::integers();
        assert!(ColorTuple::new(
            g.clone(),
            vec![ColorClass::Finite(FiniteSet::empty(g.clone()))]
        )
        .is_err());
        assert!(ColorTuple::new(g, vec![]).is_err());
    }

    #[test]
    fn window_rejects_inverted_bounds() {
        assert!(Window::interval(3, 2).is_err());
        let w = Window::interval(0, 10).unwrap();
        assert!(w.contains(&AmbientGroup::integers().int(10).unwrap()));
        assert!(!w.contains(&AmbientGroup::integers().int(11).unwrap()));
    }
}
