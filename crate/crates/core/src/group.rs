//! Finitely generated abelian groups `Z^d x Z/n_1 x ... x Z/n_k`.
//!
//! Elements keep their torsion coordinates reduced into `[0, n_i)`, so element
//! equality, ordering and hashing are plain tuple operations. Free coordinates
//! are exact `i64` values bounded in magnitude by the group's coordinate limit;
//! any operation that would leave that range reports [`Error::Overflow`].

use std::fmt;
use std::hash::{Hash, Hasher};

use smallvec::SmallVec;

use crate::error::{Error, Result};

pub type Coords = SmallVec<[i64; 2]>;

/// Default bound on the magnitude of a free coordinate.
pub const DEFAULT_COORD_LIMIT: i64 = 1 << 40;

#[derive(Clone, Debug)]
pub struct AmbientGroup {
    free_rank: usize,
    torsion: Coords,
    coord_limit: i64,
}

// The coordinate limit is configuration, not structure.
impl PartialEq for AmbientGroup {
    fn eq(&self, other: &Self) -> bool {
        self.free_rank == other.free_rank && self.torsion == other.torsion
    }
}

impl Eq for AmbientGroup {}

impl Hash for AmbientGroup {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.free_rank.hash(state);
        self.torsion.hash(state);
    }
}

/// A group element. Free coordinates first, then torsion coordinates; the
/// derived order is lexicographic in that sequence.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Element {
    free: Coords,
    torsion: Coords,
}

impl Element {
    pub fn free(&self) -> &[i64] {
        &self.free
    }

    pub fn torsion(&self) -> &[i64] {
        &self.torsion
    }

    /// The single free coordinate of an element of `Z`.
    pub fn as_int(&self) -> Option<i64> {
        match (self.free.as_slice(), self.torsion.is_empty()) {
            ([n], true) => Some(*n),
            _ => None,
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(n) = self.as_int() {
            return write!(f, "{n}");
        }
        let join = |c: &[i64]| c.iter().map(i64::to_string).collect::<Vec<_>>().join(",");
        if self.torsion.is_empty() {
            write!(f, "({})", join(&self.free))
        } else {
            write!(f, "({}; {})", join(&self.free), join(&self.torsion))
        }
    }
}

impl AmbientGroup {
    pub fn new(free_rank: usize, torsion_moduli: &[i64]) -> Result<Self> {
        if let Some(bad) = torsion_moduli.iter().find(|&&n| n < 2) {
            return Err(Error::structural(format!(
                "torsion modulus {bad} is below 2"
            )));
        }
        Ok(AmbientGroup {
            free_rank,
            torsion: torsion_moduli.iter().copied().collect(),
            coord_limit: DEFAULT_COORD_LIMIT,
        })
    }

    /// The integers `Z`.
    pub fn integers() -> Self {
        AmbientGroup {
            free_rank: 1,
            torsion: Coords::new(),
            coord_limit: DEFAULT_COORD_LIMIT,
        }
    }

    /// The free group `Z^d`.
    pub fn free(d: usize) -> Self {
        AmbientGroup {
            free_rank: d,
            torsion: Coords::new(),
            coord_limit: DEFAULT_COORD_LIMIT,
        }
    }

    /// The cyclic group `Z/n`.
    pub fn cyclic(n: i64) -> Result<Self> {
        AmbientGroup::new(0, &[n])
    }

    pub fn with_coord_limit(mut self, limit: i64) -> Self {
        self.coord_limit = limit.abs();
        self
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion_moduli(&self) -> &[i64] {
        &self.torsion
    }

    pub fn coord_limit(&self) -> i64 {
        self.coord_limit
    }

    pub fn is_integers(&self) -> bool {
        self.free_rank == 1 && self.torsion.is_empty()
    }

    /// Number of standard generators (free basis vectors, then one per torsion factor).
    pub fn generator_count(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn zero(&self) -> Element {
        Element {
            free: std::iter::repeat_n(0, self.free_rank).collect(),
            torsion: std::iter::repeat_n(0, self.torsion.len()).collect(),
        }
    }

    /// Builds an element, reducing torsion coordinates into range.
    pub fn element(&self, free: &[i64], torsion: &[i64]) -> Result<Element> {
        if free.len() != self.free_rank || torsion.len() != self.torsion.len() {
            return Err(Error::structural(format!(
                "element has shape ({}, {}) but the ambient group has ({}, {})",
                free.len(),
                torsion.len(),
                self.free_rank,
                self.torsion.len()
            )));
        }
        for &v in free {
            self.check(v as i128)?;
        }
        Ok(Element {
            free: free.iter().copied().collect(),
            torsion: torsion
                .iter()
                .zip(&self.torsion)
                .map(|(&v, &n)| v.rem_euclid(n))
                .collect(),
        })
    }

    /// An element of a one-coordinate group (`Z` or `Z/n`) from an integer.
    pub fn int(&self, n: i64) -> Result<Element> {
        match (self.free_rank, self.torsion.len()) {
            (1, 0) => self.element(&[n], &[]),
            (0, 1) => self.element(&[], &[n]),
            _ => Err(Error::structural(
                "integer encoding needs a one-coordinate group",
            )),
        }
    }

    /// The `i`-th standard generator.
    pub fn generator(&self, i: usize) -> Result<Element> {
        let mut e = self.zero();
        if i < self.free_rank {
            e.free[i] = 1;
        } else if i < self.generator_count() {
            e.torsion[i - self.free_rank] = 1 % self.torsion[i - self.free_rank];
        } else {
            return Err(Error::structural(format!(
                "generator index {i} out of range"
            )));
        }
        Ok(e)
    }

    pub fn contains(&self, x: &Element) -> bool {
        x.free.len() == self.free_rank
            && x.torsion.len() == self.torsion.len()
            && x.free.iter().all(|v| v.abs() <= self.coord_limit)
            && x.torsion
                .iter()
                .zip(&self.torsion)
                .all(|(&v, &n)| (0..n).contains(&v))
    }

    pub(crate) fn require(&self, x: &Element) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::structural(format!(
                "element {x} does not belong to the ambient group"
            )))
        }
    }

    fn check(&self, v: i128) -> Result<i64> {
        if v.abs() > self.coord_limit as i128 {
            Err(Error::Overflow {
                value: v,
                limit: self.coord_limit,
            })
        } else {
            Ok(v as i64)
        }
    }

    pub fn add(&self, x: &Element, y: &Element) -> Result<Element> {
        self.require(x)?;
        self.require(y)?;
        self.add_unchecked(x, y)
    }

    /// Addition without the membership check; shapes must already agree.
    pub(crate) fn add_unchecked(&self, x: &Element, y: &Element) -> Result<Element> {
        let free = x
            .free
            .iter()
            .zip(&y.free)
            .map(|(&a, &b)| self.check(a as i128 + b as i128))
            .collect::<Result<Coords>>()?;
        let torsion = x
            .torsion
            .iter()
            .zip(&y.torsion)
            .zip(&self.torsion)
            .map(|((&a, &b), &n)| (a + b) % n)
            .collect();
        Ok(Element { free, torsion })
    }

    pub fn neg(&self, x: &Element) -> Result<Element> {
        self.scale(-1, x)
    }

    pub fn sub(&self, x: &Element, y: &Element) -> Result<Element> {
        self.add(x, &self.neg(y)?)
    }

    /// `n * x`; `n` may be negative.
    pub fn scale(&self, n: i64, x: &Element) -> Result<Element> {
        self.require(x)?;
        let free = x
            .free
            .iter()
            .map(|&a| self.check(a as i128 * n as i128))
            .collect::<Result<Coords>>()?;
        let torsion = x
            .torsion
            .iter()
            .zip(&self.torsion)
            .map(|(&a, &m)| ((a as i128 * n as i128).rem_euclid(m as i128)) as i64)
            .collect();
        Ok(Element { free, torsion })
    }

    /// Whether `n * x` is the identity.
    pub fn order_divides(&self, x: &Element, n: i64) -> bool {
        self.scale(n, x).is_ok_and(|y| y == self.zero())
    }

    /// Sum of `coeffs[j] * xs[j]`.
    pub fn combination(&self, coeffs: &[i64], xs: &[Element]) -> Result<Element> {
        if coeffs.len() != xs.len() {
            return Err(Error::structural("coefficient and element counts differ"));
        }
        let mut acc = self.zero();
        for (&c, x) in coeffs.iter().zip(xs) {
            acc = self.add_unchecked(&acc, &self.scale(c, x)?)?;
        }
        Ok(acc)
    }
}

impl fmt::Display for AmbientGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            d => parts.push(format!("Z^{d}")),
        }
        parts.extend(self.torsion.iter().map(|n| format!("Z/{n}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// A homomorphism given by the images of the source's standard generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homomorphism {
    source: AmbientGroup,
    target: AmbientGroup,
    images: Vec<Element>,
}

impl Homomorphism {
    /// Fails unless there is one image per generator and every torsion
    /// generator of order `n` maps to an element whose order divides `n`.
    pub fn new(source: AmbientGroup, target: AmbientGroup, images: Vec<Element>) -> Result<Self> {
        if images.len() != source.generator_count() {
            return Err(Error::structural(format!(
                "{} generator images given, source has {} generators",
                images.len(),
                source.generator_count()
            )));
        }
        for img in &images {
            target.require(img)?;
        }
        for (j, &n) in source.torsion_moduli().iter().enumerate() {
            let img = &images[source.free_rank() + j];
            if !target.order_divides(img, n) {
                return Err(Error::structural(format!(
                    "image {img} of a generator of order {n} does not have order dividing {n}"
                )));
            }
        }
        Ok(Homomorphism {
            source,
            target,
            images,
        })
    }

    pub fn identity(g: &AmbientGroup) -> Self {
        let images = (0..g.generator_count())
            .map(|i| g.generator(i).expect("in range"))
            .collect();
        Homomorphism {
            source: g.clone(),
            target: g.clone(),
            images,
        }
    }

    /// Reduction `Z -> Z/n`.
    pub fn reduction(n: i64) -> Result<Self> {
        let target = AmbientGroup::cyclic(n)?;
        let one = target.int(1)?;
        Homomorphism::new(AmbientGroup::integers(), target, vec![one])
    }

    pub fn source(&self) -> &AmbientGroup {
        &self.source
    }

    pub fn target(&self) -> &AmbientGroup {
        &self.target
    }

    pub fn images(&self) -> &[Element] {
        &self.images
    }

    pub fn apply(&self, x: &Element) -> Result<Element> {
        self.source.require(x)?;
        let coeffs: Vec<i64> = x.free.iter().chain(&x.torsion).copied().collect();
        self.target.combination(&coeffs, &self.images)
    }
}

/// `x -> d*x + b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    dilation: i64,
    translation: Element,
}

impl AffineMap {
    pub fn new(dilation: i64, translation: Element) -> Result<Self> {
        if dilation < 1 {
            return Err(Error::structural("affine dilation must be at least 1"));
        }
        Ok(AffineMap {
            dilation,
            translation,
        })
    }

    pub fn dilation(&self) -> i64 {
        self.dilation
    }

    pub fn translation(&self) -> &Element {
        &self.translation
    }

    pub fn apply(&self, g: &AmbientGroup, x: &Element) -> Result<Element> {
        g.add(&g.scale(self.dilation, x)?, &self.translation)
    }
}
