use super::{ColorTuple, FiniteSet, HVector};
use crate::error::{Error, Result};

/// Data needed to move results on a normalized tuple back to the original one.
///
/// Original colors `A'_i` with at least two elements satisfy
/// `A'_i = divisor * A_i + offsets[i]`; singleton colors (listed in
/// `singletons`, 0-based) are `{offsets[i]}` and are dropped from the
/// normalized tuple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizationRecord {
    pub divisor: i64,
    pub offsets: Vec<i64>,
    pub singletons: Vec<usize>,
}

impl NormalizationRecord {
    /// Indices of the colors kept in the normalized tuple.
    pub fn kept(&self) -> Vec<usize> {
        (0..self.offsets.len())
            .filter(|i| !self.singletons.contains(i))
            .collect()
    }

    /// Restriction of a full-length `h` to the kept colors.
    pub fn restrict(&self, h: &HVector) -> HVector {
        HVector::new(self.kept().into_iter().map(|i| h.entries()[i]).collect())
    }

    /// `sum_i h_i * offsets[i]` over all colors.
    pub fn shift(&self, h: &HVector) -> i64 {
        h.entries()
            .iter()
            .zip(&self.offsets)
            .map(|(&hi, &a)| hi as i64 * a)
            .sum()
    }

    /// Maps `n` in a normalized sumset or layer at `h_I` to the original one at `h`.
    pub fn transport(&self, n: i64, h: &HVector) -> i64 {
        self.divisor * n + self.shift(h)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Shifts every non-singleton color to minimum 0 and divides by the joint gcd.
///
/// Returns `None` for the tuple when every color is a singleton.
pub fn normalize_tuple(t: &ColorTuple) -> Result<(Option<ColorTuple>, NormalizationRecord)> {
    if !t.ambient().is_integers() {
        return Err(Error::unsupported(
            "normalization is defined for tuples over Z",
        ));
    }
    let colors = t.finite_colors()?;
    let mut offsets = Vec::with_capacity(colors.len());
    let mut singletons = Vec::new();
    let mut divisor = 0;
    let mut shifted: Vec<Vec<i64>> = Vec::new();
    for (i, c) in colors.iter().enumerate() {
        let vals = c.to_ints().expect("integer ambient");
        let min = *vals
            .first()
            .ok_or_else(|| Error::structural("color classes must be nonempty"))?;
        offsets.push(min);
        if vals.len() == 1 {
            singletons.push(i);
            continue;
        }
        let s: Vec<i64> = vals.iter().map(|v| v - min).collect();
        divisor = s.iter().fold(divisor, |g, &v| gcd(g, v));
        shifted.push(s);
    }
    if shifted.is_empty() {
        return Ok((
            None,
            NormalizationRecord {
                divisor: 1,
                offsets,
                singletons,
            },
        ));
    }
    let sets = shifted
        .into_iter()
        .map(|s| FiniteSet::integers(s.into_iter().map(|v| v / divisor)))
        .collect::<Result<Vec<_>>>()?;
    Ok((
        Some(ColorTuple::finite(sets)?),
        NormalizationRecord {
            divisor,
            offsets,
            singletons,
        },
    ))
}

/// Whether each color has minimum 0 and the union has gcd 1.
pub fn is_normalized(t: &ColorTuple) -> bool {
    let Ok(colors) = t.finite_colors() else {
        return false;
    };
    if !t.ambient().is_integers() {
        return false;
    }
    let mut g = 0;
    for c in colors {
        let vals = c.to_ints().expect("integer ambient");
        if vals.first() != Some(&0) {
            return false;
        }
        g = vals.iter().fold(g, |acc, &v| gcd(acc, v));
    }
    g == 1
}
