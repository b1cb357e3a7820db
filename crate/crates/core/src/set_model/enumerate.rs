use std::collections::{BTreeSet, HashSet};

use super::{ColorClass, FiniteSet, LinearSet, SemilinearSet, Window};
use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::group::{AmbientGroup, Element};

/// Replaces every bounded piece by the singleton pieces `P(x; )` of its points.
pub fn refine_to_unbounded(ambient: &AmbientGroup, s: &SemilinearSet) -> Result<SemilinearSet> {
    refine_to_unbounded_with(ambient, s, Capacity::global().refine_pieces)
}

pub fn refine_to_unbounded_with(
    ambient: &AmbientGroup,
    s: &SemilinearSet,
    max_pieces: u128,
) -> Result<SemilinearSet> {
    let mut pieces = Vec::new();
    let mut total: u128 = 0;
    for piece in &s.pieces {
        match &piece.bounds {
            None => {
                total += 1;
                pieces.push(piece.clone());
            }
            Some(bounds) => {
                let count = bounds
                    .iter()
                    .try_fold(1u128, |acc, &m| acc.checked_mul(m as u128 + 1))
                    .unwrap_or(u128::MAX);
                total = total.saturating_add(count);
                if total > max_pieces {
                    return Err(Error::Capacity {
                        what: "refined semilinear pieces",
                        needed: total,
                        limit: max_pieces,
                    });
                }
                // Coincident points collapse to one singleton piece.
                let points: BTreeSet<Element> = bounded_points(ambient, piece, bounds)?
                    .into_iter()
                    .collect();
                pieces.extend(points.into_iter().map(LinearSet::singleton));
            }
        }
        if total > max_pieces {
            return Err(Error::Capacity {
                what: "refined semilinear pieces",
                needed: total,
                limit: max_pieces,
            });
        }
    }
    SemilinearSet::new(pieces)
}

/// All points `base + sum n_j g_j` with `0 <= n_j <= bounds[j]`.
fn bounded_points(
    ambient: &AmbientGroup,
    piece: &LinearSet,
    bounds: &[u64],
) -> Result<Vec<Element>> {
    let mut out = Vec::new();
    let mut coeffs = vec![0u64; bounds.len()];
    loop {
        let c: Vec<i64> = coeffs.iter().map(|&n| n as i64).collect();
        let offset = ambient.combination(&c, &piece.generators)?;
        out.push(ambient.add(&piece.base, &offset)?);
        // odometer step
        let mut i = 0;
        while i < coeffs.len() && coeffs[i] == bounds[i] {
            coeffs[i] = 0;
            i += 1;
        }
        if i == coeffs.len() {
            return Ok(out);
        }
        coeffs[i] += 1;
    }
}

/// Exact membership of `x` (which must lie in `w`) in the set described by `c`.
pub fn member_up_to_bound(
    ambient: &AmbientGroup,
    c: &ColorClass,
    x: &Element,
    w: &Window,
) -> Result<bool> {
    w.check_rank(ambient)?;
    ambient.require(x)?;
    if !w.contains(x) {
        return Err(Error::structural(format!(
            "{x} lies outside the window {w}"
        )));
    }
    // Everything reachable is monotone in the free part, so the window pinned at x suffices.
    let point = Window::from_corners(x.free(), x.free()).expect("degenerate window");
    Ok(enumerate_window(ambient, c, &point)?.contains(x))
}

/// The elements of `c` inside `w`.
pub fn enumerate_window(ambient: &AmbientGroup, c: &ColorClass, w: &Window) -> Result<FiniteSet> {
    w.check_rank(ambient)?;
    c.validate(ambient)?;
    let lo = w.lo();
    let hi = w.hi();
    let mut out: BTreeSet<Element> = BTreeSet::new();
    match c {
        ColorClass::Finite(s) => {
            out.extend(s.iter().filter(|x| w.contains(x)).cloned());
        }
        ColorClass::TranslatedMonoid { base, monoid } => {
            out = linear_closure(
                ambient,
                std::slice::from_ref(base),
                &monoid.generators,
                &lo,
                &hi,
            )?;
        }
        ColorClass::FinitePlusMonoid { core, monoid } => {
            let starts: Vec<Element> = core.iter().cloned().collect();
            out = linear_closure(ambient, &starts, &monoid.generators, &lo, &hi)?;
        }
        ColorClass::Semilinear(s) => {
            for piece in &s.pieces {
                match &piece.bounds {
                    None => out.extend(linear_closure(
                        ambient,
                        std::slice::from_ref(&piece.base),
                        &piece.generators,
                        &lo,
                        &hi,
                    )?),
                    Some(bounds) => {
                        let count = bounds
                            .iter()
                            .try_fold(1u128, |acc, &m| acc.checked_mul(m as u128 + 1));
                        let limit = Capacity::global().window_points as u128;
                        match count {
                            Some(n) if n <= limit => {}
                            _ => {
                                return Err(Error::Capacity {
                                    what: "bounded piece points",
                                    needed: count.unwrap_or(u128::MAX),
                                    limit,
                                })
                            }
                        }
                        out.extend(
                            bounded_points(ambient, piece, bounds)?
                                .into_iter()
                                .filter(|x| w.contains(x)),
                        );
                    }
                }
            }
        }
    }
    Ok(FiniteSet::from_trusted(ambient.clone(), out))
}

/// Points `s + sum n_j g_j` (s a start, n_j >= 0) whose free parts lie in `[lo, hi]`.
/// Generators have nonnegative free parts, so anything above `hi` can be dropped.
fn linear_closure(
    ambient: &AmbientGroup,
    starts: &[Element],
    generators: &[Element],
    lo: &[i64],
    hi: &[i64],
) -> Result<BTreeSet<Element>> {
    let below_hi = |x: &Element| x.free().iter().zip(hi).all(|(v, h)| v <= h);
    let above_lo = |x: &Element| x.free().iter().zip(lo).all(|(v, l)| v >= l);
    let limit = Capacity::global().window_points;

    if ambient.is_integers() {
        return integer_closure(ambient, starts, generators, lo[0], hi[0], limit);
    }

    let mut seen: HashSet<Element> = HashSet::new();
    let mut stack: Vec<Element> = starts.iter().filter(|x| below_hi(x)).cloned().collect();
    seen.extend(stack.iter().cloned());
    while let Some(x) = stack.pop() {
        for g in generators {
            let y = ambient.add_unchecked(&x, g)?;
            if below_hi(&y) && !seen.contains(&y) {
                if seen.len() >= limit {
                    return Err(Error::Capacity {
                        what: "window enumeration points",
                        needed: seen.len() as u128 + 1,
                        limit: limit as u128,
                    });
                }
                seen.insert(y.clone());
                stack.push(y);
            }
        }
    }
    Ok(seen.into_iter().filter(|x| above_lo(x)).collect())
}

/// Dense reachability over `[min start, hi]`: the numerical-semigroup sieve.
fn integer_closure(
    ambient: &AmbientGroup,
    starts: &[Element],
    generators: &[Element],
    lo: i64,
    hi: i64,
    limit: usize,
) -> Result<BTreeSet<Element>> {
    let starts: Vec<i64> = starts
        .iter()
        .map(|x| x.free()[0])
        .filter(|&s| s <= hi)
        .collect();
    let Some(&origin) = starts.iter().min() else {
        return Ok(BTreeSet::new());
    };
    let span = (hi as i128 - origin as i128 + 1) as u128;
    if span > limit as u128 {
        return Err(Error::Capacity {
            what: "window enumeration points",
            needed: span,
            limit: limit as u128,
        });
    }
    let span = span as usize;
    let mut steps: Vec<usize> = generators
        .iter()
        .map(|g| g.free()[0] as usize)
        .filter(|&g| g > 0)
        .collect();
    steps.sort_unstable();
    steps.dedup();
    let mut reach = vec![false; span];
    for s in starts {
        reach[(s - origin) as usize] = true;
    }
    for i in 0..span {
        if reach[i] {
            for &g in &steps {
                match reach.get_mut(i + g) {
                    Some(slot) => *slot = true,
                    None => break,
                }
            }
        }
    }
    let first = (lo.max(origin) - origin) as usize;
    (first..span)
        .filter(|&i| reach[i])
        .map(|i| ambient.int(origin + i as i64))
        .collect()
}
