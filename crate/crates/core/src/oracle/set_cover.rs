//! Exact minimum translate covers `S ⊆ X + T` by branch and bound.

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::set_model::{same_ambient, FiniteSet};

type Mask = Vec<u64>;

fn count(m: &[u64]) -> u32 {
    m.iter().map(|w| w.count_ones()).sum()
}

fn and(a: &[u64], b: &[u64]) -> Mask {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

fn and_not(a: &[u64], b: &[u64]) -> Mask {
    a.iter().zip(b).map(|(x, y)| x & !y).collect()
}

fn is_empty(m: &[u64]) -> bool {
    m.iter().all(|&w| w == 0)
}

fn first_bits(m: &[u64]) -> impl Iterator<Item = usize> + '_ {
    m.iter().enumerate().flat_map(|(wi, &w)| {
        let mut w = w;
        std::iter::from_fn(move || {
            if w == 0 {
                return None;
            }
            let b = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(wi * 64 + b)
        })
    })
}

struct Instance {
    /// Coverage of each candidate, candidates in rank order.
    masks: Vec<Mask>,
    /// For each element of `S`, the candidates covering it (ascending).
    covering: Vec<Vec<usize>>,
}

impl Instance {
    /// Whether `uncovered` can be covered by at most `budget` candidates with index `>= from`.
    fn feasible(&self, uncovered: &[u64], budget: usize, from: usize) -> bool {
        if is_empty(uncovered) {
            return true;
        }
        if budget == 0 {
            return false;
        }
        let best = self.masks[from..]
            .iter()
            .map(|m| count(&and(m, uncovered)))
            .max()
            .unwrap_or(0) as usize;
        let need = count(uncovered) as usize;
        if best == 0 || need.div_ceil(best) > budget {
            return false;
        }
        // branch on the uncovered element with the fewest usable candidates
        let mut pivot: Option<Vec<usize>> = None;
        for e in first_bits(uncovered) {
            let options: Vec<usize> = self.covering[e]
                .iter()
                .copied()
                .filter(|&c| c >= from)
                .collect();
            if options.is_empty() {
                return false;
            }
            if pivot.as_ref().is_none_or(|p| options.len() < p.len()) {
                pivot = Some(options);
            }
        }
        let mut options: Vec<(u32, usize, Mask)> = pivot
            .unwrap()
            .into_iter()
            .map(|c| {
                let m = and(&self.masks[c], uncovered);
                (count(&m), c, m)
            })
            .collect();
        options.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        let mut seen: Vec<Mask> = Vec::new();
        for (_, _, m) in options {
            if seen.contains(&m) {
                continue;
            }
            if self.feasible(&and_not(uncovered, &m), budget - 1, from) {
                return true;
            }
            seen.push(m);
        }
        false
    }

    fn greedy(&self, all: &[u64]) -> usize {
        let mut uncovered = all.to_vec();
        let mut used = 0;
        while !is_empty(&uncovered) {
            let best = self
                .masks
                .iter()
                .max_by_key(|m| count(&and(m, &uncovered)))
                .expect("every element has a candidate");
            uncovered = and_not(&uncovered, best);
            used += 1;
        }
        used
    }
}

/// A minimum-size `X` with `S ⊆ X + T`.
///
/// Candidates `s - t` are ranked by how much of `S` they cover (descending),
/// then by element order; among all minimum covers the one whose rank list is
/// lexicographically least is returned.
pub fn min_translate_cover(s: &FiniteSet, t: &FiniteSet) -> Result<FiniteSet> {
    min_translate_cover_with(s, t, Capacity::global().min_cover)
}

pub fn min_translate_cover_with(s: &FiniteSet, t: &FiniteSet, limit: usize) -> Result<FiniteSet> {
    same_ambient(s.ambient(), t.ambient())?;
    if s.is_empty() || t.is_empty() {
        return Err(Error::structural("minimum covers need nonempty S and T"));
    }
    if s.len() > limit {
        return Err(Error::Capacity {
            what: "minimum cover target size",
            needed: s.len() as u128,
            limit: limit as u128,
        });
    }
    let g = s.ambient();
    let elems: Vec<_> = s.iter().collect();
    let mut candidates = std::collections::BTreeSet::new();
    for x in &elems {
        for y in t.iter() {
            candidates.insert(g.sub(x, y)?);
        }
    }
    let words = elems.len().div_ceil(64);
    let mut ranked = Vec::with_capacity(candidates.len());
    for c in candidates {
        let mut m = vec![0u64; words];
        for (i, x) in elems.iter().enumerate() {
            if t.contains(&g.sub(x, &c)?) {
                m[i >> 6] |= 1 << (i & 63);
            }
        }
        ranked.push((count(&m), c, m));
    }
    // Candidate order: coverage descending, then element order. Covers are
    // compared lexicographically as lists of candidate ranks.
    ranked.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    let mut covering = vec![Vec::new(); elems.len()];
    for (ci, (_, _, m)) in ranked.iter().enumerate() {
        for i in first_bits(m) {
            covering[i].push(ci);
        }
    }
    let (candidates, masks): (Vec<_>, Vec<_>) = ranked.into_iter().map(|(_, c, m)| (c, m)).unzip();
    let inst = Instance { masks, covering };
    let mut all = vec![u64::MAX; words];
    if elems.len() % 64 != 0 {
        all[words - 1] = (1u64 << (elems.len() % 64)) - 1;
    }

    let upper = inst.greedy(&all);
    let size = (1..upper)
        .find(|&k| inst.feasible(&all, k, 0))
        .unwrap_or(upper);

    // Fix members from the smallest up, keeping the rest completable.
    let mut chosen = Vec::with_capacity(size);
    let mut uncovered = all;
    let mut from = 0;
    while !is_empty(&uncovered) {
        let left = size - chosen.len();
        let pick = (from..candidates.len())
            .find(|&c| {
                let m = &inst.masks[c];
                !is_empty(&and(m, &uncovered))
                    && inst.feasible(&and_not(&uncovered, m), left - 1, c + 1)
            })
            .expect("an optimal completion exists");
        uncovered = and_not(&uncovered, &inst.masks[pick]);
        chosen.push(candidates[pick].clone());
        from = pick + 1;
    }
    FiniteSet::new(g.clone(), chosen)
}
