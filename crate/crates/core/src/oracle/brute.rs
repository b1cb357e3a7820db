//! Representation counts by listing every weakly increasing tuple.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::capacity::Capacity;
use crate::error::{Error, Result};
use crate::layers::{integer_colors, representation_mass, RepProfile};
use crate::set_model::{ColorTuple, HVector};

pub fn brute_rep_function(t: &ColorTuple, h: &HVector) -> Result<RepProfile> {
    brute_rep_function_with(t, h, Capacity::global().brute_rep)
}

pub fn brute_rep_function_with(t: &ColorTuple, h: &HVector, limit: u128) -> Result<RepProfile> {
    t.check_h(h)?;
    let colors = integer_colors(t)?;
    let needed = representation_mass(&colors.iter().map(Vec::len).collect::<Vec<_>>(), h)?;
    if needed > limit {
        return Err(Error::Capacity {
            what: "enumerated representations",
            needed,
            limit,
        });
    }
    // all sums of one color, one entry per weakly increasing h_i-tuple
    let per_color: Vec<Vec<i64>> = colors
        .iter()
        .zip(h.entries())
        .map(|(a, &hi)| {
            a.iter()
                .copied()
                .combinations_with_replacement(hi as usize)
                .map(|c| c.iter().sum())
                .collect()
        })
        .collect();
    let mut counts = BTreeMap::new();
    for choice in per_color.iter().multi_cartesian_product() {
        *counts.entry(choice.into_iter().sum()).or_insert(0u128) += 1;
    }
    Ok(RepProfile {
        h: h.clone(),
        counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layers::representation_function;

    fn profile(sets: &[&[i64]], h: &[u64]) -> Vec<(i64, u128)> {
        let t = ColorTuple::integers(sets).unwrap();
        let p = brute_rep_function(&t, &HVector::new(h.to_vec())).unwrap();
        p.counts.into_iter().collect()
    }

    #[test]
    fn examples() {
        assert_eq!(profile(&[&[0, 1]], &[2]), vec![(0, 1), (1, 1), (2, 1)]);
        assert_eq!(
            profile(&[&[0, 1], &[0, 2]], &[1, 1]),
            vec![(0, 1), (1, 1), (2, 1), (3, 1)]
        );
        assert_eq!(profile(&[&[0, 1], &[0, 2]], &[0, 0]), vec![(0, 1)]);
    }

    #[test]
    fn matches_the_dynamic_program() {
        let t = ColorTuple::integers(&[&[0, 1, 3], &[-1, 2]]).unwrap();
        for a in 0..5 {
            for b in 0..5 {
                let h = HVector::new(vec![a, b]);
                assert_eq!(
                    brute_rep_function(&t, &h).unwrap(),
                    representation_function(&t, &h).unwrap()
                );
            }
        }
    }

    #[test]
    fn capacity_is_enforced() {
        let t = ColorTuple::integers(&[&[0, 1, 2, 3]]).unwrap();
        assert!(matches!(
            brute_rep_function_with(&t, &HVector::new(vec![5]), 10),
            Err(Error::Capacity { needed: 56, .. })
        ));
    }
}
