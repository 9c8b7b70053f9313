//! Seeded train/valid/test partitions and the inductive unseen-node mask.

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::rng::seeded;

/// Disjoint index sets. For link prediction the indices are tuple indices, for node
/// classification node ids. `unseen` marks nodes withheld from the training view.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SplitSpec {
    pub train: Vec<usize>,
    pub valid: Vec<usize>,
    pub test: Vec<usize>,
    pub unseen: Option<Vec<bool>>,
}

impl SplitSpec {
    pub fn is_unseen(&self, node: usize) -> bool {
        self.unseen.as_ref().is_some_and(|u| u[node])
    }

    fn check_disjoint(&self) -> Result<()> {
        let mut all: Vec<usize> = self
            .train
            .iter()
            .chain(&self.valid)
            .chain(&self.test)
            .copied()
            .collect();
        let n = all.len();
        all.sort_unstable();
        all.dedup();
        if all.len() != n {
            return Err(Error::Consistency("split sets overlap".into()));
        }
        Ok(())
    }

    /// Builds a split from explicit index lists (e.g. split files).
    pub fn from_parts(train: Vec<usize>, valid: Vec<usize>, test: Vec<usize>) -> Result<Self> {
        let s = SplitSpec {
            train,
            valid,
            test,
            unseen: None,
        };
        s.check_disjoint()?;
        Ok(s)
    }
}

fn check_ratios(ratios: [f64; 3]) -> Result<()> {
    if ratios.iter().any(|r| !(0.0..=1.0).contains(r)) || ratios.iter().sum::<f64>() > 1.0 + 1e-9 {
        return Err(Error::Argument(format!(
            "split ratios must be non-negative and sum to at most 1, got {ratios:?}"
        )));
    }
    Ok(())
}

fn counts(n: usize, ratios: [f64; 3]) -> [usize; 3] {
    let mut c = ratios.map(|r| (r * n as f64).round() as usize);
    // rounding can overshoot by one per set
    while c.iter().sum::<usize>() > n {
        let i = (0..3).rev().find(|&i| c[i] > 0).unwrap();
        c[i] -= 1;
    }
    c
}

/// Shuffles `items` with `seed` and cuts train/valid/test by `ratios`
/// (each count is `round(ratio · len)`). Each set is returned sorted.
pub fn make_splits(items: &[usize], ratios: [f64; 3], seed: u64) -> Result<SplitSpec> {
    check_ratios(ratios)?;
    let mut order = items.to_vec();
    order.shuffle(&mut seeded(seed));
    let [a, b, c] = counts(order.len(), ratios);
    let take = |range: std::ops::Range<usize>| {
        let mut v = order[range].to_vec();
        v.sort_unstable();
        v
    };
    Ok(SplitSpec {
        train: take(0..a),
        valid: take(a..a + b),
        test: take(a + b..a + b + c),
        unseen: None,
    })
}

/// Marks exactly `round(unseen_fraction · node_count)` nodes as unseen.
pub fn inductive_mask(node_count: usize, unseen_fraction: f64, seed: u64) -> Result<Vec<bool>> {
    if !(unseen_fraction > 0.0 && unseen_fraction < 1.0) {
        return Err(Error::Argument(format!(
            "unseen fraction must lie in (0, 1), got {unseen_fraction}"
        )));
    }
    let mut order: Vec<usize> = (0..node_count).collect();
    order.shuffle(&mut seeded(seed));
    let k = (unseen_fraction * node_count as f64).round() as usize;
    let mut mask = vec![false; node_count];
    for &i in &order[..k] {
        mask[i] = true;
    }
    Ok(mask)
}

/// Inductive node split: a fraction of nodes becomes unseen (and is also the unseen
/// evaluation set); train/valid/test are then drawn from the remaining `candidates`
/// with counts `round(ratio · candidates.len())`, so that e.g. ratios (0.2, 0, 0.4)
/// with 40 % unseen reproduce a 20 / 40 / 40 layout.
pub fn inductive_split(
    node_count: usize,
    candidates: &[usize],
    unseen_fraction: f64,
    ratios: [f64; 3],
    seed: u64,
) -> Result<SplitSpec> {
    check_ratios(ratios)?;
    let mask = inductive_mask(node_count, unseen_fraction, seed)?;
    let seen: Vec<usize> = candidates.iter().copied().filter(|&n| !mask[n]).collect();
    let [a, b, c] = counts(candidates.len(), ratios);
    if a + b + c > seen.len() {
        return Err(Error::Argument(format!(
            "ratios {ratios:?} need {} seen nodes but only {} remain after removing unseen ones",
            a + b + c,
            seen.len()
        )));
    }
    let mut order = seen;
    order.shuffle(&mut seeded(seed.wrapping_add(1)));
    let sorted = |mut v: Vec<usize>| {
        v.sort_unstable();
        v
    };
    Ok(SplitSpec {
        train: sorted(order[..a].to_vec()),
        valid: sorted(order[a..a + b].to_vec()),
        test: sorted(order[a + b..a + b + c].to_vec()),
        unseen: Some(mask),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forty_percent_of_ten() {
        let m = inductive_mask(10, 0.4, 3).unwrap();
        assert_eq!(m.iter().filter(|&&b| b).count(), 4);
    }

    #[test]
    fn ratios_on_hundred() {
        let items: Vec<usize> = (0..100).collect();
        let s = make_splits(&items, [0.2, 0.4, 0.4], 11).unwrap();
        assert_eq!((s.train.len(), s.valid.len(), s.test.len()), (20, 40, 40));
        s.check_disjoint().unwrap();
    }

    #[test]
    fn deterministic_for_seed() {
        let items: Vec<usize> = (0..57).collect();
        assert_eq!(
            make_splits(&items, [0.5, 0.2, 0.3], 9).unwrap(),
            make_splits(&items, [0.5, 0.2, 0.3], 9).unwrap()
        );
        assert_ne!(
            make_splits(&items, [0.5, 0.2, 0.3], 9).unwrap(),
            make_splits(&items, [0.5, 0.2, 0.3], 10).unwrap()
        );
    }

    #[test]
    fn bad_arguments() {
        assert!(inductive_mask(10, 0.0, 1).is_err());
        assert!(inductive_mask(10, 1.0, 1).is_err());
        assert!(make_splits(&[1, 2], [0.6, 0.6, 0.0], 1).is_err());
    }

    #[test]
    fn inductive_layout() {
        let nodes: Vec<usize> = (0..100).collect();
        let s = inductive_split(100, &nodes, 0.4, [0.2, 0.0, 0.4], 5).unwrap();
        let mask = s.unseen.clone().unwrap();
        assert_eq!(mask.iter().filter(|&&b| b).count(), 40);
        assert_eq!((s.train.len(), s.valid.len(), s.test.len()), (20, 0, 40));
        assert!(s.train.iter().chain(&s.test).all(|&n| !mask[n]));
    }
}
