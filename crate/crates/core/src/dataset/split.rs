use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Train/test partition parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitSpec {
    train_fraction: f64,
    seed: u64,
}

impl SplitSpec {
    pub fn new(train_fraction: f64, seed: u64) -> Result<Self> {
        if !(train_fraction > 0.0 && train_fraction < 1.0) {
            return Err(Error::InvalidFraction(train_fraction));
        }
        Ok(SplitSpec {
            train_fraction,
            seed,
        })
    }

    pub fn train_fraction(&self) -> f64 {
        self.train_fraction
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of training rows for a dataset of `rows` rows.
    pub fn train_rows(&self, rows: usize) -> usize {
        (rows as f64 * self.train_fraction).round() as usize
    }
}

impl Default for SplitSpec {
    fn default() -> Self {
        SplitSpec {
            train_fraction: 0.8,
            seed: 42,
        }
    }
}

/// Shuffles `0..rows` with a seeded Fisher-Yates pass and cuts it into
/// `(train, test)` row indices.
pub fn split_indices(rows: usize, spec: &SplitSpec) -> Result<(Vec<usize>, Vec<usize>)> {
    let n_train = spec.train_rows(rows);
    if rows < 2 || n_train == 0 || n_train >= rows {
        return Err(Error::EmptySplit {
            rows,
            fraction: spec.train_fraction,
        });
    }
    let mut order: Vec<usize> = (0..rows).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    order.shuffle(&mut rng);
    let test = order.split_off(n_train);
    Ok((order, test))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn eighty_twenty_of_ten() {
        let (train, test) = split_indices(10, &SplitSpec::default()).unwrap();
        assert_eq!(train.len(), 8);
        assert_eq!(test.len(), 2);
        assert!(test.iter().all(|i| !train.contains(i)));
    }

    #[test]
    fn deterministic_for_seed() {
        let spec = SplitSpec::new(0.7, 9).unwrap();
        assert_eq!(split_indices(50, &spec).unwrap(), split_indices(50, &spec).unwrap());
        let other = SplitSpec::new(0.7, 10).unwrap();
        assert_ne!(split_indices(50, &spec).unwrap(), split_indices(50, &other).unwrap());
    }

    #[test]
    fn degenerate_splits_fail() {
        assert!(matches!(
            split_indices(1, &SplitSpec::default()),
            Err(Error::EmptySplit { rows: 1, .. })
        ));
        let tiny = SplitSpec::new(0.01, 1).unwrap();
        assert!(split_indices(10, &tiny).is_err());
        let huge = SplitSpec::new(0.99, 1).unwrap();
        assert!(split_indices(10, &huge).is_err());
    }

    #[test]
    fn fraction_bounds() {
        for f in [0.0, 1.0, -0.5, 1.5, f64::NAN] {
            assert!(matches!(SplitSpec::new(f, 0), Err(Error::InvalidFraction(_))));
        }
    }

    proptest! {
        #[test]
        fn split_is_a_partition(rows in 2usize..300, frac in 0.05f64..0.95, seed: u64) {
            let spec = SplitSpec::new(frac, seed).unwrap();
            if let Ok((train, test)) = split_indices(rows, &spec) {
                prop_assert_eq!(train.len() + test.len(), rows);
                let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
                all.sort_unstable();
                prop_assert_eq!(all, (0..rows).collect::<Vec<_>>());
            }
        }
    }
}
