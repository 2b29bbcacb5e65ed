use knn_core::distance::{manhattan, squared_euclidean};
use knn_core::{ColumnKind, Dataset, DistanceMetric, NeighborIndex, SearchBackend};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn dataset(rows: &[Vec<f64>]) -> Dataset {
    let d = rows[0].len();
    Dataset::from_rows(
        (0..d).map(|j| format!("f{j}")).collect(),
        vec![ColumnKind::Numeric; d],
        rows,
        vec![0.0; rows.len()],
    )
    .unwrap()
}

/// Exhaustive reference: every distance through the public API, full sort on
/// (surrogate, index).
fn oracle(rows: &[Vec<f64>], metric: DistanceMetric, q: &[f64], k: usize) -> (Vec<usize>, Vec<f64>) {
    let mut scored: Vec<(f64, usize)> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let s = match metric {
                DistanceMetric::Euclidean => squared_euclidean(q, r).unwrap(),
                _ => manhattan(q, r).unwrap(),
            };
            (s, i)
        })
        .collect();
    scored.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    scored.truncate(k);
    let finish = |s: f64| if metric == DistanceMetric::Euclidean { s.sqrt() } else { s };
    (scored.iter().map(|p| p.1).collect(), scored.iter().map(|p| finish(p.0)).collect())
}

fn random_rows(rng: &mut ChaCha8Rng, n: usize, d: usize, lattice: bool) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            (0..d)
                .map(|_| {
                    if lattice {
                        f64::from(rng.random_range(-3i32..=3))
                    } else {
                        rng.random_range(-10.0..10.0)
                    }
                })
                .collect()
        })
        .collect()
}

#[test]
fn kd_tree_matches_brute_force_and_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for instance in 0..1000 {
        let n = rng.random_range(1..=600);
        let d = rng.random_range(1..=8);
        // every fourth instance on a coarse lattice to force exact ties
        let rows = random_rows(&mut rng, n, d, instance % 4 == 0);
        let data = dataset(&rows);
        let q: Vec<f64> = (0..d).map(|_| rng.random_range(-11.0..11.0)).collect();
        let k = rng.random_range(1..=50);
        for metric in [DistanceMetric::Euclidean, DistanceMetric::Manhattan] {
            let brute = NeighborIndex::build(&data, metric, SearchBackend::BruteForce).unwrap();
            let tree = NeighborIndex::build(&data, metric, SearchBackend::KdTree).unwrap();
            let a = brute.query(&q, k).unwrap();
            let b = tree.query(&q, k).unwrap();
            assert_eq!(a.indices, b.indices, "instance {instance} {metric}");
            let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
            assert_eq!(bits(&a.distances), bits(&b.distances));
            let (oi, od) = oracle(&rows, metric, &q, k);
            assert_eq!(a.indices, oi);
            assert_eq!(bits(&a.distances), bits(&od));
        }
    }
}

#[test]
fn radius_of_kth_matches_last_neighbor() {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let rows = random_rows(&mut rng, 50, 3, false);
    let data = dataset(&rows);
    let idx = NeighborIndex::build(&data, DistanceMetric::Euclidean, SearchBackend::KdTree).unwrap();
    for _ in 0..20 {
        let q: Vec<f64> = (0..3).map(|_| rng.random_range(-10.0..10.0)).collect();
        let k = rng.random_range(1..=50);
        let (_, od) = oracle(&rows, DistanceMetric::Euclidean, &q, k);
        assert_eq!(idx.query_radius_of_kth(&q, k).unwrap(), *od.last().unwrap());
    }
}

#[test]
fn a_hundred_point_kd_index() {
    let mut rng = ChaCha8Rng::seed_from_u64(100);
    let data = dataset(&random_rows(&mut rng, 100, 4, false));
    let idx = NeighborIndex::build(&data, DistanceMetric::Euclidean, SearchBackend::KdTree).unwrap();
    assert_eq!(idx.len(), 100);
}

fn instance() -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<f64>, usize)> {
    (1usize..=5, 1usize..120).prop_flat_map(|(d, n)| {
        (
            prop::collection::vec(prop::collection::vec(-5.0f64..5.0, d), n),
            prop::collection::vec(-6.0f64..6.0, d),
            1usize..=n + 3,
        )
    })
}

proptest! {
    #[test]
    fn completeness_and_order((rows, q, k) in instance()) {
        let data = dataset(&rows);
        for metric in [DistanceMetric::Euclidean, DistanceMetric::Manhattan] {
            let idx = NeighborIndex::build(&data, metric, SearchBackend::KdTree).unwrap();
            let set = idx.query(&q, k).unwrap();
            prop_assert_eq!(set.len(), k.min(rows.len()));
            prop_assert!(set.distances.windows(2).all(|w| w[0] <= w[1]));
            let mut seen = set.indices.clone();
            seen.sort_unstable();
            seen.dedup();
            prop_assert_eq!(seen.len(), set.len());
            let worst = *set.distances.last().unwrap();
            for (i, r) in rows.iter().enumerate() {
                if !set.indices.contains(&i) {
                    let d = knn_core::distance::distance(metric, &q, r).unwrap();
                    prop_assert!(worst <= d);
                }
            }
            prop_assert_eq!(idx.query(&q, k).unwrap(), set);
        }
    }
}
