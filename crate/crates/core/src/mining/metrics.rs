use std::collections::HashMap;
use std::hash::Hash;

use crate::error::{invalid, Result};

struct PairCounts {
    /// Pairs together in both partitions.
    both: u64,
    /// Pairs together in `pred`.
    pred: u64,
    /// Pairs together in `truth`.
    truth: u64,
    total: u64,
}

fn choose2(n: u64) -> u64 {
    n * n.saturating_sub(1) / 2
}

fn pair_counts<A: Eq + Hash, B: Eq + Hash>(pred: &[A], truth: &[B]) -> Result<PairCounts> {
    if pred.len() != truth.len() {
        return invalid(format!(
            "label sequences differ in length: {} vs {}",
            pred.len(),
            truth.len()
        ));
    }
    let mut cells: HashMap<(&A, &B), u64> = HashMap::new();
    let mut rows: HashMap<&A, u64> = HashMap::new();
    let mut cols: HashMap<&B, u64> = HashMap::new();
    for (p, t) in pred.iter().zip(truth) {
        *cells.entry((p, t)).or_default() += 1;
        *rows.entry(p).or_default() += 1;
        *cols.entry(t).or_default() += 1;
    }
    Ok(PairCounts {
        both: cells.values().map(|&c| choose2(c)).sum(),
        pred: rows.values().map(|&c| choose2(c)).sum(),
        truth: cols.values().map(|&c| choose2(c)).sum(),
        total: choose2(pred.len() as u64),
    })
}

/// Fraction of point pairs on which the two partitions agree.
pub fn rand_index<A: Eq + Hash, B: Eq + Hash>(pred: &[A], truth: &[B]) -> Result<f64> {
    let c = pair_counts(pred, truth)?;
    if c.total == 0 {
        return Ok(1.0);
    }
    // agreements = together in both + apart in both
    let agree = c.total + 2 * c.both - c.pred - c.truth;
    Ok(agree as f64 / c.total as f64)
}

/// Rand index corrected for chance (Hubert and Arabie).
pub fn adjusted_rand_index<A: Eq + Hash, B: Eq + Hash>(pred: &[A], truth: &[B]) -> Result<f64> {
    let c = pair_counts(pred, truth)?;
    if c.total == 0 {
        return Ok(1.0);
    }
    let index = c.both as f64;
    let expected = c.pred as f64 * c.truth as f64 / c.total as f64;
    let max = 0.5 * (c.pred as f64 + c.truth as f64);
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn brute_force_ri(a: &[usize], b: &[usize]) -> f64 {
        let (mut agree, mut total) = (0u64, 0u64);
        for i in 0..a.len() {
            for j in i + 1..a.len() {
                total += 1;
                if (a[i] == a[j]) == (b[i] == b[j]) {
                    agree += 1;
                }
            }
        }
        agree as f64 / total as f64
    }

    #[test]
    fn examples() {
        let x = [0, 0, 1, 1, 2];
        assert_eq!(rand_index(&x, &x).unwrap(), 1.0);
        assert_eq!(adjusted_rand_index(&x, &x).unwrap(), 1.0);
        assert_eq!(rand_index(&[0, 0, 1, 1], &[0, 1, 0, 1]).unwrap(), 2.0 / 6.0);
        assert!(rand_index(&[0, 1], &[0]).is_err());
        // relabelling does not matter
        assert_eq!(adjusted_rand_index(&[0, 0, 1, 1], &["b", "b", "a", "a"]).unwrap(), 1.0);
    }

    #[test]
    fn matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let n = rng.random_range(2..40);
            let a: Vec<usize> = (0..n).map(|_| rng.random_range(0..4)).collect();
            let b: Vec<usize> = (0..n).map(|_| rng.random_range(0..5)).collect();
            assert_eq!(rand_index(&a, &b).unwrap(), brute_force_ri(&a, &b));
        }
    }

    #[test]
    fn ari_of_shuffled_labels_centres_on_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let truth: Vec<usize> = (0..60).map(|i| i % 3).collect();
        let trials = 2000;
        let mut sum = 0.0;
        for _ in 0..trials {
            let mut pred = truth.clone();
            pred.shuffle(&mut rng);
            let ari = adjusted_rand_index(&pred, &truth).unwrap();
            assert!(ari <= 1.0);
            sum += ari;
        }
        assert!((sum / trials as f64).abs() < 0.01);
    }
}
