//! Joint distributions over tuples, stored as exact integer counts over a
//! common denominator, plus Shannon entropy.

use std::collections::BTreeMap;

/// A distribution with exact probabilities count/denominator. Support tuples
/// are kept sorted lexicographically; counts are positive and sum to the
/// denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactDistribution {
    support: Vec<Vec<usize>>,
    counts: Vec<u64>,
    denominator: u64,
}

impl ExactDistribution {
    /// Builds from a tuple -> count map; zero counts are dropped.
    pub fn from_counts(counter: BTreeMap<Vec<usize>, u64>, denominator: u64) -> Self {
        let mut support = Vec::with_capacity(counter.len());
        let mut counts = Vec::with_capacity(counter.len());
        for (tuple, count) in counter {
            if count > 0 {
                support.push(tuple);
                counts.push(count);
            }
        }
        let total: u64 = counts.iter().sum();
        assert_eq!(total, denominator, "counts must sum to the denominator");
        ExactDistribution {
            support,
            counts,
            denominator,
        }
    }

    pub fn support(&self) -> &[Vec<usize>] {
        &self.support
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Shannon entropy in bits, from the exact ratios.
    pub fn entropy_bits(&self) -> f64 {
        let d = self.denominator as f64;
        self.counts
            .iter()
            .map(|&c| {
                let p = c as f64 / d;
                -p * p.log2()
            })
            .sum()
    }

    /// True iff all nonzero probabilities are equal.
    pub fn is_quasi_uniform(&self) -> bool {
        self.counts.windows(2).all(|w| w[0] == w[1])
    }

    /// Canonical form with counts/denominator divided by their common gcd,
    /// so distributions with different denominators compare as probability
    /// distributions.
    pub fn reduced(&self) -> ExactDistribution {
        let mut g = self.denominator;
        for &c in &self.counts {
            g = gcd(g, c);
        }
        ExactDistribution {
            support: self.support.clone(),
            counts: self.counts.iter().map(|&c| c / g).collect(),
            denominator: self.denominator / g,
        }
    }

    /// Marginal onto the given tuple positions (in the given order).
    pub fn marginal(&self, positions: &[usize]) -> ExactDistribution {
        let mut counter: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        for (tuple, &count) in self.support.iter().zip(&self.counts) {
            let key: Vec<usize> = positions.iter().map(|&p| tuple[p]).collect();
            *counter.entry(key).or_insert(0) += count;
        }
        ExactDistribution::from_counts(counter, self.denominator)
    }

    /// Applies a per-coordinate relabeling to every support tuple.
    pub fn relabel(&self, maps: &[&BTreeMap<usize, usize>]) -> ExactDistribution {
        let mut counter: BTreeMap<Vec<usize>, u64> = BTreeMap::new();
        for (tuple, &count) in self.support.iter().zip(&self.counts) {
            let key: Vec<usize> = tuple
                .iter()
                .zip(maps)
                .map(|(v, m)| *m.get(v).expect("relabeling covers support"))
                .collect();
            *counter.entry(key).or_insert(0) += count;
        }
        ExactDistribution::from_counts(counter, self.denominator)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(pairs: &[(&[usize], u64)], denom: u64) -> ExactDistribution {
        let counter = pairs.iter().map(|(t, c)| (t.to_vec(), *c)).collect();
        ExactDistribution::from_counts(counter, denom)
    }

    #[test]
    fn uniform_on_four_points_has_two_bits() {
        let d = dist(&[(&[0], 1), (&[1], 1), (&[2], 1), (&[3], 1)], 4);
        assert!((d.entropy_bits() - 2.0).abs() < 1e-12);
        assert!(d.is_quasi_uniform());
    }

    #[test]
    fn point_mass_has_zero_entropy() {
        let d = dist(&[(&[7], 4)], 4);
        assert_eq!(d.entropy_bits(), 0.0);
    }

    #[test]
    fn skewed_counts_entropy() {
        // (1,1,2)/4 -> 1/4*2 + 1/4*2 + 1/2*1 = 1.5 bits
        let d = dist(&[(&[0], 1), (&[1], 1), (&[2], 2)], 4);
        assert!((d.entropy_bits() - 1.5).abs() < 1e-12);
        assert!(!d.is_quasi_uniform());
    }

    #[test]
    fn reduction_compares_across_denominators() {
        let a = dist(&[(&[0], 2), (&[1], 2)], 4);
        let b = dist(&[(&[0], 4), (&[1], 4)], 8);
        assert_eq!(a.reduced(), b.reduced());
    }

    #[test]
    fn marginal_sums_counts() {
        let d = dist(&[(&[0, 0], 1), (&[0, 1], 1), (&[1, 0], 2)], 4);
        let m = d.marginal(&[0]);
        assert_eq!(m.support(), &[vec![0], vec![1]]);
        assert_eq!(m.counts(), &[2, 2]);
    }
}
