//! Brute-force generation of odd-balanced unimodal sequences.
//!
//! A sequence has an even peak, distinct even parts below the peak on each
//! side, and a multiset of odd parts repeated identically on both sides. Its
//! size is `peak + sum(left evens) + sum(right evens) + 2 * sum(odds)`.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::gf::RankTable;
use crate::laurent::Laurent;
use crate::ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OddBalancedSequence {
    pub peak: u64,
    /// Strictly increasing.
    pub left_evens: Vec<u64>,
    /// Strictly decreasing.
    pub right_evens: Vec<u64>,
    /// Weakly increasing; each odd part appears once on each side.
    pub side_odds: Vec<u64>,
}

impl OddBalancedSequence {
    pub fn size(&self) -> u64 {
        self.peak
            + self.left_evens.iter().sum::<u64>()
            + self.right_evens.iter().sum::<u64>()
            + 2 * self.side_odds.iter().sum::<u64>()
    }

    /// The `n` with `size = 2n + 2`.
    pub fn n(&self) -> u64 {
        self.size() / 2 - 1
    }

    /// Parts after the peak minus parts before it. The odd parts cancel.
    pub fn rank(&self) -> i64 {
        self.right_evens.len() as i64 - self.left_evens.len() as i64
    }

    /// The sequence as it is written, left to right.
    pub fn flatten(&self) -> Vec<u64> {
        let mut left: Vec<u64> = self
            .left_evens
            .iter()
            .chain(&self.side_odds)
            .copied()
            .collect();
        left.sort_unstable();
        let mut right: Vec<u64> = self
            .right_evens
            .iter()
            .chain(&self.side_odds)
            .copied()
            .collect();
        right.sort_unstable_by(|a, b| b.cmp(a));
        let mut out = left;
        out.push(self.peak);
        out.extend(right);
        out
    }

    /// Checks the structural invariants and the unimodality chain of the
    /// flattened sequence.
    pub fn is_valid(&self) -> bool {
        let even_below_peak = |x: &u64| *x > 0 && x % 2 == 0 && *x < self.peak;
        let structural = self.peak >= 2
            && self.peak % 2 == 0
            && self.left_evens.iter().all(even_below_peak)
            && self.right_evens.iter().all(even_below_peak)
            && self.left_evens.windows(2).all(|w| w[0] < w[1])
            && self.right_evens.windows(2).all(|w| w[0] > w[1])
            && self.side_odds.iter().all(|x| x % 2 == 1 && *x < self.peak)
            && self.side_odds.windows(2).all(|w| w[0] <= w[1]);
        structural
            && chain_is_valid(
                &self.flatten(),
                self.left_evens.len() + self.side_odds.len(),
            )
    }
}

/// Weakly increasing to the peak and weakly decreasing after it, strictly
/// wherever both neighbours are even or one of them is the peak.
fn chain_is_valid(parts: &[u64], peak_index: usize) -> bool {
    parts.windows(2).enumerate().all(|(i, w)| {
        let strict = (w[0] % 2 == 0 && w[1] % 2 == 0) || i == peak_index || i + 1 == peak_index;
        let (lo, hi) = if i < peak_index {
            (w[0], w[1])
        } else {
            (w[1], w[0])
        };
        if strict {
            lo < hi
        } else {
            lo <= hi
        }
    })
}

/// Sets of distinct positive even numbers below `limit` with sum at most
/// `budget`, each in increasing order.
fn even_subsets(limit: u64, budget: u64) -> Vec<(Vec<u64>, u64)> {
    fn go(
        next: u64,
        limit: u64,
        budget: u64,
        current: &mut Vec<u64>,
        sum: u64,
        out: &mut Vec<(Vec<u64>, u64)>,
    ) {
        out.push((current.clone(), sum));
        let mut e = next;
        while e < limit && sum + e <= budget {
            current.push(e);
            go(e + 2, limit, budget, current, sum + e, out);
            current.pop();
            e += 2;
        }
    }
    let mut out = Vec::new();
    go(2, limit, budget, &mut Vec::new(), 0, &mut out);
    out
}

/// Partitions of `total` into odd parts below `limit`, weakly increasing.
fn odd_partitions(total: u64, limit: u64) -> Vec<Vec<u64>> {
    fn go(
        remaining: u64,
        smallest: u64,
        limit: u64,
        current: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if remaining == 0 {
            out.push(current.clone());
            return;
        }
        let mut part = smallest;
        while part < limit && part <= remaining {
            current.push(part);
            go(remaining - part, part, limit, current, out);
            current.pop();
            part += 2;
        }
    }
    let mut out = Vec::new();
    go(total, 1, limit, &mut Vec::new(), &mut out);
    out
}

/// Every odd-balanced sequence of size `2n + 2`, each exactly once, ordered
/// by peak, then left evens, right evens and odd parts.
pub fn enumerate_sequences(n: u64) -> Vec<OddBalancedSequence> {
    let size = 2 * n + 2;
    let mut out = Vec::new();
    for peak in (2..=size).step_by(2) {
        let budget = size - peak;
        let subsets = even_subsets(peak, budget);
        for (left, left_sum) in &subsets {
            for (right, right_sum) in &subsets {
                if left_sum + right_sum > budget {
                    continue;
                }
                // the remainder is even because every other part is even
                let odd_total = (budget - left_sum - right_sum) / 2;
                for odds in odd_partitions(odd_total, peak) {
                    out.push(OddBalancedSequence {
                        peak,
                        left_evens: left.clone(),
                        right_evens: right.iter().rev().copied().collect(),
                        side_odds: odds,
                    });
                }
            }
        }
    }
    out
}

/// `v(m, n)` for `n <= n_max` by enumeration.
pub fn count_rank_table(n_max: u64) -> RankTable {
    let rows = (0..=n_max)
        .map(|n| {
            let mut row = Laurent::zero();
            for s in enumerate_sequences(n) {
                row.add_assign_ref(&Laurent::monomial(BigInt::one(), s.rank()));
            }
            row
        })
        .collect();
    RankTable::from_rows(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use alloc::vec;

    fn seq(peak: u64, left: &[u64], right: &[u64], odds: &[u64]) -> OddBalancedSequence {
        OddBalancedSequence {
            peak,
            left_evens: left.to_vec(),
            right_evens: right.to_vec(),
            side_odds: odds.to_vec(),
        }
    }

    #[test]
    fn small_sizes() {
        assert_eq!(enumerate_sequences(0), vec![seq(2, &[], &[], &[])]);
        let flat: BTreeSet<_> = enumerate_sequences(1)
            .iter()
            .map(OddBalancedSequence::flatten)
            .collect();
        assert_eq!(flat, BTreeSet::from([vec![4], vec![1, 2, 1]]));
    }

    #[test]
    fn size_twelve_examples() {
        let flat: BTreeSet<_> = enumerate_sequences(5)
            .iter()
            .map(OddBalancedSequence::flatten)
            .collect();
        for example in [
            vec![1, 1, 2, 4, 2, 1, 1],
            vec![1, 3, 4, 3, 1],
            vec![12],
            vec![1, 8, 2, 1],
        ] {
            assert!(flat.contains(&example), "{example:?}");
        }
        assert_eq!(flat.len(), 29);
    }

    #[test]
    fn ranks() {
        assert_eq!(seq(2, &[], &[], &[1]).rank(), 0);
        let s = seq(8, &[], &[2], &[1]);
        assert_eq!(s.flatten(), vec![1, 8, 2, 1]);
        assert_eq!(s.rank(), 1);
        assert_eq!(seq(4, &[2], &[], &[]).rank(), -1);
    }

    #[test]
    fn sequences_are_valid_and_distinct() {
        for n in 0..=9 {
            let all = enumerate_sequences(n);
            let flat: BTreeSet<_> = all.iter().map(OddBalancedSequence::flatten).collect();
            assert_eq!(flat.len(), all.len());
            for s in &all {
                assert!(s.is_valid(), "{s:?}");
                assert_eq!(s.size(), 2 * n + 2);
                assert_eq!(s.n(), n);
            }
        }
    }

    #[test]
    fn invalid_sequences_are_rejected() {
        assert!(!seq(4, &[2, 2], &[], &[]).is_valid());
        assert!(!seq(4, &[], &[], &[5]).is_valid());
        assert!(!seq(3, &[], &[], &[]).is_valid());
        assert!(!seq(6, &[4, 2], &[], &[]).is_valid());
    }

    #[test]
    fn mirror_and_padding_maps() {
        for n in 0..=8 {
            let next: BTreeSet<_> = enumerate_sequences(n + 1).into_iter().collect();
            for s in enumerate_sequences(n) {
                let mut mirrored = s.clone();
                mirrored.left_evens = s.right_evens.iter().rev().copied().collect();
                mirrored.right_evens = s.left_evens.iter().rev().copied().collect();
                assert!(mirrored.is_valid());
                assert_eq!(mirrored.rank(), -s.rank());
                let mut padded = s.clone();
                padded.side_odds.insert(0, 1);
                assert_eq!(padded.rank(), s.rank());
                assert!(next.contains(&padded));
            }
        }
    }

    #[test]
    fn small_table() {
        let t = count_rank_table(2);
        assert_eq!(t.count(0, 0), BigInt::one());
        assert_eq!(t.count(0, 1), BigInt::from(2));
        assert_eq!(
            t.row(2),
            Some(&Laurent::from_coeffs(
                -1,
                vec![1, 3, 1].into_iter().map(BigInt::from).collect()
            ))
        );
    }
}
