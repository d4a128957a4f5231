//! Integer partitions, k-regularity, and brute-force enumeration.
//!
//! Parts are stored weakly increasing. The enumerators here are the ground
//! truth that every generating-function routine in the crate is checked
//! against, so they deliberately avoid any generating-function shortcut.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::qalg::{QSeries, XQSeries};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("invalid part \"{0}\"")]
    BadToken(String),
    #[error("parts must be positive")]
    ZeroPart,
    #[error("parts must be weakly increasing (found {prev} before {next})")]
    NotWeaklyIncreasing { prev: usize, next: usize },
}

/// A weakly increasing sequence of positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn new(parts: Vec<usize>) -> Result<Self, PartitionError> {
        if parts.contains(&0) {
            return Err(PartitionError::ZeroPart);
        }
        if let Some(w) = parts.windows(2).find(|w| w[0] > w[1]) {
            return Err(PartitionError::NotWeaklyIncreasing {
                prev: w[0],
                next: w[1],
            });
        }
        Ok(Self { parts })
    }

    /// Sorts the parts first.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Result<Self, PartitionError> {
        parts.sort_unstable();
        Self::new(parts)
    }

    pub(crate) fn from_sorted_unchecked(parts: Vec<usize>) -> Self {
        debug_assert!(parts.windows(2).all(|w| w[0] <= w[1]) && !parts.contains(&0));
        Self { parts }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn weight(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Number of parts equal to `size`.
    pub fn multiplicity(&self, size: usize) -> usize {
        self.parts.iter().filter(|&&p| p == size).count()
    }

    pub fn max_multiplicity(&self) -> usize {
        self.parts
            .chunk_by(|a, b| a == b)
            .map(<[usize]>::len)
            .max()
            .unwrap_or(0)
    }
}

/// Space-separated parts; the empty partition prints as the empty string.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

impl FromStr for Partition {
    type Err = PartitionError;
    fn from_str(s: &str) -> Result<Self, PartitionError> {
        let parts = s
            .split_whitespace()
            .map(|t| {
                t.parse::<usize>()
                    .map_err(|_| PartitionError::BadToken(t.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(parts)
    }
}

/// Distinct part sizes `sizes[0] < sizes[1] < ...` with their multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiplicityProfile {
    pub sizes: Vec<usize>,
    pub mults: Vec<usize>,
}

impl MultiplicityProfile {
    pub fn is_k_regular(&self, k: usize) -> bool {
        self.mults.iter().all(|&c| c <= k)
    }

    /// For a 2-regular profile: `(m, n, repeats)` with `m` pairs, `n`
    /// singletons, and the 1-based positions `i_1 < ... < i_m` of the
    /// repeated sizes. `None` if some size occurs more than twice.
    pub fn pairs_and_singletons(&self) -> Option<(usize, usize, Vec<usize>)> {
        if !self.is_k_regular(2) {
            return None;
        }
        let repeats: Vec<usize> = self
            .mults
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == 2)
            .map(|(i, _)| i + 1)
            .collect();
        let m = repeats.len();
        Some((m, self.mults.len() - m, repeats))
    }
}

pub fn profile(p: &Partition) -> MultiplicityProfile {
    let mut out = MultiplicityProfile::default();
    for run in p.parts.chunk_by(|a, b| a == b) {
        out.sizes.push(run[0]);
        out.mults.push(run.len());
    }
    out
}

/// True iff no part size occurs more than `k` times.
pub fn is_k_regular(p: &Partition, k: usize) -> bool {
    assert!(k >= 1, "k must be positive");
    p.max_multiplicity() <= k
}

/// All partitions of `n` whose multiplicities are at most `k` (`None` for no
/// cap), in lexicographic order of their weakly increasing part sequences.
pub fn enumerate_k_regular(n: usize, k: Option<usize>) -> Vec<Partition> {
    assert!(k != Some(0), "k must be positive");
    let cap = k.unwrap_or(usize::MAX);
    let mut out = Vec::new();
    let mut current = Vec::new();
    enumerate_rec(n, 1, cap, &mut current, &mut out);
    out
}

fn enumerate_rec(
    remaining: usize,
    min_size: usize,
    cap: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Partition>,
) {
    if remaining == 0 {
        out.push(Partition::from_sorted_unchecked(current.clone()));
        return;
    }
    for size in min_size..=remaining {
        let max_copies = (remaining / size).min(cap);
        // More copies of `size` sort first: s s s ... < s s t ... for t > s.
        for copies in (1..=max_copies).rev() {
            let base = current.len();
            current.extend(std::iter::repeat_n(size, copies));
            enumerate_rec(remaining - copies * size, size + 1, cap, current, out);
            current.truncate(base);
        }
    }
}

/// Number of `k`-regular partitions of `n`, optionally with exactly `length`
/// parts. Counts by a weight/length table, not by enumeration.
pub fn count_k_regular(n: usize, k: Option<usize>, length: Option<usize>) -> BigInt {
    assert!(k != Some(0), "k must be positive");
    let cap = k.unwrap_or(usize::MAX);
    let max_len = n;
    // table[w][l] = partitions of weight w with l parts, sizes seen so far
    let mut table = vec![vec![BigInt::zero(); max_len + 1]; n + 1];
    table[0][0] = BigInt::from(1);
    for size in 1..=n {
        let mut next = table.clone();
        for w in 0..=n {
            for l in 0..=max_len {
                if table[w][l].is_zero() {
                    continue;
                }
                let mut c = 1;
                while c <= cap && w + c * size <= n && l + c <= max_len {
                    next[w + c * size][l + c] += &table[w][l];
                    c += 1;
                }
            }
        }
        table = next;
    }
    match length {
        Some(l) if l > max_len => BigInt::zero(),
        Some(l) => table[n][l].clone(),
        None => table[n].iter().sum(),
    }
}

/// Enumeration-backed bivariate series: the coefficient of `x^L q^W` is the
/// number of `k`-regular partitions of `W` with `L` parts.
pub fn oracle_series(k: usize, xmax: usize, qmax: usize) -> XQSeries {
    assert!(k >= 1, "k must be positive");
    let mut by_length = vec![vec![BigInt::zero(); qmax + 1]; xmax + 1];
    for w in 0..=qmax {
        for p in enumerate_k_regular(w, Some(k)) {
            if p.len() <= xmax {
                by_length[p.len()][w] += 1;
            }
        }
    }
    let mut out = XQSeries::zero(xmax, qmax);
    for (len, coeffs) in by_length.into_iter().enumerate() {
        out.add_term(
            len,
            &QSeries::from_poly(&crate::qalg::IntPoly::from_coeffs(coeffs), qmax),
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalg::inv_poch_series;

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn regularity_predicate() {
        assert!(is_k_regular(&part("1 1 2 2"), 2));
        assert!(!is_k_regular(&part("1 1 1 1"), 2));
        assert!(is_k_regular(&Partition::empty(), 1));
        assert!(is_k_regular(&Partition::empty(), 7));
    }

    #[test]
    fn two_regular_partitions_of_six() {
        let got: Vec<String> = enumerate_k_regular(6, Some(2))
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(got, ["1 1 2 2", "1 1 4", "1 2 3", "1 5", "2 4", "3 3", "6"]);
    }

    #[test]
    fn partitions_of_four() {
        let all = enumerate_k_regular(4, None);
        assert_eq!(all.len(), 5);
        let distinct: Vec<String> = enumerate_k_regular(4, Some(1))
            .iter()
            .map(ToString::to_string)
            .collect();
        assert_eq!(distinct, ["1 3", "4"]);
    }

    #[test]
    fn enumeration_is_sorted_and_duplicate_free() {
        for k in [Some(1), Some(2), Some(3), None] {
            for n in 0..=16 {
                let ps = enumerate_k_regular(n, k);
                assert!(
                    ps.windows(2).all(|w| w[0].parts() < w[1].parts()),
                    "n={n} k={k:?}"
                );
                assert!(ps.iter().all(|p| p.weight() == n));
            }
        }
    }

    #[test]
    fn counts() {
        assert_eq!(count_k_regular(6, Some(2), Some(4)), BigInt::from(1));
        assert_eq!(count_k_regular(0, Some(3), None), BigInt::from(1));
        assert_eq!(count_k_regular(6, Some(2), None), BigInt::from(7));
        assert_eq!(count_k_regular(3, Some(2), Some(9)), BigInt::zero());
    }

    #[test]
    fn classical_partition_numbers() {
        let expected = [
            1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77, 101, 135, 176, 231, 297, 385, 490, 627,
        ];
        let euler = inv_poch_series(20, 20);
        for (n, &e) in expected.iter().enumerate() {
            assert_eq!(enumerate_k_regular(n, None).len(), e);
            assert_eq!(count_k_regular(n, None, None), BigInt::from(e));
            assert_eq!(euler.coeff(n).unwrap(), &BigInt::from(e));
        }
    }

    #[test]
    fn counting_table_matches_enumeration() {
        for k in 1..=4 {
            for n in 0..=18 {
                let ps = enumerate_k_regular(n, Some(k));
                assert_eq!(count_k_regular(n, Some(k), None), BigInt::from(ps.len()));
                for l in 0..=n {
                    let by_len = ps.iter().filter(|p| p.len() == l).count();
                    assert_eq!(count_k_regular(n, Some(k), Some(l)), BigInt::from(by_len));
                }
            }
        }
    }

    #[test]
    fn monotone_in_k() {
        for n in 0..=20 {
            for k in 1..=6 {
                assert!(count_k_regular(n, Some(k), None) <= count_k_regular(n, Some(k + 1), None));
            }
        }
    }

    #[test]
    fn bounded_parts_match_reciprocal_pochhammer() {
        // coefficient of q^W in 1/(q;q)_n counts partitions of W into parts <= n
        for n in 0..=6 {
            let s = inv_poch_series(n, 20);
            for w in 0..=20 {
                let count = enumerate_k_regular(w, None)
                    .iter()
                    .filter(|p| p.parts().iter().all(|&x| x <= n))
                    .count();
                assert_eq!(s.coeff(w).unwrap(), &BigInt::from(count), "n={n} W={w}");
            }
        }
    }

    #[test]
    fn oracle_series_examples() {
        let two = oracle_series(2, 6, 10);
        assert_eq!(two.coeff(4, 6), BigInt::from(1));
        assert_eq!(two.coeff(0, 0), BigInt::from(1));
        let one = oracle_series(1, 4, 10);
        assert_eq!(one.coeff(2, 4), BigInt::from(1));
        for k in 1..=3 {
            let s = oracle_series(k, 5, 12);
            assert!(s
                .terms()
                .values()
                .all(|q| q.coeffs().iter().all(|c| c >= &BigInt::zero())));
        }
    }

    #[test]
    fn profiles() {
        let pr = profile(&part("3 6 10 10 15 19 19"));
        assert_eq!(pr.sizes, [3, 6, 10, 15, 19]);
        assert_eq!(pr.mults, [1, 1, 2, 1, 2]);
        assert_eq!(pr.pairs_and_singletons(), Some((2, 3, vec![3, 5])));
        let pr = profile(&part("1 1 2 2"));
        assert_eq!(
            (pr.sizes.as_slice(), pr.mults.as_slice()),
            (&[1, 2][..], &[2, 2][..])
        );
        assert_eq!(profile(&Partition::empty()), MultiplicityProfile::default());
        assert_eq!(profile(&part("1 1 1")).pairs_and_singletons(), None);
    }

    #[test]
    fn text_format() {
        assert_eq!(part("3 6 10 10").to_string(), "3 6 10 10");
        assert_eq!(part(""), Partition::empty());
        assert_eq!(Partition::empty().to_string(), "");
        assert_eq!(
            "2 1".parse::<Partition>(),
            Err(PartitionError::NotWeaklyIncreasing { prev: 2, next: 1 })
        );
        assert_eq!("0 1".parse::<Partition>(), Err(PartitionError::ZeroPart));
        assert!(matches!(
            "1 x".parse::<Partition>(),
            Err(PartitionError::BadToken(_))
        ));
        assert_eq!(
            Partition::from_unsorted(vec![5, 1, 3]).unwrap(),
            part("1 3 5")
        );
    }
}
