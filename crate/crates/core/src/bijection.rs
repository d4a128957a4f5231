//! Bijection between k-regular partitions and (base partition, auxiliary
//! partition) pairs.
//!
//! The backward direction ([`reduce`]) walks the distinct part sizes
//! `mu_1 < mu_2 < ... < mu_s` in order. At step `j` it subtracts `mu_j - j`
//! from every part `>= mu_j` and records that many copies of `r`, the number
//! of parts it touched, in the auxiliary partition `lambda`. What remains is
//! the base partition: sizes `1..s` with the original multiplicities.
//!
//! The forward direction ([`build`]) starts from the base and, for each
//! `r = 1..N`, increments the largest `r` parts once per copy of `r` in
//! `lambda`. A size `r` whose cut would split a block of equal parts is
//! excluded, which for `k = 2` gives the sizes `2m + n + 1 - i_j - j`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::partitions::{profile, Partition};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BijectionError {
    #[error("partition is not {k}-regular: size {size} occurs {multiplicity} times")]
    NotRegular {
        size: usize,
        multiplicity: usize,
        k: usize,
    },
    #[error("base multiplicity at position {index} is {multiplicity}; must lie in 1..={k}")]
    InvalidWord {
        index: usize,
        multiplicity: usize,
        k: usize,
    },
    #[error("base partition must use sizes 1, 2, ..., s; found size {found} at position {index}")]
    NotBase { index: usize, found: usize },
    #[error("lambda part {size} at index {index} exceeds the base part count {max}")]
    LambdaTooLarge {
        index: usize,
        size: usize,
        max: usize,
    },
    #[error("lambda part {size} at index {index} is a forbidden size for this base")]
    ForbiddenSize { index: usize, size: usize },
    #[error("malformed repeat positions: {0}")]
    MalformedRepeats(String),
    #[error("k must be positive")]
    ZeroK,
}

/// Image of [`reduce`]: a base multiplicity word plus the auxiliary partition.
///
/// The base partition has sizes `1..=word.len()`, size `i` occurring
/// `word[i-1]` times. Constructed only through validating constructors, so a
/// value of this type always builds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedPair {
    k: usize,
    word: Vec<usize>,
    lambda: Partition,
}

impl ReducedPair {
    pub fn new(k: usize, word: Vec<usize>, lambda: Partition) -> Result<Self, BijectionError> {
        if k == 0 {
            return Err(BijectionError::ZeroK);
        }
        if let Some((index, &multiplicity)) =
            word.iter().enumerate().find(|(_, &c)| c == 0 || c > k)
        {
            return Err(BijectionError::InvalidWord {
                index,
                multiplicity,
                k,
            });
        }
        let max = word.iter().sum();
        let forbidden = excluded_sizes(&word);
        for (index, &size) in lambda.parts().iter().enumerate() {
            if size > max {
                return Err(BijectionError::LambdaTooLarge { index, size, max });
            }
            if forbidden.contains(&size) {
                return Err(BijectionError::ForbiddenSize { index, size });
            }
        }
        Ok(Self { k, word, lambda })
    }

    /// Accepts the base as an explicit partition, e.g. `1 2 3 3 4 5 5`.
    pub fn from_base(
        k: usize,
        base: &Partition,
        lambda: Partition,
    ) -> Result<Self, BijectionError> {
        let pr = profile(base);
        if let Some((index, &found)) = pr.sizes.iter().enumerate().find(|(i, &s)| s != i + 1) {
            return Err(BijectionError::NotBase { index, found });
        }
        Self::new(k, pr.mults, lambda)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Multiplicity of each base size `1..=s`.
    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    /// Total number of parts of the base, the bound on lambda's parts.
    pub fn total_parts(&self) -> usize {
        self.word.iter().sum()
    }

    pub fn base(&self) -> Partition {
        base_partition(&self.word)
    }

    pub fn base_weight(&self) -> usize {
        self.word.iter().enumerate().map(|(i, c)| (i + 1) * c).sum()
    }

    /// `(m, n, i_1..i_m)` when the base is 2-regular.
    pub fn pairs_and_singletons(&self) -> Option<(usize, usize, Vec<usize>)> {
        profile(&self.base()).pairs_and_singletons()
    }

    /// Lambda sizes that can never occur with this base.
    pub fn forbidden(&self) -> BTreeSet<usize> {
        excluded_sizes(&self.word)
    }
}

impl fmt::Display for ReducedPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "base={} lambda={}", self.base(), self.lambda)
    }
}

pub fn base_partition(word: &[usize]) -> Partition {
    let parts = word
        .iter()
        .enumerate()
        .flat_map(|(i, &c)| std::iter::repeat_n(i + 1, c))
        .collect();
    Partition::from_sorted_unchecked(parts)
}

/// Sizes `r` for which "the largest `r` parts" of the base would take only
/// part of a block of equal parts.
pub fn excluded_sizes(word: &[usize]) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut above = 0;
    for &c in word.iter().rev() {
        out.extend(above + 1..above + c);
        above += c;
    }
    out
}

/// One state of the backward walk, after processing size index `step`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub step: usize,
    pub partition: Partition,
    pub lambda: Partition,
}

fn check_regular(p: &Partition, k: usize) -> Result<(), BijectionError> {
    if k == 0 {
        return Err(BijectionError::ZeroK);
    }
    let pr = profile(p);
    if let Some((i, &multiplicity)) = pr.mults.iter().enumerate().find(|(_, &c)| c > k) {
        return Err(BijectionError::NotRegular {
            size: pr.sizes[i],
            multiplicity,
            k,
        });
    }
    Ok(())
}

fn reduce_steps(
    p: &Partition,
    k: usize,
    mut on_step: impl FnMut(TraceStep),
) -> Result<ReducedPair, BijectionError> {
    check_regular(p, k)?;
    let word = profile(p).mults;
    let mut parts = p.parts().to_vec();
    let mut lambda: Vec<usize> = Vec::new();
    // `start` is the index of the first part of the current size block.
    let mut start = 0;
    for (idx, &mult) in word.iter().enumerate() {
        let step = idx + 1;
        let size = parts[start];
        let shift = size - step;
        let touched = parts.len() - start;
        for x in &mut parts[start..] {
            *x -= shift;
        }
        lambda.extend(std::iter::repeat_n(touched, shift));
        start += mult;
        lambda.sort_unstable();
        on_step(TraceStep {
            step,
            partition: Partition::from_sorted_unchecked(parts.clone()),
            lambda: Partition::from_sorted_unchecked(lambda.clone()),
        });
    }
    Ok(ReducedPair {
        k,
        word,
        lambda: Partition::from_sorted_unchecked(lambda),
    })
}

/// Backward procedure: a k-regular partition to its base word and lambda.
pub fn reduce(p: &Partition, k: usize) -> Result<ReducedPair, BijectionError> {
    reduce_steps(p, k, |_| {})
}

/// [`reduce`], also returning the intermediate partition and lambda after
/// every step.
pub fn reduce_trace(
    p: &Partition,
    k: usize,
) -> Result<(Vec<TraceStep>, ReducedPair), BijectionError> {
    let mut steps = Vec::new();
    let pair = reduce_steps(p, k, |s| steps.push(s))?;
    Ok((steps, pair))
}

/// Forward procedure: rebuild the partition from its reduced pair.
pub fn build(r: &ReducedPair) -> Partition {
    let mut parts = r.base().parts().to_vec();
    let total = parts.len();
    for run in r.lambda.parts().chunk_by(|a, b| a == b) {
        let (size, times) = (run[0], run.len());
        for x in &mut parts[total - size..] {
            *x += times;
        }
        assert!(
            parts.windows(2).all(|w| w[0] <= w[1]),
            "increment of the largest {size} parts broke the ordering"
        );
    }
    Partition::from_sorted_unchecked(parts)
}

/// The lambda sizes excluded for a 2-regular base with `m` pairs at
/// positions `repeats` and `n` singletons: `{2m + n + 1 - i_j - j}`.
pub fn forbidden_sizes(
    m: usize,
    n: usize,
    repeats: &[usize],
) -> Result<BTreeSet<usize>, BijectionError> {
    if repeats.len() != m {
        return Err(BijectionError::MalformedRepeats(format!(
            "expected {m} positions, got {}",
            repeats.len()
        )));
    }
    if repeats.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BijectionError::MalformedRepeats(
            "positions must be strictly increasing".into(),
        ));
    }
    if repeats.iter().any(|&i| i == 0 || i > m + n) {
        return Err(BijectionError::MalformedRepeats(format!(
            "positions must lie in 1..={}",
            m + n
        )));
    }
    Ok(repeats
        .iter()
        .enumerate()
        .map(|(j, &i)| 2 * m + n + 1 - i - (j + 1))
        .collect())
}

/// Base multiplicity word for `m` pairs at `repeats` among `m + n` sizes.
pub fn two_regular_word(m: usize, n: usize, repeats: &[usize]) -> Vec<usize> {
    let mut word = vec![1; m + n];
    for &i in repeats {
        word[i - 1] = 2;
    }
    word
}

/// Observed complement: sizes in `1..=N` that never appear in lambda when
/// reducing every k-regular partition of weight at most `weight_bound` whose
/// multiplicity word is `word`.
pub fn forbidden_sizes_empirical(
    k: usize,
    word: &[usize],
    weight_bound: usize,
) -> Result<BTreeSet<usize>, BijectionError> {
    if let Some((index, &multiplicity)) = word.iter().enumerate().find(|(_, &c)| c == 0 || c > k) {
        return Err(BijectionError::InvalidWord {
            index,
            multiplicity,
            k,
        });
    }
    let total: usize = word.iter().sum();
    let mut seen = BTreeSet::new();
    for p in partitions_with_word(word, weight_bound) {
        let r = reduce(&p, k)?;
        seen.extend(r.lambda().parts().iter().copied());
    }
    Ok((1..=total).filter(|s| !seen.contains(s)).collect())
}

/// Every partition of weight `<= weight_bound` whose distinct sizes, in
/// increasing order, occur with multiplicities `word`.
pub fn partitions_with_word(word: &[usize], weight_bound: usize) -> Vec<Partition> {
    fn rec(
        word: &[usize],
        min_size: usize,
        budget: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Partition>,
    ) {
        let Some((&c, rest)) = word.split_first() else {
            out.push(Partition::from_sorted_unchecked(cur.clone()));
            return;
        };
        // The remaining sizes need at least min_size+1, min_size+2, ...
        let rest_min: usize = rest
            .iter()
            .enumerate()
            .map(|(i, &r)| r * (min_size + 1 + i))
            .sum();
        let mut size = min_size;
        while c * size + rest_min + rest.iter().sum::<usize>() * (size - min_size) <= budget {
            let base = cur.len();
            cur.extend(std::iter::repeat_n(size, c));
            rec(rest, size + 1, budget - c * size, cur, out);
            cur.truncate(base);
            size += 1;
        }
    }
    let mut out = Vec::new();
    rec(word, 1, weight_bound, &mut Vec::new(), &mut out);
    out
}

/// Text rendering of a trace: one line per step and a closing line with the
/// base, its multiplicity word, and the forbidden lambda sizes.
pub fn format_trace(steps: &[TraceStep], pair: &ReducedPair) -> String {
    let mut out = String::new();
    for s in steps {
        out.push_str(&format!(
            "step {}: partition={} lambda={}\n",
            s.step, s.partition, s.lambda
        ));
    }
    let join = |it: &mut dyn Iterator<Item = usize>| {
        it.map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
    };
    out.push_str(&format!(
        "base={} word={} forbidden={}\n",
        pair.base(),
        join(&mut pair.word().iter().copied()),
        join(&mut pair.forbidden().into_iter()),
    ));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{enumerate_k_regular, is_k_regular};

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn worked_example_reduces() {
        let r = reduce(&part("3 6 10 10 15 19 19"), 2).unwrap();
        assert_eq!(r.base(), part("1 2 3 3 4 5 5"));
        assert_eq!(r.lambda(), &part("2 2 2 3 3 3 3 5 5 5 6 6 7 7"));
        assert_eq!(r.pairs_and_singletons(), Some((2, 3, vec![3, 5])));
        assert_eq!(r.forbidden(), BTreeSet::from([1, 4]));
    }

    #[test]
    fn worked_example_trace() {
        let (steps, _) = reduce_trace(&part("3 6 10 10 15 19 19"), 2).unwrap();
        let shown: Vec<(String, String)> = steps
            .iter()
            .map(|s| (s.partition.to_string(), s.lambda.to_string()))
            .collect();
        assert_eq!(shown[0], ("1 4 8 8 13 17 17".into(), "7 7".into()));
        assert_eq!(shown[1], ("1 2 6 6 11 15 15".into(), "6 6 7 7".into()));
        assert_eq!(shown[2], ("1 2 3 3 8 12 12".into(), "5 5 5 6 6 7 7".into()));
        assert_eq!(shown.last().unwrap().0, "1 2 3 3 4 5 5");
        assert_eq!(steps.len(), 5);
    }

    #[test]
    fn worked_example_builds_back() {
        let base = part("1 2 3 3 4 5 5");
        let r = ReducedPair::from_base(2, &base, part("2 2 2 3 3 3 3 5 5 5 6 6 7 7")).unwrap();
        assert_eq!(build(&r), part("3 6 10 10 15 19 19"));
    }

    #[test]
    fn trivial_cases() {
        let base = part("1 2 3 3 4 5 5");
        let r = reduce(&base, 2).unwrap();
        assert_eq!(r.base(), base);
        assert!(r.lambda().is_empty());
        let r = reduce(&Partition::empty(), 3).unwrap();
        assert!(r.base().is_empty() && r.lambda().is_empty());
        assert_eq!(build(&r), Partition::empty());
        let r = ReducedPair::from_base(2, &base, Partition::empty()).unwrap();
        assert_eq!(build(&r), base);
    }

    #[test]
    fn single_part() {
        let r = ReducedPair::from_base(2, &part("1"), part("1 1 1")).unwrap();
        assert_eq!(build(&r), part("4"));
        let back = reduce(&part("4"), 2).unwrap();
        assert_eq!(back.base(), part("1"));
        assert_eq!(back.lambda(), &part("1 1 1"));
    }

    #[test]
    fn rejects_bad_inputs() {
        assert_eq!(
            reduce(&part("2 2 2"), 2),
            Err(BijectionError::NotRegular {
                size: 2,
                multiplicity: 3,
                k: 2
            })
        );
        let base = part("1 2 3 3 4 5 5");
        assert_eq!(
            ReducedPair::from_base(2, &base, part("2 4")),
            Err(BijectionError::ForbiddenSize { index: 1, size: 4 })
        );
        assert_eq!(
            ReducedPair::from_base(2, &base, part("1")),
            Err(BijectionError::ForbiddenSize { index: 0, size: 1 })
        );
        assert_eq!(
            ReducedPair::from_base(2, &base, part("3 8")),
            Err(BijectionError::LambdaTooLarge {
                index: 1,
                size: 8,
                max: 7
            })
        );
        assert_eq!(
            ReducedPair::from_base(2, &part("1 3"), Partition::empty()),
            Err(BijectionError::NotBase { index: 1, found: 3 })
        );
        assert_eq!(
            ReducedPair::from_base(2, &part("1 1 1"), Partition::empty()),
            Err(BijectionError::InvalidWord {
                index: 0,
                multiplicity: 3,
                k: 2
            })
        );
    }

    #[test]
    fn forbidden_formula() {
        assert_eq!(
            forbidden_sizes(2, 3, &[3, 5]).unwrap(),
            BTreeSet::from([4, 1])
        );
        assert!(forbidden_sizes(0, 4, &[]).unwrap().is_empty());
        assert_eq!(forbidden_sizes(1, 0, &[1]).unwrap(), BTreeSet::from([1]));
        assert!(forbidden_sizes(2, 1, &[2, 2]).is_err());
        assert!(forbidden_sizes(1, 1, &[3]).is_err());
        assert!(forbidden_sizes(2, 1, &[1]).is_err());
    }

    #[test]
    fn one_pair_no_singletons_by_enumeration() {
        // all partitions "a a": lambda never contains 1
        let mut seen = BTreeSet::new();
        for p in partitions_with_word(&[2], 40) {
            seen.extend(reduce(&p, 2).unwrap().lambda().parts().iter().copied());
        }
        assert_eq!(seen, BTreeSet::from([2]));
    }

    #[test]
    fn formula_matches_block_cuts() {
        for s in 0..=6usize {
            for mask in 0u32..(1 << s) {
                let repeats: Vec<usize> = (0..s)
                    .filter(|b| mask >> b & 1 == 1)
                    .map(|b| b + 1)
                    .collect();
                let m = repeats.len();
                let word = two_regular_word(m, s - m, &repeats);
                assert_eq!(
                    forbidden_sizes(m, s - m, &repeats).unwrap(),
                    excluded_sizes(&word)
                );
            }
        }
    }

    #[test]
    fn empirical_forbidden_sizes() {
        let word = two_regular_word(2, 3, &[3, 5]);
        assert_eq!(
            forbidden_sizes_empirical(2, &word, 60).unwrap(),
            BTreeSet::from([1, 4])
        );
        for word in [vec![1], vec![1, 1], vec![1, 1, 1, 1]] {
            assert!(forbidden_sizes_empirical(1, &word, 40).unwrap().is_empty());
        }
        let k3 = forbidden_sizes_empirical(3, &[1, 3], 40).unwrap();
        assert_eq!(k3, excluded_sizes(&[1, 3]));
    }

    #[test]
    fn words_enumerate_exactly() {
        for word in [vec![2, 1], vec![1, 2, 1], vec![3, 1, 2]] {
            let got = partitions_with_word(&word, 30);
            let want: Vec<Partition> = (0..=30)
                .flat_map(|w| enumerate_k_regular(w, None))
                .filter(|p| profile(p).mults == word)
                .collect();
            let mut got_sorted = got.clone();
            got_sorted.sort();
            let mut want_sorted = want;
            want_sorted.sort();
            assert_eq!(got_sorted, want_sorted);
        }
    }

    #[test]
    fn round_trip_small() {
        for k in 1..=4 {
            for w in 0..=14 {
                for p in enumerate_k_regular(w, Some(k)) {
                    let r = reduce(&p, k).unwrap();
                    assert_eq!(r.base_weight() + r.lambda().weight(), w);
                    assert_eq!(profile(&p).mults, r.word());
                    let again = ReducedPair::new(k, r.word().to_vec(), r.lambda().clone()).unwrap();
                    let b = build(&again);
                    assert!(is_k_regular(&b, k));
                    assert_eq!(b, p);
                }
            }
        }
    }

    #[test]
    fn trace_format() {
        let (steps, pair) = reduce_trace(&part("3 6 10 10 15 19 19"), 2).unwrap();
        let text = format_trace(&steps, &pair);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "step 1: partition=1 4 8 8 13 17 17 lambda=7 7");
        assert_eq!(lines[5], "base=1 2 3 3 4 5 5 word=1 1 2 1 2 forbidden=1 4");
    }
}
