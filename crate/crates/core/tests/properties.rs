use proptest::prelude::*;

use kregular::bijection::{build, excluded_sizes, reduce, ReducedPair};
use kregular::genfun::{b_poly, b_poly_k, lhs_series, rhs_series};
use kregular::partitions::{is_k_regular, oracle_series, Partition};

/// A k-regular partition with sizes up to 12, each used at most k times.
fn k_regular() -> impl Strategy<Value = (usize, Partition)> {
    (1usize..=5).prop_flat_map(|k| {
        prop::collection::vec(0..=k, 12).prop_map(move |mults| {
            let parts = mults
                .iter()
                .enumerate()
                .flat_map(|(i, &c)| std::iter::repeat_n(i + 1, c))
                .collect();
            (k, Partition::new(parts).unwrap())
        })
    })
}

/// A valid reduced pair: a word over 1..=k and a lambda avoiding the
/// excluded sizes, with parts at most the word's total.
fn reduced_pair() -> impl Strategy<Value = ReducedPair> {
    (1usize..=5)
        .prop_flat_map(|k| (Just(k), prop::collection::vec(1..=k, 0..6)))
        .prop_flat_map(|(k, word)| {
            let total: usize = word.iter().sum();
            let excluded = excluded_sizes(&word);
            let allowed: Vec<usize> = (1..=total).filter(|r| !excluded.contains(r)).collect();
            let lam = if allowed.is_empty() {
                Just(Vec::new()).boxed()
            } else {
                prop::collection::vec(prop::sample::select(allowed), 0..8).boxed()
            };
            (Just(k), Just(word), lam)
        })
        .prop_map(|(k, word, lam)| {
            ReducedPair::new(k, word, Partition::from_unsorted(lam).unwrap()).unwrap()
        })
}

proptest! {
    #[test]
    fn reduce_then_build((k, p) in k_regular()) {
        let r = reduce(&p, k).unwrap();
        prop_assert_eq!(r.base_weight() + r.lambda().weight(), p.weight());
        prop_assert_eq!(r.total_parts(), p.len());
        prop_assert!(r.lambda().parts().iter().all(|&s| s <= r.total_parts()));
        prop_assert_eq!(build(&r), p);
    }

    #[test]
    fn build_then_reduce(r in reduced_pair()) {
        let p = build(&r);
        prop_assert!(is_k_regular(&p, r.k()));
        prop_assert_eq!(p.weight(), r.base_weight() + r.lambda().weight());
        prop_assert_eq!(reduce(&p, r.k()).unwrap(), r);
    }

    #[test]
    fn b_k_agrees_with_two_index_b(m in 0usize..5, n in 0usize..5) {
        prop_assert_eq!(b_poly_k(2, &[m, n]).unwrap(), b_poly(m, n));
    }

    #[test]
    fn identity_against_oracle(k in 1usize..=6, xmax in 0usize..=6, qmax in 0usize..=18) {
        let oracle = oracle_series(k, xmax, qmax);
        let lhs = lhs_series(k, xmax, qmax).unwrap();
        let rhs = rhs_series(k, xmax, qmax).unwrap();
        prop_assert!(lhs.diff(&oracle).is_empty());
        prop_assert!(rhs.diff(&oracle).is_empty());
    }
}
