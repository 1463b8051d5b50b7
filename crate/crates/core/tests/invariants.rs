use kpeaked::election::{scores, unique_winner, Vote, VoteMultiset};
use kpeaked::peaked::{approved_blocks, gen_random_k_peaked_seeded, is_single_peaked_order, min_peaks, Axis};
use kpeaked::Multiset;
use proptest::prelude::*;

fn permutation(m: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..m).collect::<Vec<_>>()).prop_shuffle()
}

fn small_multiset() -> impl Strategy<Value = Multiset<u8>> {
    prop::collection::vec((0u8..5, 1usize..4), 0..6).prop_map(Multiset::from_entries)
}

fn votes(m: usize, n: usize) -> impl Strategy<Value = VoteMultiset> {
    prop::collection::vec((permutation(m), 1usize..3), 0..n).prop_map(move |vs| {
        VoteMultiset::from_entries(vs.into_iter().map(|(o, c)| (Vote::new(o, m).unwrap(), c)).collect())
    })
}

proptest! {
    #[test]
    fn multiset_laws(a in small_multiset(), b in small_multiset(), c in small_multiset()) {
        prop_assert_eq!(a.union(&b), b.union(&a));
        prop_assert_eq!(a.union(&b).union(&c), a.union(&b.union(&c)));
        prop_assert_eq!(a.union(&b).len(), a.len() + b.len());
        prop_assert_eq!(a.union(&b).minus(&b), a.clone());
        prop_assert!(a.is_submultiset_of(&a.union(&b)));
        prop_assert!(a.minus(&b).is_submultiset_of(&a));
        prop_assert_eq!(a.normalize(), a.clone());
        if a.is_submultiset_of(&b) {
            prop_assert_eq!(b.minus(&a).union(&a), b.clone());
        }
        for x in 0u8..5 {
            prop_assert_eq!(a.minus(&b).count(&x), a.count(&x).saturating_sub(b.count(&x)));
        }
    }

    #[test]
    fn restriction_keeps_single_peakedness(
        m in 2usize..9,
        seed in any::<u64>(),
        mask in prop::collection::vec(any::<bool>(), 9),
    ) {
        let axis = Axis::identity(m);
        let vote = gen_random_k_peaked_seeded(&axis, 1, seed).unwrap();
        let keep: Vec<usize> = (0..m).filter(|&c| mask[c]).collect();
        let sub_vote = vote.restrict(&keep).unwrap();
        let sub_axis: Vec<usize> = axis.order().iter().copied().filter(|c| keep.contains(c)).collect();
        prop_assert!(is_single_peaked_order(&sub_vote, &sub_axis).unwrap());
    }

    #[test]
    fn top_r_has_at_most_k_blocks(m in 3usize..11, seed in any::<u64>(), kk in 1usize..6, r in 1usize..10) {
        let axis = Axis::identity(m);
        let k = kk.min(m.div_ceil(2));
        let r = 1 + r % (m - 1);
        let vote = gen_random_k_peaked_seeded(&axis, k, seed).unwrap();
        prop_assert!(min_peaks(&vote, &axis).unwrap() <= k);
        prop_assert!(approved_blocks(&vote, r, &axis).unwrap().len() <= k);
    }

    #[test]
    fn scores_add_over_union(a in votes(5, 5), b in votes(5, 5), r in 1usize..5) {
        let sa = scores(5, &a, r).unwrap();
        let sb = scores(5, &b, r).unwrap();
        let sab = scores(5, &a.union(&b), r).unwrap();
        for c in 0..5 {
            prop_assert_eq!(sab[c], sa[c] + sb[c]);
        }
        prop_assert_eq!(sab.iter().sum::<usize>(), r * (a.len() + b.len()));
    }

    #[test]
    fn extra_support_keeps_winner(a in votes(5, 6), extra in permutation(5), r in 1usize..5) {
        if let Some(w) = unique_winner(5, &a, r).unwrap() {
            let mut order = extra;
            let pos = order.iter().position(|&c| c == w).unwrap();
            order.swap(0, pos);
            let mut more = a.clone();
            more.push(Vote::new(order, 5).unwrap(), 1);
            prop_assert_eq!(unique_winner(5, &more, r).unwrap(), Some(w));
        }
    }

    #[test]
    fn relabeling_moves_the_winner(a in votes(6, 6), perm in permutation(6), r in 1usize..6) {
        let relabeled = VoteMultiset::from_entries(
            a.entries()
                .iter()
                .map(|(v, n)| (Vote::new(v.order().iter().map(|&c| perm[c]).collect(), 6).unwrap(), *n))
                .collect(),
        );
        let before = unique_winner(6, &a, r).unwrap();
        let after = unique_winner(6, &relabeled, r).unwrap();
        prop_assert_eq!(after, before.map(|w| perm[w]));
    }
}
