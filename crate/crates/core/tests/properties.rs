use std::collections::HashSet;

use proptest::prelude::*;

use dense_streams::cli::StreamFile;
use dense_streams::f0::{F0Params, F0Sketch};
use dense_streams::hardlab::{closs, copt, cval, optimal_right, slack, BipartiteInstance};
use dense_streams::hashing::PermHash;
use dense_streams::simrare::RareWindow;
use dense_streams::universe::{crossing_set, Constraint, CspShape, Cut, EdgeUniverse, Graph};

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..3 * n).prop_map(move |pairs| {
            Graph::from_edges(n, pairs.into_iter().filter(|(u, v)| u != v)).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn edge_rank_is_a_bijection(n in 2usize..64, a in 0usize..64, b in 0usize..64) {
        let (u, v) = (a % n, b % n);
        prop_assume!(u != v);
        let uni = EdgeUniverse::new(n);
        let i = uni.encode(u, v).unwrap();
        prop_assert!(i < uni.size());
        prop_assert_eq!(uni.decode(i).unwrap(), (u.min(v), u.max(v)));
    }

    #[test]
    fn constraint_index_is_a_bijection(n in 3usize..8, q in 2usize..4, seed in any::<u64>()) {
        let shape = CspShape::new(n, 2, q).unwrap();
        let index = seed % shape.universe_size().unwrap();
        let c = shape.decode(index).unwrap();
        prop_assert_eq!(shape.encode(&c).unwrap(), index);
    }

    #[test]
    fn cut_value_is_complement_invariant(g in graph_strategy(12), mask in any::<u64>()) {
        let n = g.n();
        let cut = Cut::from_mask(n, mask & ((1 << n) - 1)).unwrap();
        prop_assume!(g.m_distinct() > 0);
        prop_assert_eq!(g.cut_value(cut).unwrap(), g.cut_value(cut.complement()).unwrap());
        let crossing: HashSet<u64> = crossing_set(cut, g.universe()).collect();
        let hit = g.distinct_edges().filter(|e| crossing.contains(e)).count() as u64;
        prop_assert_eq!(hit, g.crossing_count(cut.mask()));
    }

    #[test]
    fn perm_hash_inverts(c in 1u64..1009, d in 0u64..1009, x in 0u64..1009) {
        let h = PermHash::new(1009, c, d).unwrap();
        prop_assert_eq!(h.invert(h.eval(x)), x);
    }

    #[test]
    fn small_f0_streams_are_exact(stream in proptest::collection::vec(0u64..1000, 0..200), seed in any::<u64>()) {
        let mut s = F0Sketch::new(F0Params::new(0.1, 0.1, 1000).unwrap(), seed);
        for &x in &stream {
            s.insert(x).unwrap();
        }
        prop_assert_eq!(s.estimate(), stream.iter().collect::<HashSet<_>>().len() as f64);
    }

    #[test]
    fn f0_bytes_round_trip(stream in proptest::collection::vec(any::<u32>(), 0..3000), seed in any::<u64>()) {
        let mut s = F0Sketch::new(F0Params::new(0.2, 0.2, 1 << 32).unwrap(), seed);
        for &x in &stream {
            s.insert(u64::from(x)).unwrap();
        }
        let back = F0Sketch::from_bytes(&s.to_bytes()).unwrap();
        prop_assert_eq!(back.estimate(), s.estimate());
        prop_assert_eq!(back.to_bytes(), s.to_bytes());
    }

    #[test]
    fn slack_is_symmetric_and_nonnegative(a in -10_000i64..10_000, b in -10_000i64..10_000) {
        prop_assert!(slack(a, b) >= 0);
        prop_assert_eq!(slack(a, b), slack(b, a));
        prop_assert_eq!(slack(a, b) % 2, 0);
    }

    #[test]
    fn conditional_value_decomposes(
        (nl, nr, edges) in (1usize..8, 1usize..8).prop_flat_map(|(nl, nr)| {
            (Just(nl), Just(nr), proptest::collection::vec((0..nl, 0..nr), 0..nl * nr))
        }),
        seed in any::<u64>(),
    ) {
        let g = BipartiteInstance::new(nl, nr, edges).unwrap();
        let x: Vec<i8> = (0..nl).map(|i| if seed >> i & 1 == 1 { -1 } else { 1 }).collect();
        let y: Vec<i8> = (0..nr).map(|i| if seed >> (32 + i) & 1 == 1 { -1 } else { 1 }).collect();
        prop_assert_eq!(cval(&g, &x, &y).unwrap().twice() + closs(&g, &x, &y).unwrap().twice(), copt(&g, &x).unwrap().twice());
        let best = optimal_right(&g, &x).unwrap();
        prop_assert_eq!(cval(&g, &x, &best).unwrap(), copt(&g, &x).unwrap());
    }

    #[test]
    fn full_window_rarity_is_exact(stream in proptest::collection::vec(0u64..30, 1..200), k in 1u32..5, seed in any::<u64>()) {
        let mut r = RareWindow::with_window(30, k, u64::MAX, seed).unwrap();
        for &w in &stream {
            r.insert(w).unwrap();
        }
        let mut counts = std::collections::HashMap::new();
        for &w in &stream {
            *counts.entry(w).or_insert(0u32) += 1;
        }
        let xk = counts.values().filter(|&&c| c == k).count() as u64;
        prop_assert_eq!(r.counts(), (xk, counts.len() as u64));
    }

    #[test]
    fn stream_files_round_trip(g in graph_strategy(20)) {
        let text = StreamFile::from_graph(&g).unwrap().to_text();
        let back = StreamFile::parse(&text).unwrap().to_graph(Some(g.n())).unwrap();
        prop_assert_eq!(back.edges(), g.edges());
    }
}

#[test]
fn constraint_scopes_are_ordered() {
    let shape = CspShape::new(4, 2, 2).unwrap();
    let scopes: Vec<Vec<usize>> = shape.scopes().collect();
    assert_eq!(scopes.len(), 12);
    let mut sorted = scopes.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), 12);
    for (rank, scope) in scopes.iter().enumerate() {
        let first = shape.encode(&Constraint::new(scope.clone(), 0)).unwrap();
        assert_eq!(first, rank as u64 * shape.predicates());
    }
}
