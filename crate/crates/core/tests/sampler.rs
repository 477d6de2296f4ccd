use dense_streams::sampler::{ExpanderGraph, Update, WalkSample, BASE_LAMBDA};
use dense_streams::Error;
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[test]
fn base_graph_spectral_gap() {
    for universe in [50u64, 400, 2000] {
        let g = ExpanderGraph::base(universe).unwrap();
        let lambda = g.base_second_eigenvalue(300, 7);
        assert!(
            lambda <= BASE_LAMBDA + 0.01,
            "universe {universe}: {lambda}"
        );
    }
}

#[test]
fn walk_marginals_are_uniform() {
    let graph = ExpanderGraph::build(100, 0.3).unwrap();
    let m = graph.vertices() as usize;
    let draws = 20 * m;
    let mut counts = vec![0u64; m];
    for seed in 0..draws as u64 {
        let walk = WalkSample::new(graph, 4, seed).unwrap();
        counts[walk.positions()[3] as usize] += 1;
    }
    let expected = draws as f64 / m as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let p = 1.0 - ChiSquared::new((m - 1) as f64).unwrap().cdf(stat);
    assert!(p > 1e-4, "chi-square {stat:.1} on {} dof, p = {p:e}", m - 1);
}

#[test]
fn exhaustive_walk_is_exact() {
    let graph = ExpanderGraph::build(300, 0.1).unwrap();
    let mut walk = WalkSample::exhaustive(graph);
    let stream: Vec<u64> = (0..300).filter(|x| x % 7 != 0).chain(0..40).collect();
    for &w in &stream {
        walk.push(Update::insert(w)).unwrap();
    }
    let sigma = walk.finish().unwrap();
    let f = |w: u64| f64::from(u8::from(w < 100));
    let truth = stream.iter().map(|&w| f(w)).sum::<f64>() / stream.len() as f64;
    assert!((sigma.estimate(f).unwrap() - truth).abs() < 1e-12);
}

#[test]
fn steps_replay_the_walk() {
    let graph = ExpanderGraph::build(1000, 0.05).unwrap();
    let walk = WalkSample::new(graph, 50, 3).unwrap();
    let mut v = walk.start();
    for (j, digits) in walk.steps().iter().enumerate() {
        v = graph.neighbor(v, digits);
        assert_eq!(v, walk.positions()[j + 1]);
    }
}

#[test]
fn counter_cap_and_universe_checks() {
    let graph = ExpanderGraph::build(10, 0.5).unwrap();
    let mut walk = WalkSample::exhaustive(graph).with_multiplicity_cap(2);
    for _ in 0..3 {
        walk.push(Update::insert(4)).unwrap();
    }
    assert!(matches!(
        walk.finish(),
        Err(Error::MultiplicityExceeded { .. })
    ));
    let mut walk = WalkSample::exhaustive(graph);
    assert!(matches!(
        walk.push(Update::insert(10)),
        Err(Error::OutOfUniverse { .. })
    ));
}

#[test]
fn random_half_indicator_within_tenth() {
    use dense_streams::generators::distinct_stream;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;

    let mut hits = 0;
    for t in 0..100u64 {
        let stream = distinct_stream(200, 400, 0.0, 300 + t).unwrap();
        let mut support = stream.clone();
        support.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(t));
        let half: std::collections::HashSet<u64> = support[..100].iter().copied().collect();
        let f = |w: u64| f64::from(u8::from(half.contains(&w)));
        let graph = ExpanderGraph::build(400, 0.02).unwrap();
        let mut walk = WalkSample::new(graph, 4000, t).unwrap();
        for &w in &stream {
            walk.push(Update::insert(w)).unwrap();
        }
        let est = walk.finish().unwrap().estimate(f).unwrap();
        if (est - 0.5).abs() <= 0.1 {
            hits += 1;
        }
    }
    assert!(hits >= 90, "{hits}/100");
}
