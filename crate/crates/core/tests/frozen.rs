use dense_streams::hardlab::{slack, HalfInt};
use dense_streams::optimizers::{densest_brute, maxcut_brute};
use dense_streams::universe::Graph;

mod common;

fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    Graph::from_edges(10, edges).unwrap()
}

#[test]
fn petersen_max_cut() {
    let g = petersen();
    let edges = common::edge_list(&g);
    assert_eq!(edges.len(), 15);
    // oracle value, frozen
    assert_eq!(common::max_crossing(10, &edges), 12);
    assert_eq!(maxcut_brute(&g).unwrap().1, 12.0 / 15.0);
}

#[test]
fn small_graph_values() {
    let k4 = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    assert_eq!(maxcut_brute(&k4).unwrap().1, 4.0 / 6.0);
    assert_eq!(densest_brute(&k4).unwrap(), (0b1111, 1.5));
    let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
    assert_eq!(maxcut_brute(&c5).unwrap().1, 4.0 / 5.0);
    let k33 = Graph::from_edges(6, (0..3).flat_map(|u| (3..6).map(move |v| (u, v)))).unwrap();
    let (cut, value) = maxcut_brute(&k33).unwrap();
    assert_eq!(value, 1.0);
    assert_eq!(cut.mask(), 0b000111);
}

#[test]
fn slack_values() {
    assert_eq!(slack(3, 5), 0);
    assert_eq!(slack(0, -7), 0);
    assert_eq!(slack(3, -2), 4);
    assert_eq!(HalfInt::from_twice(7).to_f64(), 3.5);
}
