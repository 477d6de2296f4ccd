mod bipartite_family {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/bipartite_family.rs"
    ));
}

#[test]
fn bipartite_family_runs() {
    bipartite_family::run_example().expect("bipartite_family example should run");
}

mod conditional_cut {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/conditional_cut.rs"
    ));
}

#[test]
fn conditional_cut_runs() {
    conditional_cut::run_example().expect("conditional_cut example should run");
}

mod densest_subgraph {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/densest_subgraph.rs"
    ));
}

#[test]
fn densest_subgraph_runs() {
    densest_subgraph::run_example().expect("densest_subgraph example should run");
}

mod distinct_count {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/distinct_count.rs"
    ));
}

#[test]
fn distinct_count_runs() {
    distinct_count::run_example().expect("distinct_count example should run");
}

mod expander_sampler {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/expander_sampler.rs"
    ));
}

#[test]
fn expander_sampler_runs() {
    expander_sampler::run_example().expect("expander_sampler example should run");
}

mod hash_families {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/hash_families.rs"
    ));
}

#[test]
fn hash_families_runs() {
    hash_families::run_example().expect("hash_families example should run");
}

mod jaccard_similarity {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/jaccard_similarity.rs"
    ));
}

#[test]
fn jaccard_similarity_runs() {
    jaccard_similarity::run_example().expect("jaccard_similarity example should run");
}

mod max_csp {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/max_csp.rs"));
}

#[test]
fn max_csp_runs() {
    max_csp::run_example().expect("max_csp example should run");
}

mod maxcut_stream {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/maxcut_stream.rs"
    ));
}

#[test]
fn maxcut_stream_runs() {
    maxcut_stream::run_example().expect("maxcut_stream example should run");
}

mod rarity {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/rarity.rs"));
}

#[test]
fn rarity_runs() {
    rarity::run_example().expect("rarity example should run");
}

mod stream_files {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/stream_files.rs"
    ));
}

#[test]
fn stream_files_runs() {
    stream_files::run_example().expect("stream_files example should run");
}

mod value_gap {
    include!(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/value_gap.rs"
    ));
}

#[test]
fn value_gap_runs() {
    value_gap::run_example().expect("value_gap example should run");
}
