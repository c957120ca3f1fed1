use dendrite_core::dendrite::{adjacency_graph, is_tree};
use dendrite_core::rational::frac;
use dendrite_core::suite::{run_suite, Check, RunConfig};
use dendrite_core::{Outcome, ReportDocument};

fn small() -> RunConfig {
    RunConfig {
        depths: [5, 3, 2, 3, 3, 4],
        ..RunConfig::default()
    }
}

#[test]
fn small_suite_round_trips_through_text() {
    let doc = run_suite(&small(), &Check::ALL).unwrap();
    assert_eq!(doc.overall(), Outcome::Pass);
    let text = doc.render();
    let back = ReportDocument::parse(&text).unwrap();
    assert_eq!(back.render(), text);
    assert_eq!(back.reports.len(), 6);
}

#[test]
fn graph_from_a_fresh_system_is_a_tree() {
    let system = small().system().unwrap();
    for n in 1..=3 {
        let g = adjacency_graph(&system, n).unwrap();
        assert!(g.is_conclusive());
        assert!(is_tree(&g));
        assert_eq!(g.edges.len(), (1 << (2 * n)) - 1);
    }
}

#[test]
fn the_threshold_separates_pass_from_fail() {
    let mut config = small();
    config.h = frac(1, 3);
    let doc = run_suite(&config, &[Check::Separation]).unwrap();
    assert_eq!(doc.overall(), Outcome::Fail);
    config.h = frac(1, 5);
    let doc = run_suite(&config, &[Check::Separation]).unwrap();
    assert_eq!(doc.overall(), Outcome::Pass);
}
