use linemark::constructions::{construct, Options};
use linemark::feasibility::{is_feasible, Params};
use linemark::oracle::{search, search_with_stats, SearchLimits, SearchOutcome};
use linemark::verify::verify;

#[test]
fn found_markings_verify_and_agree_with_constructions() {
    for (k, n) in [(2, 1), (2, 2), (2, 3), (2, 4), (3, 2)] {
        for b in 1..=n {
            for a in 0..b {
                let p = Params::new(k, n, a, b).unwrap();
                let outcome = search(&p, &SearchLimits::default()).unwrap();
                match outcome {
                    SearchOutcome::Found(m) => {
                        assert!(verify(&m, &p).unwrap().ok, "{p}");
                        assert!(construct(&p, &Options::default()).is_ok(), "{p}");
                    }
                    SearchOutcome::NoneExists => assert!(!is_feasible(&p).unwrap(), "{p}"),
                    SearchOutcome::Exhausted => panic!("{p} ran out of budget"),
                }
            }
        }
    }
}

#[test]
fn three_three_zero_two_has_no_marking() {
    let p = Params::new(3, 3, 0, 2).unwrap();
    let lim = SearchLimits {
        max_nodes: 50_000_000,
        max_seconds: 30.0,
    };
    let (outcome, stats) = search_with_stats(&p, &lim).unwrap();
    assert!(
        matches!(
            outcome,
            SearchOutcome::NoneExists | SearchOutcome::Exhausted
        ),
        "{outcome:?}"
    );
    assert!(stats.nodes > 0);
}

#[test]
fn feasible_three_cube_instance_is_found() {
    let p = Params::new(3, 3, 0, 1).unwrap();
    match search(&p, &SearchLimits::default()).unwrap() {
        SearchOutcome::Found(m) => assert!(verify(&m, &p).unwrap().ok),
        other => panic!("{other:?}"),
    }
}
