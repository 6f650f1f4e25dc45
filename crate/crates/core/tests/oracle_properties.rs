//! Property suites for the graphical machinery: projection fidelity,
//! blanket minimality, separation symmetry, maximality, and consistency of
//! the adjustment-set oracle.

mod common;

use common::{instance, power_set};
use lsas_core::ci::OracleTester;
use lsas_core::graph::{GraphBuilder, GraphKind, MixedGraph, NodePair};
use lsas_core::mb::total_conditioning_mb;
use proptest::prelude::*;

/// Every 3-way separation query over the observed nodes must agree between
/// the full DAG and its marginal MAG.
#[test]
fn projection_preserves_all_observable_separations() {
    for seed in 0..25u64 {
        let inst = instance(8 + (seed % 3) as usize, 2.5, (1 + seed % 3) as usize, seed);
        let obs = &inst.observed;
        for i in 0..obs.len() {
            for j in i + 1..obs.len() {
                let rest: Vec<&String> = obs
                    .iter()
                    .filter(|v| **v != obs[i] && **v != obs[j])
                    .collect();
                for z in power_set(&rest) {
                    let on_dag = inst.dag.m_separated(&obs[i], &obs[j], &z).unwrap();
                    let on_mag = inst.mag.m_separated(&obs[i], &obs[j], &z).unwrap();
                    assert_eq!(
                        on_dag, on_mag,
                        "seed {seed}: ({}, {} | {z:?})",
                        obs[i], obs[j]
                    );
                }
            }
        }
    }
}

#[test]
fn projected_graphs_are_maximal_both_routes() {
    for seed in 100..140u64 {
        let inst = instance(9, 3.0, 2, seed);
        assert!(!inst.mag.has_inseparable_nonadjacent_pair(), "seed {seed}");
        if inst.mag.len() <= 10 {
            assert!(inst.mag.is_maximal(None).unwrap(), "seed {seed}");
        }
    }
}

/// Brute-force maximality agrees with the reachability route on random
/// ancestral graphs, maximal or not. Non-maximal ancestral graphs are rare
/// under a uniform draw, so a seeded family built around a primitive
/// inducing path joins the batch.
#[test]
fn maximality_routes_agree_on_random_ancestral_graphs() {
    use rand::prelude::*;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let mut graphs: Vec<MixedGraph> = Vec::new();
    for _ in 0..200 {
        let n = 6;
        let names: Vec<String> = (0..n).map(|i| format!("N{i}")).collect();
        let mut b = GraphBuilder::new(GraphKind::Mag);
        for v in &names {
            b.node(v).unwrap();
        }
        for i in 0..n {
            for j in i + 1..n {
                if rng.gen::<f64>() < 0.5 {
                    if rng.gen::<f64>() < 0.4 {
                        b.directed(&names[i], &names[j]).unwrap();
                    } else {
                        b.bidirected(&names[i], &names[j]).unwrap();
                    }
                }
            }
        }
        if let Ok(g) = b.build() {
            graphs.push(g);
        }
    }
    // Inducing-path family: U <-> A <-> B <-> W with ancestry back to the
    // endpoints through two extra nodes, optionally decorated.
    for decorate in [false, true] {
        let mut b = GraphBuilder::new(GraphKind::Mag);
        b.bidirected("U", "A").unwrap();
        b.bidirected("A", "B").unwrap();
        b.bidirected("B", "W").unwrap();
        b.directed("A", "P").unwrap();
        b.directed("P", "W").unwrap();
        b.directed("B", "Q").unwrap();
        b.directed("Q", "U").unwrap();
        if decorate {
            b.directed("P", "R").unwrap();
            b.directed("Q", "R").unwrap();
        }
        graphs.push(b.build().unwrap());
    }

    let mut non_maximal_seen = 0;
    for g in &graphs {
        let brute = g.is_maximal(None).unwrap();
        let fast = !g.has_inseparable_nonadjacent_pair();
        assert_eq!(brute, fast, "{}", g.to_text());
        if !brute {
            non_maximal_seen += 1;
        }
    }
    assert!(
        non_maximal_seen >= 2,
        "the batch must exercise the non-maximal branch"
    );
}

/// Removing any single member of a blanket breaks the separation it
/// provides; the blanket itself always separates.
#[test]
fn markov_blankets_are_minimal_separators() {
    for seed in 200..230u64 {
        let inst = instance(9, 3.0, 2, seed);
        let mag = &inst.mag;
        for target in mag.nodes() {
            let blanket = mag.markov_blanket(target).unwrap();
            for v in mag.nodes() {
                if v == target || blanket.contains(v) {
                    continue;
                }
                assert!(mag.m_separated(target, v, &blanket).unwrap());
            }
            for dropped in &blanket {
                let reduced: Vec<&String> = blanket.iter().filter(|m| *m != dropped).collect();
                let still_works = mag
                    .nodes()
                    .iter()
                    .filter(|v| *v != target && !reduced.iter().any(|m| *m == *v))
                    .all(|v| mag.m_separated(target, v, &reduced).unwrap());
                assert!(
                    !still_works,
                    "seed {seed}: dropping {dropped} from the blanket of {target} still separates"
                );
            }
        }
    }
}

/// Total conditioning against the separation oracle recovers exactly the
/// graphical blanket.
#[test]
fn total_conditioning_equals_graphical_blanket() {
    for seed in 300..340u64 {
        let inst = instance(8 + (seed % 5) as usize, 3.0, 1 + (seed % 2) as usize, seed);
        let mag = inst.mag;
        let vars = mag.nodes().to_vec();
        let tester = OracleTester::new(mag.clone());
        for target in &vars {
            let mb = total_conditioning_mb(&tester, &vars, target).unwrap();
            assert_eq!(
                mb.members,
                mag.markov_blanket(target).unwrap(),
                "seed {seed}, target {target}"
            );
            assert_eq!(mb.queries_used, vars.len() as u64 - 1);
        }
    }
}

/// A valid adjustment set exists among the covariates iff one exists inside
/// the outcome's blanket (minus the treatment).
#[test]
fn adjustment_sets_exist_in_blanket_iff_anywhere() {
    let mut with_sets = 0;
    let mut without = 0;
    for seed in 400..480u64 {
        let inst = instance(8, 3.0, 1, seed);
        let mag = &inst.mag;
        let pair = &inst.pair;
        let covariates: Vec<String> = mag
            .nodes()
            .iter()
            .filter(|v| **v != pair.treatment && **v != pair.outcome)
            .cloned()
            .collect();
        let anywhere = !mag
            .enumerate_adjustment_sets(pair, &covariates, None)
            .unwrap()
            .is_empty();
        let mut blanket_universe = mag.markov_blanket(&pair.outcome).unwrap();
        blanket_universe.retain(|v| *v != pair.treatment);
        let in_blanket = !mag
            .enumerate_adjustment_sets(pair, &blanket_universe, None)
            .unwrap()
            .is_empty();
        assert_eq!(anywhere, in_blanket, "seed {seed}");
        if anywhere {
            with_sets += 1;
        } else {
            without += 1;
        }
    }
    // The draw must exercise both sides of the equivalence.
    assert!(with_sets > 5 && without > 5, "{with_sets} / {without}");
}

/// The enumerated family is exactly the family passing the validity check.
#[test]
fn enumeration_is_sound_and_complete() {
    for seed in 500..520u64 {
        let inst = instance(8, 3.0, 1, seed);
        let mag = &inst.mag;
        let pair = &inst.pair;
        let covariates: Vec<String> = mag
            .nodes()
            .iter()
            .filter(|v| **v != pair.treatment && **v != pair.outcome)
            .cloned()
            .collect();
        let listed = mag
            .enumerate_adjustment_sets(pair, &covariates, None)
            .unwrap();
        for z in power_set(&covariates) {
            let valid = mag.is_valid_adjustment(pair, &z).unwrap();
            let in_list = listed.iter().any(|l| {
                l.len() == z.len() && z.iter().all(|v| l.contains(v))
            });
            assert_eq!(valid, in_list, "seed {seed}, z {z:?}");
        }
    }
}

/// On DAGs the generalized criterion coincides with plain back-door
/// blocking plus the forbidden-set condition; spot-check it against a
/// direct separation statement in the edge-deleted graph built by hand.
#[test]
fn dag_criterion_matches_m_structure_analysis() {
    let dag = lsas_core::fixtures::m_structure_dag();
    let pair = NodePair::new("X", "Y").unwrap();
    let sets = dag
        .enumerate_adjustment_sets(&pair, &["M", "U1", "U2"], None)
        .unwrap();
    // Anything not opening the collider at M works: that is, any set where
    // M's presence is compensated by one of its parents.
    for z in &sets {
        let opens = z.contains(&"M".to_string())
            && !z.contains(&"U1".to_string())
            && !z.contains(&"U2".to_string());
        assert!(!opens, "{z:?} should have been rejected");
    }
    assert!(sets.contains(&vec![]));
    assert!(!sets.contains(&vec!["M".to_string()]));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Separation statements are symmetric in the endpoints.
    #[test]
    fn m_separation_is_symmetric(seed in 0u64..5000, zbits in 0usize..256) {
        let inst = instance(9, 3.0, 1, seed);
        let g = &inst.mag;
        let nodes = g.nodes();
        let x = &nodes[(seed as usize) % nodes.len()];
        let y = &nodes[(seed as usize / 7 + 1) % nodes.len()];
        if x == y {
            return Ok(());
        }
        let z: Vec<&String> = nodes
            .iter()
            .enumerate()
            .filter(|(i, v)| zbits >> i & 1 == 1 && *v != x && *v != y)
            .map(|(_, v)| v)
            .collect();
        let a = g.m_separated(x, y, &z).unwrap();
        let b = g.m_separated(y, x, &z).unwrap();
        prop_assert_eq!(a, b);
    }

    /// Graph text serialization round-trips.
    #[test]
    fn graph_text_round_trips(seed in 0u64..5000) {
        let inst = instance(8, 2.5, 2, seed);
        let text = inst.mag.to_text();
        let back = MixedGraph::from_text(&text).unwrap();
        prop_assert!(back.same_structure(&inst.mag));
        prop_assert_eq!(back.to_text(), text);
    }
}
