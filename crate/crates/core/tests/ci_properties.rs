//! Finite-sample behaviour of the Fisher-z tester against the exact oracle.

mod common;

use common::instance;
use lsas_core::ci::{CiTester, FisherZTester, OracleTester};
use lsas_core::subsets::index_subsets;

/// With plenty of data the Fisher-z answers agree with the separation
/// oracle on nearly every query of conditioning size at most 3.
#[test]
fn finite_sample_agreement_with_oracle() {
    let mut agree = 0u64;
    let mut total = 0u64;
    for seed in 0..6u64 {
        let inst = instance(8, 3.0, 1, seed);
        let data = inst.scm.sample(100_000, seed.wrapping_add(900));
        let (obs_data, mag) = inst
            .scm
            .drop_latents(&inst.latents, &inst.pair, &data)
            .unwrap();
        let fisher = FisherZTester::new(&obs_data, 0.01);
        let oracle = OracleTester::new(mag);
        let vars = inst.observed.clone();
        for i in 0..vars.len() {
            for j in i + 1..vars.len() {
                let rest: Vec<&str> = vars
                    .iter()
                    .filter(|v| **v != vars[i] && **v != vars[j])
                    .map(String::as_str)
                    .collect();
                for z_idx in index_subsets(rest.len(), 3) {
                    let z: Vec<&str> = z_idx.iter().map(|&k| rest[k]).collect();
                    let a = fisher.test(&vars[i], &vars[j], &z).unwrap().independent;
                    let b = oracle.test(&vars[i], &vars[j], &z).unwrap().independent;
                    total += 1;
                    if a == b {
                        agree += 1;
                    }
                }
            }
        }
    }
    let rate = agree as f64 / total as f64;
    assert!(rate >= 0.98, "agreement rate {rate:.4} over {total} queries");
}

/// The counter advances by exactly one per executed test and identical
/// query streams give identical answers and counts.
#[test]
fn counter_exactness_across_replays() {
    let inst = instance(9, 3.0, 1, 11);
    let data = inst.scm.sample(5_000, 42);
    let (obs_data, _) = inst
        .scm
        .drop_latents(&inst.latents, &inst.pair, &data)
        .unwrap();

    let replay = || {
        let t = FisherZTester::new(&obs_data, 0.01);
        let vars = &inst.observed;
        let mut answers = Vec::new();
        for i in 1..vars.len() {
            let res = t.test(&vars[0], &vars[i], &[] as &[&str]).unwrap();
            answers.push((res.independent, res.p_value.to_bits()));
        }
        (answers, t.query_count())
    };
    let (a1, c1) = replay();
    let (a2, c2) = replay();
    assert_eq!(a1, a2);
    assert_eq!(c1, c2);
    assert_eq!(c1, inst.observed.len() as u64 - 1);
}
