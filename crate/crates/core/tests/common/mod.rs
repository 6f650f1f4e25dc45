//! Shared random-instance machinery for the property suites.

use lsas_core::graph::{MixedGraph, NodePair};
use lsas_core::scm::{last_two_in_causal_order, pick_latents, random_dag, LatentSpec, LinearScm};

pub struct Instance {
    pub dag: MixedGraph,
    pub scm: LinearScm,
    pub pair: NodePair,
    pub latents: Vec<String>,
    pub observed: Vec<String>,
    pub mag: MixedGraph,
}

/// Random DAG, treatment/outcome at the end of the causal order, latents
/// among nodes with two or more children.
pub fn instance(n: usize, degree: f64, n_latents: usize, seed: u64) -> Instance {
    let dag = random_dag(n, degree, seed).unwrap();
    let pair = last_two_in_causal_order(&dag).unwrap();
    let (latents, _) =
        pick_latents(&dag, LatentSpec::Count(n_latents), &pair, seed.wrapping_add(1)).unwrap();
    let observed: Vec<String> = dag
        .nodes()
        .iter()
        .filter(|v| !latents.contains(v))
        .cloned()
        .collect();
    let mag = dag.latent_project(&observed).unwrap();
    let scm = LinearScm::assign_weights(&dag, seed.wrapping_add(2), false).unwrap();
    Instance {
        dag,
        scm,
        pair,
        latents,
        observed,
        mag,
    }
}

/// All subsets of `items`, smallest first.
pub fn power_set<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    lsas_core::subsets::subsets_up_to(items, items.len())
}
