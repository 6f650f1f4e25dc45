//! Built-in demonstration graphs.
//!
//! Each fixture bundles an underlying DAG, the set of nodes treated as
//! latent, the treatment/outcome pair, and (where useful) the marginal MAG
//! over the observed nodes, so the CLI and the test suites can generate data
//! and query ground truth from the same source. Fixture names (`fig1a` …
//! `fig10`) are the identifiers the command line accepts.

use crate::graph::{GraphBuilder, GraphKind, MixedGraph, NodePair};

/// A named scenario: DAG, latent nodes, and the (treatment, outcome) pair.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub dag: MixedGraph,
    pub latents: Vec<String>,
    pub pair: NodePair,
}

impl Fixture {
    /// Observed node names, in the DAG's canonical order.
    pub fn observed(&self) -> Vec<String> {
        self.dag
            .nodes()
            .iter()
            .filter(|v| !self.latents.contains(v))
            .cloned()
            .collect()
    }

    /// The marginal MAG over the observed nodes.
    pub fn mag(&self) -> MixedGraph {
        self.dag
            .latent_project(&self.observed())
            .expect("fixture DAGs project cleanly")
    }
}

pub const FIXTURE_NAMES: &[&str] = &[
    "fig1a",
    "fig1b",
    "fig1c",
    "fig3",
    "fig3-no-edge",
    "fig3-no-edge-v2-latent",
    "fig4",
    "fig9",
    "fig10",
];

/// Looks a fixture up by name (case-insensitive).
pub fn builtin(name: &str) -> Option<Fixture> {
    let pair_xy = || NodePair::new("X", "Y").unwrap();
    let f = match name.to_ascii_lowercase().as_str() {
        "fig1a" => Fixture {
            name: "fig1a",
            dag: fig1a_dag(),
            latents: vec!["Ua".into()],
            pair: pair_xy(),
        },
        "fig1b" => Fixture {
            name: "fig1b",
            dag: fig1b_dag(),
            latents: vec!["U1".into(), "U2".into(), "U3".into()],
            pair: pair_xy(),
        },
        "fig1c" => Fixture {
            name: "fig1c",
            dag: fig1c_dag(),
            latents: vec!["U1".into(), "U2".into()],
            pair: pair_xy(),
        },
        "fig3" => Fixture {
            name: "fig3",
            dag: fig3_dag(),
            latents: vec!["U1".into(), "U2".into()],
            pair: pair_xy(),
        },
        "fig3-no-edge" => Fixture {
            name: "fig3-no-edge",
            dag: fig3_dag_without_treatment_edge(),
            latents: vec!["U1".into(), "U2".into()],
            pair: pair_xy(),
        },
        "fig3-no-edge-v2-latent" => Fixture {
            name: "fig3-no-edge-v2-latent",
            dag: fig3_dag_without_treatment_edge(),
            latents: vec!["U1".into(), "U2".into(), "V2".into()],
            pair: pair_xy(),
        },
        "fig4" => Fixture {
            name: "fig4",
            dag: fig4_dag(),
            latents: vec!["U1".into(), "U2".into(), "U3".into(), "U4".into()],
            pair: pair_xy(),
        },
        "fig9" => Fixture {
            name: "fig9",
            dag: m_structure_dag(),
            latents: vec!["U1".into(), "U2".into()],
            pair: pair_xy(),
        },
        "fig10" => Fixture {
            name: "fig10",
            dag: fig10_dag(),
            latents: vec![],
            pair: pair_xy(),
        },
        _ => return None,
    };
    Some(f)
}

/// MAG with one bidirected pair; the single covariate V5 is a valid
/// adjustment set for (X, Y).
pub fn fig1a_dag() -> MixedGraph {
    let mut b = GraphBuilder::new(GraphKind::Dag);
    for v in ["X", "Y", "V1", "V2", "V3", "V4", "V5", "Ua"] {
        b.node(v).unwrap();
    }
    for (a, c) in [
        ("X", "Y"),
        ("V5", "Y"),
        ("V5", "V4"),
        ("V4", "V3"),
        ("V2", "V1"),
        ("V3", "V1"),
        ("V1", "X"),
        ("Ua", "V4"),
        ("Ua", "V2"),
    ] {
        b.directed(a, c).unwrap();
    }
    b.build().unwrap()
}

pub fn fig1a_mag() -> MixedGraph {
    let mut b = GraphBuilder::new(GraphKind::Mag);
    for v in ["X", "Y", "V1", "V2", "V3", "V4", "V5"] {
        b.node(v).unwrap();
    }
    b.directed("X", "Y").unwrap();
    b.directed("V5", "Y").unwrap();
    b.directed("V5", "V4").unwrap();
    b.directed("V4", "V3").unwrap();
    b.bidirected("V4", "V2").unwrap();
    b.directed("V2", "V1").unwrap();
    b.directed("V3", "V1").unwrap();
    b.directed("V1", "X").unwrap();
    b.build().unwrap()
}

/// Scenario where a purely adjacency-local search misses the adjustment set
/// {V2, V3, V4} but the blanket-local one finds it.
pub fn fig1b_dag() -> MixedGraph {
    let mut b = GraphBuilder::new(GraphKind::Dag);
    for v in ["X", "Y", "V1", "V2", "V3", "V4", "U1", "U2", "U3"] {
        b.node(v).unwrap();
    }
    for (a, c) in [
        ("X", "Y"),
        ("V4", "V1"),
        ("V3", "V2"),
        ("V3", "V4"),
        ("V2", "Y"),
        ("U1", "X"),
        ("U1", "V1"),
        ("U2", "Y"),
        ("U2", "V4"),
        ("U3", "V1"),
        ("U3", "V2"),
    ] {
        b.directed(a, c).unwrap();
    }
    b.build().unwrap()
}

pub fn fig1b_mag() -> MixedGraph {
    let mut b = GraphBuilder::new(GraphKind::Mag);
    for v in ["X", "Y", "V1", "V2", "V3", "V4"] {
        b.node(v).unwrap();
    }
    b.directed("X", "Y").unwrap();
    b.bidirected("X", "V1").unwrap();
    b.bidirected("Y", "V4").unwrap();
    b.directed("V4", "V1").unwrap();
    b.bidirected("V1", "V2").unwrap();
    b.directed("V3", "V2").unwrap();
    b.directed("V3", "V4").unwrap();
    b.directed("V2", "Y").unwrap();
    b.build().unwrap()
}

/// Scenario without a cause-or-spouse-only covariate; {V2, V3} is the
/// minimal valid adjustment set.
pub fn fig1c_dag() -> MixedGraph {
    let mut b = GraphBuilder::new(GraphKind::Dag);
    for v in ["X", "Y", "V1", "V2", "V3", "U1", "U2"] {
        b.node(v).unwrap();
    }
    for (a, c) in [
        ("X", "Y"),
        ("V2", "Y"),
        ("V3", "Y"),
        ("V1", "V2"),
        ("U1", "V3"),
        ("U1", "V2"),
        ("U2", "V3"),
        ("U2", "X"),
    ] {
        b.directed(a, c).unwrap();
    }
    b.build().unwrap()
}

pub fn fig1c_mag() -> MixedGraph {
    let mut b = GraphBuilder::new(GraphKind::Mag);
    for v in ["X", "Y", "V1", "V2", "V3"] {
        b.node(v).unwrap();
    }
    b.directed("X", "Y").unwrap();
    b.directed("V2", "Y").unwrap();
    b.directed("V3", "Y").unwrap();
    b.bidirected("V3", "V2").unwrap();
    b.bidirected("V3", "X").unwrap();
    b.directed("V1", "V2").unwrap();
    b.build().unwrap()
}

/// Eleven-node DAG with two confounders; hiding U1, U2 yields `fig3_mag`.
pub fn fig3_dag() -> MixedGraph {
    let mut b = GraphBuilder::new(GraphKind::Dag);
    for v in [
        "X", "Y", "V1", "V2", "V3", "V4", "V5", "V6", "V7", "U1", "U2",
    ] {
        b.node(v).unwrap();
    }
    for (a, c) in fig3_directed_edges() {
        b.directed(a, c).unwrap();
    }
    b.directed("X", "Y").unwrap();
    b.build().unwrap()
}

/// `fig3_dag` with the X -> Y edge removed: X has no effect on Y.
pub fn fig3_dag_without_treatment_edge() -> MixedGraph {
    let mut b = GraphBuilder::new(GraphKind::Dag);
    for v in [
        "X", "Y", "V1", "V2", "V3", "V4", "V5", "V6", "V7", "U1", "U2",
    ] {
        b.node(v).unwrap();
    }
    for (a, c) in fig3_directed_edges() {
        b.directed(a, c).unwrap();
    }
    b.build().unwrap()
}

fn fig3_directed_edges() -> Vec<(&'static str, &'static str)> {
    vec![
        ("U1", "X"),
        ("U1", "V3"),
        ("U2", "Y"),
        ("U2", "V3"),
        ("V6", "V7"),
        ("V6", "X"),
        ("V4", "V5"),
        ("V4", "Y"),
        ("V1", "V2"),
        ("V1", "X"),
        ("V1", "Y"),
        ("V2", "X"),
        ("V2", "Y"),
    ]
}

pub fn fig3_mag() -> MixedGraph {
    let mut b = GraphBuilder::new(GraphKind::Mag);
    for v in ["X", "Y", "V1", "V2", "V3", "V4", "V5", "V6", "V7"] {
        b.node(v).unwrap();
    }
    b.directed("X", "Y").unwrap();
    b.bidirected("X", "V3").unwrap();
    b.bidirected("Y", "V3").unwrap();
    b.directed("V6", "V7").unwrap();
    b.directed("V6", "X").unwrap();
    b.directed("V4", "V5").unwrap();
    b.directed("V4", "Y").unwrap();
    b.directed("V1", "V2").unwrap();
    b.directed("V1", "X").unwrap();
    b.directed("V1", "Y").unwrap();
    b.directed("V2", "X").unwrap();
    b.directed("V2", "Y").unwrap();
    b.build().unwrap()
}

/// Fifteen-node DAG with four confounders; hiding U1..U4 yields `fig4_mag`.
/// V4 is intentionally isolated.
pub fn fig4_dag() -> MixedGraph {
    let mut b = GraphBuilder::new(GraphKind::Dag);
    for v in [
        "X", "Y", "V1", "V2", "V3", "V4", "V5", "V6", "V7", "V8", "V9", "U1", "U2", "U3", "U4",
    ] {
        b.node(v).unwrap();
    }
    for (a, c) in [
        ("X", "Y"),
        ("U1", "X"),
        ("U1", "V1"),
        ("U2", "Y"),
        ("U2", "V1"),
        ("U3", "X"),
        ("U3", "V5"),
        ("U4", "V6"),
        ("U4", "V5"),
        ("V5", "Y"),
        ("V2", "Y"),
        ("V6", "Y"),
        ("V2", "V3"),
        ("V7", "V6"),
        ("V8", "X"),
        ("V8", "Y"),
        ("V9", "V8"),
        ("V9", "Y"),
    ] {
        b.directed(a, c).unwrap();
    }
    b.build().unwrap()
}

pub fn fig4_mag() -> MixedGraph {
    let mut b = GraphBuilder::new(GraphKind::Mag);
    for v in ["X", "Y", "V1", "V2", "V3", "V4", "V5", "V6", "V7", "V8", "V9"] {
        b.node(v).unwrap();
    }
    b.directed("X", "Y").unwrap();
    b.bidirected("X", "V1").unwrap();
    b.bidirected("Y", "V1").unwrap();
    b.bidirected("X", "V5").unwrap();
    b.bidirected("V5", "V6").unwrap();
    b.directed("V5", "Y").unwrap();
    b.directed("V2", "Y").unwrap();
    b.directed("V6", "Y").unwrap();
    b.directed("V2", "V3").unwrap();
    b.directed("V7", "V6").unwrap();
    b.directed("V8", "X").unwrap();
    b.directed("V8", "Y").unwrap();
    b.directed("V9", "V8").unwrap();
    b.directed("V9", "Y").unwrap();
    b.build().unwrap()
}

/// Collider-stratification structure: X -> Y with two confounders meeting
/// at M. Adjusting for M opens the blocked path.
pub fn m_structure_dag() -> MixedGraph {
    MixedGraph::dag(
        &["X", "Y", "M", "U1", "U2"],
        &[
            ("X", "Y"),
            ("U1", "X"),
            ("U1", "M"),
            ("U2", "M"),
            ("U2", "Y"),
        ],
    )
    .unwrap()
}

/// Marginal MAG of the collider-stratification structure.
pub fn m_structure_mag() -> MixedGraph {
    let mut b = GraphBuilder::new(GraphKind::Mag);
    for v in ["X", "Y", "M"] {
        b.node(v).unwrap();
    }
    b.directed("X", "Y").unwrap();
    b.bidirected("M", "X").unwrap();
    b.bidirected("M", "Y").unwrap();
    b.build().unwrap()
}

/// `m_structure_mag` without the treatment edge.
pub fn m_structure_mag_no_edge() -> MixedGraph {
    let mut b = GraphBuilder::new(GraphKind::Mag);
    for v in ["X", "Y", "M"] {
        b.node(v).unwrap();
    }
    b.bidirected("M", "X").unwrap();
    b.bidirected("M", "Y").unwrap();
    b.build().unwrap()
}

/// Three observed variables whose dependence pattern is compatible with
/// structures both with and without a treatment edge: undecidable from
/// independence tests alone.
pub fn fig10_dag() -> MixedGraph {
    MixedGraph::dag(&["X", "Y", "V"], &[("V", "X"), ("V", "Y"), ("X", "Y")]).unwrap()
}

/// Marginal MAG of `fig3-no-edge` over {X,Y,V1..V7}.
pub fn fig3_no_edge_mag() -> MixedGraph {
    let mut b = GraphBuilder::new(GraphKind::Mag);
    for v in ["X", "Y", "V1", "V2", "V3", "V4", "V5", "V6", "V7"] {
        b.node(v).unwrap();
    }
    b.bidirected("X", "V3").unwrap();
    b.bidirected("Y", "V3").unwrap();
    b.directed("V6", "V7").unwrap();
    b.directed("V6", "X").unwrap();
    b.directed("V4", "V5").unwrap();
    b.directed("V4", "Y").unwrap();
    b.directed("V1", "V2").unwrap();
    b.directed("V1", "X").unwrap();
    b.directed("V1", "Y").unwrap();
    b.directed("V2", "X").unwrap();
    b.directed("V2", "Y").unwrap();
    b.build().unwrap()
}

/// Marginal MAG of `fig3-no-edge-v2-latent` over {X,Y,V1,V3..V7}.
pub fn fig3_no_edge_v2_latent_mag() -> MixedGraph {
    let mut b = GraphBuilder::new(GraphKind::Mag);
    for v in ["X", "Y", "V1", "V3", "V4", "V5", "V6", "V7"] {
        b.node(v).unwrap();
    }
    b.bidirected("X", "Y").unwrap();
    b.bidirected("X", "V3").unwrap();
    b.bidirected("Y", "V3").unwrap();
    b.directed("V1", "X").unwrap();
    b.directed("V1", "Y").unwrap();
    b.directed("V6", "X").unwrap();
    b.directed("V6", "V7").unwrap();
    b.directed("V4", "Y").unwrap();
    b.directed("V4", "V5").unwrap();
    b.build().unwrap()
}

/// Blanket illustration MAG: sixteen covariates around a target Y.
pub fn mb_illustration_mag() -> MixedGraph {
    let mut b = GraphBuilder::new(GraphKind::Mag);
    let mut names = vec!["Y".to_string()];
    names.extend((1..=16).map(|i| format!("V{i}")));
    for v in &names {
        b.node(v).unwrap();
    }
    for (a, c) in [
        ("V4", "V5"),
        ("V4", "V6"),
        ("V11", "V10"),
        ("Y", "V6"),
        ("V10", "V12"),
        ("V2", "V1"),
        ("V2", "Y"),
        ("V9", "V12"),
        ("V8", "V7"),
        ("V8", "V9"),
        ("V13", "V12"),
        ("V7", "V14"),
        ("V11", "V15"),
        ("V11", "V14"),
        ("V5", "V16"),
    ] {
        b.directed(a, c).unwrap();
    }
    b.bidirected("V6", "V10").unwrap();
    b.bidirected("Y", "V9").unwrap();
    b.bidirected("Y", "V3").unwrap();
    b.build().unwrap()
}
