//! Linear-Gaussian structural causal models: random graph generation,
//! weight assignment, sampling, and ground-truth total effects.
//!
//! Every generated variable is its weighted parent sum plus independent
//! Gaussian noise. Edge weights drawn by [`LinearScm::assign_weights`] have
//! magnitude in [0.5, 1.5] (positive by default, an optional sign-flip flag
//! exists for robustness studies) and all noise scales are 1.

use crate::data::Dataset;
use crate::graph::{GraphBuilder, GraphError, GraphKind, MixedGraph, NodePair};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::collections::HashMap;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ScmError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("need n >= 2 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("average degree must satisfy 0 < d < n, got d={d}, n={n}")]
    BadDegree { d: f64, n: usize },
    #[error("cannot hide treatment or outcome `{0}`")]
    LatentTreatmentOutcome(String),
    #[error("node `{0}` is not part of this model")]
    UnknownNode(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// A DAG with edge weights and per-node noise scales.
#[derive(Debug, Clone)]
pub struct LinearScm {
    dag: MixedGraph,
    /// weight[k] belongs to the k-th edge of `dag`.
    weights: Vec<f64>,
    /// Noise standard deviation per node, in canonical node order.
    noise_scales: Vec<f64>,
    /// Indices into the node list, parents before children.
    topo: Vec<usize>,
}

/// Erdős–Rényi style random DAG: nodes are inserted in a uniformly random
/// causal order (so insertion order *is* the causal order) and each
/// position pair i < j receives an edge independently with probability
/// d/(n−1).
pub fn random_dag(n: usize, d: f64, seed: u64) -> Result<MixedGraph, ScmError> {
    if n < 2 {
        return Err(ScmError::TooFewNodes(n));
    }
    if d <= 0.0 || d >= n as f64 {
        return Err(ScmError::BadDegree { d, n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (1..=n).collect();
    order.shuffle(&mut rng);
    let p = (d / (n as f64 - 1.0)).min(1.0);
    let mut b = GraphBuilder::new(GraphKind::Dag);
    for &i in &order {
        b.node(format!("V{i}"))?;
    }
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen::<f64>() < p {
                b.directed(&format!("V{}", order[i]), &format!("V{}", order[j]))?;
            }
        }
    }
    Ok(b.build()?)
}

/// The pair convention for random graphs: the last two nodes in the causal
/// order. The second-to-last becomes the treatment, the last the outcome,
/// which makes both pretreatment by construction.
pub fn last_two_in_causal_order(dag: &MixedGraph) -> Result<NodePair, ScmError> {
    let order = dag.topological_order();
    if order.len() < 2 {
        return Err(ScmError::TooFewNodes(order.len()));
    }
    Ok(NodePair::new(
        order[order.len() - 2].clone(),
        order[order.len() - 1].clone(),
    )?)
}

/// Which nodes to hide: an explicit count or a fraction of all nodes.
#[derive(Debug, Clone, Copy)]
pub enum LatentSpec {
    Count(usize),
    Fraction(f64),
}

/// Picks latent nodes among those with at least two children, never the
/// treatment or outcome. Returns the chosen names (canonical order) and a
/// shortfall flag set when fewer eligible nodes exist than requested.
pub fn pick_latents(
    dag: &MixedGraph,
    spec: LatentSpec,
    pair: &NodePair,
    seed: u64,
) -> Result<(Vec<String>, bool), ScmError> {
    let want = match spec {
        LatentSpec::Count(k) => k,
        LatentSpec::Fraction(f) => (f * dag.len() as f64).round() as usize,
    };
    let mut eligible: Vec<String> = dag
        .nodes()
        .iter()
        .filter(|v| {
            v.as_str() != pair.treatment
                && v.as_str() != pair.outcome
                && dag.children(v).map(|c| c.len() >= 2).unwrap_or(false)
        })
        .cloned()
        .collect();
    let shortfall = eligible.len() < want;
    if shortfall {
        log::warn!(
            "only {} nodes with >= 2 children are eligible as latents, requested {want}",
            eligible.len()
        );
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    eligible.shuffle(&mut rng);
    let mut chosen: Vec<String> = eligible.into_iter().take(want).collect();
    // Canonical order for determinism of everything downstream.
    let pos: HashMap<&String, usize> = dag.nodes().iter().zip(0..).collect();
    chosen.sort_by_key(|v| pos[v]);
    Ok((chosen, shortfall))
}

impl LinearScm {
    /// Draws |weight| ~ U[0.5, 1.5] for every edge, noise scale 1 for every
    /// node. With `flip_signs`, each weight's sign is flipped independently
    /// with probability 1/2.
    pub fn assign_weights(dag: &MixedGraph, seed: u64, flip_signs: bool) -> Result<Self, ScmError> {
        if dag.kind() != GraphKind::Dag {
            return Err(ScmError::Graph(GraphError::WrongKind {
                op: "assign_weights",
                want: GraphKind::Dag,
                got: dag.kind(),
            }));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut weights = Vec::with_capacity(dag.edge_count());
        for _ in 0..dag.edge_count() {
            let mut w: f64 = rng.gen_range(0.5..=1.5);
            if flip_signs && rng.gen::<bool>() {
                w = -w;
            }
            weights.push(w);
        }
        Self::from_parts(dag.clone(), weights, vec![1.0; dag.len()])
    }

    /// Assembles an SCM from explicit weights (one per edge, in edge order)
    /// and noise scales (one per node, in canonical order).
    pub fn from_parts(
        dag: MixedGraph,
        weights: Vec<f64>,
        noise_scales: Vec<f64>,
    ) -> Result<Self, ScmError> {
        if dag.kind() != GraphKind::Dag {
            return Err(ScmError::Graph(GraphError::WrongKind {
                op: "LinearScm::from_parts",
                want: GraphKind::Dag,
                got: dag.kind(),
            }));
        }
        assert_eq!(weights.len(), dag.edge_count(), "one weight per edge");
        assert_eq!(noise_scales.len(), dag.len(), "one noise scale per node");
        let order = dag.topological_order();
        let topo = order
            .iter()
            .map(|v| dag.nodes().iter().position(|w| w == v).unwrap())
            .collect();
        Ok(Self {
            dag,
            weights,
            noise_scales,
            topo,
        })
    }

    pub fn dag(&self) -> &MixedGraph {
        &self.dag
    }

    pub fn nodes(&self) -> &[String] {
        self.dag.nodes()
    }

    pub fn weight_between(&self, from: &str, to: &str) -> Option<f64> {
        let fi = self.dag.nodes().iter().position(|v| v == from)?;
        let ti = self.dag.nodes().iter().position(|v| v == to)?;
        self.dag
            .edges()
            .iter()
            .position(|e| e.a == fi && e.b == ti)
            .map(|k| self.weights[k])
    }

    pub fn noise_scale(&self, node: &str) -> Result<f64, ScmError> {
        let i = self
            .dag
            .nodes()
            .iter()
            .position(|v| v == node)
            .ok_or_else(|| ScmError::UnknownNode(node.to_string()))?;
        Ok(self.noise_scales[i])
    }

    /// Draws N joint samples. Columns follow the DAG's canonical node order;
    /// values are exactly reproducible for a fixed seed.
    pub fn sample(&self, n: usize, seed: u64) -> Dataset {
        assert!(n >= 1, "need at least one sample");
        let p = self.dag.len();
        // Per-node parent lists as (column, weight).
        let mut parents: Vec<Vec<(usize, f64)>> = vec![Vec::new(); p];
        for (k, e) in self.dag.edges().iter().enumerate() {
            parents[e.b].push((e.a, self.weights[k]));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = vec![0.0f64; n * p];
        for row in 0..n {
            let base = row * p;
            for &v in &self.topo {
                let eps: f64 = rng.sample(StandardNormal);
                let mut x = self.noise_scales[v] * eps;
                for &(pa, w) in &parents[v] {
                    x += w * values[base + pa];
                }
                values[base + v] = x;
            }
        }
        Dataset::new(self.dag.nodes().to_vec(), values).expect("node names are unique")
    }

    /// Ground-truth total effect of `pair.treatment` on `pair.outcome`: the
    /// sum over all directed paths of the product of edge weights. Zero when
    /// no directed path exists.
    pub fn true_total_effect(&self, pair: &NodePair) -> Result<f64, ScmError> {
        let nodes = self.dag.nodes();
        let x = nodes
            .iter()
            .position(|v| *v == pair.treatment)
            .ok_or_else(|| ScmError::UnknownNode(pair.treatment.clone()))?;
        let y = nodes
            .iter()
            .position(|v| *v == pair.outcome)
            .ok_or_else(|| ScmError::UnknownNode(pair.outcome.clone()))?;
        let mut parents: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nodes.len()];
        for (k, e) in self.dag.edges().iter().enumerate() {
            parents[e.b].push((e.a, self.weights[k]));
        }
        // Accumulate path products in topological order.
        let mut effect = vec![0.0f64; nodes.len()];
        effect[x] = 1.0;
        for &v in &self.topo {
            if v == x {
                continue;
            }
            effect[v] = parents[v].iter().map(|&(pa, w)| w * effect[pa]).sum();
        }
        Ok(effect[y])
    }

    /// Model-implied covariance matrix in canonical node order.
    pub fn implied_covariance(&self) -> nalgebra::DMatrix<f64> {
        let p = self.dag.len();
        let mut w = nalgebra::DMatrix::<f64>::zeros(p, p);
        for (k, e) in self.dag.edges().iter().enumerate() {
            w[(e.a, e.b)] = self.weights[k];
        }
        let id = nalgebra::DMatrix::<f64>::identity(p, p);
        let inv = (&id - &w)
            .try_inverse()
            .expect("I - W is unit triangular up to permutation");
        let mut d = nalgebra::DMatrix::<f64>::zeros(p, p);
        for i in 0..p {
            d[(i, i)] = self.noise_scales[i] * self.noise_scales[i];
        }
        inv.transpose() * d * inv
    }

    /// Removes the latent columns from `data` and projects the DAG onto the
    /// remaining nodes. The treatment and outcome may not be hidden.
    pub fn drop_latents<S: AsRef<str>>(
        &self,
        latents: &[S],
        pair: &NodePair,
        data: &Dataset,
    ) -> Result<(Dataset, MixedGraph), ScmError> {
        for l in latents {
            let l = l.as_ref();
            if l == pair.treatment || l == pair.outcome {
                return Err(ScmError::LatentTreatmentOutcome(l.to_string()));
            }
            if !self.dag.contains(l) {
                return Err(ScmError::UnknownNode(l.to_string()));
            }
        }
        let observed: Vec<String> = self
            .dag
            .nodes()
            .iter()
            .filter(|v| !latents.iter().any(|l| l.as_ref() == v.as_str()))
            .cloned()
            .collect();
        let mag = self.dag.latent_project(&observed)?;
        let keep: Vec<&str> = latents.iter().map(|l| l.as_ref()).collect();
        let dataset = if keep.is_empty() {
            data.clone()
        } else {
            data.drop_columns(&keep).map_err(|e| {
                ScmError::UnknownNode(format!("dataset is missing a latent column: {e}"))
            })?
        };
        Ok((dataset, mag))
    }

    // ---- text format -------------------------------------------------------

    /// Graph format extended with `w=` on edge lines and `noise` lines.
    pub fn to_text(&self) -> String {
        use std::fmt::Write as _;
        let mut out = String::from("kind DAG\n");
        for v in self.dag.nodes() {
            writeln!(out, "node {v}").unwrap();
        }
        for (k, e) in self.dag.edges().iter().enumerate() {
            writeln!(
                out,
                "edge {} - > {} w={}",
                self.dag.nodes()[e.a],
                self.dag.nodes()[e.b],
                self.weights[k]
            )
            .unwrap();
        }
        for (i, v) in self.dag.nodes().iter().enumerate() {
            writeln!(out, "noise {v} {}", self.noise_scales[i]).unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<LinearScm, ScmError> {
        let mut b = GraphBuilder::new(GraphKind::Dag);
        let mut saw_kind = false;
        let mut weights = Vec::new();
        let mut noises: Vec<(String, f64)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let f: Vec<&str> = t.split_whitespace().collect();
            match f[0] {
                "kind" => {
                    if f.get(1) != Some(&"DAG") {
                        return Err(ScmError::Parse {
                            line,
                            msg: "model files must declare kind DAG".into(),
                        });
                    }
                    saw_kind = true;
                }
                "node" => {
                    b.node(*f.get(1).ok_or(ScmError::Parse {
                        line,
                        msg: "node needs a name".into(),
                    })?)?;
                }
                "edge" => {
                    if f.len() < 6 || f[2] != "-" || f[3] != ">" {
                        return Err(ScmError::Parse {
                            line,
                            msg: "expected `edge A - > B w=<real>`".into(),
                        });
                    }
                    let w = f[5]
                        .strip_prefix("w=")
                        .and_then(|s| s.parse::<f64>().ok())
                        .ok_or(ScmError::Parse {
                            line,
                            msg: format!("bad weight `{}`", f[5]),
                        })?;
                    b.directed(f[1], f[4])?;
                    weights.push(w);
                }
                "noise" => {
                    if f.len() < 3 {
                        return Err(ScmError::Parse {
                            line,
                            msg: "expected `noise <id> <real>`".into(),
                        });
                    }
                    let s: f64 = f[2].parse().map_err(|_| ScmError::Parse {
                        line,
                        msg: format!("bad noise scale `{}`", f[2]),
                    })?;
                    noises.push((f[1].to_string(), s));
                }
                other => {
                    return Err(ScmError::Parse {
                        line,
                        msg: format!("unknown record `{other}`"),
                    })
                }
            }
        }
        if !saw_kind {
            return Err(ScmError::Parse {
                line: 0,
                msg: "missing kind header".into(),
            });
        }
        let dag = b.build()?;
        let mut noise_scales = vec![1.0; dag.len()];
        for (name, s) in noises {
            let i = dag
                .nodes()
                .iter()
                .position(|v| *v == name)
                .ok_or_else(|| ScmError::UnknownNode(name.clone()))?;
            noise_scales[i] = s;
        }
        LinearScm::from_parts(dag, weights, noise_scales)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), ScmError> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<LinearScm, ScmError> {
        Self::from_text(&std::fs::read_to_string(path)?)
    }
}
