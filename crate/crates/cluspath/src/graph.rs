//! Transition extraction, the display binarization heuristic, evolution
//! path enumeration and graph export.

use serde::{Deserialize, Serialize};

use crate::data::{AdjacencyMatrix, Assignment, Dataset, Prototype};
use crate::error::Result;

/// One consecutive same-entity cluster change.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionRecord {
    pub entity_id: String,
    pub from_cluster: usize,
    pub to_cluster: usize,
    pub time_of_second_observation: f64,
}

/// Binarized display graph: the strongest arcs of the adjacency matrix with
/// isolated nodes removed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionGraph {
    pub binary_adjacency: Vec<Vec<bool>>,
    pub retained_threshold: f64,
    /// Cluster indices with at least one incident kept arc.
    pub nodes: Vec<usize>,
    pub node_labels: Vec<String>,
    /// All off-diagonal scores were equal; every arc was kept.
    pub degenerate: bool,
}

impl EvolutionGraph {
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let k = self.binary_adjacency.len();
        let mut arcs = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if self.binary_adjacency[i][j] {
                    arcs.push((i, j));
                }
            }
        }
        arcs
    }
}

/// One record per consecutive same-entity observation pair whose clusters
/// differ, ordered by entity then time.
pub fn extract_transitions(ds: &Dataset, asg: &Assignment) -> Vec<TransitionRecord> {
    let mut records = Vec::new();
    for (e, entity_id) in ds.entities().iter().enumerate() {
        let idx = ds.entity_observations(e);
        for w in idx.windows(2) {
            let (from, to) = (asg.cluster(w[0]), asg.cluster(w[1]));
            if from != to {
                records.push(TransitionRecord {
                    entity_id: entity_id.clone(),
                    from_cluster: from,
                    to_cluster: to,
                    time_of_second_observation: ds.observations()[w[1]].timestamp,
                });
            }
        }
    }
    records
}

/// Keeps the arcs at or above the (k-1)-th largest distinct off-diagonal
/// score; ties at that score all survive. Nodes without any incident kept
/// arc are removed.
pub fn binarize(adj: &AdjacencyMatrix, protos: &[Prototype]) -> EvolutionGraph {
    let k = adj.k();
    let mut scores: Vec<f64> = adj.off_diagonal().map(|(_, _, v)| v).collect();
    scores.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut distinct: Vec<f64> = Vec::new();
    for s in &scores {
        if distinct.last() != Some(s) {
            distinct.push(*s);
        }
    }
    let degenerate = distinct.len() == 1;
    let threshold = if distinct.len() >= k - 1 {
        distinct[k - 2]
    } else {
        *distinct.last().unwrap()
    };

    let mut binary = vec![vec![false; k]; k];
    for (i, j, v) in adj.off_diagonal() {
        binary[i][j] = v >= threshold;
    }
    let nodes: Vec<usize> = (0..k)
        .filter(|&n| (0..k).any(|m| binary[n][m] || binary[m][n]))
        .collect();
    let node_labels = nodes
        .iter()
        .map(|&n| format!("C{} (t={:.3})", n, protos[n].mu_t))
        .collect();
    if degenerate {
        log::warn!("all adjacency scores equal; binarized graph keeps every arc");
    }
    EvolutionGraph {
        binary_adjacency: binary,
        retained_threshold: threshold,
        nodes,
        node_labels,
        degenerate,
    }
}

/// Run-length-compressed cluster sequence of an entity's chronological
/// assignments.
pub fn entity_path(ds: &Dataset, asg: &Assignment, entity_id: &str) -> Result<Vec<usize>> {
    let e = ds.entity_index(entity_id)?;
    let mut path = Vec::new();
    for &i in ds.entity_observations(e) {
        let c = asg.cluster(i);
        if path.last() != Some(&c) {
            path.push(c);
        }
    }
    Ok(path)
}

/// All entity paths in entity load order.
pub fn all_entity_paths(ds: &Dataset, asg: &Assignment) -> Vec<(String, Vec<usize>)> {
    ds.entities()
        .iter()
        .map(|e| (e.clone(), entity_path(ds, asg, e).expect("known entity")))
        .collect()
}

/// Renders the binarized graph as a DOT digraph. Nodes carry the cluster id
/// and prototype timestamp; arcs carry entity transition counts. Arcs going
/// backwards in prototype time are dashed and annotated.
pub fn export_dot(
    g: &EvolutionGraph,
    protos: &[Prototype],
    transitions: &[TransitionRecord],
) -> String {
    let mut out = String::from("digraph evolution {\n  rankdir=LR;\n");
    for &n in &g.nodes {
        out.push_str(&format!(
            "  c{} [label=\"C{}\\nt={}\"];\n",
            n, n, protos[n].mu_t
        ));
    }
    for (i, j) in g.arcs() {
        let count = transitions
            .iter()
            .filter(|t| t.from_cluster == i && t.to_cluster == j)
            .map(|t| t.entity_id.clone())
            .collect::<std::collections::BTreeSet<_>>()
            .len();
        let backward = protos[i].mu_t > protos[j].mu_t;
        let mut attrs = format!("label=\"{count}\"");
        if backward {
            attrs.push_str(", style=dashed, color=gray, fontcolor=gray");
        }
        out.push_str(&format!("  c{i} -> c{j} [{attrs}];\n"));
    }
    out.push_str("}\n");
    out
}

/// Per-timestamp cluster population counts as CSV
/// (`time,cluster,count` rows), for population plots.
pub fn population_csv(ds: &Dataset, asg: &Assignment, k: usize) -> String {
    use std::collections::BTreeMap;
    let mut counts: BTreeMap<(u64, usize), usize> = BTreeMap::new();
    let mut times: BTreeMap<u64, f64> = BTreeMap::new();
    for (i, o) in ds.observations().iter().enumerate() {
        let key = o.timestamp.to_bits();
        times.insert(key, o.timestamp);
        *counts.entry((key, asg.cluster(i))).or_insert(0) += 1;
    }
    let mut out = String::from("time,cluster,count\n");
    for (tkey, t) in &times {
        for c in 0..k {
            let n = counts.get(&(*tkey, c)).copied().unwrap_or(0);
            out.push_str(&format!("{t},{c},{n}\n"));
        }
    }
    out
}
