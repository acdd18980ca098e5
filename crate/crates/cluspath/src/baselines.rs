//! Reference Lloyd K-Means over descriptors, sharing the init convention
//! and tie rule with the main solver so the two are step-for-step
//! comparable in the reduction regime.

use serde::{Deserialize, Serialize};

use crate::data::{sq_euclidean, Assignment, Dataset, HyperParams};
use crate::error::{Error, Result};
use crate::solver::init_prototypes;

/// Named baseline configurations of the main solver, each a restriction of
/// the full objective:
/// - `kmeans`: descriptive-only dissimilarity, no constraints or coupling;
/// - `tdkm`: temporal-aware dissimilarity, no constraints;
/// - `ckm`: descriptive dissimilarity plus must-link constraints;
/// - `tdck`: near-descriptive dissimilarity plus constraints.
pub const PRESETS: [&str; 4] = ["kmeans", "tdkm", "ckm", "tdck"];

pub fn preset_params(name: &str, k: usize) -> Result<HyperParams> {
    match name {
        "kmeans" => HyperParams::new(1.0, 0.0, 1.0, 1.0, 0.0, 0.0, k),
        "tdkm" => HyperParams::new(0.0, 0.0, 1.0, 1.0, 0.0, 0.0, k),
        "ckm" => HyperParams::new(1.0, 5e-4, 3.0, 1.0, 0.0, 0.0, k),
        "tdck" => HyperParams::new(0.95, 2e-4, 3.0, 1.0, 0.0, 0.0, k),
        other => Err(Error::Domain(format!(
            "unknown preset '{other}'; expected one of {PRESETS:?}"
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KMeansModel {
    pub centroids: Vec<Vec<f64>>,
    pub assignment: Assignment,
    pub inertia: f64,
    pub iterations: usize,
}

fn nearest_centroid(x: &[f64], centroids: &[Vec<f64>]) -> usize {
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for (c, centroid) in centroids.iter().enumerate() {
        let d = sq_euclidean(x, centroid);
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    best
}

fn inertia(ds: &Dataset, asg: &Assignment, centroids: &[Vec<f64>]) -> f64 {
    ds.observations()
        .iter()
        .enumerate()
        .map(|(i, o)| sq_euclidean(&o.descriptor, &centroids[asg.cluster(i)]))
        .sum()
}

/// Lloyd iterations from a seeded draw of k distinct observations (the same
/// convention as the main solver). Empty clusters keep frozen centroids.
pub fn kmeans_fit(ds: &Dataset, k: usize, seed: u64, max_iter: usize) -> Result<KMeansModel> {
    let init = init_prototypes(ds, k, seed)?
        .into_iter()
        .map(|p| p.mu_d)
        .collect();
    kmeans_fit_from(ds, init, max_iter).map(|(m, _)| m)
}

/// Lloyd from explicit centroids; also returns the per-iteration partition
/// trace for equivalence checks against the reduction regime.
pub fn kmeans_fit_from(
    ds: &Dataset,
    init: Vec<Vec<f64>>,
    max_iter: usize,
) -> Result<(KMeansModel, Vec<Vec<usize>>)> {
    let k = init.len();
    if k > ds.n() {
        return Err(Error::Domain(format!(
            "k = {k} exceeds the number of observations ({})",
            ds.n()
        )));
    }
    let mut centroids = init;
    let mut asg = Assignment::new(
        ds.observations()
            .iter()
            .map(|o| nearest_centroid(&o.descriptor, &centroids))
            .collect(),
    );
    let mut partitions = vec![asg.cluster_of.clone()];
    let mut iterations = 1usize;
    for iter in 2..=max_iter {
        // update step; empty clusters stay frozen
        let members = asg.members(k);
        for (c, idx) in members.iter().enumerate() {
            if idx.is_empty() {
                continue;
            }
            let mut mean = vec![0.0; ds.dim()];
            for &i in idx {
                for (m, v) in mean.iter_mut().zip(&ds.observations()[i].descriptor) {
                    *m += v;
                }
            }
            for m in &mut mean {
                *m /= idx.len() as f64;
            }
            centroids[c] = mean;
        }
        let next = Assignment::new(
            ds.observations()
                .iter()
                .map(|o| nearest_centroid(&o.descriptor, &centroids))
                .collect(),
        );
        iterations = iter;
        let stable = next == asg;
        asg = next;
        partitions.push(asg.cluster_of.clone());
        if stable {
            break;
        }
    }
    let inertia = inertia(ds, &asg, &centroids);
    Ok((KMeansModel { centroids, assignment: asg, inertia, iterations }, partitions))
}
