//! Domain types, dataset container and preprocessing.
//!
//! A dataset is a collection of `(entity, timestamp, descriptor)` triples in
//! long format. Per-entity observation indices are kept sorted by timestamp
//! and the exact pairwise diameters of the descriptive and temporal spaces
//! are cached at load time.

use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One `(entity, timestamp, descriptor)` triple; the atomic clustering unit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    pub entity_id: String,
    pub timestamp: f64,
    pub descriptor: Vec<f64>,
}

/// A phase's joint temporal/descriptive center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prototype {
    pub mu_t: f64,
    pub mu_d: Vec<f64>,
}

/// Full hyperparameter vector of the clustering objective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperParams {
    pub alpha: f64,
    pub beta: f64,
    pub delta: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub lambda3: f64,
    pub k: usize,
}

impl HyperParams {
    // negated comparisons are deliberate: they reject NaN inputs
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(
        alpha: f64,
        beta: f64,
        delta: f64,
        lambda1: f64,
        lambda2: f64,
        lambda3: f64,
        k: usize,
    ) -> Result<Self> {
        if !(-1.0..=1.0).contains(&alpha) {
            return Err(Error::Domain(format!("alpha must be in [-1, 1], got {alpha}")));
        }
        if !(beta >= 0.0) {
            return Err(Error::Domain(format!("beta must be >= 0, got {beta}")));
        }
        if !(delta > 0.0) {
            return Err(Error::Domain(format!("delta must be > 0, got {delta}")));
        }
        for (name, v) in [("lambda1", lambda1), ("lambda2", lambda2), ("lambda3", lambda3)] {
            if !(v >= 0.0) {
                return Err(Error::Domain(format!("{name} must be >= 0, got {v}")));
            }
        }
        if k < 2 {
            return Err(Error::Domain(format!("k must be >= 2, got {k}")));
        }
        Ok(Self { alpha, beta, delta, lambda1, lambda2, lambda3, k })
    }
}

/// Total map from observation index to cluster index in `0..k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assignment {
    pub cluster_of: Vec<usize>,
}

impl Assignment {
    pub fn new(cluster_of: Vec<usize>) -> Self {
        Self { cluster_of }
    }

    pub fn cluster(&self, i: usize) -> usize {
        self.cluster_of[i]
    }

    pub fn len(&self) -> usize {
        self.cluster_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cluster_of.is_empty()
    }

    /// Member observation indices per cluster.
    pub fn members(&self, k: usize) -> Vec<Vec<usize>> {
        let mut m = vec![Vec::new(); k];
        for (i, &c) in self.cluster_of.iter().enumerate() {
            m[c].push(i);
        }
        m
    }
}

/// k×k non-negative link strengths with unit 1-norm and zero diagonal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjacencyMatrix {
    k: usize,
    a: Vec<f64>,
}

impl AdjacencyMatrix {
    /// All-zero matrix; the initial state of the solver.
    pub fn zeros(k: usize) -> Self {
        Self { k, a: vec![0.0; k * k] }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let k = rows.len();
        let mut a = Vec::with_capacity(k * k);
        for row in rows {
            assert_eq!(row.len(), k, "adjacency matrix must be square");
            a.extend(row);
        }
        Self { k, a }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.k + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.a[i * self.k + j] = v;
    }

    pub fn sum(&self) -> f64 {
        self.a.iter().sum()
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.k)
            .map(|i| self.a[i * self.k..(i + 1) * self.k].to_vec())
            .collect()
    }

    /// Off-diagonal entries as `(row, col, value)`, row-major order.
    pub fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let k = self.k;
        (0..k).flat_map(move |i| {
            (0..k)
                .filter(move |&j| j != i)
                .map(move |j| (i, j, self.get(i, j)))
        })
    }
}

/// The fitted model: prototypes, partition, transition graph weights and the
/// per-iteration objective trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusPathModel {
    pub prototypes: Vec<Prototype>,
    pub assignment: Assignment,
    pub adjacency: AdjacencyMatrix,
    pub objective_trace: Vec<f64>,
    pub iterations: usize,
    pub params: HyperParams,
    pub seed: u64,
}

impl ClusPathModel {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Immutable observation container with per-entity chronological indices and
/// cached space diameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    observations: Vec<Observation>,
    entities: Vec<String>,
    /// Per-entity observation indices, ascending by timestamp.
    entity_obs: Vec<Vec<usize>>,
    /// Entity index (into `entities`) of each observation.
    entity_of: Vec<usize>,
    dim: usize,
    diam_d: f64,
    diam_t: f64,
}

#[derive(Serialize, Deserialize)]
struct DatasetJson {
    dim: usize,
    entities: Vec<String>,
    observations: Vec<ObservationJson>,
}

#[derive(Serialize, Deserialize)]
struct ObservationJson {
    entity: String,
    time: f64,
    descriptor: Vec<f64>,
}

impl Dataset {
    /// Builds the container, indexing observations per entity and caching the
    /// exact pairwise diameters. Ties in (entity, timestamp) are rejected.
    pub fn new(observations: Vec<Observation>) -> Result<Self> {
        if observations.is_empty() {
            return Err(Error::DegenerateDataset("no observations".into()));
        }
        let dim = observations[0].descriptor.len();
        if dim == 0 {
            return Err(Error::DegenerateDataset("zero-dimensional descriptors".into()));
        }
        let mut entities: Vec<String> = Vec::new();
        let mut entity_ids: HashMap<String, usize> = HashMap::new();
        let mut entity_of = Vec::with_capacity(observations.len());
        for (i, obs) in observations.iter().enumerate() {
            if obs.descriptor.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: obs.descriptor.len() });
            }
            if !obs.timestamp.is_finite() || obs.descriptor.iter().any(|v| !v.is_finite()) {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("non-finite value in observation for entity `{}`", obs.entity_id),
                });
            }
            let e = *entity_ids.entry(obs.entity_id.clone()).or_insert_with(|| {
                entities.push(obs.entity_id.clone());
                entities.len() - 1
            });
            entity_of.push(e);
        }
        let mut entity_obs = vec![Vec::new(); entities.len()];
        for (i, &e) in entity_of.iter().enumerate() {
            entity_obs[e].push(i);
        }
        for (e, idx) in entity_obs.iter_mut().enumerate() {
            idx.sort_by(|&a, &b| {
                observations[a]
                    .timestamp
                    .partial_cmp(&observations[b].timestamp)
                    .unwrap()
            });
            for w in idx.windows(2) {
                if observations[w[0]].timestamp == observations[w[1]].timestamp {
                    return Err(Error::DuplicateTimestamp {
                        line: w[1] + 1,
                        entity: entities[e].clone(),
                        time: observations[w[1]].timestamp,
                    });
                }
            }
        }
        let (diam_d, diam_t) = exhaustive_diameters(&observations);
        Ok(Self { observations, entities, entity_obs, entity_of, dim, diam_d, diam_t })
    }

    pub fn observations(&self) -> &[Observation] {
        &self.observations
    }

    pub fn n(&self) -> usize {
        self.observations.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entities(&self) -> &[String] {
        &self.entities
    }

    /// Chronological observation indices of entity `e`.
    pub fn entity_observations(&self, e: usize) -> &[usize] {
        &self.entity_obs[e]
    }

    pub fn entity_of(&self, obs: usize) -> usize {
        self.entity_of[obs]
    }

    pub fn entity_index(&self, entity_id: &str) -> Result<usize> {
        self.entities
            .iter()
            .position(|e| e == entity_id)
            .ok_or_else(|| Error::UnknownEntity(entity_id.to_string()))
    }

    /// Cached exact diameters `(diam_d, diam_t)`; either may be 0 on
    /// degenerate data.
    pub fn diameters(&self) -> (f64, f64) {
        (self.diam_d, self.diam_t)
    }

    /// Diameters with degenerate zeros replaced by 1 so normalized ratios
    /// collapse to 0 instead of dividing by zero.
    pub fn effective_diameters(&self) -> (f64, f64) {
        let d = if self.diam_d > 0.0 {
            self.diam_d
        } else {
            log::warn!("descriptive diameter is 0; substituting 1 in dissimilarity ratios");
            1.0
        };
        let t = if self.diam_t > 0.0 {
            self.diam_t
        } else {
            log::warn!("temporal diameter is 0; substituting 1 in dissimilarity ratios");
            1.0
        };
        (d, t)
    }

    pub fn is_degenerate(&self) -> bool {
        self.diam_d == 0.0 || self.diam_t == 0.0
    }

    /// Entity-mean removal and/or per-feature z-scoring; diameters are
    /// recomputed on the transformed observations.
    pub fn preprocess(&self, remove_entity_mean: bool, normalize: bool) -> Result<Dataset> {
        let mut obs = self.observations.clone();
        if remove_entity_mean {
            for idx in &self.entity_obs {
                let mut mean = vec![0.0; self.dim];
                for &i in idx {
                    for (m, v) in mean.iter_mut().zip(&obs[i].descriptor) {
                        *m += v;
                    }
                }
                for m in &mut mean {
                    *m /= idx.len() as f64;
                }
                for &i in idx {
                    for (v, m) in obs[i].descriptor.iter_mut().zip(&mean) {
                        *v -= m;
                    }
                }
            }
        }
        if normalize {
            let n = obs.len() as f64;
            for f in 0..self.dim {
                let mean = obs.iter().map(|o| o.descriptor[f]).sum::<f64>() / n;
                let var = obs
                    .iter()
                    .map(|o| (o.descriptor[f] - mean).powi(2))
                    .sum::<f64>()
                    / n;
                let sd = var.sqrt();
                if sd == 0.0 {
                    log::warn!("feature {f} has zero variance; left at 0 after centering");
                    for o in &mut obs {
                        o.descriptor[f] = 0.0;
                    }
                } else {
                    for o in &mut obs {
                        o.descriptor[f] = (o.descriptor[f] - mean) / sd;
                    }
                }
            }
        }
        Dataset::new(obs)
    }

    pub fn to_json(&self) -> Result<String> {
        let j = DatasetJson {
            dim: self.dim,
            entities: self.entities.clone(),
            observations: self
                .observations
                .iter()
                .map(|o| ObservationJson {
                    entity: o.entity_id.clone(),
                    time: o.timestamp,
                    descriptor: o.descriptor.clone(),
                })
                .collect(),
        };
        Ok(serde_json::to_string_pretty(&j)?)
    }

    pub fn from_json(s: &str) -> Result<Dataset> {
        let j: DatasetJson = serde_json::from_str(s)?;
        let obs = j
            .observations
            .into_iter()
            .map(|o| Observation {
                entity_id: o.entity,
                timestamp: o.time,
                descriptor: o.descriptor,
            })
            .collect();
        Dataset::new(obs)
    }
}

/// Exact pairwise maxima of descriptive Euclidean distance and absolute time
/// difference. O(n²); the reference for the cached values.
pub fn exhaustive_diameters(observations: &[Observation]) -> (f64, f64) {
    let mut diam_d: f64 = 0.0;
    let mut diam_t: f64 = 0.0;
    for i in 0..observations.len() {
        for j in (i + 1)..observations.len() {
            let dd = euclidean(&observations[i].descriptor, &observations[j].descriptor);
            let dt = (observations[i].timestamp - observations[j].timestamp).abs();
            diam_d = diam_d.max(dd);
            diam_t = diam_t.max(dt);
        }
    }
    (diam_d, diam_t)
}

/// Exact diameters of a dataset; errors on fewer than 2 observations.
pub fn diameters(ds: &Dataset) -> Result<(f64, f64)> {
    if ds.n() < 2 {
        return Err(Error::DegenerateDataset(
            "diameters require at least 2 observations".into(),
        ));
    }
    Ok(exhaustive_diameters(ds.observations()))
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    sq_euclidean(a, b).sqrt()
}

pub(crate) fn sq_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Loads a long-format CSV with header `entity,time,<f1>,...,<fd>`.
///
/// `entity_col` and `time_col` name the identifier and timestamp columns;
/// every remaining column is a feature.
pub fn load_long_csv(path: &Path, entity_col: &str, time_col: &str) -> Result<Dataset> {
    let file = std::fs::File::open(path)?;
    load_long_csv_reader(file, entity_col, time_col)
}

pub fn load_long_csv_reader<R: Read>(reader: R, entity_col: &str, time_col: &str) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(reader);
    let headers = rdr.headers().map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?.clone();
    let entity_idx = headers
        .iter()
        .position(|h| h == entity_col)
        .ok_or_else(|| Error::MissingColumn(entity_col.to_string()))?;
    let time_idx = headers
        .iter()
        .position(|h| h == time_col)
        .ok_or_else(|| Error::MissingColumn(time_col.to_string()))?;
    let feature_cols: Vec<usize> = (0..headers.len())
        .filter(|&i| i != entity_idx && i != time_idx)
        .collect();
    if feature_cols.is_empty() {
        return Err(Error::MissingColumn("at least one feature column".into()));
    }

    let mut observations = Vec::new();
    let mut seen: HashMap<(String, u64), usize> = HashMap::new();
    for (row_no, record) in rdr.records().enumerate() {
        let line = row_no + 2; // header is line 1
        let record = record.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        if record.len() != headers.len() {
            return Err(Error::Parse {
                line,
                msg: format!("expected {} fields, got {}", headers.len(), record.len()),
            });
        }
        let entity = record[entity_idx].to_string();
        let time: f64 = record[time_idx].trim().parse().map_err(|_| Error::Parse {
            line,
            msg: format!("non-numeric timestamp `{}`", &record[time_idx]),
        })?;
        if !time.is_finite() {
            return Err(Error::Parse { line, msg: format!("non-finite timestamp {time}") });
        }
        if let Some(prev) = seen.insert((entity.clone(), time.to_bits()), line) {
            let _ = prev;
            return Err(Error::DuplicateTimestamp { line, entity, time });
        }
        let mut descriptor = Vec::with_capacity(feature_cols.len());
        for &c in &feature_cols {
            let raw = record[c].trim();
            let v: f64 = raw.parse().map_err(|_| Error::NonNumericFeature {
                line,
                column: headers[c].to_string(),
                value: raw.to_string(),
            })?;
            if !v.is_finite() {
                return Err(Error::NonNumericFeature {
                    line,
                    column: headers[c].to_string(),
                    value: raw.to_string(),
                });
            }
            descriptor.push(v);
        }
        observations.push(Observation { entity_id: entity, timestamp: time, descriptor });
    }
    if observations.is_empty() {
        return Err(Error::DegenerateDataset("empty csv".into()));
    }
    Dataset::new(observations)
}
