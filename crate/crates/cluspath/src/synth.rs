//! Synthetic datasets with a planted phase structure: phases are grouped
//! into consecutive time levels, each entity picks one phase per level, and
//! observations scatter around the chosen phase's descriptive center with
//! Gaussian noise proportional to the center separation.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Observation};
use crate::error::{Error, Result};

/// Width of each time level window.
const LEVEL_SPAN: f64 = 10.0;
/// Radius of the ring the descriptive centers sit on.
const CENTER_RADIUS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub entities: usize,
    pub phases: usize,
    /// Gaussian descriptor noise as a fraction of the minimum center
    /// separation; 0 places observations exactly on the centers.
    pub noise: f64,
    /// Observations each entity spends in each visited phase.
    pub obs_per_phase: usize,
    pub dim: usize,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self { entities: 12, phases: 5, noise: 0.1, obs_per_phase: 2, dim: 2, seed: 0 }
    }
}

/// Planted structure accompanying a generated dataset. `labels` follows the
/// dataset's observation order; `paths` are the duplicate-compressed phase
/// sequences per entity, in entity order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthTruth {
    pub labels: Vec<usize>,
    pub paths: Vec<(String, Vec<usize>)>,
    pub centers: Vec<Vec<f64>>,
    pub center_separation: f64,
}

/// Phases chunked pairwise into consecutive time levels: 5 phases become
/// levels [0,1], [2,3], [4].
pub fn level_layout(phases: usize) -> Vec<Vec<usize>> {
    (0..phases).collect::<Vec<_>>().chunks(2).map(|c| c.to_vec()).collect()
}

fn centers(phases: usize, dim: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(phases);
    for j in 0..phases {
        let mut c = vec![0.0; dim];
        if dim == 1 {
            c[0] = CENTER_RADIUS * j as f64;
        } else {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / phases as f64;
            c[0] = CENTER_RADIUS * theta.cos();
            c[1] = CENTER_RADIUS * theta.sin();
        }
        out.push(c);
    }
    out
}

fn min_separation(centers: &[Vec<f64>]) -> f64 {
    let mut sep = f64::INFINITY;
    for i in 0..centers.len() {
        for j in (i + 1)..centers.len() {
            let d: f64 = centers[i]
                .iter()
                .zip(&centers[j])
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            sep = sep.min(d);
        }
    }
    sep
}

pub fn generate(cfg: &SynthConfig) -> Result<(Dataset, SynthTruth)> {
    if cfg.entities == 0 || cfg.phases == 0 || cfg.obs_per_phase == 0 || cfg.dim == 0 {
        return Err(Error::Domain(
            "entities, phases, obs_per_phase and dim must all be positive".into(),
        ));
    }
    if !(cfg.noise.is_finite() && cfg.noise >= 0.0) {
        return Err(Error::Domain(format!("noise must be >= 0, got {}", cfg.noise)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let centers = centers(cfg.phases, cfg.dim);
    let separation = min_separation(&centers);
    let sigma = cfg.noise * separation;
    let normal = if sigma > 0.0 {
        Some(Normal::new(0.0, sigma).map_err(|e| Error::Domain(e.to_string()))?)
    } else {
        None
    };
    let levels = level_layout(cfg.phases);

    let mut observations = Vec::new();
    let mut labels = Vec::new();
    let mut paths = Vec::new();
    for e in 0..cfg.entities {
        let entity_id = format!("e{e:03}");
        let mut path = Vec::with_capacity(levels.len());
        for (l, level) in levels.iter().enumerate() {
            let phase = level[rng.gen_range(0..level.len())];
            path.push(phase);
            for m in 0..cfg.obs_per_phase {
                let step = LEVEL_SPAN / (cfg.obs_per_phase as f64 + 1.0);
                let time = l as f64 * LEVEL_SPAN + (m as f64 + 1.0) * step;
                let mut descriptor = centers[phase].clone();
                if let Some(n) = &normal {
                    for v in descriptor.iter_mut() {
                        *v += n.sample(&mut rng);
                    }
                }
                observations.push(Observation {
                    entity_id: entity_id.clone(),
                    timestamp: time,
                    descriptor,
                });
                labels.push(phase);
            }
        }
        paths.push((entity_id, path));
    }
    let ds = Dataset::new(observations)?;
    Ok((
        ds,
        SynthTruth { labels, paths, centers, center_separation: separation },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_chunks_pairwise() {
        assert_eq!(level_layout(5), vec![vec![0, 1], vec![2, 3], vec![4]]);
        assert_eq!(level_layout(2), vec![vec![0, 1]]);
        assert_eq!(level_layout(1), vec![vec![0]]);
    }

    #[test]
    fn zero_noise_hits_centers_exactly() {
        let cfg = SynthConfig { entities: 3, phases: 5, noise: 0.0, ..SynthConfig::default() };
        let (ds, truth) = generate(&cfg).unwrap();
        assert_eq!(ds.n(), 3 * 3 * 2); // 3 entities, 3 levels, 2 obs
        for (obs, &label) in ds.observations().iter().zip(&truth.labels) {
            assert_eq!(obs.descriptor, truth.centers[label]);
        }
    }

    #[test]
    fn labels_consistent_with_paths() {
        let cfg = SynthConfig { seed: 7, ..SynthConfig::default() };
        let (ds, truth) = generate(&cfg).unwrap();
        assert_eq!(truth.labels.len(), ds.n());
        for (e, (id, path)) in truth.paths.iter().enumerate() {
            assert_eq!(*id, ds.entities()[e]);
            // chronological labels for this entity, duplicate compressed
            let mut seq = Vec::new();
            for &i in ds.entity_observations(e) {
                let l = truth.labels[i];
                if seq.last() != Some(&l) {
                    seq.push(l);
                }
            }
            assert_eq!(&seq, path);
        }
    }

    #[test]
    fn timestamps_unique_per_entity_and_increasing() {
        let cfg = SynthConfig { seed: 3, ..SynthConfig::default() };
        let (ds, _) = generate(&cfg).unwrap();
        for e in 0..ds.entities().len() {
            let idx = ds.entity_observations(e);
            for w in idx.windows(2) {
                assert!(ds.observations()[w[0]].timestamp < ds.observations()[w[1]].timestamp);
            }
        }
    }

    #[test]
    fn noise_scale_tracks_separation() {
        let cfg = SynthConfig { entities: 50, noise: 0.1, seed: 1, ..SynthConfig::default() };
        let (ds, truth) = generate(&cfg).unwrap();
        let sigma = 0.1 * truth.center_separation;
        let mut sq = 0.0;
        let mut n = 0.0f64;
        for (obs, &label) in ds.observations().iter().zip(&truth.labels) {
            for (v, c) in obs.descriptor.iter().zip(&truth.centers[label]) {
                sq += (v - c) * (v - c);
                n += 1.0;
            }
        }
        let sd = (sq / n).sqrt();
        assert!((sd - sigma).abs() < 0.15 * sigma, "sd {sd} vs sigma {sigma}");
    }

    #[test]
    fn generation_is_deterministic() {
        let cfg = SynthConfig { seed: 42, ..SynthConfig::default() };
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        assert_eq!(a.0.observations(), b.0.observations());
        assert_eq!(a.1, b.1);
    }

    #[test]
    fn rejects_bad_config() {
        assert!(generate(&SynthConfig { entities: 0, ..SynthConfig::default() }).is_err());
        assert!(generate(&SynthConfig { noise: -1.0, ..SynthConfig::default() }).is_err());
    }
}
