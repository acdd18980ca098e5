//! The four partition quality measures: descriptive and temporal variance,
//! penalized Shannon entropy of entity cluster shares, and smoothness of
//! passage. All four are minimized.

use serde::{Deserialize, Serialize};

use crate::data::{sq_euclidean, Assignment, ClusPathModel, Dataset, Prototype};
use crate::error::Result;
use crate::metric::{ta_dissim_unchecked, TAWeights};

/// One point in the tuner's 4-D objective space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasureVector {
    pub mdvar: f64,
    pub tvar: f64,
    pub shap: f64,
    pub spass: f64,
}

impl MeasureVector {
    pub fn as_array(&self) -> [f64; 4] {
        [self.mdvar, self.tvar, self.shap, self.spass]
    }

    pub fn is_finite(&self) -> bool {
        self.as_array().iter().all(|v| v.is_finite())
    }

    /// Sentinel assigned to failed solver runs; dominated by everything.
    pub fn worst() -> Self {
        Self {
            mdvar: f64::INFINITY,
            tvar: f64::INFINITY,
            shap: f64::INFINITY,
            spass: f64::INFINITY,
        }
    }
}

/// Mean squared Euclidean descriptive distance to the assigned prototype.
pub fn mdvar(ds: &Dataset, asg: &Assignment, protos: &[Prototype]) -> f64 {
    let total: f64 = ds
        .observations()
        .iter()
        .enumerate()
        .map(|(i, o)| sq_euclidean(&o.descriptor, &protos[asg.cluster(i)].mu_d))
        .sum();
    total / ds.n() as f64
}

/// Mean squared temporal distance to the assigned prototype.
pub fn tvar(ds: &Dataset, asg: &Assignment, protos: &[Prototype]) -> f64 {
    let total: f64 = ds
        .observations()
        .iter()
        .enumerate()
        .map(|(i, o)| {
            let dt = o.timestamp - protos[asg.cluster(i)].mu_t;
            dt * dt
        })
        .sum();
    total / ds.n() as f64
}

/// Number of changes in the entity's chronological assignment series and the
/// minimum achievable for the same multiset of labels (distinct - 1).
fn change_counts(series: &[usize]) -> (usize, usize) {
    let n_ch = series.windows(2).filter(|w| w[0] != w[1]).count();
    let mut distinct: Vec<usize> = series.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    (n_ch, distinct.len().saturating_sub(1))
}

/// Penalized Shannon entropy of per-entity cluster shares, averaged over
/// entities. The entropy of the shares is inflated by
/// `1 + (n_ch - n_min)/(N - 1)` when the entity's segments are not
/// contiguous. Single-observation entities contribute 0.
pub fn shap(ds: &Dataset, asg: &Assignment, k: usize) -> f64 {
    let n_entities = ds.entities().len();
    let mut total = 0.0;
    for e in 0..n_entities {
        let idx = ds.entity_observations(e);
        let n = idx.len();
        if n < 2 {
            continue;
        }
        let series: Vec<usize> = idx.iter().map(|&i| asg.cluster(i)).collect();
        let mut counts = vec![0usize; k];
        for &c in &series {
            counts[c] += 1;
        }
        let entropy: f64 = counts
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let p = c as f64 / n as f64;
                -p * p.log2()
            })
            .sum();
        let (n_ch, n_min) = change_counts(&series);
        let factor = 1.0 + (n_ch - n_min) as f64 / (n - 1) as f64;
        total += entropy * factor;
    }
    total / n_entities as f64
}

/// Smoothness of passage: per entity, the average temporal-aware
/// dissimilarity between the prototypes of consecutive differing
/// assignments, summed over entities. Entities without changes contribute 0.
pub fn spass(
    ds: &Dataset,
    asg: &Assignment,
    protos: &[Prototype],
    w: TAWeights,
    diam: (f64, f64),
) -> f64 {
    let mut total = 0.0;
    for e in 0..ds.entities().len() {
        let idx = ds.entity_observations(e);
        let mut sum = 0.0;
        let mut n_ch = 0usize;
        for pair in idx.windows(2) {
            let (p, q) = (asg.cluster(pair[0]), asg.cluster(pair[1]));
            if p != q {
                n_ch += 1;
                sum += ta_dissim_unchecked(
                    &protos[p].mu_d,
                    protos[p].mu_t,
                    &protos[q].mu_d,
                    protos[q].mu_t,
                    w,
                    diam,
                );
            }
        }
        if n_ch > 0 {
            total += sum / n_ch as f64;
        }
    }
    total
}

/// Bundles the four measures for a fitted model. Pure and deterministic.
pub fn evaluate(model: &ClusPathModel, ds: &Dataset) -> Result<MeasureVector> {
    let w = crate::metric::gamma(model.params.alpha)?;
    let diam = ds.effective_diameters();
    Ok(MeasureVector {
        mdvar: mdvar(ds, &model.assignment, &model.prototypes),
        tvar: tvar(ds, &model.assignment, &model.prototypes),
        shap: shap(ds, &model.assignment, model.params.k),
        spass: spass(ds, &model.assignment, &model.prototypes, w, diam),
    })
}
