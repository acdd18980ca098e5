//! Temporal-aware dissimilarity and its weight schedule.
//!
//! The measure blends normalized squared descriptive and temporal gaps in
//! product form, steered by a slider `alpha`: -1 favors the temporal
//! component, +1 the descriptive one.

use crate::data::sq_euclidean;
use crate::error::{Error, Result};

/// The pair of component weights produced by the slider. At least one of the
/// two is always 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TAWeights {
    pub gamma_d: f64,
    pub gamma_t: f64,
}

/// Maps the slider `alpha` in [-1, 1] to component weights:
/// `(1 + alpha, 1)` on [-1, 0], `(1, 1 - alpha)` on (0, 1].
pub fn gamma(alpha: f64) -> Result<TAWeights> {
    if !(-1.0..=1.0).contains(&alpha) {
        return Err(Error::Domain(format!("alpha must be in [-1, 1], got {alpha}")));
    }
    if alpha <= 0.0 {
        Ok(TAWeights { gamma_d: 1.0 + alpha, gamma_t: 1.0 })
    } else {
        Ok(TAWeights { gamma_d: 1.0, gamma_t: 1.0 - alpha })
    }
}

/// Temporal-aware dissimilarity between `(xd_i, t_i)` and `(xd_j, t_j)`:
///
/// `1 - (1 - gamma_d * |Δd|²/diam_d²) * (1 - gamma_t * |Δt|²/diam_t²)`
///
/// Zero for identical points; in [0, 1] for pairs drawn from the dataset
/// that defined the diameters. Pairs outside the hull (e.g. drifted
/// prototypes) may exceed 1 and are used as-is.
pub fn ta_dissim(
    xd_i: &[f64],
    t_i: f64,
    xd_j: &[f64],
    t_j: f64,
    w: TAWeights,
    diam: (f64, f64),
) -> Result<f64> {
    if xd_i.len() != xd_j.len() {
        return Err(Error::DimensionMismatch { expected: xd_i.len(), got: xd_j.len() });
    }
    Ok(ta_dissim_unchecked(xd_i, t_i, xd_j, t_j, w, diam))
}

/// Hot-path variant without the dimension check; callers guarantee equal
/// descriptor lengths.
#[inline]
pub(crate) fn ta_dissim_unchecked(
    xd_i: &[f64],
    t_i: f64,
    xd_j: &[f64],
    t_j: f64,
    w: TAWeights,
    diam: (f64, f64),
) -> f64 {
    let rd = sq_euclidean(xd_i, xd_j) / (diam.0 * diam.0);
    let dt = t_i - t_j;
    let rt = (dt * dt) / (diam.1 * diam.1);
    1.0 - (1.0 - w.gamma_d * rd) * (1.0 - w.gamma_t * rt)
}
