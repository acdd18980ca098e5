//! The clustering objective: the constraint penalty, the three weighted
//! terms and their assembly.
//!
//! Term 1 charges each observation its dissimilarity to the assigned
//! prototype plus a time-decaying penalty for every later same-entity
//! observation placed in a different cluster. Term 2 charges link strength
//! between dissimilar prototypes, term 3 between clusters few entities
//! transition between.

use crate::data::{AdjacencyMatrix, Assignment, Dataset, HyperParams, Prototype};
use crate::error::{Error, Result};
use crate::metric::{gamma, ta_dissim_unchecked, TAWeights};

/// Per-term values of the assembled objective.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveBreakdown {
    pub t1: f64,
    pub t2: f64,
    pub t3: f64,
    pub j: f64,
}

/// Penalty for splitting a same-entity ordered pair `(t_i < t_k)` across
/// clusters linked with strength `a_jl`:
/// `beta * exp(-((t_k - t_i)/delta)^2 / 2) * (1 - a_jl^2)`.
/// Zero when the pair is not same-entity, not ordered, or not split.
// the negated time comparison deliberately treats NaN as "no penalty"
#[allow(clippy::neg_cmp_op_on_partial_ord)]
pub fn penalty_w(
    t_i: f64,
    t_k: f64,
    same_entity: bool,
    split: bool,
    a_jl: f64,
    beta: f64,
    delta: f64,
) -> f64 {
    if !same_entity || !split || !(t_i < t_k) {
        return 0.0;
    }
    let z = (t_k - t_i) / delta;
    beta * (-0.5 * z * z).exp() * (1.0 - a_jl * a_jl)
}

/// Gaussian time-decay factor shared by the penalty and the transition mass.
#[inline]
fn decay(t_i: f64, t_k: f64, beta: f64, delta: f64) -> f64 {
    let z = (t_k - t_i) / delta;
    beta * (-0.5 * z * z).exp()
}

/// Assignment term: within-cluster dissimilarity plus constraint penalties,
/// each ordered same-entity pair counted once at the earlier observation.
pub fn term1(
    ds: &Dataset,
    asg: &Assignment,
    protos: &[Prototype],
    adj: &AdjacencyMatrix,
    hp: &HyperParams,
) -> Result<f64> {
    let w = gamma(hp.alpha)?;
    let diam = ds.effective_diameters();
    let mut total = 0.0;
    for (i, obs) in ds.observations().iter().enumerate() {
        let p = asg.cluster(i);
        total += ta_dissim_unchecked(
            &obs.descriptor,
            obs.timestamp,
            &protos[p].mu_d,
            protos[p].mu_t,
            w,
            diam,
        );
        total += outgoing_penalty(ds, asg, adj, hp, i, p);
    }
    Ok(total)
}

/// Sum of penalties from observation `i` (assumed in cluster `p`) towards
/// its later same-entity observations sitting in other clusters.
pub(crate) fn outgoing_penalty(
    ds: &Dataset,
    asg: &Assignment,
    adj: &AdjacencyMatrix,
    hp: &HyperParams,
    i: usize,
    p: usize,
) -> f64 {
    if hp.beta == 0.0 {
        return 0.0;
    }
    let t_i = ds.observations()[i].timestamp;
    let entity = ds.entity_of(i);
    let mut total = 0.0;
    for &k in ds.entity_observations(entity) {
        let t_k = ds.observations()[k].timestamp;
        if t_k <= t_i {
            continue;
        }
        let q = asg.cluster(k);
        if q == p {
            continue;
        }
        let a = adj.get(p, q);
        total += decay(t_i, t_k, hp.beta, hp.delta) * (1.0 - a * a);
    }
    total
}

/// Penalties incurred by earlier same-entity observations towards `i` when
/// `i` sits in cluster `p`. Not part of Eq-style assignment accounting; used
/// by the symmetric assignment switch.
pub(crate) fn incoming_penalty(
    ds: &Dataset,
    asg: &Assignment,
    adj: &AdjacencyMatrix,
    hp: &HyperParams,
    i: usize,
    p: usize,
) -> f64 {
    if hp.beta == 0.0 {
        return 0.0;
    }
    let t_i = ds.observations()[i].timestamp;
    let entity = ds.entity_of(i);
    let mut total = 0.0;
    for &h in ds.entity_observations(entity) {
        let t_h = ds.observations()[h].timestamp;
        if t_h >= t_i {
            continue;
        }
        let r = asg.cluster(h);
        if r == p {
            continue;
        }
        let a = adj.get(r, p);
        total += decay(t_h, t_i, hp.beta, hp.delta) * (1.0 - a * a);
    }
    total
}

/// Smooth-passage term: `sum over p != q of a[p][q]^2 * dissim(mu_p, mu_q)`.
pub fn term2(
    protos: &[Prototype],
    adj: &AdjacencyMatrix,
    w: TAWeights,
    diam: (f64, f64),
) -> f64 {
    let mut total = 0.0;
    for (p, q, a) in adj.off_diagonal() {
        if a == 0.0 {
            continue;
        }
        let d = ta_dissim_unchecked(
            &protos[p].mu_d,
            protos[p].mu_t,
            &protos[q].mu_d,
            protos[q].mu_t,
            w,
            diam,
        );
        total += a * a * d;
    }
    total
}

/// Intersection similarity between phases `p` and `q`: 1 minus the fraction
/// of entities with at least one consecutive observation pair clustered
/// `p` then `q`. 1 when either cluster is empty of transitions.
pub fn inter_phi(ds: &Dataset, asg: &Assignment, p: usize, q: usize) -> Result<f64> {
    if p == q {
        return Err(Error::Domain("inter_phi requires p != q".into()));
    }
    let n_entities = ds.entities().len();
    let mut transitioning = 0usize;
    for e in 0..n_entities {
        let idx = ds.entity_observations(e);
        if idx
            .windows(2)
            .any(|w| asg.cluster(w[0]) == p && asg.cluster(w[1]) == q)
        {
            transitioning += 1;
        }
    }
    Ok(1.0 - transitioning as f64 / n_entities as f64)
}

/// All pairwise intersection measures at once; `inter[p][q]` for p != q,
/// diagonal left at 0.
pub(crate) fn inter_phi_all(ds: &Dataset, asg: &Assignment, k: usize) -> Vec<Vec<f64>> {
    let n_entities = ds.entities().len();
    let mut counts = vec![vec![0usize; k]; k];
    for e in 0..n_entities {
        let idx = ds.entity_observations(e);
        let mut seen = vec![vec![false; k]; k];
        for w in idx.windows(2) {
            let (p, q) = (asg.cluster(w[0]), asg.cluster(w[1]));
            if p != q && !seen[p][q] {
                seen[p][q] = true;
                counts[p][q] += 1;
            }
        }
    }
    let mut inter = vec![vec![0.0; k]; k];
    for p in 0..k {
        for q in 0..k {
            if p != q {
                inter[p][q] = 1.0 - counts[p][q] as f64 / n_entities as f64;
            }
        }
    }
    inter
}

/// Transition-consistency term:
/// `sum over p != q of a[p][q]^2 * inter_phi(p, q)^2`.
pub fn term3(ds: &Dataset, asg: &Assignment, adj: &AdjacencyMatrix) -> Result<f64> {
    let inter = inter_phi_all(ds, asg, adj.k());
    let mut total = 0.0;
    for (p, q, a) in adj.off_diagonal() {
        if a == 0.0 {
            continue;
        }
        total += a * a * inter[p][q] * inter[p][q];
    }
    Ok(total)
}

/// Assembles `J = lambda1*T1 + lambda2*T2 + lambda3*T3`.
pub fn objective_j(
    ds: &Dataset,
    asg: &Assignment,
    protos: &[Prototype],
    adj: &AdjacencyMatrix,
    hp: &HyperParams,
) -> Result<ObjectiveBreakdown> {
    let w = gamma(hp.alpha)?;
    let diam = ds.effective_diameters();
    let t1 = term1(ds, asg, protos, adj, hp)?;
    let t2 = term2(protos, adj, w, diam);
    let t3 = term3(ds, asg, adj)?;
    let j = hp.lambda1 * t1 + hp.lambda2 * t2 + hp.lambda3 * t3;
    Ok(ObjectiveBreakdown { t1, t2, t3, j })
}

/// Adjacency-independent penalty mass between cluster `r` and cluster `s`:
/// the sum over ordered same-entity pairs (earlier in `r`, later in `s`) of
/// `beta * exp(-(dt/delta)^2 / 2)`.
pub fn pen_transition(
    ds: &Dataset,
    asg: &Assignment,
    r: usize,
    s: usize,
    beta: f64,
    delta: f64,
) -> Result<f64> {
    if r == s {
        return Err(Error::Domain("pen_transition requires r != s".into()));
    }
    let k = asg
        .cluster_of
        .iter()
        .max()
        .copied()
        .unwrap_or(0)
        .max(r.max(s))
        + 1;
    Ok(pen_transition_all(ds, asg, k, beta, delta)[r][s])
}

/// All pairwise transition penalty masses at once; diagonal left at 0.
pub(crate) fn pen_transition_all(
    ds: &Dataset,
    asg: &Assignment,
    k: usize,
    beta: f64,
    delta: f64,
) -> Vec<Vec<f64>> {
    let mut pen = vec![vec![0.0; k]; k];
    if beta == 0.0 {
        return pen;
    }
    for e in 0..ds.entities().len() {
        let idx = ds.entity_observations(e);
        for (a, &i) in idx.iter().enumerate() {
            let r = asg.cluster(i);
            let t_i = ds.observations()[i].timestamp;
            for &kk in &idx[a + 1..] {
                let s = asg.cluster(kk);
                if s == r {
                    continue;
                }
                pen[r][s] += decay(t_i, ds.observations()[kk].timestamp, beta, delta);
            }
        }
    }
    pen
}
