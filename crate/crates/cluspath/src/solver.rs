//! Three-block coordinate descent: observation assignment, prototype
//! updates and the Lagrange-constrained adjacency update.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::data::{
    AdjacencyMatrix, Assignment, ClusPathModel, Dataset, HyperParams, Prototype,
};
use crate::error::{Error, Result};
use crate::metric::{gamma, ta_dissim_unchecked, TAWeights};
use crate::objective::{
    incoming_penalty, inter_phi_all, objective_j, outgoing_penalty, pen_transition_all,
};

/// Guard under which a prototype-update denominator counts as vanished.
const DENOM_FLOOR: f64 = 1e-12;
/// Floor applied to non-positive adjacency curvature coefficients.
const K_FLOOR: f64 = 1e-9;
/// Cap on the inner fixed-point sweeps of one prototype update.
const PROTO_INNER_ITERS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iterations: usize,
    pub objective_tolerance: f64,
    pub seed: u64,
    /// When set, assignment also accounts for incoming penalties from
    /// earlier same-entity observations, making each move an exact
    /// coordinate-descent step on the full objective.
    pub symmetric_assignment: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_iterations: 200,
            objective_tolerance: 1e-9,
            seed: 0,
            symmetric_assignment: false,
        }
    }
}

impl SolverConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }
}

/// Flags raised by a single adjacency update.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct AdjacencyStatus {
    /// Some curvature coefficient was non-positive and raised to the floor.
    pub floored: bool,
    /// Every coefficient sat at the floor; the matrix fell back to uniform.
    pub all_floored: bool,
    /// An entry left [0, 1] and the matrix was clamped and renormalized.
    pub clamped: bool,
}

/// Events emitted between solver blocks; used to audit per-block descent.
pub enum SolverEvent<'a> {
    AfterAssignment {
        iteration: usize,
        assignment: &'a Assignment,
        prototypes: &'a [Prototype],
        adjacency: &'a AdjacencyMatrix,
    },
    /// One prototype replaced, all others still at previous-iteration values.
    AfterPrototype {
        iteration: usize,
        cluster: usize,
        assignment: &'a Assignment,
        prototypes: &'a [Prototype],
        adjacency: &'a AdjacencyMatrix,
    },
    AfterAdjacency {
        iteration: usize,
        assignment: &'a Assignment,
        prototypes: &'a [Prototype],
        adjacency: &'a AdjacencyMatrix,
        status: AdjacencyStatus,
    },
}

/// Draws `k` distinct observations with a seeded generator and copies them
/// into prototypes.
pub fn init_prototypes(ds: &Dataset, k: usize, seed: u64) -> Result<Vec<Prototype>> {
    if k > ds.n() {
        return Err(Error::Domain(format!(
            "k = {k} exceeds the number of observations ({})",
            ds.n()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let chosen = rand::seq::index::sample(&mut rng, ds.n(), k);
    Ok(chosen
        .iter()
        .map(|i| {
            let o = &ds.observations()[i];
            Prototype { mu_t: o.timestamp, mu_d: o.descriptor.clone() }
        })
        .collect())
}

/// Cost of placing observation `i` into cluster `p`, holding all other
/// assignments fixed: dissimilarity to the prototype plus penalties towards
/// later same-entity observations in other clusters.
#[allow(clippy::too_many_arguments)]
pub fn assignment_cost(
    i: usize,
    p: usize,
    ds: &Dataset,
    asg: &Assignment,
    protos: &[Prototype],
    adj: &AdjacencyMatrix,
    hp: &HyperParams,
    w: TAWeights,
    diam: (f64, f64),
    symmetric: bool,
) -> f64 {
    let o = &ds.observations()[i];
    let mut cost = ta_dissim_unchecked(
        &o.descriptor,
        o.timestamp,
        &protos[p].mu_d,
        protos[p].mu_t,
        w,
        diam,
    );
    cost += outgoing_penalty(ds, asg, adj, hp, i, p);
    if symmetric {
        cost += incoming_penalty(ds, asg, adj, hp, i, p);
    }
    cost
}

/// Argmin of `assignment_cost` over clusters, ties broken by lowest index.
pub fn best_cluster(
    i: usize,
    ds: &Dataset,
    asg: &Assignment,
    protos: &[Prototype],
    adj: &AdjacencyMatrix,
    hp: &HyperParams,
) -> Result<usize> {
    let w = gamma(hp.alpha)?;
    let diam = ds.effective_diameters();
    Ok(best_cluster_inner(i, ds, asg, protos, adj, hp, w, diam, false))
}

#[allow(clippy::too_many_arguments)]
fn best_cluster_inner(
    i: usize,
    ds: &Dataset,
    asg: &Assignment,
    protos: &[Prototype],
    adj: &AdjacencyMatrix,
    hp: &HyperParams,
    w: TAWeights,
    diam: (f64, f64),
    symmetric: bool,
) -> usize {
    let mut best = 0usize;
    let mut best_cost = f64::INFINITY;
    for p in 0..protos.len() {
        let cost = assignment_cost(i, p, ds, asg, protos, adj, hp, w, diam, symmetric);
        if cost < best_cost {
            best_cost = cost;
            best = p;
        }
    }
    best
}

/// Reassigns every observation in a fixed scan order: entities in load
/// order, observations chronologically. The assignment is updated in place,
/// so each move is a best response to the current state.
pub fn assign_all(
    ds: &Dataset,
    asg: &mut Assignment,
    protos: &[Prototype],
    adj: &AdjacencyMatrix,
    hp: &HyperParams,
    symmetric: bool,
) -> Result<()> {
    let w = gamma(hp.alpha)?;
    let diam = ds.effective_diameters();
    for e in 0..ds.entities().len() {
        for &i in ds.entity_observations(e) {
            let p = best_cluster_inner(i, ds, asg, protos, adj, hp, w, diam, symmetric);
            asg.cluster_of[i] = p;
        }
    }
    Ok(())
}

/// Dissimilarity-only assignment; the first assignment pass, where no
/// previous partition exists and the penalty sums are empty.
fn assign_initial(
    ds: &Dataset,
    protos: &[Prototype],
    w: TAWeights,
    diam: (f64, f64),
) -> Assignment {
    let cluster_of = ds
        .observations()
        .iter()
        .map(|o| {
            let mut best = 0usize;
            let mut best_d = f64::INFINITY;
            for (p, proto) in protos.iter().enumerate() {
                let d = ta_dissim_unchecked(
                    &o.descriptor,
                    o.timestamp,
                    &proto.mu_d,
                    proto.mu_t,
                    w,
                    diam,
                );
                if d < best_d {
                    best_d = d;
                    best = p;
                }
            }
            best
        })
        .collect();
    Assignment::new(cluster_of)
}

/// One application of the closed-form component updates: the descriptive
/// center from the current temporal center, then the temporal center from
/// the fresh descriptive one. Returns the updated prototype and whether
/// any denominator vanished (in which case that component is kept).
#[allow(clippy::too_many_arguments)]
pub fn prototype_step(
    j: usize,
    ds: &Dataset,
    asg: &Assignment,
    protos: &[Prototype],
    adj: &AdjacencyMatrix,
    hp: &HyperParams,
    w: TAWeights,
    diam: (f64, f64),
) -> (Prototype, bool) {
    let members: Vec<usize> = (0..ds.n()).filter(|&i| asg.cluster(i) == j).collect();
    let dim = ds.dim();
    let mut mu = protos[j].clone();
    let mut degenerate = false;

    // descriptive component, weighted by temporal proximity
    {
        let mut num = vec![0.0; dim];
        let mut den = 0.0;
        for &i in &members {
            let o = &ds.observations()[i];
            let dt = o.timestamp - mu.mu_t;
            let wt = 1.0 - w.gamma_t * dt * dt / (diam.1 * diam.1);
            den += hp.lambda1 * wt;
            for (n, x) in num.iter_mut().zip(&o.descriptor) {
                *n += hp.lambda1 * wt * x;
            }
        }
        for (p, proto) in protos.iter().enumerate() {
            if p == j {
                continue;
            }
            let link = adj.get(j, p).powi(2) + adj.get(p, j).powi(2);
            if link == 0.0 {
                continue;
            }
            let dt = proto.mu_t - mu.mu_t;
            let wt = 1.0 - w.gamma_t * dt * dt / (diam.1 * diam.1);
            den += hp.lambda2 * wt * link;
            for (n, x) in num.iter_mut().zip(&proto.mu_d) {
                *n += hp.lambda2 * wt * x * link;
            }
        }
        if den <= DENOM_FLOOR {
            degenerate = true;
        } else {
            for (m, n) in mu.mu_d.iter_mut().zip(&num) {
                *m = n / den;
            }
        }
    }

    // temporal component, weighted by descriptive proximity
    {
        let mut num = 0.0;
        let mut den = 0.0;
        for &i in &members {
            let o = &ds.observations()[i];
            let dd = crate::data::sq_euclidean(&o.descriptor, &mu.mu_d);
            let wd = 1.0 - w.gamma_d * dd / (diam.0 * diam.0);
            den += hp.lambda1 * wd;
            num += hp.lambda1 * wd * o.timestamp;
        }
        for (p, proto) in protos.iter().enumerate() {
            if p == j {
                continue;
            }
            let link = adj.get(j, p).powi(2) + adj.get(p, j).powi(2);
            if link == 0.0 {
                continue;
            }
            let dd = crate::data::sq_euclidean(&proto.mu_d, &mu.mu_d);
            let wd = 1.0 - w.gamma_d * dd / (diam.0 * diam.0);
            den += hp.lambda2 * wd * link;
            num += hp.lambda2 * wd * proto.mu_t * link;
        }
        if den <= DENOM_FLOOR {
            degenerate = true;
        } else {
            mu.mu_t = num / den;
        }
    }

    (mu, degenerate)
}

/// Recomputes the prototype of cluster `j` with all other prototypes fixed
/// at their previous-iteration values. The two component closed forms are
/// iterated to their joint fixed point, since each one's weights depend on
/// the other component. Returns the prototype and a degeneracy flag (empty
/// cluster with zero link mass leaves the prototype unchanged).
pub fn update_prototype(
    j: usize,
    ds: &Dataset,
    asg: &Assignment,
    protos: &[Prototype],
    adj: &AdjacencyMatrix,
    hp: &HyperParams,
) -> Result<(Prototype, bool)> {
    let w = gamma(hp.alpha)?;
    let diam = ds.effective_diameters();
    let mut work = protos.to_vec();
    let mut flagged = false;
    for _ in 0..PROTO_INNER_ITERS {
        let (next, degenerate) = prototype_step(j, ds, asg, &work, adj, hp, w, diam);
        flagged |= degenerate;
        let delta = (next.mu_t - work[j].mu_t).abs().max(
            next.mu_d
                .iter()
                .zip(&work[j].mu_d)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        );
        work[j] = next;
        if degenerate || delta < 1e-13 {
            break;
        }
    }
    Ok((work[j].clone(), flagged))
}

/// Closed-form constrained adjacency update. For each ordered pair the
/// curvature coefficient is
/// `K[r][s] = -lambda1*pen(r,s) + lambda2*dissim(mu_r, mu_s) + lambda3*inter(r,s)^2`
/// and `a[r][s] = (1/K[r][s]) / sum over p != q of 1/K[p][q]`, the minimizer
/// of the quadratic objective on the unit-1-norm hyperplane. Non-positive
/// coefficients are raised to a floor; if all coefficients sit at the floor
/// the matrix falls back to uniform off-diagonal weights.
pub fn update_adjacency(
    ds: &Dataset,
    asg: &Assignment,
    protos: &[Prototype],
    hp: &HyperParams,
) -> Result<(AdjacencyMatrix, AdjacencyStatus)> {
    let k = protos.len();
    if k < 2 {
        return Err(Error::Domain("adjacency update requires k >= 2".into()));
    }
    let w = gamma(hp.alpha)?;
    let diam = ds.effective_diameters();
    let pen = pen_transition_all(ds, asg, k, hp.beta, hp.delta);
    let inter = inter_phi_all(ds, asg, k);

    let mut status = AdjacencyStatus::default();
    let mut coeff = vec![vec![0.0; k]; k];
    let mut floored_count = 0usize;
    for r in 0..k {
        for s in 0..k {
            if r == s {
                continue;
            }
            let dissim = ta_dissim_unchecked(
                &protos[r].mu_d,
                protos[r].mu_t,
                &protos[s].mu_d,
                protos[s].mu_t,
                w,
                diam,
            );
            let mut kk = -hp.lambda1 * pen[r][s]
                + hp.lambda2 * dissim
                + hp.lambda3 * inter[r][s] * inter[r][s];
            if kk < K_FLOOR {
                kk = K_FLOOR;
                status.floored = true;
                floored_count += 1;
            }
            coeff[r][s] = kk;
        }
    }

    let mut adj = AdjacencyMatrix::zeros(k);
    if floored_count == k * (k - 1) {
        status.all_floored = true;
        let uniform = 1.0 / (k * (k - 1)) as f64;
        for r in 0..k {
            for s in 0..k {
                if r != s {
                    adj.set(r, s, uniform);
                }
            }
        }
        return Ok((adj, status));
    }

    let inv_sum: f64 = (0..k)
        .flat_map(|r| (0..k).filter(move |&s| s != r).map(move |s| (r, s)))
        .map(|(r, s)| 1.0 / coeff[r][s])
        .sum();
    for r in 0..k {
        for s in 0..k {
            if r != s {
                adj.set(r, s, (1.0 / coeff[r][s]) / inv_sum);
            }
        }
    }

    // With all coefficients positive the entries already lie in [0, 1] and
    // sum to 1; this path is kept as a guard.
    let mut clamped = false;
    for r in 0..k {
        for s in 0..k {
            let v = adj.get(r, s);
            if !(0.0..=1.0).contains(&v) {
                adj.set(r, s, v.clamp(0.0, 1.0));
                clamped = true;
            }
        }
    }
    if clamped {
        status.clamped = true;
        let total = adj.sum();
        if total > 0.0 {
            for r in 0..k {
                for s in 0..k {
                    adj.set(r, s, adj.get(r, s) / total);
                }
            }
        }
    }
    Ok((adj, status))
}

/// Runs the full coordinate descent until the partition is stable between
/// consecutive iterations or the iteration cap is hit. Deterministic given
/// the seed (or explicit initial prototypes).
pub fn fit(
    ds: &Dataset,
    hp: &HyperParams,
    cfg: &SolverConfig,
    init: Option<Vec<Prototype>>,
) -> Result<ClusPathModel> {
    fit_observed(ds, hp, cfg, init, &mut |_| {})
}

/// `fit` with a per-block event callback for descent and constraint audits.
pub fn fit_observed(
    ds: &Dataset,
    hp: &HyperParams,
    cfg: &SolverConfig,
    init: Option<Vec<Prototype>>,
    observer: &mut dyn FnMut(SolverEvent<'_>),
) -> Result<ClusPathModel> {
    if ds.n() < hp.k {
        return Err(Error::Domain(format!(
            "dataset has {} observations, fewer than k = {}",
            ds.n(),
            hp.k
        )));
    }
    let w = gamma(hp.alpha)?;
    let diam = ds.effective_diameters();
    let mut protos = match init {
        Some(p) => {
            if p.len() != hp.k {
                return Err(Error::Domain(format!(
                    "provided {} initial prototypes for k = {}",
                    p.len(),
                    hp.k
                )));
            }
            p
        }
        None => init_prototypes(ds, hp.k, cfg.seed)?,
    };
    let mut adj = AdjacencyMatrix::zeros(hp.k);
    let mut asg = assign_initial(ds, &protos, w, diam);
    let mut prev_partition: Option<Vec<usize>> = None;
    let mut trace = Vec::new();
    let mut iterations = 0usize;

    for iter in 1..=cfg.max_iterations {
        iterations = iter;
        if iter > 1 {
            assign_all(ds, &mut asg, &protos, &adj, hp, cfg.symmetric_assignment)?;
        }
        observer(SolverEvent::AfterAssignment {
            iteration: iter,
            assignment: &asg,
            prototypes: &protos,
            adjacency: &adj,
        });

        // Jacobi sweep: every update sees the previous-iteration prototypes.
        let mut next_protos = protos.clone();
        for j in 0..hp.k {
            let (mu, _flagged) = update_prototype(j, ds, &asg, &protos, &adj, hp)?;
            next_protos[j] = mu;
            // report with only cluster j replaced, others still previous
            let mut snapshot = protos.clone();
            snapshot[j] = next_protos[j].clone();
            observer(SolverEvent::AfterPrototype {
                iteration: iter,
                cluster: j,
                assignment: &asg,
                prototypes: &snapshot,
                adjacency: &adj,
            });
        }
        protos = next_protos;

        let (new_adj, status) = update_adjacency(ds, &asg, &protos, hp)?;
        adj = new_adj;
        observer(SolverEvent::AfterAdjacency {
            iteration: iter,
            assignment: &asg,
            prototypes: &protos,
            adjacency: &adj,
            status,
        });

        let breakdown = objective_j(ds, &asg, &protos, &adj, hp)?;
        if !breakdown.j.is_finite() {
            return Err(Error::NonFiniteObjective {
                iteration: iter,
                dump: format!(
                    "t1={} t2={} t3={} adjacency_sum={}",
                    breakdown.t1,
                    breakdown.t2,
                    breakdown.t3,
                    adj.sum()
                ),
            });
        }
        trace.push(breakdown.j);

        if prev_partition.as_deref() == Some(&asg.cluster_of) {
            break;
        }
        prev_partition = Some(asg.cluster_of.clone());
    }

    Ok(ClusPathModel {
        prototypes: protos,
        assignment: asg,
        adjacency: adj,
        objective_trace: trace,
        iterations,
        params: *hp,
        seed: cfg.seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::Observation;

    fn obs(e: &str, t: f64, d: &[f64]) -> Observation {
        Observation { entity_id: e.into(), timestamp: t, descriptor: d.to_vec() }
    }

    fn hp(alpha: f64, beta: f64, delta: f64, l: (f64, f64, f64), k: usize) -> HyperParams {
        HyperParams::new(alpha, beta, delta, l.0, l.1, l.2, k).unwrap()
    }

    fn toy_dataset() -> Dataset {
        let mut v = Vec::new();
        for e in 0..3 {
            for t in 0..4 {
                v.push(obs(
                    &format!("e{e}"),
                    t as f64,
                    &[e as f64 + 0.1 * t as f64, t as f64],
                ));
            }
        }
        Dataset::new(v).unwrap()
    }

    #[test]
    fn init_is_deterministic_and_distinct() {
        let ds = toy_dataset();
        let a = init_prototypes(&ds, 4, 7).unwrap();
        let b = init_prototypes(&ds, 4, 7).unwrap();
        assert_eq!(a, b);
        let c = init_prototypes(&ds, 4, 8).unwrap();
        assert_ne!(a, c);
        // drawn from the observations, all distinct
        for p in &a {
            assert!(ds
                .observations()
                .iter()
                .any(|o| o.descriptor == p.mu_d && o.timestamp == p.mu_t));
        }
        for i in 0..a.len() {
            for j in (i + 1)..a.len() {
                assert!(a[i] != a[j]);
            }
        }
    }

    #[test]
    fn init_k_equals_n_uses_every_observation() {
        let ds = toy_dataset();
        let protos = init_prototypes(&ds, ds.n(), 3).unwrap();
        assert_eq!(protos.len(), ds.n());
        for o in ds.observations() {
            assert!(protos
                .iter()
                .any(|p| p.mu_d == o.descriptor && p.mu_t == o.timestamp));
        }
        assert!(init_prototypes(&ds, ds.n() + 1, 3).is_err());
    }

    #[test]
    fn best_cluster_reduces_to_dissim_argmin_with_zero_beta() {
        let ds = toy_dataset();
        let protos = init_prototypes(&ds, 3, 1).unwrap();
        let adj = AdjacencyMatrix::zeros(3);
        let h = hp(0.5, 0.0, 1.0, (1.0, 0.0, 0.0), 3);
        let asg = Assignment::new(vec![0; ds.n()]);
        let w = gamma(h.alpha).unwrap();
        let diam = ds.effective_diameters();
        for i in 0..ds.n() {
            let by_solver = best_cluster(i, &ds, &asg, &protos, &adj, &h).unwrap();
            let mut best = 0;
            let mut best_d = f64::INFINITY;
            let o = &ds.observations()[i];
            for (p, proto) in protos.iter().enumerate() {
                let d = ta_dissim_unchecked(
                    &o.descriptor, o.timestamp, &proto.mu_d, proto.mu_t, w, diam,
                );
                if d < best_d {
                    best_d = d;
                    best = p;
                }
            }
            assert_eq!(by_solver, best);
        }
    }

    #[test]
    fn best_cluster_tie_breaks_low_index() {
        // single-observation entity equidistant to two identical prototypes
        let ds = Dataset::new(vec![obs("a", 0.0, &[0.0]), obs("b", 5.0, &[4.0])]).unwrap();
        let protos = vec![
            Prototype { mu_t: 1.0, mu_d: vec![1.0] },
            Prototype { mu_t: 1.0, mu_d: vec![1.0] },
        ];
        let adj = AdjacencyMatrix::zeros(2);
        let h = hp(0.0, 0.0, 1.0, (1.0, 0.0, 0.0), 2);
        let asg = Assignment::new(vec![0, 0]);
        assert_eq!(best_cluster(0, &ds, &asg, &protos, &adj, &h).unwrap(), 0);
    }

    #[test]
    fn best_cluster_prefers_linked_sibling_cluster() {
        // x_i slightly nearer mu_0, but its later sibling sits in C_1 with
        // a = 0: the penalty tips the balance to C_1.
        let ds = Dataset::new(vec![obs("a", 0.0, &[0.0]), obs("a", 1.0, &[1.0])]).unwrap();
        let (dd, _) = ds.diameters();
        assert!(dd > 0.0);
        // prototypes: mu_0 marginally closer to x_0 in the descriptive space
        let protos = vec![
            Prototype { mu_t: 0.0, mu_d: vec![0.0] },
            Prototype { mu_t: 0.0, mu_d: vec![0.05] },
        ];
        let adj = AdjacencyMatrix::zeros(2);
        // beta scaled so the penalty e^{-1/2} * beta = 0.1 exceeds the
        // dissimilarity edge of mu_0
        let beta = 0.1 / (-0.5f64).exp();
        let h = hp(1.0, beta, 1.0, (1.0, 0.0, 0.0), 2);
        let asg = Assignment::new(vec![0, 1]); // sibling in C_1
        let w = gamma(h.alpha).unwrap();
        let diam = ds.effective_diameters();
        // exhaustive check of both candidate sums
        let c0 = assignment_cost(0, 0, &ds, &asg, &protos, &adj, &h, w, diam, false);
        let c1 = assignment_cost(0, 1, &ds, &asg, &protos, &adj, &h, w, diam, false);
        assert!(c1 < c0, "expected penalty to dominate: c0={c0} c1={c1}");
        assert_eq!(best_cluster(0, &ds, &asg, &protos, &adj, &h).unwrap(), 1);
    }

    #[test]
    fn assign_all_fixed_point_on_optimal_state() {
        let ds = toy_dataset();
        let h = hp(0.5, 1e-3, 2.0, (1.0, 0.5, 0.5), 3);
        let cfg = SolverConfig::with_seed(11);
        let model = fit(&ds, &h, &cfg, None).unwrap();
        let mut asg = model.assignment.clone();
        assign_all(&ds, &mut asg, &model.prototypes, &model.adjacency, &h, false).unwrap();
        assert_eq!(asg, model.assignment);
    }

    #[test]
    fn assign_all_matches_per_observation_best_response() {
        let ds = toy_dataset();
        let protos = init_prototypes(&ds, 2, 5).unwrap();
        let mut adj = AdjacencyMatrix::zeros(2);
        adj.set(0, 1, 0.5);
        adj.set(1, 0, 0.5);
        let h = hp(0.2, 0.05, 2.0, (1.0, 0.0, 0.0), 2);
        let mut asg = Assignment::new(vec![0; ds.n()]);
        assign_all(&ds, &mut asg, &protos, &adj, &h, false).unwrap();
        // after the scan every observation is a best response
        for i in 0..ds.n() {
            let b = best_cluster(i, &ds, &asg, &protos, &adj, &h).unwrap();
            let w = gamma(h.alpha).unwrap();
            let diam = ds.effective_diameters();
            let cur = assignment_cost(i, asg.cluster(i), &ds, &asg, &protos, &adj, &h, w, diam, false);
            let best = assignment_cost(i, b, &ds, &asg, &protos, &adj, &h, w, diam, false);
            assert!(cur <= best + 1e-12);
        }
    }

    #[test]
    fn prototype_plain_mean_when_unweighted() {
        // lambda2 = 0 and gamma_t = 0 (alpha = 1): mu_d is the plain mean
        let ds = toy_dataset();
        let h = hp(1.0, 0.0, 1.0, (1.0, 0.0, 0.0), 2);
        let asg = Assignment::new(
            (0..ds.n()).map(|i| usize::from(i >= 6)).collect(),
        );
        let protos = vec![
            Prototype { mu_t: 0.0, mu_d: vec![9.0, 9.0] },
            Prototype { mu_t: 0.0, mu_d: vec![9.0, 9.0] },
        ];
        let adj = AdjacencyMatrix::zeros(2);
        let (mu, flagged) = update_prototype(0, &ds, &asg, &protos, &adj, &h).unwrap();
        assert!(!flagged);
        let members: Vec<_> = (0..6).collect();
        for f in 0..ds.dim() {
            let mean: f64 = members
                .iter()
                .map(|&i| ds.observations()[i].descriptor[f])
                .sum::<f64>()
                / members.len() as f64;
            assert!((mu.mu_d[f] - mean).abs() < 1e-12);
        }
    }

    #[test]
    fn prototype_single_member_cluster() {
        let ds = toy_dataset();
        let h = hp(0.0, 0.0, 1.0, (1.0, 0.0, 0.0), 2);
        let mut cl = vec![1; ds.n()];
        cl[3] = 0;
        let asg = Assignment::new(cl);
        // start within the data range so the proximity weights stay positive
        let protos = vec![
            Prototype { mu_t: 2.0, mu_d: vec![0.0, 2.0] },
            Prototype { mu_t: 0.0, mu_d: vec![0.0, 0.0] },
        ];
        let adj = AdjacencyMatrix::zeros(2);
        let (mu, _) = update_prototype(0, &ds, &asg, &protos, &adj, &h).unwrap();
        let o = &ds.observations()[3];
        assert_eq!(mu.mu_d, o.descriptor);
        assert!((mu.mu_t - o.timestamp).abs() < 1e-12);
    }

    #[test]
    fn prototype_step_weight_factors() {
        // 2-member cluster at times {0, 10}, gamma_t = 1, diam_t = 10,
        // current mu_t = 0: member weights (1, 0) => mu_d = first descriptor
        let ds = Dataset::new(vec![
            obs("a", 0.0, &[2.0]),
            obs("a", 10.0, &[8.0]),
        ])
        .unwrap();
        assert_eq!(ds.diameters().1, 10.0);
        let h = hp(0.0, 0.0, 1.0, (1.0, 0.0, 0.0), 2);
        let w = gamma(h.alpha).unwrap(); // gamma = (1, 1)
        let diam = ds.effective_diameters();
        let asg = Assignment::new(vec![0, 0]);
        let protos = vec![
            Prototype { mu_t: 0.0, mu_d: vec![5.0] },
            Prototype { mu_t: 99.0, mu_d: vec![99.0] },
        ];
        let adj = AdjacencyMatrix::zeros(2);
        let (mu, flagged) = prototype_step(0, &ds, &asg, &protos, &adj, &h, w, diam);
        assert!(!flagged);
        assert!((mu.mu_d[0] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn prototype_empty_cluster_left_unchanged() {
        let ds = toy_dataset();
        let h = hp(0.0, 0.0, 1.0, (1.0, 0.0, 0.0), 2);
        let asg = Assignment::new(vec![1; ds.n()]);
        let protos = vec![
            Prototype { mu_t: 42.0, mu_d: vec![4.0, 2.0] },
            Prototype { mu_t: 0.0, mu_d: vec![0.0, 0.0] },
        ];
        let adj = AdjacencyMatrix::zeros(2);
        let (mu, flagged) = update_prototype(0, &ds, &asg, &protos, &adj, &h).unwrap();
        assert!(flagged);
        assert_eq!(mu, protos[0]);
    }

    #[test]
    fn adjacency_symmetric_two_cluster_split() {
        // identical coefficients force a 50/50 split summing to 1
        let ds = Dataset::new(vec![
            obs("a", 0.0, &[0.0]),
            obs("a", 1.0, &[1.0]),
            obs("b", 0.0, &[0.0]),
            obs("b", 1.0, &[1.0]),
        ])
        .unwrap();
        let asg = Assignment::new(vec![0, 1, 0, 1]);
        let protos = vec![
            Prototype { mu_t: 0.0, mu_d: vec![0.0] },
            Prototype { mu_t: 1.0, mu_d: vec![1.0] },
        ];
        // lambda1 = 0 so K depends only on symmetric dissim/inter... note
        // inter(0,1) = 0 (both entities transition) vs inter(1,0) = 1, so
        // use lambda3 = 0 for exact symmetry.
        let h = hp(0.0, 0.0, 1.0, (0.0, 1.0, 0.0), 2);
        let (adj, status) = update_adjacency(&ds, &asg, &protos, &h).unwrap();
        assert_eq!(status, AdjacencyStatus::default());
        assert!((adj.get(0, 1) - 0.5).abs() < 1e-12);
        assert!((adj.get(1, 0) - 0.5).abs() < 1e-12);
        assert!((adj.sum() - 1.0).abs() < 1e-9);
        assert_eq!(adj.get(0, 0), 0.0);
        assert_eq!(adj.get(1, 1), 0.0);
    }

    #[test]
    fn adjacency_all_floored_is_uniform() {
        // beta large and lambda2 = lambda3 = 0 drives every K negative
        let ds = Dataset::new(vec![
            obs("a", 0.0, &[0.0]),
            obs("a", 1.0, &[1.0]),
            obs("a", 2.0, &[2.0]),
        ])
        .unwrap();
        let asg = Assignment::new(vec![0, 1, 2]);
        let protos = vec![
            Prototype { mu_t: 0.0, mu_d: vec![0.0] },
            Prototype { mu_t: 1.0, mu_d: vec![1.0] },
            Prototype { mu_t: 2.0, mu_d: vec![2.0] },
        ];
        let h = hp(0.0, 10.0, 5.0, (1.0, 0.0, 0.0), 3);
        let (adj, status) = update_adjacency(&ds, &asg, &protos, &h).unwrap();
        assert!(status.all_floored);
        let uniform = 1.0 / 6.0;
        for (r, s, v) in adj.off_diagonal() {
            let _ = (r, s);
            assert!((v - uniform).abs() < 1e-12);
        }
        assert!((adj.sum() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn fit_is_deterministic() {
        let ds = toy_dataset();
        let h = hp(0.5, 1e-3, 2.0, (1.0, 0.5, 0.5), 3);
        let cfg = SolverConfig::with_seed(42);
        let m1 = fit(&ds, &h, &cfg, None).unwrap();
        let m2 = fit(&ds, &h, &cfg, None).unwrap();
        assert_eq!(m1, m2);
    }

    #[test]
    fn fit_rejects_k_above_n() {
        let ds = Dataset::new(vec![obs("a", 0.0, &[0.0]), obs("a", 1.0, &[1.0])]).unwrap();
        let h = hp(0.0, 0.0, 1.0, (1.0, 0.0, 0.0), 3);
        assert!(fit(&ds, &h, &SolverConfig::default(), None).is_err());
    }
}
