//! Evolutionary multi-objective search over the six continuous
//! hyperparameters with dominance-count fitness, elitist survival,
//! mutation, path-relinking offspring and ideal-point selection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, HyperParams, Prototype};
use crate::error::{Error, Result};
use crate::measures::{evaluate, MeasureVector};
use crate::solver::{fit, SolverConfig};

/// Gene order: alpha, beta, delta, lambda1, lambda2, lambda3.
pub type Genome = [f64; 6];

pub const GENE_NAMES: [&str; 6] = ["alpha", "beta", "delta", "lambda1", "lambda2", "lambda3"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub genome: Genome,
    pub measures: Option<MeasureVector>,
    pub fitness: Option<usize>,
}

impl Individual {
    fn fresh(genome: Genome) -> Self {
        Self { genome, measures: None, fitness: None }
    }
}

/// Per-gene search interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub lo: Genome,
    pub hi: Genome,
}

impl Default for SearchBox {
    /// Defaults informed by the magnitudes reported for the reference
    /// political dataset; configurable per run.
    fn default() -> Self {
        Self {
            lo: [-1.0, 0.0, 0.1, 0.0, 0.0, 0.0],
            hi: [1.0, 1e-3, 10.0, 1000.0, 1000.0, 1000.0],
        }
    }
}

impl SearchBox {
    // negated comparison rejects NaN bounds
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    fn validate(&self) -> Result<()> {
        for g in 0..6 {
            if !(self.lo[g] <= self.hi[g]) {
                return Err(Error::Domain(format!(
                    "search box gene {} has lo > hi",
                    GENE_NAMES[g]
                )));
            }
        }
        if self.lo[0] < -1.0 || self.hi[0] > 1.0 {
            return Err(Error::Domain("alpha box must lie within [-1, 1]".into()));
        }
        if self.lo[2] <= 0.0 {
            return Err(Error::Domain("delta box must be positive".into()));
        }
        Ok(())
    }

    fn sample(&self, rng: &mut impl Rng) -> Genome {
        let mut g = [0.0; 6];
        for (i, v) in g.iter_mut().enumerate() {
            *v = if self.lo[i] == self.hi[i] {
                self.lo[i]
            } else {
                rng.gen_range(self.lo[i]..self.hi[i])
            };
        }
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TunerConfig {
    pub population_size: usize,
    pub max_generations: usize,
    pub dominated_carryover: f64,
    pub mutation_fraction: f64,
    pub search_box: SearchBox,
    pub seed: u64,
    pub k: usize,
}

impl Default for TunerConfig {
    fn default() -> Self {
        Self {
            population_size: 100,
            max_generations: 100,
            dominated_carryover: 0.10,
            mutation_fraction: 0.05,
            search_box: SearchBox::default(),
            seed: 0,
            k: 2,
        }
    }
}

impl TunerConfig {
    fn validate(&self) -> Result<()> {
        if self.population_size == 0 {
            return Err(Error::Domain("population size must be positive".into()));
        }
        if self.max_generations == 0 {
            return Err(Error::Domain("generation count must be positive".into()));
        }
        for (name, f) in [
            ("dominated_carryover", self.dominated_carryover),
            ("mutation_fraction", self.mutation_fraction),
        ] {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::Domain(format!("{name} must be in [0, 1], got {f}")));
            }
        }
        if self.k < 2 {
            return Err(Error::Domain("k must be >= 2".into()));
        }
        self.search_box.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub generation: usize,
    pub front_size: usize,
    pub best_distance_to_ideal: f64,
    pub evaluations_so_far: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneOutcome {
    pub best_genome: Genome,
    pub front: Vec<Individual>,
    pub history: Vec<GenerationStats>,
    pub evaluations: usize,
    pub generations: usize,
}

impl TuneOutcome {
    pub fn best_params(&self, k: usize) -> Result<HyperParams> {
        let g = self.best_genome;
        HyperParams::new(g[0], g[1], g[2], g[3], g[4], g[5], k)
    }
}

/// True iff `a` is at least as good as `b` in every measure and strictly
/// better in at least one (all measures minimized).
pub fn dominates(a: &MeasureVector, b: &MeasureVector) -> bool {
    let (a, b) = (a.as_array(), b.as_array());
    let mut strict = false;
    for i in 0..4 {
        if a[i] > b[i] {
            return false;
        }
        if a[i] < b[i] {
            strict = true;
        }
    }
    strict
}

/// Pairwise domination counts: `fitness[i]` is the number of population
/// members that dominate individual `i`; 0 marks the non-dominated front.
pub fn dominance_fitness(measures: &[MeasureVector]) -> Vec<usize> {
    let n = measures.len();
    let mut fitness = vec![0usize; n];
    for i in 0..n {
        for j in 0..n {
            if i != j && dominates(&measures[j], &measures[i]) {
                fitness[i] += 1;
            }
        }
    }
    fitness
}

/// Elitist selection: every non-dominated individual plus the
/// `ceil(carryover * |dominated|)` best-fitness dominated ones, ties broken
/// by insertion order.
pub fn select_elite(pop: &[Individual], carryover: f64) -> Vec<Individual> {
    let mut front = Vec::new();
    let mut dominated: Vec<usize> = Vec::new();
    for (i, ind) in pop.iter().enumerate() {
        match ind.fitness.expect("fitness computed before selection") {
            0 => front.push(i),
            _ => dominated.push(i),
        }
    }
    let keep = (carryover * dominated.len() as f64).ceil() as usize;
    // stable by fitness, so insertion order breaks ties
    dominated.sort_by_key(|&i| pop[i].fitness.unwrap());
    let mut survivors: Vec<Individual> = front.iter().map(|&i| pop[i].clone()).collect();
    survivors.extend(dominated.iter().take(keep).map(|&i| pop[i].clone()));
    survivors
}

/// Copy of `ind` with one or two uniformly chosen genes resampled uniformly
/// within their box interval.
pub fn mutate(ind: &Individual, search_box: &SearchBox, rng: &mut impl Rng) -> Individual {
    let mut genome = ind.genome;
    let n_genes = if rng.gen_bool(0.5) { 1 } else { 2 };
    let mut targets: Vec<usize> = Vec::with_capacity(n_genes);
    while targets.len() < n_genes {
        let g = rng.gen_range(0..6);
        if !targets.contains(&g) {
            targets.push(g);
        }
    }
    for g in targets {
        genome[g] = if search_box.lo[g] == search_box.hi[g] {
            search_box.lo[g]
        } else {
            rng.gen_range(search_box.lo[g]..search_box.hi[g])
        };
    }
    Individual::fresh(genome)
}

/// Path-relinking offspring: per gene a random convex combination of the
/// parents, with an independent uniform weight per gene (the weight applies
/// to `parent_a`).
pub fn path_relink(parent_a: &Individual, parent_b: &Individual, rng: &mut impl Rng) -> Individual {
    let mut genome = [0.0; 6];
    for g in 0..6 {
        let w: f64 = rng.gen_range(0.0..=1.0);
        genome[g] = w * parent_a.genome[g] + (1.0 - w) * parent_b.genome[g];
    }
    Individual::fresh(genome)
}

/// Min-max normalizes each measure over `population` (non-finite sentinels
/// excluded) and returns the index within `front` of the individual closest
/// to the origin in unweighted Euclidean distance; ties by lowest index.
/// Degenerate (constant) dimensions contribute 0.
pub fn closest_to_ideal(front: &[Individual], population: &[Individual]) -> Result<usize> {
    if front.is_empty() {
        return Err(Error::Domain("empty front".into()));
    }
    let norm = normalization_bounds(population);
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for (i, ind) in front.iter().enumerate() {
        let d = distance_to_ideal(ind.measures.as_ref().expect("evaluated front"), &norm);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    Ok(best)
}

fn normalization_bounds(population: &[Individual]) -> [(f64, f64); 4] {
    let mut bounds = [(f64::INFINITY, f64::NEG_INFINITY); 4];
    for ind in population {
        if let Some(m) = &ind.measures {
            if !m.is_finite() {
                continue;
            }
            for (b, v) in bounds.iter_mut().zip(m.as_array()) {
                b.0 = b.0.min(v);
                b.1 = b.1.max(v);
            }
        }
    }
    bounds
}

fn distance_to_ideal(m: &MeasureVector, bounds: &[(f64, f64); 4]) -> f64 {
    let mut sum = 0.0;
    for (v, (lo, hi)) in m.as_array().iter().zip(bounds) {
        if !v.is_finite() {
            return f64::INFINITY;
        }
        let span = hi - lo;
        let z = if span > 0.0 && span.is_finite() { (v - lo) / span } else { 0.0 };
        sum += z * z;
    }
    sum.sqrt()
}

/// Generic tuner loop over an arbitrary genome evaluator. Each new
/// individual is evaluated exactly once; survivors carry their measures.
pub fn tune_with<E>(cfg: &TunerConfig, evaluator: E) -> Result<TuneOutcome>
where
    E: Fn(&Genome) -> MeasureVector + Sync,
{
    tune_observed(cfg, evaluator, &mut |_, _| {})
}

/// `tune_with` plus a callback receiving each generation's evaluated and
/// fitness-scored population, for selection audits.
pub fn tune_observed<E>(
    cfg: &TunerConfig,
    evaluator: E,
    observer: &mut dyn FnMut(usize, &[Individual]),
) -> Result<TuneOutcome>
where
    E: Fn(&Genome) -> MeasureVector + Sync,
{
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut pop: Vec<Individual> = (0..cfg.population_size)
        .map(|_| Individual::fresh(cfg.search_box.sample(&mut rng)))
        .collect();
    let mut evaluations = 0usize;
    evaluate_new(&mut pop, &evaluator, &mut evaluations);

    let mut history = Vec::new();
    let mut generations = 0usize;
    for generation in 1..=cfg.max_generations {
        generations = generation;
        apply_fitness(&mut pop);
        let front_size = pop.iter().filter(|i| i.fitness == Some(0)).count();
        let norm = normalization_bounds(&pop);
        let best_distance = pop
            .iter()
            .filter(|i| i.fitness == Some(0))
            .map(|i| distance_to_ideal(i.measures.as_ref().unwrap(), &norm))
            .fold(f64::INFINITY, f64::min);
        history.push(GenerationStats {
            generation,
            front_size,
            best_distance_to_ideal: best_distance,
            evaluations_so_far: evaluations,
        });
        observer(generation, &pop);

        if front_size == pop.len() || generation == cfg.max_generations {
            break;
        }

        let survivors = select_elite(&pop, cfg.dominated_carryover);
        let room = cfg.population_size.saturating_sub(survivors.len());
        let n_mutants = ((cfg.mutation_fraction * survivors.len() as f64).ceil() as usize).min(room);
        let mut offspring = Vec::with_capacity(room);
        for _ in 0..n_mutants {
            let src = rng.gen_range(0..survivors.len());
            offspring.push(mutate(&survivors[src], &cfg.search_box, &mut rng));
        }
        while offspring.len() < room {
            let a = rng.gen_range(0..survivors.len());
            let b = rng.gen_range(0..survivors.len());
            offspring.push(path_relink(&survivors[a], &survivors[b], &mut rng));
        }
        pop = survivors;
        pop.extend(offspring);
        debug_assert_eq!(pop.len(), cfg.population_size);
        evaluate_new(&mut pop, &evaluator, &mut evaluations);
    }

    apply_fitness(&mut pop);
    let front: Vec<Individual> = pop.iter().filter(|i| i.fitness == Some(0)).cloned().collect();
    let best_idx = closest_to_ideal(&front, &pop)?;
    Ok(TuneOutcome {
        best_genome: front[best_idx].genome,
        front,
        history,
        evaluations,
        generations,
    })
}

fn apply_fitness(pop: &mut [Individual]) {
    let measures: Vec<MeasureVector> = pop
        .iter()
        .map(|i| *i.measures.as_ref().expect("population evaluated"))
        .collect();
    let fitness = dominance_fitness(&measures);
    for (ind, f) in pop.iter_mut().zip(fitness) {
        ind.fitness = Some(f);
    }
}

fn evaluate_new<E>(pop: &mut [Individual], evaluator: &E, evaluations: &mut usize)
where
    E: Fn(&Genome) -> MeasureVector + Sync,
{
    let pending: Vec<usize> = pop
        .iter()
        .enumerate()
        .filter(|(_, i)| i.measures.is_none())
        .map(|(i, _)| i)
        .collect();
    // parallel evaluation, merged in index order for reproducibility
    let results: Vec<MeasureVector> = pending
        .par_iter()
        .map(|&i| evaluator(&pop[i].genome))
        .collect();
    for (&i, m) in pending.iter().zip(results) {
        pop[i].measures = Some(m);
        pop[i].fitness = None;
    }
    *evaluations += pending.len();
}

/// Tunes the solver hyperparameters on `ds`: every individual runs the full
/// solver from one shared prototype initialization and is scored by the
/// four measures. Failed runs receive worst-case sentinel measures.
pub fn tune(ds: &Dataset, cfg: &TunerConfig, solver_cfg: &SolverConfig) -> Result<TuneOutcome> {
    cfg.validate()?;
    let shared_init: Vec<Prototype> =
        crate::solver::init_prototypes(ds, cfg.k, solver_cfg.seed)?;
    let k = cfg.k;
    let evaluator = |g: &Genome| -> MeasureVector {
        let hp = match HyperParams::new(g[0], g[1], g[2], g[3], g[4], g[5], k) {
            Ok(hp) => hp,
            Err(e) => {
                log::warn!("invalid genome {g:?}: {e}");
                return MeasureVector::worst();
            }
        };
        match fit(ds, &hp, solver_cfg, Some(shared_init.clone())) {
            Ok(model) => evaluate(&model, ds).unwrap_or_else(|_| MeasureVector::worst()),
            Err(e) => {
                log::warn!("solver failed for genome {g:?}: {e}");
                MeasureVector::worst()
            }
        }
    };
    tune_with(cfg, evaluator)
}

/// Front export: one CSV row per front member, genome then measures then
/// fitness.
pub fn front_csv(front: &[Individual]) -> String {
    let mut out = String::from("alpha,beta,delta,lambda1,lambda2,lambda3,mdvar,tvar,shap,spass,fitness\n");
    for ind in front {
        let m = ind.measures.as_ref().expect("evaluated front");
        let g = ind.genome;
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            g[0], g[1], g[2], g[3], g[4], g[5], m.mdvar, m.tvar, m.shap, m.spass,
            ind.fitness.unwrap_or(0)
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mv(a: f64, b: f64, c: f64, d: f64) -> MeasureVector {
        MeasureVector { mdvar: a, tvar: b, shap: c, spass: d }
    }

    fn ind(g: Genome, m: MeasureVector) -> Individual {
        Individual { genome: g, measures: Some(m), fitness: None }
    }

    #[test]
    fn dominates_cases() {
        let a = mv(1.0, 1.0, 1.0, 1.0);
        assert!(!dominates(&a, &a)); // non-strict
        assert!(dominates(&a, &mv(2.0, 2.0, 2.0, 2.0)));
        assert!(!dominates(&mv(1.0, 3.0, 1.0, 1.0), &mv(2.0, 2.0, 2.0, 2.0)));
        assert!(dominates(&a, &MeasureVector::worst()));
    }

    #[test]
    fn dominance_fitness_small_cases() {
        assert_eq!(dominance_fitness(&[mv(1.0, 1.0, 1.0, 1.0)]), vec![0]);
        let pop = [mv(1.0, 1.0, 1.0, 1.0), mv(2.0, 2.0, 2.0, 2.0)];
        assert_eq!(dominance_fitness(&pop), vec![0, 1]);
    }

    #[test]
    fn dominance_fitness_matches_second_pass() {
        // independent recount with flipped loop structure
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        let cloud: Vec<MeasureVector> = (0..20)
            .map(|_| mv(rng.gen(), rng.gen(), rng.gen(), rng.gen()))
            .collect();
        let fitness = dominance_fitness(&cloud);
        for (i, &f) in fitness.iter().enumerate() {
            let count = cloud
                .iter()
                .enumerate()
                .filter(|&(j, other)| {
                    if i == j {
                        return false;
                    }
                    let x = other.as_array();
                    let y = cloud[i].as_array();
                    (0..4).all(|d| x[d] <= y[d]) && (0..4).any(|d| x[d] < y[d])
                })
                .count();
            assert_eq!(f, count);
        }
    }

    #[test]
    fn select_elite_ceiling() {
        // front of 5 plus 10 dominated -> 5 + ceil(1.0) = 6 survivors
        let mut pop = Vec::new();
        for i in 0..5 {
            pop.push(ind([i as f64, 0.0, 1.0, 0.0, 0.0, 0.0], mv(i as f64, 4.0 - i as f64, 0.0, 0.0)));
        }
        for i in 0..10 {
            pop.push(ind(
                [0.0, 0.0, 1.0, i as f64, 0.0, 0.0],
                mv(5.0 + i as f64, 5.0 + i as f64, 1.0, 1.0),
            ));
        }
        let measures: Vec<MeasureVector> = pop.iter().map(|i| i.measures.unwrap()).collect();
        let fitness = dominance_fitness(&measures);
        for (p, f) in pop.iter_mut().zip(fitness) {
            p.fitness = Some(f);
        }
        let survivors = select_elite(&pop, 0.10);
        assert_eq!(survivors.len(), 6);
        // the kept dominated individual is the least dominated one
        assert_eq!(survivors[5].genome[3], 0.0);
    }

    #[test]
    fn select_elite_all_nondominated() {
        let mut pop: Vec<Individual> = (0..4)
            .map(|i| ind([i as f64, 0.0, 1.0, 0.0, 0.0, 0.0], mv(i as f64, 3.0 - i as f64, 0.0, 0.0)))
            .collect();
        for p in pop.iter_mut() {
            p.fitness = Some(0);
        }
        assert_eq!(select_elite(&pop, 0.10).len(), 4);
    }

    #[test]
    fn mutate_respects_box_and_determinism() {
        use rand::SeedableRng;
        let sb = SearchBox::default();
        let base = ind([0.0, 5e-4, 5.0, 500.0, 500.0, 500.0], mv(0.0, 0.0, 0.0, 0.0));
        let mut r1 = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut r2 = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let m1 = mutate(&base, &sb, &mut r1);
        let m2 = mutate(&base, &sb, &mut r2);
        assert_eq!(m1, m2);
        // at most two genes changed, all within box
        let changed = m1
            .genome
            .iter()
            .zip(&base.genome)
            .filter(|(a, b)| a != b)
            .count();
        assert!((1..=2).contains(&changed));
        for g in 0..6 {
            assert!(m1.genome[g] >= sb.lo[g] && m1.genome[g] <= sb.hi[g]);
        }
    }

    #[test]
    fn mutate_degenerate_box_gene_unchanged() {
        use rand::SeedableRng;
        let sb = SearchBox { lo: [0.5; 6], hi: [0.5; 6] };
        let base = ind([0.5; 6], mv(0.0, 0.0, 0.0, 0.0));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2);
        let m = mutate(&base, &sb, &mut rng);
        assert_eq!(m.genome, base.genome);
    }

    #[test]
    fn mutation_uniform_statistic() {
        use rand::SeedableRng;
        // resampling gene alpha over [-1, 1] has empirical mean near 0
        let sb = SearchBox {
            lo: [-1.0, 0.0, 1.0, 0.0, 0.0, 0.0],
            hi: [1.0, 0.0, 1.0, 0.0, 0.0, 0.0],
        };
        let base = ind([0.9, 0.0, 1.0, 0.0, 0.0, 0.0], mv(0.0, 0.0, 0.0, 0.0));
        // alpha is only resampled when chosen as a target gene; average the
        // trials where it actually changed
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut sum = 0.0;
        let mut hits = 0usize;
        for _ in 0..1000 {
            let a = mutate(&base, &sb, &mut rng).genome[0];
            if a != base.genome[0] {
                sum += a;
                hits += 1;
            }
        }
        assert!(hits > 100, "alpha resampled only {hits} times");
        assert!((sum / hits as f64).abs() < 0.1);
    }

    #[test]
    fn path_relink_convexity() {
        use rand::SeedableRng;
        let a = ind([0.0, 0.0, 1.0, 0.0, 0.0, 0.0], mv(0.0, 0.0, 0.0, 0.0));
        let b = ind([1.0, 1e-3, 9.0, 100.0, 10.0, 1.0], mv(0.0, 0.0, 0.0, 0.0));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let child = path_relink(&a, &b, &mut rng);
        for g in 0..6 {
            let (lo, hi) = (a.genome[g].min(b.genome[g]), a.genome[g].max(b.genome[g]));
            assert!(child.genome[g] >= lo && child.genome[g] <= hi);
        }
        // identical parents breed an identical child
        let same = path_relink(&a, &a, &mut rng);
        assert_eq!(same.genome, a.genome);
    }

    #[test]
    fn closest_to_ideal_hand_case() {
        // after min-max normalization (0,0,0,1) is at distance 1 and
        // (1,1,1,0) at sqrt(3)
        let front = vec![
            ind([0.0; 6], mv(0.0, 0.0, 0.0, 1.0)),
            ind([1.0; 6], mv(1.0, 1.0, 1.0, 0.0)),
        ];
        let best = closest_to_ideal(&front, &front).unwrap();
        assert_eq!(best, 0);
        assert!(closest_to_ideal(&[], &front).is_err());
    }

    #[test]
    fn closest_to_ideal_constant_dimension_ignored() {
        let front = vec![
            ind([0.0; 6], mv(5.0, 0.0, 0.0, 0.0)),
            ind([1.0; 6], mv(5.0, 1.0, 1.0, 1.0)),
        ];
        assert_eq!(closest_to_ideal(&front, &front).unwrap(), 0);
        // singleton front: that individual
        let single = vec![front[1].clone()];
        assert_eq!(closest_to_ideal(&single, &single).unwrap(), 0);
    }

    #[test]
    fn tune_single_generation_returns_initial_front() {
        let cfg = TunerConfig {
            population_size: 12,
            max_generations: 1,
            seed: 5,
            ..TunerConfig::default()
        };
        let outcome = tune_with(&cfg, |g| mv(g[0].abs(), 1.0 - g[0].abs(), 0.0, 0.0)).unwrap();
        assert_eq!(outcome.evaluations, 12);
        assert_eq!(outcome.generations, 1);
        assert!(!outcome.front.is_empty());
    }

    #[test]
    fn tune_is_deterministic() {
        let cfg = TunerConfig {
            population_size: 16,
            max_generations: 6,
            seed: 11,
            ..TunerConfig::default()
        };
        let eval = |g: &Genome| {
            let u = (g[0] + 1.0) / 2.0;
            let v = (g[2] - 0.1) / 9.9;
            mv(u * u + v, (1.0 - u) * (1.0 - u) + v, 0.0, 0.0)
        };
        let a = tune_with(&cfg, eval).unwrap();
        let b = tune_with(&cfg, eval).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn front_is_mutually_nondominated() {
        let cfg = TunerConfig {
            population_size: 20,
            max_generations: 8,
            seed: 13,
            ..TunerConfig::default()
        };
        let outcome = tune_with(&cfg, |g| {
            let u = (g[0] + 1.0) / 2.0;
            let v = (g[2] - 0.1) / 9.9;
            mv(u * u + v, (1.0 - u) * (1.0 - u) + v, 0.0, 0.0)
        })
        .unwrap();
        for a in &outcome.front {
            for b in &outcome.front {
                assert!(!dominates(a.measures.as_ref().unwrap(), b.measures.as_ref().unwrap()));
            }
        }
    }
}
