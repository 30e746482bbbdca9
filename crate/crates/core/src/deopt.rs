//! Differential Evolution (DE/rand/1/bin) over box-bounded parameters.
//!
//! Runs are single-threaded and fully determined by the seed, the
//! configuration and the objective. The objective may return `+inf` (or
//! NaN, treated as `+inf`) to reject a candidate.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::costs::{CostKind, CostModel};
use crate::error::{Error, Result};
use crate::tfim::{AnsatzCircuit, ModelParams, VariationalAngles, SYMMETRIZED_ALPHA1, SYMMETRIZED_ALPHA2};

#[derive(Debug, Clone, PartialEq)]
pub struct DeConfig {
    pub population_size: usize,
    /// Differential weight `F`.
    pub weight_f: f64,
    /// Crossover probability `CR`.
    pub crossover_cr: f64,
    pub max_generations: usize,
    /// Stop once the best cost has improved by less than `tolerance` for
    /// this many consecutive generations.
    pub stall_generations: usize,
    pub tolerance: f64,
    pub seed: u64,
    pub bounds: Vec<(f64, f64)>,
}

impl Default for DeConfig {
    fn default() -> Self {
        Self {
            population_size: 40,
            weight_f: 0.5,
            crossover_cr: 0.9,
            max_generations: 1000,
            stall_generations: 300,
            tolerance: 1e-12,
            seed: 0,
            bounds: Vec::new(),
        }
    }
}

impl DeConfig {
    pub fn with_bounds(mut self, bounds: Vec<(f64, f64)>) -> Self {
        self.bounds = bounds;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if self.population_size < 4 {
            return fail(format!(
                "population size {} is below the minimum of 4",
                self.population_size
            ));
        }
        if !(self.weight_f > 0.0 && self.weight_f <= 2.0) {
            return fail(format!("weight F = {} outside (0, 2]", self.weight_f));
        }
        if !(0.0..=1.0).contains(&self.crossover_cr) {
            return fail(format!("crossover CR = {} outside [0, 1]", self.crossover_cr));
        }
        if self.max_generations == 0 || self.stall_generations == 0 {
            return fail("generation limits must be positive".into());
        }
        if self.tolerance.is_nan() || self.tolerance < 0.0 {
            return fail(format!("tolerance {} is negative", self.tolerance));
        }
        if self.bounds.is_empty() {
            return fail("no parameter bounds given".into());
        }
        for (k, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return fail(format!("bound {k} = ({lo}, {hi}) is not an ordered finite interval"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_params: Vec<f64>,
    pub best_cost: f64,
    pub generations_run: usize,
    pub evaluations: usize,
    pub converged: bool,
    /// Best cost after initialisation and after every generation.
    pub history: Vec<f64>,
}

fn sanitize(cost: f64) -> f64 {
    if cost.is_nan() {
        f64::INFINITY
    } else {
        cost
    }
}

fn argmin(costs: &[f64]) -> usize {
    let mut best = 0;
    for (i, &c) in costs.iter().enumerate() {
        if c < costs[best] {
            best = i;
        }
    }
    best
}

/// Minimises `objective` over the box `config.bounds`.
pub fn minimize<F>(mut objective: F, config: &DeConfig) -> Result<OptimizationResult>
where
    F: FnMut(&[f64]) -> f64,
{
    config.validate()?;
    let dim = config.bounds.len();
    let np = config.population_size;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut population: Vec<Vec<f64>> = (0..np)
        .map(|_| config.bounds.iter().map(|&(lo, hi)| rng.random_range(lo..hi)).collect())
        .collect();
    let mut costs: Vec<f64> = population.iter().map(|x| sanitize(objective(x))).collect();
    let mut evaluations = np;

    let mut best = argmin(&costs);
    let mut history = vec![costs[best]];
    let mut stall = 0;
    let mut converged = false;
    let mut generations_run = 0;

    let mut trial = vec![0.0; dim];
    let mut next_population = population.clone();
    let mut next_costs = costs.clone();

    for _ in 0..config.max_generations {
        let previous_best = costs[best];
        for i in 0..np {
            let (r1, r2, r3) = pick_three(&mut rng, np, i);
            let forced = rng.random_range(0..dim);
            for j in 0..dim {
                let (lo, hi) = config.bounds[j];
                trial[j] = if j == forced || rng.random::<f64>() < config.crossover_cr {
                    let v = population[r1][j] + config.weight_f * (population[r2][j] - population[r3][j]);
                    if (lo..=hi).contains(&v) {
                        v
                    } else {
                        rng.random_range(lo..hi)
                    }
                } else {
                    population[i][j]
                };
            }
            let c = sanitize(objective(&trial));
            evaluations += 1;
            if c <= costs[i] {
                next_population[i].copy_from_slice(&trial);
                next_costs[i] = c;
            } else {
                next_population[i].copy_from_slice(&population[i]);
                next_costs[i] = costs[i];
            }
        }
        std::mem::swap(&mut population, &mut next_population);
        std::mem::swap(&mut costs, &mut next_costs);
        generations_run += 1;

        best = argmin(&costs);
        let current = costs[best];
        assert!(current <= previous_best, "greedy selection lost the best member");
        history.push(current);

        let improvement = previous_best - current;
        if improvement < config.tolerance || (previous_best.is_infinite() && current.is_infinite()) {
            stall += 1;
        } else {
            stall = 0;
        }
        if stall >= config.stall_generations {
            converged = true;
            break;
        }
    }

    Ok(OptimizationResult {
        best_params: population[best].clone(),
        best_cost: costs[best],
        generations_run,
        evaluations,
        converged,
        history,
    })
}

fn pick_three(rng: &mut ChaCha8Rng, np: usize, exclude: usize) -> (usize, usize, usize) {
    let mut draw = |taken: &[usize]| loop {
        let k = rng.random_range(0..np);
        if k != exclude && !taken.contains(&k) {
            return k;
        }
    };
    let a = draw(&[]);
    let b = draw(&[a]);
    let c = draw(&[a, b]);
    (a, b, c)
}

/// Result of optimising the circuit angles for one cost function.
#[derive(Debug, Clone, PartialEq)]
pub struct TfdOptimum {
    pub angles: VariationalAngles,
    pub result: OptimizationResult,
}

/// Minimises `cost` over the circuit angles, each in `[-pi, pi]`.
///
/// C2 only varies `(gamma1, gamma2)` and keeps `alpha = (pi/8, pi/4)`.
/// The bounds in `config` are replaced. Cost evaluation errors reject the
/// candidate instead of aborting the run.
pub fn optimize_tfd(cost: CostKind, params: ModelParams, config: &DeConfig) -> Result<TfdOptimum> {
    let model = CostModel::new(cost, params)?;
    let circuit = AnsatzCircuit::shared();
    let free = if cost.optimizes_alpha() { 4 } else { 2 };
    let config = config.clone().with_bounds(vec![(-PI, PI); free]);
    let to_angles = |x: &[f64]| {
        if free == 4 {
            VariationalAngles::new(x[0], x[1], x[2], x[3])
        } else {
            VariationalAngles::new(x[0], x[1], SYMMETRIZED_ALPHA1, SYMMETRIZED_ALPHA2)
        }
    };
    let result = minimize(
        |x| model.evaluate(&circuit.evolve(&to_angles(x))).unwrap_or(f64::INFINITY),
        &config,
    )?;
    Ok(TfdOptimum {
        angles: to_angles(&result.best_params),
        result,
    })
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-run seed for sweep point `(beta_index, g_index, cost_tag)`, so that
/// results do not depend on the order in which sweep points are executed.
pub fn derive_seed(master: u64, beta_index: usize, g_index: usize, cost_tag: u64) -> u64 {
    let mut h = splitmix64(beta_index as u64);
    h = splitmix64(h ^ g_index as u64);
    h = splitmix64(h ^ cost_tag);
    master ^ h
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sphere(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn sphere_minimum() {
        let cfg = DeConfig::default().with_bounds(vec![(-5.0, 5.0); 4]).with_seed(7);
        let r = minimize(sphere, &cfg).unwrap();
        assert!(r.best_cost < 1e-10, "{}", r.best_cost);
        assert!(r.best_params.iter().all(|v| v.abs() < 1e-4));
    }

    #[test]
    fn constant_objective_stalls() {
        let cfg = DeConfig::default().with_bounds(vec![(-1.0, 1.0); 3]);
        let r = minimize(|_| 0.0, &cfg).unwrap();
        assert!(r.converged);
        assert_eq!(r.best_cost, 0.0);
        assert_eq!(r.generations_run, cfg.stall_generations);
    }

    #[test]
    fn invalid_configs_rejected() {
        let base = DeConfig::default().with_bounds(vec![(0.0, 1.0)]);
        let mut c = base.clone();
        c.population_size = 3;
        assert!(matches!(minimize(sphere, &c), Err(Error::InvalidConfig(_))));
        let c = base.clone().with_bounds(vec![(1.0, 0.0)]);
        assert!(matches!(minimize(sphere, &c), Err(Error::InvalidConfig(_))));
        let c = base.clone().with_bounds(vec![]);
        assert!(minimize(sphere, &c).is_err());
        let mut c = base;
        c.weight_f = 0.0;
        assert!(minimize(sphere, &c).is_err());
    }

    #[test]
    fn evaluation_count_identity() {
        let cfg = DeConfig {
            max_generations: 37,
            ..DeConfig::default()
        }
        .with_bounds(vec![(-2.0, 2.0); 2]);
        let r = minimize(sphere, &cfg).unwrap();
        assert_eq!(r.evaluations, cfg.population_size * (r.generations_run + 1));
        assert_eq!(r.history.len(), r.generations_run + 1);
    }

    #[test]
    fn candidates_stay_in_bounds() {
        let bounds = vec![(-0.5, 0.25), (3.0, 3.5), (-10.0, -9.0)];
        let cfg = DeConfig {
            max_generations: 200,
            ..DeConfig::default()
        }
        .with_bounds(bounds.clone());
        let r = minimize(
            |x| {
                for (v, (lo, hi)) in x.iter().zip(&bounds) {
                    assert!(v >= lo && v <= hi, "{v} outside [{lo}, {hi}]");
                }
                // Minimum outside the box, pulls candidates against the walls.
                x.iter().map(|v| (v - 100.0).powi(2)).sum()
            },
            &cfg,
        )
        .unwrap();
        assert!(r.best_params.iter().zip(&bounds).all(|(v, (lo, hi))| v >= lo && v <= hi));
    }

    #[test]
    fn rejected_candidates_do_not_abort() {
        let cfg = DeConfig::default().with_bounds(vec![(-1.0, 1.0); 2]);
        let r = minimize(
            |x| if x[0] < 0.0 { f64::INFINITY } else { sphere(x) },
            &cfg,
        )
        .unwrap();
        assert!(r.best_cost < 1e-8);
        assert!(r.best_params[0] >= 0.0);
    }

    #[test]
    fn nan_is_treated_as_rejection() {
        let cfg = DeConfig::default().with_bounds(vec![(-1.0, 1.0); 2]);
        let r = minimize(|x| if x[1] > 0.5 { f64::NAN } else { sphere(x) }, &cfg).unwrap();
        assert!(r.best_cost.is_finite());
    }

    #[test]
    fn seeds_depend_on_every_coordinate() {
        let s = derive_seed(42, 3, 1, 2);
        assert_eq!(s, derive_seed(42, 3, 1, 2));
        assert_ne!(s, derive_seed(42, 4, 1, 2));
        assert_ne!(s, derive_seed(42, 3, 2, 2));
        assert_ne!(s, derive_seed(42, 3, 1, 3));
        assert_ne!(s, derive_seed(43, 3, 1, 2));
    }
}
