//! Parameter sweeps over inverse temperature, transverse field and the
//! `(zeta, tau)` exponents of the engineered cost.
//!
//! Every sweep point is an independent job with a seed derived from the
//! master seed and the point's indices, so results do not depend on the
//! worker count or on scheduling order.

use rayon::prelude::*;
use tfd_core::metrics::subsystem_proximity;
use tfd_core::{
    derive_seed, evolve_ansatz, optimize_tfd, target_tfd, xi_metric, CostKind, DeConfig, ModelParams,
    StateVector, VariationalAngles,
};

use crate::error::{HarnessError, Result};
use crate::grid::BetaGrid;
use crate::records::{GridRecord, SweepRecord};

/// Optimiser settings shared by all points of a sweep. `de.seed` is the
/// master seed from which per-point seeds are derived.
#[derive(Debug, Clone, Default)]
pub struct SweepSettings {
    pub de: DeConfig,
    /// Worker threads; `None` uses the available parallelism.
    pub workers: Option<usize>,
}

impl SweepSettings {
    pub fn master_seed(&self) -> u64 {
        self.de.seed
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        let mut builder = rayon::ThreadPoolBuilder::new();
        if let Some(n) = self.workers {
            if n == 0 {
                return Err(HarnessError::Config("worker count must be positive".into()));
            }
            builder = builder.num_threads(n);
        }
        builder
            .build()
            .map_err(|e| HarnessError::Config(format!("cannot start worker pool: {e}")))
    }

    fn run<J, T, F>(&self, jobs: &[J], f: F) -> Result<Vec<T>>
    where
        J: Sync,
        T: Send,
        F: Fn(&J) -> T + Sync + Send,
    {
        // `collect` on an indexed parallel iterator keeps job order.
        Ok(self.pool()?.install(|| jobs.par_iter().map(f).collect()))
    }
}

/// Optimises one point and scores it against the ideal state on subsystem A.
/// Failures yield a record with `cost_value = +inf` and NaN metrics.
pub fn run_point(cost: CostKind, g: f64, beta: f64, seed: u64, de: &DeConfig) -> SweepRecord {
    let failed = SweepRecord {
        beta,
        g,
        cost_kind: cost,
        angles: VariationalAngles::new(0.0, 0.0, 0.0, 0.0),
        cost_value: f64::INFINITY,
        fidelity: f64::NAN,
        trace_distance: f64::NAN,
        seed,
    };
    let attempt = || -> tfd_core::Result<SweepRecord> {
        let params = ModelParams::new(g, beta)?;
        let optimum = optimize_tfd(cost, params, &de.clone().with_seed(seed))?;
        let target = target_tfd(&params)?;
        let proximity = subsystem_proximity(&target, &evolve_ansatz(&optimum.angles))?;
        Ok(SweepRecord {
            angles: optimum.angles,
            cost_value: optimum.result.best_cost,
            fidelity: proximity.fidelity,
            trace_distance: proximity.trace_distance,
            ..failed.clone()
        })
    };
    attempt().unwrap_or(failed)
}


/// One record per inverse temperature, in grid order.
pub fn sweep_beta(cost: CostKind, g: f64, grid: &BetaGrid, settings: &SweepSettings) -> Result<Vec<SweepRecord>> {
    sweep_g(&[cost], &[g], grid, settings)
}

/// Cartesian product over costs, field strengths and inverse temperatures,
/// ordered by cost, then `g` in the given order, then `beta`.
pub fn sweep_g(
    costs: &[CostKind],
    g_values: &[f64],
    grid: &BetaGrid,
    settings: &SweepSettings,
) -> Result<Vec<SweepRecord>> {
    let master = settings.master_seed();
    let jobs: Vec<(CostKind, usize, usize, f64)> = costs
        .iter()
        .flat_map(|&c| (0..g_values.len()).flat_map(move |gi| grid.points().map(move |(bi, b)| (c, gi, bi, b))))
        .collect();
    settings.run(&jobs, |&(cost, gi, bi, beta)| {
        let seed = derive_seed(master, bi, gi, cost.tag());
        run_point(cost, g_values[gi], beta, seed, &settings.de)
    })
}

/// Values `start, start + step, ...` up to `end` inclusive.
pub fn range_values(start: f64, end: f64, step: f64) -> Result<Vec<f64>> {
    if !(start.is_finite() && end.is_finite() && step.is_finite()) || end < start {
        return Err(HarnessError::Config(format!("bad range [{start}, {end}]")));
    }
    if start == end {
        return Ok(vec![start]);
    }
    if step <= 0.0 {
        return Err(HarnessError::Config(format!("range step {step} must be positive")));
    }
    let n = ((end - start) / step + 1e-9).floor() as usize;
    // Rounding keeps on-grid values such as 1.48 exact enough to print cleanly.
    Ok((0..=n)
        .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
        .collect())
}

/// Centres of `n` equal cells covering `[lo, hi]`.
pub fn cell_centers(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let w = (hi - lo) / n as f64;
    (0..n).map(|k| lo + (k as f64 + 0.5) * w).collect()
}

pub const ZETA_WINDOW: (f64, f64) = (1.4, 1.9);
pub const TAU_WINDOW: (f64, f64) = (1.2, 1.7);
pub const ZETA_STEP: f64 = 0.025;
pub const TAU_STEP: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub struct ZetaTauSweep {
    /// Row-major over `zeta`, then `tau`.
    pub records: Vec<GridRecord>,
    pub argmin: GridRecord,
}

/// Optimises C1 at `g` for every `(zeta, tau)` pair and every `beta` in the
/// grid, and scores each pair with `|Xi|` summed over the grid. The
/// command-line default grid is [`BetaGrid::listed_temperatures`].
///
/// All pairs share per-`beta` seeds, so differences across the surface come
/// from the cost function rather than from optimiser noise.
pub fn sweep_zeta_tau(
    zetas: &[f64],
    taus: &[f64],
    g: f64,
    grid: &BetaGrid,
    settings: &SweepSettings,
) -> Result<ZetaTauSweep> {
    if zetas.is_empty() || taus.is_empty() {
        return Err(HarnessError::Config("empty (zeta, tau) range".into()));
    }
    let master = settings.master_seed();
    let targets: Vec<StateVector> = grid
        .values()
        .iter()
        .map(|&b| target_tfd(&ModelParams::new(g, b)?))
        .collect::<tfd_core::Result<_>>()?;
    let jobs: Vec<(f64, f64, usize)> = zetas
        .iter()
        .flat_map(|&z| taus.iter().flat_map(move |&t| (0..grid.len()).map(move |k| (z, t, k))))
        .collect();
    let states = settings.run(&jobs, |&(zeta, tau, k)| {
        let beta = grid.values()[k];
        let cost = CostKind::C1 { zeta, tau };
        let seed = derive_seed(master, grid.seed_index(k), 0, cost.tag());
        let params = ModelParams::new(g, beta)?;
        let optimum = optimize_tfd(cost, params, &settings.de.clone().with_seed(seed))?;
        Ok(evolve_ansatz(&optimum.angles))
    });
    let states: Vec<StateVector> = states?.into_iter().collect::<tfd_core::Result<_>>()?;
    let records: Vec<GridRecord> = jobs
        .chunks(grid.len())
        .zip(states.chunks(grid.len()))
        .map(|(js, generated)| GridRecord {
            zeta: js[0].0,
            tau: js[0].1,
            xi_abs: xi_metric(targets.iter().zip(generated)).abs(),
        })
        .collect();
    let argmin = *records
        .iter()
        .min_by(|a, b| a.xi_abs.total_cmp(&b.xi_abs))
        .expect("non-empty grid");
    Ok(ZetaTauSweep { records, argmin })
}

/// `(1 - F_engineered) / (1 - F_baseline)` at matching points: the fraction
/// of the baseline's infidelity that remains. A value of 0.2 is an 80%
/// reduction in relative error.
pub fn infidelity_ratio(engineered: &SweepRecord, baseline: &SweepRecord) -> f64 {
    (1.0 - engineered.fidelity) / (1.0 - baseline.fidelity)
}

/// Infidelity ratios of two sweeps, matched by `(beta, g)`.
pub fn infidelity_ratios(engineered: &[SweepRecord], baseline: &[SweepRecord]) -> Vec<(f64, f64)> {
    engineered
        .iter()
        .filter_map(|e| {
            baseline
                .iter()
                .find(|b| b.beta == e.beta && b.g == e.g)
                .map(|b| (e.beta, infidelity_ratio(e, b)))
        })
        .collect()
}

/// Mean of a per-record metric over records that did not fail.
pub fn mean_of(records: &[SweepRecord], metric: impl Fn(&SweepRecord) -> f64) -> f64 {
    let ok: Vec<f64> = records.iter().filter(|r| !r.failed()).map(metric).collect();
    ok.iter().sum::<f64>() / ok.len() as f64
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn range_includes_endpoint_and_expected_optimum() {
        let z = range_values(1.4, 1.9, ZETA_STEP).unwrap();
        let t = range_values(1.2, 1.7, TAU_STEP).unwrap();
        assert_eq!(z.len(), 21);
        assert_eq!(t.len(), 26);
        assert!(z.contains(&1.6));
        assert!(t.contains(&1.48));
        assert_eq!(*z.last().unwrap(), 1.9);
        assert_eq!(range_values(1.5, 1.5, 0.0).unwrap(), vec![1.5]);
        assert!(range_values(2.0, 1.0, 0.1).is_err());
        assert!(range_values(1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn cell_centres() {
        let c = cell_centers(0.0, 1.0, 4);
        assert_eq!(c, vec![0.125, 0.375, 0.625, 0.875]);
    }

    #[test]
    fn invalid_point_is_flagged_not_fatal() {
        let r = run_point(CostKind::C0, 1.0, -1.0, 3, &DeConfig::default());
        assert!(r.failed());
        assert!(r.fidelity.is_nan());
    }

    #[test]
    fn ratio_of_matching_points() {
        let de = DeConfig {
            max_generations: 5,
            ..DeConfig::default()
        };
        let a = run_point(CostKind::C0, 1.0, 0.5, 1, &de);
        let mut b = a.clone();
        b.fidelity = 1.0 - 2.0 * (1.0 - a.fidelity);
        assert!((infidelity_ratio(&a, &b) - 0.5).abs() < 1e-12);
        assert_eq!(infidelity_ratios(std::slice::from_ref(&a), &[b]), vec![(0.5, 0.5)]);
    }
}
