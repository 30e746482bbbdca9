//! Cross-checks of the closed forms, layouts and cost encodings against
//! independent computations, run by `tfd validate`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tfd_core::costs::{
    cost_c0, cost_c0_dense, cost_c1, cost_c1_dense, generated_pruned_elements, subsystem_energy,
    target_pruned_elements, CorrelatorReadings, DEFAULT_DENOMINATOR_GUARD,
};
use tfd_core::density_layout::DensityLayout;
use tfd_core::qcore::{expectation, FULL_DIM};
use tfd_core::tfim::{build_hamiltonians, reduced_density, subsystem_hamiltonian};
use tfd_core::{
    density_of, evolve_ansatz, minimize, optimize_tfd, target_tfd, CostKind, DeConfig, DenseMatrix,
    ModelParams, ProximityPair, StateVector, VariationalAngles,
};

use crate::records::SweepRecord;

#[derive(Debug, Clone, PartialEq)]
pub struct OracleCheck {
    pub name: &'static str,
    pub tolerance: f64,
    pub max_error: f64,
    pub samples: usize,
}

impl OracleCheck {
    pub fn passed(&self) -> bool {
        self.max_error <= self.tolerance
    }
}

impl fmt::Display for OracleCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} max error {:.3e} (tolerance {:.0e}, {} samples)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.name,
            self.max_error,
            self.tolerance,
            self.samples
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<OracleCheck>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(OracleCheck::passed)
    }

    pub fn check(&self, name: &str) -> Option<&OracleCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        let failed = self.checks.iter().filter(|c| !c.passed()).count();
        write!(f, "{} checks, {failed} failed", self.checks.len())
    }
}

fn max_over<I: IntoIterator<Item = f64>>(errors: I) -> (f64, usize) {
    errors
        .into_iter()
        .fold((0.0, 0), |(m, n), e| (if e.is_nan() { f64::INFINITY } else { m.max(e) }, n + 1))
}

fn check(name: &'static str, tolerance: f64, errors: impl IntoIterator<Item = f64>) -> OracleCheck {
    let (max_error, samples) = max_over(errors);
    OracleCheck {
        name,
        tolerance,
        max_error,
        samples,
    }
}

fn random_state(rng: &mut ChaCha8Rng) -> StateVector {
    let amps: Vec<Complex64> = (0..FULL_DIM)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    StateVector::from_slice(&amps).expect("16 amplitudes").normalized()
}

fn random_angles(rng: &mut ChaCha8Rng) -> VariationalAngles {
    VariationalAngles::new(
        rng.random_range(-PI..PI),
        rng.random_range(-PI..PI),
        rng.random_range(-PI..PI),
        rng.random_range(-PI..PI),
    )
}

/// Taylor series of `exp(a / 2^s)` with `s` chosen so the scaled norm is
/// below one half; squaring the result `s` times gives `exp(a)`.
fn scaled_taylor(a: &DenseMatrix) -> (DenseMatrix, u32) {
    let norm = a.entries().iter().map(|z| z.norm()).fold(0.0, f64::max) * a.dim() as f64;
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as u32 } else { 0 };
    let scaled = a.scale(0.5f64.powi(squarings as i32));
    let mut result = DenseMatrix::identity(a.dim());
    let mut term = DenseMatrix::identity(a.dim());
    for k in 1..=30 {
        term = term.matmul(&scaled).scale(1.0 / k as f64);
        result = &result + &term;
    }
    (result, squarings)
}

/// `exp(a)` by Taylor series with scaling and squaring; shares no code with
/// the eigendecomposition route.
pub fn taylor_expm(a: &DenseMatrix) -> DenseMatrix {
    let (mut result, squarings) = scaled_taylor(a);
    for _ in 0..squarings {
        result = result.matmul(&result);
    }
    result
}

/// `exp(-beta h) / Tr exp(-beta h)` by [`taylor_expm`]'s route, normalising
/// after every squaring so large `beta` cannot underflow.
pub fn gibbs_oracle(h: &DenseMatrix, beta: f64) -> DenseMatrix {
    let (mut result, squarings) = scaled_taylor(&h.scale(-beta));
    for _ in 0..squarings {
        result = result.matmul(&result);
        result = result.scale(1.0 / result.trace().re);
    }
    result.scale(1.0 / result.trace().re)
}

fn bit_identical(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
}

fn rastrigin(x: &[f64]) -> f64 {
    10.0 * x.len() as f64 + x.iter().map(|v| v * v - 10.0 * (2.0 * PI * v).cos()).sum::<f64>()
}

/// Runs every oracle. `sweep_records` are checked against the
/// Fuchs-van de Graaf inequalities; failed records are skipped.
pub fn validate_oracles(sweep_records: &[SweepRecord]) -> ValidationReport {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7fd);
    let mut checks = Vec::new();

    checks.push(check(
        "gibbs-reduction",
        1e-10,
        [0.1, 1.0, 10.0].iter().flat_map(|&beta| {
            [0.5, 1.0, 2.0].map(|g| {
                let p = ModelParams::new(g, beta).expect("valid params");
                let reduced = reduced_density(&target_tfd(&p).expect("target"));
                reduced.max_abs_diff(&gibbs_oracle(&subsystem_hamiltonian(g), beta))
            })
        }),
    ));

    checks.push(check(
        "target-closed-form",
        1e-9,
        [1e-3, 1e-1, 1.0, 10.0, 1e3].iter().flat_map(|&beta| {
            [-0.5, 1.0, 2.0, 5.0].map(|g| {
                let p = ModelParams::new(g, beta).expect("valid params");
                let rho = density_of(&target_tfd(&p).expect("target"));
                let r = target_pruned_elements(&p).expect("positive beta");
                (r.e05 - rho[(0, 5)].re)
                    .abs()
                    .max((r.e15 - rho[(1, 5)].re).abs())
                    .max((r.e55 - rho[(5, 5)].re).abs())
            })
        }),
    ));

    let symmetrized: Vec<StateVector> = (0..50)
        .map(|_| {
            evolve_ansatz(&VariationalAngles::symmetrized(
                rng.random_range(-PI..PI),
                rng.random_range(-PI..PI),
            ))
        })
        .collect();
    checks.push(check(
        "generated-closed-form",
        1e-9,
        symmetrized.iter().map(|s| {
            let sigma = density_of(s);
            match generated_pruned_elements(&CorrelatorReadings::measure(s), DEFAULT_DENOMINATOR_GUARD) {
                Ok(e) => (e.e05 - sigma[(0, 5)].re)
                    .abs()
                    .max((e.e15 - sigma[(1, 5)].re).abs())
                    .max((e.e55 - sigma[(5, 5)].re).abs()),
                Err(_) => 0.0,
            }
        }),
    ));

    let rho_layout = DensityLayout::rho();
    checks.push(check(
        "target-layout",
        1e-10,
        [0.0, 0.1, 1.0, 10.0, 100.0].iter().flat_map(|&beta| {
            let layout = &rho_layout;
            [-0.5, 1.0, 2.0].map(move |g| {
                let p = ModelParams::new(g, beta).expect("valid params");
                let rho = density_of(&target_tfd(&p).expect("target"));
                layout.max_violation(&rho).max(rho.max_abs_diff(&rho.adjoint()))
            })
        }),
    ));

    let sigma_layout = DensityLayout::sigma();
    let random_circuits: Vec<StateVector> = (0..100).map(|_| evolve_ansatz(&random_angles(&mut rng))).collect();
    checks.push(check(
        "generated-layout",
        1e-10,
        random_circuits.iter().map(|s| sigma_layout.max_violation(&density_of(s))),
    ));

    checks.push(check(
        "symmetrized-real",
        1e-10,
        symmetrized.iter().map(|s| {
            let sigma = density_of(s);
            let imag = sigma_layout
                .labels()
                .iter()
                .map(|&(r, c)| sigma[(r as usize, c as usize)].im.abs())
                .fold(0.0, f64::max);
            imag.max((sigma[(3, 5)] - sigma[(0, 6)]).norm())
        }),
    ));

    let random_states: Vec<StateVector> = (0..50).map(|_| random_state(&mut rng)).collect();
    checks.push(check(
        "three-correlator-energy",
        1e-12,
        random_states.iter().enumerate().map(|(k, s)| {
            let g = -2.0 + 0.1 * k as f64;
            let dense = expectation(s, &build_hamiltonians(g).h_a).expect("Hermitian");
            (dense - subsystem_energy(s, g)).abs()
        }),
    ));

    checks.push(check(
        "cost-dual-path",
        1e-12,
        random_states.iter().enumerate().map(|(k, s)| {
            let p = ModelParams::new(-1.0 + 0.07 * k as f64, 0.5 + 0.1 * k as f64).expect("valid params");
            let unit = ModelParams::new(1.0, p.beta).expect("valid params");
            let c0 = (cost_c0(s, &p).unwrap() - cost_c0_dense(s, &p).unwrap()).abs();
            let c1 = (cost_c1(s, &p, 1.6, 1.48).unwrap() - cost_c1_dense(s, &p, 1.6, 1.48).unwrap()).abs();
            let reduce = (cost_c1(s, &unit, 1.0, 1.0).unwrap() - cost_c0(s, &unit).unwrap()).abs();
            c0.max(c1).max(reduce)
        }),
    ));

    checks.push(check(
        "fuchs-van-de-graaf",
        1e-9,
        sweep_records.iter().filter(|r| !r.failed()).map(|r| {
            ProximityPair {
                fidelity: r.fidelity,
                trace_distance: r.trace_distance,
            }
            .fuchs_van_de_graaf_violation()
        }),
    ));

    let de = DeConfig::default().with_seed(11);
    let params = ModelParams::new(1.0, 0.6).expect("valid params");
    let det = (0..2)
        .map(|_| optimize_tfd(CostKind::c1_default(), params, &de).expect("optimiser runs"))
        .collect::<Vec<_>>();
    let box2 = DeConfig::default().with_bounds(vec![(-5.12, 5.12); 2]).with_seed(5);
    let ras = (0..2).map(|_| minimize(rastrigin, &box2).expect("valid config")).collect::<Vec<_>>();
    let same = |a: &tfd_core::OptimizationResult, b: &tfd_core::OptimizationResult| {
        bit_identical(&a.best_params, &b.best_params)
            && bit_identical(&a.history, &b.history)
            && a.evaluations == b.evaluations
    };
    checks.push(check(
        "de-determinism",
        0.0,
        [
            if same(&det[0].result, &det[1].result) { 0.0 } else { 1.0 },
            if same(&ras[0], &ras[1]) { 0.0 } else { 1.0 },
        ],
    ));

    let sphere = minimize(
        |x: &[f64]| x.iter().map(|v| v * v).sum(),
        &DeConfig::default().with_bounds(vec![(-5.0, 5.0); 4]).with_seed(3),
    )
    .expect("valid config");
    checks.push(check("de-sphere", 1e-10, [sphere.best_cost]));
    checks.push(check("de-rastrigin", 1e-8, [ras[0].best_cost]));

    ValidationReport { checks }
}
