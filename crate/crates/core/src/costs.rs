//! Cost functions steering the circuit angles towards the thermofield double.
//!
//! * [`CostKind::Infidelity`]: `1 - |<xi(beta)|psi>|^2`, needs the full target wavefunction.
//! * [`CostKind::FreeEnergy`]: `Tr[s H] + T Tr[s log s]` on the reduced state `s` of A.
//! * [`CostKind::C0`]: `<H_A + H_B - T H_AB>`, built from measurable correlators.
//! * [`CostKind::C1`]: `<X_A + X_B + zeta (ZZ_A + ZZ_B) - T^tau (ZZ_AB + XX_AB)>`.
//! * [`CostKind::C2`]: squared mismatch of the density-matrix entries `(0,5)`,
//!   `(1,5)` and `(5,5)`, with the generated entries expressed through four
//!   correlators. Only valid for circuits with `alpha = (pi/8, pi/4)`.
//!
//! In the closed forms for the generated entries, `<X_A>` denotes the
//! two-qubit sum `<X_A1 + X_A2>`; the single-qubit reading does not reproduce
//! the `(1,5)` entry of the generated density matrix.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::qcore::{expectation_unchecked, hermitian_eig, DenseMatrix, StateVector, DEFAULT_LOG_FLOOR};
use crate::tfim::{
    build_hamiltonians, inter_coupling, reduced_density, subsystem_coupling, subsystem_field,
    target_tfd, Axis, CompiledSum, ModelParams, SUBSYSTEM_A, SUBSYSTEM_B,
};

pub const DEFAULT_ZETA: f64 = 1.6;
pub const DEFAULT_TAU: f64 = 1.48;
/// `|<X_A>|` at or below this makes the `(1,5)` closed form undefined.
pub const DEFAULT_DENOMINATOR_GUARD: f64 = 1e-9;
/// Above this inverse temperature the target closed forms are evaluated with
/// the dominant exponential factored out.
pub const STABLE_BETA_THRESHOLD: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CostKind {
    Infidelity,
    FreeEnergy,
    C0,
    C1 { zeta: f64, tau: f64 },
    C2,
}

impl CostKind {
    pub fn c1_default() -> Self {
        CostKind::C1 {
            zeta: DEFAULT_ZETA,
            tau: DEFAULT_TAU,
        }
    }

    /// Command-line spelling.
    pub fn name(&self) -> &'static str {
        match self {
            CostKind::Infidelity => "infidelity",
            CostKind::FreeEnergy => "free-energy",
            CostKind::C0 => "c0",
            CostKind::C1 { .. } => "c1",
            CostKind::C2 => "c2",
        }
    }

    /// Stable small integer used for seed derivation and canonical ordering.
    pub fn tag(&self) -> u64 {
        match self {
            CostKind::Infidelity => 0,
            CostKind::FreeEnergy => 1,
            CostKind::C0 => 2,
            CostKind::C1 { .. } => 3,
            CostKind::C2 => 4,
        }
    }

    /// Whether the optimiser varies `alpha` (false for C2, which pins it).
    pub fn optimizes_alpha(&self) -> bool {
        !matches!(self, CostKind::C2)
    }

    pub fn requires_positive_beta(&self) -> bool {
        !matches!(self, CostKind::Infidelity)
    }
}

impl fmt::Display for CostKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CostKind {
    type Err = Error;

    /// Parses the command-line spelling; `c1` takes the default `(zeta, tau)`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "infidelity" => Ok(CostKind::Infidelity),
            "free-energy" | "free_energy" | "fa" => Ok(CostKind::FreeEnergy),
            "c0" => Ok(CostKind::C0),
            "c1" => Ok(CostKind::c1_default()),
            "c2" => Ok(CostKind::C2),
            other => Err(Error::InvalidConfig(format!("unknown cost function {other:?}"))),
        }
    }
}

/// Expectation values measured on an evolved state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelatorReadings {
    /// `<X_A1 + X_A2>`
    pub x_a: f64,
    /// `<Z_A1 Z_A2>`
    pub zz_a: f64,
    /// `<X_A1 X_B1 + X_A2 X_B2>`
    pub xx_ab: f64,
    /// `<Z_A1 Z_B1 + Z_A2 Z_B2>`
    pub zz_ab: f64,
}

impl CorrelatorReadings {
    pub fn measure(state: &StateVector) -> Self {
        let ops = correlators();
        Self {
            x_a: ops.x_a.expectation(state),
            zz_a: ops.zz_a.expectation(state),
            xx_ab: ops.xx_ab.expectation(state),
            zz_ab: ops.zz_ab.expectation(state),
        }
    }
}

struct Correlators {
    x_a: CompiledSum,
    x_b: CompiledSum,
    zz_a: CompiledSum,
    zz_b: CompiledSum,
    xx_ab: CompiledSum,
    zz_ab: CompiledSum,
}

fn correlators() -> &'static Correlators {
    static OPS: OnceLock<Correlators> = OnceLock::new();
    OPS.get_or_init(|| Correlators {
        x_a: subsystem_field(Axis::X, SUBSYSTEM_A).compile(),
        x_b: subsystem_field(Axis::X, SUBSYSTEM_B).compile(),
        zz_a: subsystem_coupling(Axis::Z, SUBSYSTEM_A).compile(),
        zz_b: subsystem_coupling(Axis::Z, SUBSYSTEM_B).compile(),
        xx_ab: inter_coupling(Axis::X).compile(),
        zz_ab: inter_coupling(Axis::Z).compile(),
    })
}

/// The three density-matrix entries `(0,5)`, `(1,5)`, `(5,5)` retained by C2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrunedElements {
    pub e05: f64,
    pub e15: f64,
    pub e55: f64,
}

impl PrunedElements {
    pub fn as_array(&self) -> [f64; 3] {
        [self.e05, self.e15, self.e55]
    }

    pub fn squared_distance(&self, other: &Self) -> f64 {
        self.as_array()
            .iter()
            .zip(other.as_array())
            .map(|(a, b)| (a - b).powi(2))
            .sum()
    }
}

pub fn cost_infidelity(state: &StateVector, target: &StateVector) -> f64 {
    (1.0 - target.inner(state).norm_sqr()).clamp(0.0, 1.0)
}

/// `Tr[s log s]` for a density matrix `s`, with `0 log 0 = 0`.
pub fn negentropy(reduced: &DenseMatrix) -> Result<f64> {
    let eig = hermitian_eig(reduced)?;
    Ok(eig
        .eigenvalues
        .iter()
        .map(|&l| l * l.max(DEFAULT_LOG_FLOOR).ln())
        .sum())
}

fn free_energy_with(state: &StateVector, h_sub: &DenseMatrix, temperature: f64) -> Result<f64> {
    let reduced = reduced_density(state);
    let energy = reduced.matmul(h_sub).trace().re;
    Ok(energy + temperature * negentropy(&reduced)?)
}

pub fn cost_free_energy(state: &StateVector, params: &ModelParams) -> Result<f64> {
    let t = params.temperature()?;
    free_energy_with(state, &build_hamiltonians(params.g).h_a_sub, t)
}

/// Subsystem-A energy from three correlators: `<ZZ_A> + g <X_A1> + g <X_A2>`.
pub fn subsystem_energy(state: &StateVector, g: f64) -> f64 {
    let ops = correlators();
    ops.zz_a.expectation(state) + g * ops.x_a.expectation(state)
}

/// All correlators entering C0 and C1 (both subsystems).
#[derive(Debug, Clone, Copy)]
struct FullReadings {
    x_a: f64,
    x_b: f64,
    zz_a: f64,
    zz_b: f64,
    xx_ab: f64,
    zz_ab: f64,
}

impl FullReadings {
    fn measure(state: &StateVector) -> Self {
        let ops = correlators();
        Self {
            x_a: ops.x_a.expectation(state),
            x_b: ops.x_b.expectation(state),
            zz_a: ops.zz_a.expectation(state),
            zz_b: ops.zz_b.expectation(state),
            xx_ab: ops.xx_ab.expectation(state),
            zz_ab: ops.zz_ab.expectation(state),
        }
    }
}

/// Correlator evaluation of `<H_A + H_B - T H_AB>`.
pub fn cost_c0(state: &StateVector, params: &ModelParams) -> Result<f64> {
    let t = params.temperature()?;
    let r = FullReadings::measure(state);
    Ok(r.zz_a + r.zz_b + params.g * (r.x_a + r.x_b) - t * (r.xx_ab + r.zz_ab))
}

/// Same as [`cost_c0`], through the dense 16x16 operator.
pub fn cost_c0_dense(state: &StateVector, params: &ModelParams) -> Result<f64> {
    let t = params.temperature()?;
    let h = build_hamiltonians(params.g);
    let op = &(&h.h_a + &h.h_b) - &h.h_ab.scale(t);
    Ok(expectation_unchecked(state, &op).re)
}

/// Correlator evaluation of the reweighted cost. Calibrated at `g = 1`.
pub fn cost_c1(state: &StateVector, params: &ModelParams, zeta: f64, tau: f64) -> Result<f64> {
    let t = params.temperature()?;
    let r = FullReadings::measure(state);
    Ok(r.x_a + r.x_b + zeta * (r.zz_a + r.zz_b) - t.powf(tau) * (r.zz_ab + r.xx_ab))
}

pub fn cost_c1_dense(state: &StateVector, params: &ModelParams, zeta: f64, tau: f64) -> Result<f64> {
    let t = params.temperature()?;
    let h = build_hamiltonians(params.g);
    let op = &(&h.x_gen + &h.zz_gen.scale(zeta)) - &h.h_ab.scale(t.powf(tau));
    Ok(expectation_unchecked(state, &op).re)
}

/// Hyperbolic terms of the target closed forms at half inverse temperature
/// `u = beta / 2` and `s = sqrt(4 g^2 + 1)`, each multiplied by `exp(-s u)`
/// (squared for the doubled arguments) when `scaled` is set.
struct Hyperbolics {
    sinh_su: f64,
    cosh_su: f64,
    cosh_2su: f64,
    sinh_u: f64,
    cosh_u: f64,
    cosh_2u: f64,
    /// Scale applied to the constant terms (`exp(-2 s u)` or 1).
    unit: f64,
}

impl Hyperbolics {
    fn direct(u: f64, s: f64) -> Self {
        Self {
            sinh_su: (s * u).sinh(),
            cosh_su: (s * u).cosh(),
            cosh_2su: (2.0 * s * u).cosh(),
            sinh_u: u.sinh(),
            cosh_u: u.cosh(),
            cosh_2u: (2.0 * u).cosh(),
            unit: 1.0,
        }
    }

    fn scaled(u: f64, s: f64) -> Self {
        let e = (-s * u).exp();
        let e2 = e * e;
        let up = ((1.0 - s) * u).exp();
        let down = (-(1.0 + s) * u).exp();
        Self {
            sinh_su: 0.5 * (1.0 - e2),
            cosh_su: 0.5 * (1.0 + e2),
            cosh_2su: 0.5 * (1.0 + e2 * e2),
            sinh_u: 0.5 * (up - down),
            cosh_u: 0.5 * (up + down),
            cosh_2u: 0.5 * (up * up + down * down),
            unit: e2,
        }
    }
}

fn pruned_from_hyperbolics(g: f64, s: f64, h: &Hyperbolics) -> PrunedElements {
    let g2 = g * g;
    let s2 = s * s;
    let partition = h.cosh_2su + h.cosh_2u;
    let e05 = ((3.0 * g2 + 1.0) * h.unit - s * h.sinh_u * h.sinh_su
        + g2 * h.cosh_2su
        + s2 * h.cosh_u * h.cosh_su)
        / (4.0 * s2 * partition);
    let e15 = -g * h.sinh_su * (h.sinh_su + s * (h.cosh_su + h.sinh_u + h.cosh_u))
        / (4.0 * s2 * partition);
    let e55 = (h.sinh_su / s + h.cosh_su + h.sinh_u + h.cosh_u).powi(2) / (8.0 * partition);
    PrunedElements { e05, e15, e55 }
}

/// Entries `(0,5)`, `(1,5)`, `(5,5)` of the ideal TFD density matrix, in closed form.
pub fn target_pruned_elements(params: &ModelParams) -> Result<PrunedElements> {
    if !(params.beta > 0.0 && params.beta.is_finite()) {
        return Err(Error::InvalidBeta(params.beta));
    }
    let g = params.g;
    let s = (4.0 * g * g + 1.0).sqrt();
    let u = params.beta / 2.0;
    let h = if params.beta > STABLE_BETA_THRESHOLD {
        Hyperbolics::scaled(u, s)
    } else {
        Hyperbolics::direct(u, s)
    };
    Ok(pruned_from_hyperbolics(g, s, &h))
}

/// Entries `(0,5)`, `(1,5)`, `(5,5)` of the generated density matrix from
/// correlators, valid when `alpha = (pi/8, pi/4)`.
pub fn generated_pruned_elements(readings: &CorrelatorReadings, guard: f64) -> Result<PrunedElements> {
    let CorrelatorReadings {
        x_a,
        zz_a,
        xx_ab,
        zz_ab,
    } = *readings;
    if x_a.abs() <= guard {
        return Err(Error::DegenerateDenominator { value: x_a.abs() });
    }
    let shifted = zz_ab + 2.0;
    let zz2 = zz_ab * zz_ab;
    let denom = 64.0 * (zz2 + 4.0);
    Ok(PrunedElements {
        e05: shifted * shifted * (4.0 * xx_ab + zz2 - 4.0) / denom,
        e15: shifted * (x_a * x_a * (zz2 + 4.0) + 4.0 * zz_a * (zz2 - 4.0)) / (denom * x_a),
        e55: shifted * shifted * (-8.0 * zz_a + zz2 + 4.0) / denom,
    })
}

/// `sum (r_i - s_i)^2` over the three retained entries.
pub fn cost_c2(state: &StateVector, params: &ModelParams) -> Result<f64> {
    let target = target_pruned_elements(params)?;
    c2_against(state, &target)
}

fn c2_against(state: &StateVector, target: &PrunedElements) -> Result<f64> {
    let generated = generated_pruned_elements(&CorrelatorReadings::measure(state), DEFAULT_DENOMINATOR_GUARD)?;
    Ok(target.squared_distance(&generated))
}

/// A cost function bound to fixed model parameters, with everything that
/// does not depend on the trial state precomputed.
#[derive(Debug, Clone)]
pub struct CostModel {
    kind: CostKind,
    params: ModelParams,
    prepared: Prepared,
}

// Built once per model and never moved in bulk, so the size spread is harmless.
#[allow(clippy::large_enum_variant)]
#[derive(Debug, Clone)]
enum Prepared {
    Infidelity { target: StateVector },
    FreeEnergy { h_sub: DenseMatrix, temperature: f64 },
    Correlator { temperature: f64 },
    Pruned { target: PrunedElements },
}

impl CostModel {
    pub fn new(kind: CostKind, params: ModelParams) -> Result<Self> {
        let prepared = match kind {
            CostKind::Infidelity => Prepared::Infidelity {
                target: target_tfd(&params)?,
            },
            CostKind::FreeEnergy => Prepared::FreeEnergy {
                h_sub: build_hamiltonians(params.g).h_a_sub,
                temperature: params.temperature()?,
            },
            CostKind::C0 | CostKind::C1 { .. } => Prepared::Correlator {
                temperature: params.temperature()?,
            },
            CostKind::C2 => Prepared::Pruned {
                target: target_pruned_elements(&params)?,
            },
        };
        Ok(Self {
            kind,
            params,
            prepared,
        })
    }

    pub fn kind(&self) -> CostKind {
        self.kind
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn evaluate(&self, state: &StateVector) -> Result<f64> {
        match (&self.prepared, self.kind) {
            (Prepared::Infidelity { target }, _) => Ok(cost_infidelity(state, target)),
            (Prepared::FreeEnergy { h_sub, temperature }, _) => {
                free_energy_with(state, h_sub, *temperature)
            }
            (Prepared::Correlator { temperature }, CostKind::C1 { zeta, tau }) => {
                let r = FullReadings::measure(state);
                Ok(r.x_a + r.x_b + zeta * (r.zz_a + r.zz_b)
                    - temperature.powf(tau) * (r.zz_ab + r.xx_ab))
            }
            (Prepared::Correlator { temperature }, _) => {
                let r = FullReadings::measure(state);
                Ok(r.zz_a + r.zz_b + self.params.g * (r.x_a + r.x_b)
                    - temperature * (r.xx_ab + r.zz_ab))
            }
            (Prepared::Pruned { target }, _) => c2_against(state, target),
        }
    }
}
