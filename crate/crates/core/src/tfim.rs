//! Two-site transverse-field Ising model on a doubled register.
//!
//! Subsystem A holds qubits `A1, A2`, subsystem B holds `B1, B2`. Each
//! subsystem carries `ZZ + g (X1 + X2)`; the two are coupled by
//! `XX_AB + ZZ_AB = X_A1 X_B1 + X_A2 X_B2 + Z_A1 Z_B1 + Z_A2 Z_B2`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qcore::{
    hermitian_eig, kron, pauli_x, pauli_y, pauli_z, DenseMatrix, StateVector,
    FULL_DIM, SUB_DIM,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Qubit {
    A1,
    A2,
    B1,
    B2,
}

impl Qubit {
    pub const ALL: [Qubit; 4] = [Qubit::A1, Qubit::A2, Qubit::B1, Qubit::B2];

    /// Tensor-factor position, A1 first (most significant bit of the basis index).
    pub fn position(self) -> usize {
        self as usize
    }

    /// Bit mask of this qubit inside a basis index.
    pub fn mask(self) -> usize {
        1 << (3 - self.position())
    }
}

impl fmt::Display for Qubit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    fn matrix(self) -> DenseMatrix {
        match self {
            Axis::X => pauli_x(),
            Axis::Y => pauli_y(),
            Axis::Z => pauli_z(),
        }
    }
}

/// A real multiple of a tensor product of single-qubit Paulis.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliString {
    coefficient: f64,
    factors: Vec<(Qubit, Axis)>,
}

impl PauliString {
    pub fn new(coefficient: f64, factors: &[(Qubit, Axis)]) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(Error::InvalidPauliString(format!(
                "non-finite coefficient {coefficient}"
            )));
        }
        let mut factors = factors.to_vec();
        factors.sort_by_key(|(q, _)| *q);
        if let Some(w) = factors.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidPauliString(format!(
                "qubit {} appears more than once",
                w[0].0
            )));
        }
        Ok(Self {
            coefficient,
            factors,
        })
    }

    pub fn identity(coefficient: f64) -> Self {
        Self {
            coefficient,
            factors: Vec::new(),
        }
    }

    fn single(q: Qubit, axis: Axis) -> Self {
        Self::new(1.0, &[(q, axis)]).expect("single factor")
    }

    fn pair(p: Qubit, q: Qubit, axis: Axis) -> Self {
        Self::new(1.0, &[(p, axis), (q, axis)]).expect("distinct qubits")
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn factors(&self) -> &[(Qubit, Axis)] {
        &self.factors
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            coefficient: self.coefficient * factor,
            factors: self.factors.clone(),
        }
    }

    pub fn to_matrix(&self) -> DenseMatrix {
        let mut local = [DenseMatrix::identity(2), DenseMatrix::identity(2), DenseMatrix::identity(2), DenseMatrix::identity(2)];
        for &(q, axis) in &self.factors {
            local[q.position()] = axis.matrix();
        }
        let full = kron(&kron(&local[0], &local[1]), &kron(&local[2], &local[3]));
        full.scale(self.coefficient)
    }

    /// `<state|P|state>` evaluated by bit manipulation on the amplitudes,
    /// without building the 16x16 matrix.
    pub fn expectation(&self, state: &StateVector) -> f64 {
        self.compile().expectation(state)
    }

    pub fn compile(&self) -> CompiledPauli {
        let mut flip = 0usize;
        let mut z_mask = 0usize;
        let mut y_mask = 0usize;
        for &(q, axis) in &self.factors {
            match axis {
                Axis::X => flip |= q.mask(),
                Axis::Y => {
                    flip |= q.mask();
                    y_mask |= q.mask();
                }
                Axis::Z => z_mask |= q.mask(),
            }
        }
        // Y|b> = i (-1)^b |1-b>: each Y adds a factor i and a Z-like sign.
        let phase = match y_mask.count_ones() % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::new(0.0, 1.0),
            2 => Complex64::new(-1.0, 0.0),
            _ => Complex64::new(0.0, -1.0),
        };
        CompiledPauli {
            flip,
            sign_mask: z_mask | y_mask,
            phase: phase * self.coefficient,
        }
    }
}

/// A Pauli string reduced to bit masks: `P|i> = phase (-1)^{|i & sign_mask|} |i ^ flip>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompiledPauli {
    flip: usize,
    sign_mask: usize,
    phase: Complex64,
}

impl CompiledPauli {
    #[inline]
    pub fn expectation(&self, state: &StateVector) -> f64 {
        let psi = state.amplitudes();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, amp) in psi.iter().enumerate() {
            let term = psi[i ^ self.flip].conj() * amp;
            if (i & self.sign_mask).count_ones() % 2 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        (self.phase * acc).re
    }

    /// `psi <- exp(i angle P) psi = cos(angle) psi + i sin(angle) P psi`,
    /// valid for unit-coefficient strings.
    pub fn rotate(&self, angle: f64, psi: &mut [Complex64; FULL_DIM]) {
        debug_assert!((self.phase.norm() - 1.0).abs() < 1e-15, "rotation needs a unit coefficient");
        let (sin, cos) = angle.sin_cos();
        let factor = Complex64::new(0.0, sin) * self.phase;
        let old = *psi;
        for (j, out) in psi.iter_mut().enumerate() {
            // (P psi)_j = phase (-1)^{|(j ^ flip) & sign_mask|} psi_{j ^ flip}
            let src = j ^ self.flip;
            let mut moved = factor * old[src];
            if (src & self.sign_mask).count_ones() % 2 == 1 {
                moved = -moved;
            }
            *out = old[j] * cos + moved;
        }
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.coefficient)?;
        for (q, a) in &self.factors {
            write!(f, " {a:?}_{q}")?;
        }
        Ok(())
    }
}

/// Sum of Pauli strings.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PauliSum {
    terms: Vec<PauliString>,
}

impl PauliSum {
    pub fn new(terms: Vec<PauliString>) -> Self {
        Self { terms }
    }

    pub fn terms(&self) -> &[PauliString] {
        &self.terms
    }

    pub fn to_matrix(&self) -> DenseMatrix {
        self.terms
            .iter()
            .fold(DenseMatrix::zeros(FULL_DIM), |acc, t| &acc + &t.to_matrix())
    }

    pub fn expectation(&self, state: &StateVector) -> f64 {
        self.terms.iter().map(|t| t.expectation(state)).sum()
    }

    pub fn compile(&self) -> CompiledSum {
        CompiledSum(self.terms.iter().map(PauliString::compile).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompiledSum(Vec<CompiledPauli>);

impl CompiledSum {
    #[inline]
    pub fn expectation(&self, state: &StateVector) -> f64 {
        self.0.iter().map(|t| t.expectation(state)).sum()
    }
}

/// Sum of one Pauli axis over both qubits of a subsystem, e.g. `X_A = X_A1 + X_A2`.
pub fn subsystem_field(axis: Axis, pair: [Qubit; 2]) -> PauliSum {
    PauliSum::new(pair.iter().map(|&q| PauliString::single(q, axis)).collect())
}

/// Intra-subsystem coupling, e.g. `ZZ_A = Z_A1 Z_A2`.
pub fn subsystem_coupling(axis: Axis, pair: [Qubit; 2]) -> PauliSum {
    PauliSum::new(vec![PauliString::pair(pair[0], pair[1], axis)])
}

/// Inter-system coupling, e.g. `ZZ_AB = Z_A1 Z_B1 + Z_A2 Z_B2`.
pub fn inter_coupling(axis: Axis) -> PauliSum {
    PauliSum::new(vec![
        PauliString::pair(Qubit::A1, Qubit::B1, axis),
        PauliString::pair(Qubit::A2, Qubit::B2, axis),
    ])
}

pub const SUBSYSTEM_A: [Qubit; 2] = [Qubit::A1, Qubit::A2];
pub const SUBSYSTEM_B: [Qubit; 2] = [Qubit::B1, Qubit::B2];

/// A named observable from the comparison set.
#[derive(Debug, Clone)]
pub struct Observable {
    pub name: &'static str,
    pub terms: PauliSum,
    pub compiled: CompiledSum,
    pub matrix: DenseMatrix,
}

/// The fifteen observables compared between ideal and generated states.
pub fn observable_catalog() -> &'static [Observable] {
    static CATALOG: OnceLock<Vec<Observable>> = OnceLock::new();
    CATALOG.get_or_init(|| {
        use Axis::*;
        let entries: [(&'static str, PauliSum); 15] = [
            ("X_A", subsystem_field(X, SUBSYSTEM_A)),
            ("X_B", subsystem_field(X, SUBSYSTEM_B)),
            ("Y_A", subsystem_field(Y, SUBSYSTEM_A)),
            ("Y_B", subsystem_field(Y, SUBSYSTEM_B)),
            ("Z_A", subsystem_field(Z, SUBSYSTEM_A)),
            ("Z_B", subsystem_field(Z, SUBSYSTEM_B)),
            ("XX_A", subsystem_coupling(X, SUBSYSTEM_A)),
            ("XX_B", subsystem_coupling(X, SUBSYSTEM_B)),
            ("YY_A", subsystem_coupling(Y, SUBSYSTEM_A)),
            ("YY_B", subsystem_coupling(Y, SUBSYSTEM_B)),
            ("ZZ_A", subsystem_coupling(Z, SUBSYSTEM_A)),
            ("ZZ_B", subsystem_coupling(Z, SUBSYSTEM_B)),
            ("XX_AB", inter_coupling(X)),
            ("YY_AB", inter_coupling(Y)),
            ("ZZ_AB", inter_coupling(Z)),
        ];
        entries
            .into_iter()
            .map(|(name, terms)| Observable {
                name,
                matrix: terms.to_matrix(),
                compiled: terms.compile(),
                terms,
            })
            .collect()
    })
}

pub fn observable(name: &str) -> Option<&'static Observable> {
    observable_catalog().iter().find(|o| o.name == name)
}

/// Transverse field `g` and inverse temperature `beta` (natural units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub g: f64,
    pub beta: f64,
}

impl ModelParams {
    pub fn new(g: f64, beta: f64) -> Result<Self> {
        if !(beta.is_finite() && beta >= 0.0) {
            return Err(Error::InvalidBeta(beta));
        }
        if !g.is_finite() {
            return Err(Error::InvalidConfig(format!("transverse field g = {g} is not finite")));
        }
        Ok(Self { g, beta })
    }

    /// `T = 1 / beta`. The infinite-temperature point `beta = 0` is rejected.
    pub fn temperature(&self) -> Result<f64> {
        if self.beta > 0.0 && self.beta.is_finite() {
            Ok(1.0 / self.beta)
        } else {
            Err(Error::InvalidBeta(self.beta))
        }
    }
}

/// The four angles of the single-step circuit.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VariationalAngles {
    pub gamma1: f64,
    pub gamma2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

/// Inter-system angles that make the generated density matrix real.
pub const SYMMETRIZED_ALPHA1: f64 = PI / 8.0;
pub const SYMMETRIZED_ALPHA2: f64 = PI / 4.0;

impl VariationalAngles {
    pub fn new(gamma1: f64, gamma2: f64, alpha1: f64, alpha2: f64) -> Self {
        Self {
            gamma1,
            gamma2,
            alpha1,
            alpha2,
        }
    }

    /// Angles with the inter-system pair pinned to `(pi/8, pi/4)`.
    pub fn symmetrized(gamma1: f64, gamma2: f64) -> Self {
        Self::new(gamma1, gamma2, SYMMETRIZED_ALPHA1, SYMMETRIZED_ALPHA2)
    }

    /// Order: `[gamma1, gamma2, alpha1, alpha2]`.
    pub fn to_array(&self) -> [f64; 4] {
        [self.gamma1, self.gamma2, self.alpha1, self.alpha2]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }
}

/// Every Hamiltonian term of the model at a given transverse field.
#[derive(Debug, Clone)]
pub struct HamiltonianSet {
    pub g: f64,
    pub h_a: DenseMatrix,
    pub h_b: DenseMatrix,
    pub h_ab: DenseMatrix,
    /// `X_A + X_B`, generator of the first circuit layer.
    pub x_gen: DenseMatrix,
    /// `ZZ_A + ZZ_B`, generator of the second circuit layer.
    pub zz_gen: DenseMatrix,
    pub xx_ab: DenseMatrix,
    pub zz_ab: DenseMatrix,
    /// `Z Z + g (X I + I X)` on the two qubits of one subsystem.
    pub h_a_sub: DenseMatrix,
}

/// Two-qubit transverse-field Ising Hamiltonian acting on one subsystem.
pub fn subsystem_hamiltonian(g: f64) -> DenseMatrix {
    let i2 = DenseMatrix::identity(2);
    let zz = kron(&pauli_z(), &pauli_z());
    let field = &kron(&pauli_x(), &i2) + &kron(&i2, &pauli_x());
    &zz + &field.scale(g)
}

pub fn build_hamiltonians(g: f64) -> HamiltonianSet {
    use Axis::*;
    let x_a = subsystem_field(X, SUBSYSTEM_A).to_matrix();
    let x_b = subsystem_field(X, SUBSYSTEM_B).to_matrix();
    let zz_a = subsystem_coupling(Z, SUBSYSTEM_A).to_matrix();
    let zz_b = subsystem_coupling(Z, SUBSYSTEM_B).to_matrix();
    let xx_ab = inter_coupling(X).to_matrix();
    let zz_ab = inter_coupling(Z).to_matrix();
    HamiltonianSet {
        g,
        h_a: &zz_a + &x_a.scale(g),
        h_b: &zz_b + &x_b.scale(g),
        h_ab: &xx_ab + &zz_ab,
        x_gen: &x_a + &x_b,
        zz_gen: &zz_a + &zz_b,
        xx_ab,
        zz_ab,
        h_a_sub: subsystem_hamiltonian(g),
    }
}

/// `(|0000> + |0101> + |1010> + |1111>) / 2`: each `A_i` maximally entangled with `B_i`.
pub fn initial_state() -> StateVector {
    let mut amps = [Complex64::new(0.0, 0.0); FULL_DIM];
    for i in [0b0000, 0b0101, 0b1010, 0b1111] {
        amps[i] = Complex64::new(0.5, 0.0);
    }
    StateVector::from_amplitudes(amps)
}

/// Ideal thermofield double `exp(-beta/2 H_A) |xi(0)>`, normalised.
///
/// The spectrum of `H_A` is shifted by its ground energy before
/// exponentiation; the shift is a scalar factor removed by normalisation.
pub fn target_tfd(params: &ModelParams) -> Result<StateVector> {
    if !(params.beta.is_finite() && params.beta >= 0.0) {
        return Err(Error::InvalidBeta(params.beta));
    }
    let h_a = build_hamiltonians(params.g).h_a;
    let eig = hermitian_eig(&h_a)?;
    let ground = eig.eigenvalues[0];
    let half_beta = params.beta / 2.0;
    let xi0 = initial_state();
    let mut coords = eig.to_eigenbasis(xi0.amplitudes());
    for (c, &l) in coords.iter_mut().zip(&eig.eigenvalues) {
        *c *= (-half_beta * (l - ground)).exp();
    }
    let state = StateVector::from_slice(&eig.from_eigenbasis(&coords))?;
    Ok(state.normalized())
}

/// `|state><state|`.
pub fn density_of(state: &StateVector) -> DenseMatrix {
    DenseMatrix::outer(state.amplitudes(), state.amplitudes())
}

/// The single-step circuit. Each generator is a sum of commuting Pauli
/// strings `P` with `P^2 = 1`, so its exponential is the product of
/// `cos(t) + i sin(t) P` over the terms, applied in place.
#[derive(Debug, Clone)]
pub struct AnsatzCircuit {
    layers: [Vec<CompiledPauli>; 4],
}

impl Default for AnsatzCircuit {
    fn default() -> Self {
        Self::new()
    }
}

impl AnsatzCircuit {
    pub fn new() -> Self {
        let both = |axis, build: fn(Axis, [Qubit; 2]) -> PauliSum| {
            let mut terms = build(axis, SUBSYSTEM_A).terms().to_vec();
            terms.extend_from_slice(build(axis, SUBSYSTEM_B).terms());
            PauliSum::new(terms)
        };
        let generators = [
            both(Axis::X, subsystem_field),
            both(Axis::Z, subsystem_coupling),
            inter_coupling(Axis::X),
            inter_coupling(Axis::Z),
        ];
        Self {
            layers: generators.map(|g| g.terms().iter().map(PauliString::compile).collect()),
        }
    }

    /// Process-wide instance.
    pub fn shared() -> &'static AnsatzCircuit {
        static CIRCUIT: OnceLock<AnsatzCircuit> = OnceLock::new();
        CIRCUIT.get_or_init(AnsatzCircuit::new)
    }

    /// Applies `exp(i g1 (X_A+X_B))`, `exp(i g2 (ZZ_A+ZZ_B))`,
    /// `exp(i a1 XX_AB)`, `exp(i a2 ZZ_AB)` to the initial Bell-pair state,
    /// in that order.
    pub fn evolve(&self, angles: &VariationalAngles) -> StateVector {
        let mut psi = *initial_state().amplitudes();
        for (layer, angle) in self.layers.iter().zip(angles.to_array()) {
            if angle == 0.0 {
                continue;
            }
            for term in layer {
                term.rotate(angle, &mut psi);
            }
        }
        StateVector::from_amplitudes(psi)
    }
}

/// [`AnsatzCircuit::evolve`] on the shared circuit.
pub fn evolve_ansatz(angles: &VariationalAngles) -> StateVector {
    AnsatzCircuit::shared().evolve(angles)
}

/// Reduced state of subsystem A for a pure state of the full register.
pub fn reduced_density(state: &StateVector) -> DenseMatrix {
    let psi = state.amplitudes();
    let dim_b = FULL_DIM / SUB_DIM;
    let mut out = DenseMatrix::zeros(SUB_DIM);
    for a in 0..SUB_DIM {
        for a2 in 0..SUB_DIM {
            out[(a, a2)] = (0..dim_b)
                .map(|b| psi[a * dim_b + b] * psi[a2 * dim_b + b].conj())
                .sum();
        }
    }
    out
}
