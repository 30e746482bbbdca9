//! Proximity between ideal and generated states, measured on subsystem A.

use crate::error::{Error, Result};
use crate::qcore::{check_psd, hermitian_eig, matrix_sqrt, DenseMatrix, SpectralClamp, StateVector};
use crate::tfim::{observable_catalog, reduced_density};

fn check_pair(rho: &DenseMatrix, sigma: &DenseMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    rho.ensure_hermitian()?;
    sigma.ensure_hermitian()
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2`.
pub fn fidelity(rho: &DenseMatrix, sigma: &DenseMatrix) -> Result<f64> {
    check_pair(rho, sigma)?;
    let clamp = SpectralClamp::default();
    let root = matrix_sqrt(rho, &clamp)?;
    let inner = root.matmul(sigma).matmul(&root);
    let sym = (&inner + &inner.adjoint()).scale(0.5);
    let eig = hermitian_eig(&sym)?;
    check_psd(&eig.eigenvalues, &clamp)?;
    let tr: f64 = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum();
    Ok((tr * tr).clamp(0.0, 1.0))
}

/// `(1/2) sum |eigenvalues(rho - sigma)|`.
pub fn trace_distance(rho: &DenseMatrix, sigma: &DenseMatrix) -> Result<f64> {
    check_pair(rho, sigma)?;
    let eig = hermitian_eig(&(rho - sigma))?;
    let d = 0.5 * eig.eigenvalues.iter().map(|l| l.abs()).sum::<f64>();
    Ok(d.clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProximityPair {
    pub fidelity: f64,
    pub trace_distance: f64,
}

impl ProximityPair {
    pub fn between(rho: &DenseMatrix, sigma: &DenseMatrix) -> Result<Self> {
        Ok(Self {
            fidelity: fidelity(rho, sigma)?,
            trace_distance: trace_distance(rho, sigma)?,
        })
    }

    /// How far the pair falls outside `1 - sqrt(F) <= T <= sqrt(1 - F)`
    /// (zero when the inequalities hold).
    pub fn fuchs_van_de_graaf_violation(&self) -> f64 {
        let root = self.fidelity.sqrt();
        let lower = (1.0 - root) - self.trace_distance;
        let upper = self.trace_distance - (1.0 - self.fidelity).max(0.0).sqrt();
        lower.max(upper).max(0.0)
    }
}

/// Fidelity and trace distance between the reduced states of subsystem A.
pub fn subsystem_proximity(ideal: &StateVector, generated: &StateVector) -> Result<ProximityPair> {
    ProximityPair::between(&reduced_density(ideal), &reduced_density(generated))
}

/// Full-register variant; for pure states `F = |<a|b>|^2` and `T = sqrt(1 - F)`.
pub fn full_system_proximity(ideal: &StateVector, generated: &StateVector) -> ProximityPair {
    let f = ideal.inner(generated).norm_sqr().clamp(0.0, 1.0);
    ProximityPair {
        fidelity: f,
        trace_distance: (1.0 - f).sqrt(),
    }
}

/// Sum over state pairs and over the fifteen catalogue observables of
/// `|<ideal|o|ideal> - <generated|o|generated>|`.
pub fn xi_metric<'a, I>(pairs: I) -> f64
where
    I: IntoIterator<Item = (&'a StateVector, &'a StateVector)>,
{
    let catalog = observable_catalog();
    pairs
        .into_iter()
        .map(|(ideal, generated)| {
            catalog
                .iter()
                .map(|o| (o.compiled.expectation(ideal) - o.compiled.expectation(generated)).abs())
                .sum::<f64>()
        })
        .sum()
}
