//! Kicked top Floquet operators and stroboscopic evolution.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{DenseOperator, OperatorKind, StateVector};
use crate::spin::{rotation_y, twist_phases, SpinParams};

/// One kick: `U = exp(-i kappa J_z^2 / (2j)) exp(-i p J_y)` with unit period.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloquetSpec {
    pub spin: SpinParams,
    pub kappa: f64,
    pub p: f64,
}

impl FloquetSpec {
    /// Rotation angle defaults to `pi/2`.
    pub fn new(spin: SpinParams, kappa: f64) -> Self {
        Self {
            spin,
            kappa,
            p: PI / 2.0,
        }
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }
}

/// Floquet operator at `kappa = base.kappa + delta`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerturbedSpec {
    pub base: FloquetSpec,
    pub delta: f64,
}

pub fn build_floquet(spec: &FloquetSpec) -> DenseOperator {
    rotation_y(spec.spin, spec.p)
        .scale_rows(&twist_phases(spec.spin, spec.kappa))
        .with_kind(OperatorKind::Unitary)
}

pub fn build_perturbed(spec: &PerturbedSpec) -> DenseOperator {
    build_floquet(&FloquetSpec {
        kappa: spec.base.kappa + spec.delta,
        ..spec.base
    })
}

/// `U^n` by repeated squaring. No re-unitarization is applied.
pub fn matrix_power(u: &DenseOperator, n: u64) -> DenseOperator {
    let mut result: Option<DenseOperator> = None;
    let mut base = u.clone();
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => &r * &base,
            });
        }
        e >>= 1;
        if e > 0 {
            base = &base * &base;
        }
    }
    result.unwrap_or_else(|| DenseOperator::identity(u.dim()))
}

/// Largest norm correction tolerated per kick.
const RENORM_DRIFT: f64 = 1e-12;

/// Endless stroboscopic sequence `U psi, U^2 psi, ...`, renormalized each kick.
pub fn kick_iter<'a>(
    u: &'a DenseOperator,
    state: &StateVector,
) -> Result<impl Iterator<Item = StateVector> + 'a> {
    if state.dim() != u.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: state.dim(),
        });
    }
    let mut current = state.clone();
    Ok(std::iter::repeat_with(move || {
        let mut next = StateVector::from_raw(u.apply_slice(current.amplitudes()));
        let factor = next.renormalize();
        debug_assert!(
            (factor - 1.0).abs() < RENORM_DRIFT,
            "norm drift {:e} in one kick",
            (factor - 1.0).abs()
        );
        current = next.clone();
        next
    }))
}

/// `[psi, U psi, ..., U^n psi]`.
pub fn apply_kicks(u: &DenseOperator, state: &StateVector, n: usize) -> Result<Vec<StateVector>> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(state.clone());
    out.extend(kick_iter(u, state)?.take(n));
    Ok(out)
}

/// `U^n psi`.
pub fn evolve(u: &DenseOperator, state: &StateVector, n: usize) -> Result<StateVector> {
    let mut kicks = kick_iter(u, state)?;
    if n == 0 {
        return Ok(state.clone());
    }
    Ok(kicks.nth(n - 1).expect("kick iterator is endless"))
}
