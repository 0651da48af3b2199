//! Single-qubit reduced states of symmetric spin states and their entropies.

use std::f64::consts::LN_2;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::floquet::{build_floquet, kick_iter, FloquetSpec};
use crate::operator::{DenseOperator, StateVector};
use crate::spin::{coherent_state, ladder_coefficient, CoherentParams, SpinParams};

/// Reduced state of one of the `2j` constituent qubits.
///
/// Layout follows `rho = 1/2 [[1 - <S_z>, <S_->], [<S_+>, 1 + <S_z>]]` with
/// `S_i = J_i / j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReducedQubit {
    pub rho: [[Complex64; 2]; 2],
}

impl ReducedQubit {
    /// `(<S_x>, <S_y>, <S_z>)`.
    pub fn bloch_vector(&self) -> [f64; 3] {
        let sp = 2.0 * self.rho[1][0];
        let sz = self.rho[1][1].re - self.rho[0][0].re;
        [sp.re, sp.im, sz]
    }

    /// Eigenvalues in ascending order, clamped into `[0, 1]`.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let [x, y, z] = self.bloch_vector();
        let r2 = (x * x + y * y + z * z).min(1.0);
        let r = r2.sqrt();
        // small eigenvalue via det / large to avoid cancellation
        let large = 0.5 * (1.0 + r);
        let small = (0.25 * (1.0 - r2) / large).max(0.0);
        [small, large.min(1.0)]
    }

    pub fn trace(&self) -> Complex64 {
        self.rho[0][0] + self.rho[1][1]
    }
}

pub fn reduced_qubit(state: &StateVector) -> Result<ReducedQubit> {
    let spin = SpinParams::from_dim(state.dim())?;
    let j = spin.j();
    let amps = state.amplitudes();
    let mut jz = 0.0;
    let mut jp = Complex64::new(0.0, 0.0);
    for (k, a) in amps.iter().enumerate() {
        let m = spin.m(k);
        jz += m * a.norm_sqr();
        if k > 0 {
            // <psi| J+ |psi> picks up conj(psi_{m+1}) c psi_m
            jp += amps[k - 1].conj() * ladder_coefficient(j, m) * a;
        }
    }
    let sz = jz / j;
    let sp = jp / j;
    let half = 0.5;
    Ok(ReducedQubit {
        rho: [
            [Complex64::new(half * (1.0 - sz), 0.0), half * sp.conj()],
            [half * sp, Complex64::new(half * (1.0 + sz), 0.0)],
        ],
    })
}

/// `-sum lambda ln lambda`, natural log.
pub fn von_neumann_entropy(rho: &ReducedQubit) -> f64 {
    let s: f64 = rho
        .eigenvalues()
        .iter()
        .filter(|&&l| l > 0.0)
        .map(|&l| -l * l.ln())
        .sum();
    s.clamp(0.0, LN_2)
}

/// `1 - Tr rho^2`.
pub fn linear_entropy(rho: &ReducedQubit) -> f64 {
    let [x, y, z] = rho.bloch_vector();
    (0.5 * (1.0 - (x * x + y * y + z * z))).clamp(0.0, 0.5)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntropyKind {
    VonNeumann,
    Linear,
}

impl EntropyKind {
    pub fn of(self, state: &StateVector) -> Result<f64> {
        let rho = reduced_qubit(state)?;
        Ok(match self {
            EntropyKind::VonNeumann => von_neumann_entropy(&rho),
            EntropyKind::Linear => linear_entropy(&rho),
        })
    }
}

impl std::str::FromStr for EntropyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "vn" | "von-neumann" | "von_neumann" => Ok(Self::VonNeumann),
            "linear" | "lin" => Ok(Self::Linear),
            other => Err(Error::InvalidArgument(format!(
                "unknown entropy kind '{other}' (expected vn or linear)"
            ))),
        }
    }
}

/// Entropy of `U^k psi` for `k = 1..=n_kicks`.
pub fn entropy_series(
    u: &DenseOperator,
    state: &StateVector,
    n_kicks: usize,
    kind: EntropyKind,
) -> Result<Vec<f64>> {
    kick_iter(u, state)?
        .take(n_kicks)
        .map(|s| kind.of(&s))
        .collect()
}

/// Closed-form single-qubit linear entropy of `U^n |+>_y` at `j = 3/2`:
/// `4 chi^2 U_{n-1}(chi)^2 [1 - 2 chi^2 U_{n-1}(chi)^2]` with
/// `chi = sin(kappa / 3) / 2` and `U_{n-1}` the Chebyshev polynomial of the
/// second kind.
pub fn dogra_linear_entropy(n: u64, kappa: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "kick count must be at least 1".into(),
        ));
    }
    let chi = 0.5 * (kappa / 3.0).sin();
    let gamma = chi.acos();
    let cheb = (n as f64 * gamma).sin() / gamma.sin();
    let x = chi * chi * cheb * cheb;
    Ok(4.0 * x * (1.0 - 2.0 * x))
}

/// Minimum von Neumann entropy over kicks `1..=n_kicks` and the kick at which
/// it first occurs.
pub fn min_entropy_scan(
    spin: SpinParams,
    kappa: f64,
    initial: CoherentParams,
    n_kicks: usize,
) -> Result<(f64, usize)> {
    if n_kicks == 0 {
        return Err(Error::InvalidArgument("n_kicks must be at least 1".into()));
    }
    let u = build_floquet(&FloquetSpec::new(spin, kappa));
    let psi = coherent_state(spin, initial);
    min_entropy_along(&u, &psi, n_kicks)
}

pub(crate) fn min_entropy_along(
    u: &DenseOperator,
    psi: &StateVector,
    n_kicks: usize,
) -> Result<(f64, usize)> {
    let mut best = (f64::INFINITY, 0);
    for (k, st) in kick_iter(u, psi)?.take(n_kicks).enumerate() {
        let s = EntropyKind::VonNeumann.of(&st)?;
        if s < best.0 {
            best = (s, k + 1);
        }
    }
    Ok(best)
}
