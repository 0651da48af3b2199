//! Spin-`j` representation: angular momentum matrices, y-rotations, twists
//! and SU(2) coherent states.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{DenseOperator, OperatorKind, StateVector};

/// Spin magnitude `j`, stored as the integer `2j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct SpinParams {
    twice_j: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Parity {
    Integer,
    HalfInteger,
}

impl SpinParams {
    /// Accepts `j` given as a decimal that is an exact positive multiple of 1/2.
    pub fn new(j: f64) -> Result<Self> {
        let twice = 2.0 * j;
        if !twice.is_finite() || twice < 0.5 || (twice - twice.round()).abs() > 1e-9 {
            return Err(Error::InvalidSpin(j));
        }
        if twice.round() > u32::MAX as f64 {
            return Err(Error::InvalidSpin(j));
        }
        Ok(Self {
            twice_j: twice.round() as u32,
        })
    }

    pub fn from_twice_j(twice_j: u32) -> Result<Self> {
        if twice_j == 0 {
            return Err(Error::InvalidSpin(0.0));
        }
        Ok(Self { twice_j })
    }

    /// The spin whose Hilbert space has dimension `dim`.
    pub fn from_dim(dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidSpin((dim as f64 - 1.0) / 2.0));
        }
        Self::from_twice_j((dim - 1) as u32)
    }

    pub fn j(&self) -> f64 {
        self.twice_j as f64 / 2.0
    }

    pub fn twice_j(&self) -> u32 {
        self.twice_j
    }

    pub fn dim(&self) -> usize {
        self.twice_j as usize + 1
    }

    pub fn parity(&self) -> Parity {
        if self.twice_j.is_multiple_of(2) {
            Parity::Integer
        } else {
            Parity::HalfInteger
        }
    }

    pub fn is_integer(&self) -> bool {
        self.parity() == Parity::Integer
    }

    /// Magnetic quantum number of basis index `k`.
    #[inline]
    pub fn m(&self, k: usize) -> f64 {
        self.j() - k as f64
    }

    /// `m = j, j-1, ..., -j`.
    pub fn m_values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dim()).map(move |k| self.m(k))
    }

    /// All spins `j_min, j_min + 1/2, ..., j_max`.
    pub fn range(j_min: f64, j_max: f64) -> Result<Vec<Self>> {
        let lo = Self::new(j_min)?;
        let hi = Self::new(j_max)?;
        Ok((lo.twice_j..=hi.twice_j)
            .map(|t| Self { twice_j: t })
            .collect())
    }
}

impl TryFrom<f64> for SpinParams {
    type Error = Error;

    fn try_from(j: f64) -> Result<Self> {
        Self::new(j)
    }
}

impl From<SpinParams> for f64 {
    fn from(s: SpinParams) -> f64 {
        s.j()
    }
}

impl fmt::Display for SpinParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice_j.is_multiple_of(2) {
            write!(f, "{}", self.twice_j / 2)
        } else {
            write!(f, "{}/2", self.twice_j)
        }
    }
}

/// Polar and azimuthal angles of a spin coherent state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoherentParams {
    pub theta: f64,
    pub phi: f64,
}

impl CoherentParams {
    /// Canonicalizes to `theta in [0, pi]`, `phi in [0, 2 pi)`.
    pub fn new(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(TAU);
        let mut phi = phi;
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Self { theta, phi }
    }

    /// `|+>_y`, the state at `(pi/2, pi/2)`.
    pub fn plus_y() -> Self {
        Self::new(PI / 2.0, PI / 2.0)
    }
}

pub struct AngularMomentum {
    pub jx: DenseOperator,
    pub jy: DenseOperator,
    pub jz: DenseOperator,
}

/// `<m+1| J+ |m>`.
#[inline]
pub fn ladder_coefficient(j: f64, m: f64) -> f64 {
    (j * (j + 1.0) - m * (m + 1.0)).max(0.0).sqrt()
}

/// `J+` in the descending-`m` basis: nonzero entries sit just above the diagonal.
pub fn raising_operator(spin: SpinParams) -> DenseOperator {
    let n = spin.dim();
    let mut jp = DenseOperator::zeros(n);
    for k in 1..n {
        jp.set(
            k - 1,
            k,
            Complex64::new(ladder_coefficient(spin.j(), spin.m(k)), 0.0),
        );
    }
    jp
}

pub fn build_angular_momentum(spin: SpinParams) -> AngularMomentum {
    let jp = raising_operator(spin);
    let jm = jp.adjoint();
    let half = Complex64::new(0.5, 0.0);
    let jx = jp.add(&jm).scale(half).with_kind(OperatorKind::Hermitian);
    let jy = jp
        .sub(&jm)
        .scale(Complex64::new(0.0, -0.5))
        .with_kind(OperatorKind::Hermitian);
    let jz = DenseOperator::from_diagonal(
        &spin
            .m_values()
            .map(|m| Complex64::new(m, 0.0))
            .collect::<Vec<_>>(),
        OperatorKind::Hermitian,
    );
    AngularMomentum { jx, jy, jz }
}

/// Eigenbasis of `J_y`: `J_y = V diag(values) V^dagger`, `V` row-major.
struct YEigenbasis {
    dim: usize,
    vectors: Vec<Complex64>,
    values: Vec<f64>,
}

static Y_EIGEN_CACHE: OnceLock<RwLock<HashMap<u32, Arc<YEigenbasis>>>> = OnceLock::new();

fn y_eigenbasis(spin: SpinParams) -> Arc<YEigenbasis> {
    let cache = Y_EIGEN_CACHE.get_or_init(Default::default);
    if let Some(hit) = cache
        .read()
        .expect("eigen cache poisoned")
        .get(&spin.twice_j)
    {
        return Arc::clone(hit);
    }
    let built = Arc::new(compute_y_eigenbasis(spin));
    let mut w = cache.write().expect("eigen cache poisoned");
    Arc::clone(w.entry(spin.twice_j).or_insert(built))
}

// J_y = P J_x P^dagger with P = diag(exp(-i pi m / 2)); J_x is real symmetric
// tridiagonal, so the expensive part runs in real arithmetic.
fn compute_y_eigenbasis(spin: SpinParams) -> YEigenbasis {
    let n = spin.dim();
    let j = spin.j();
    let mut jx = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let c = 0.5 * ladder_coefficient(j, spin.m(k));
        jx[(k - 1, k)] = c;
        jx[(k, k - 1)] = c;
    }
    let eig = SymmetricEigen::new(jx);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));

    // spectrum is exactly m = j..-j
    let values: Vec<f64> = spin.m_values().collect();
    for (slot, &col) in order.iter().enumerate() {
        let drift = (eig.eigenvalues[col] - values[slot]).abs();
        assert!(drift < 1e-8, "J_x eigenvalue drift {drift:e} at j = {j}");
    }

    let mut vectors = vec![Complex64::new(0.0, 0.0); n * n];
    for a in 0..n {
        let p = Complex64::from_polar(1.0, -PI * spin.m(a) / 2.0);
        for (slot, &col) in order.iter().enumerate() {
            vectors[a * n + slot] = p * eig.eigenvectors[(a, col)];
        }
    }
    YEigenbasis {
        dim: n,
        vectors,
        values,
    }
}

/// `exp(-i angle J_y)`.
pub fn rotation_y(spin: SpinParams, angle: f64) -> DenseOperator {
    let eb = y_eigenbasis(spin);
    let v = DenseOperator::from_row_major(eb.dim, eb.vectors.clone(), OperatorKind::Unitary)
        .expect("cached eigenbasis is square");
    let phases: Vec<Complex64> = eb
        .values
        .iter()
        .map(|&l| Complex64::from_polar(1.0, -angle * l))
        .collect();
    (&v.scale_columns(&phases) * &v.adjoint()).with_kind(OperatorKind::Unitary)
}

/// `exp(-i angle J_y) |state>` without forming the rotation matrix.
pub fn rotate_state_y(spin: SpinParams, angle: f64, state: &StateVector) -> Result<StateVector> {
    if state.dim() != spin.dim() {
        return Err(Error::DimensionMismatch {
            expected: spin.dim(),
            found: state.dim(),
        });
    }
    Ok(StateVector::from_raw(rotate_amplitudes_y(
        spin,
        angle,
        state.amplitudes(),
    )))
}

pub(crate) fn rotate_amplitudes_y(
    spin: SpinParams,
    angle: f64,
    psi: &[Complex64],
) -> Vec<Complex64> {
    let eb = y_eigenbasis(spin);
    let n = eb.dim;
    let mut coeff = vec![Complex64::new(0.0, 0.0); n];
    for (a, &amp) in psi.iter().enumerate() {
        let row = &eb.vectors[a * n..(a + 1) * n];
        for (c, v) in coeff.iter_mut().zip(row) {
            *c += v.conj() * amp;
        }
    }
    for (c, &l) in coeff.iter_mut().zip(&eb.values) {
        *c *= Complex64::from_polar(1.0, -angle * l);
    }
    eb.vectors
        .chunks(n)
        .map(|row| row.iter().zip(&coeff).map(|(v, c)| v * c).sum())
        .collect()
}

/// Diagonal of `exp(-i kappa J_z^2 / (2j))`.
pub fn twist_phases(spin: SpinParams, kappa: f64) -> Vec<Complex64> {
    let scale = kappa / spin.twice_j as f64;
    spin.m_values()
        .map(|m| Complex64::from_polar(1.0, -scale * m * m))
        .collect()
}

/// `exp(-i kappa J_z^2 / (2j))`.
pub fn twist(spin: SpinParams, kappa: f64) -> DenseOperator {
    DenseOperator::from_diagonal(&twist_phases(spin, kappa), OperatorKind::Unitary)
}

/// `exp(-i alpha J_z)`.
pub fn rotation_z(spin: SpinParams, alpha: f64) -> DenseOperator {
    let diag: Vec<Complex64> = spin
        .m_values()
        .map(|m| Complex64::from_polar(1.0, -alpha * m))
        .collect();
    DenseOperator::from_diagonal(&diag, OperatorKind::Unitary)
}

/// Twist phase per magnetic number, `m` descending.
pub fn dicke_phase_table(spin: SpinParams, kappa: f64) -> Vec<(f64, Complex64)> {
    spin.m_values().zip(twist_phases(spin, kappa)).collect()
}

/// `exp(-i phi J_z) exp(-i theta J_y) |j, j>`.
pub fn coherent_state(spin: SpinParams, params: CoherentParams) -> StateVector {
    let column = coherent_column(spin, params.theta);
    let amps = column
        .into_iter()
        .enumerate()
        .map(|(k, d)| d * Complex64::from_polar(1.0, -params.phi * spin.m(k)))
        .collect();
    StateVector::from_raw(amps)
}

/// `exp(-i theta J_y) |j, j>`.
pub(crate) fn coherent_column(spin: SpinParams, theta: f64) -> Vec<Complex64> {
    let mut north = vec![Complex64::new(0.0, 0.0); spin.dim()];
    north[0] = Complex64::new(1.0, 0.0);
    rotate_amplitudes_y(spin, theta, &north)
}
