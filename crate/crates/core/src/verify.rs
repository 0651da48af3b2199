//! Numerical certification of the operator identities behind the recurrences,
//! in the `(2j+1)`-dimensional representation.
//!
//! Qubit-picture operators are never built in the `2^{2j}`-dimensional space.
//! Their restrictions to the symmetric subspace are used instead: `Z^{(x)n}`
//! acts on Dicke level `k` as `(-1)^k`, and `(iY)^{(x)n}` acts as
//! `(-1)^n R_y(pi)` because `exp(-i pi sigma_y / 2) = -i sigma_y`.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::floquet::{build_floquet, matrix_power, FloquetSpec};
use crate::kappa::KappaClass;
use crate::operator::DenseOperator;
use crate::recurrence::{detect_period, identity_error};
use crate::spin::{rotation_y, rotation_z, twist, twist_phases, SpinParams};

/// Horizon used when confirming period claims.
pub const PERIOD_HORIZON: usize = 500;

/// One `(check, j)` comparison.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityEntry {
    pub name: String,
    pub j: f64,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub j_values: Vec<f64>,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub entries: Vec<IdentityEntry>,
}

impl IdentityCheck {
    fn collect(name: &str, spins: &[SpinParams], tol: f64, deviations: Vec<f64>) -> Self {
        let entries: Vec<IdentityEntry> = spins
            .iter()
            .zip(deviations)
            .map(|(s, d)| IdentityEntry {
                name: name.to_string(),
                j: s.j(),
                max_deviation: d,
                tolerance: tol,
                pass: d < tol,
            })
            .collect();
        let max_deviation = entries.iter().map(|e| e.max_deviation).fold(0.0, f64::max);
        Self {
            name: name.to_string(),
            j_values: spins.iter().map(|s| s.j()).collect(),
            max_deviation,
            tolerance: tol,
            pass: entries.iter().all(|e| e.pass),
            entries,
        }
    }
}

fn require_spins(spins: &[SpinParams]) -> Result<()> {
    if spins.is_empty() {
        return Err(Error::InvalidArgument(
            "identity check needs at least one spin".into(),
        ));
    }
    Ok(())
}

fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

fn i_pow(e: u64) -> Complex64 {
    match e % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn sweep<F>(name: &str, spins: &[SpinParams], tol: f64, f: F) -> Result<IdentityCheck>
where
    F: Fn(SpinParams) -> f64 + Sync,
{
    require_spins(spins)?;
    let devs = spins.par_iter().map(|&s| f(s)).collect();
    Ok(IdentityCheck::collect(name, spins, tol, devs))
}

/// `exp(-i pi J_z^2)` against `(-1)^k` (even j), `-(-1)^k` (odd j) and
/// `e^{-i pi/4}` (half-integer j).
pub fn check_pi_twist_cases(spins: &[SpinParams], tol: f64) -> Result<IdentityCheck> {
    sweep("pi_twist_cases", spins, tol, |s| {
        let lhs = twist_phases(s, 2.0 * PI * s.j());
        let rhs: Vec<Complex64> = (0..s.dim())
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                if !s.is_integer() {
                    Complex64::from_polar(1.0, -PI / 4.0)
                } else if (s.twice_j() / 2) % 2 == 0 {
                    Complex64::new(sign, 0.0)
                } else {
                    Complex64::new(-sign, 0.0)
                }
            })
            .collect();
        max_diff(&lhs, &rhs)
    })
}

/// `exp(-i pi J_z^2 / 2)` per Dicke level `k` against
/// `e^{-i pi/4} (1 + i^{n+1+2k}) / sqrt 2` (integer j) or
/// `e^{-i pi/8} sqrt 2 cos((n - 2k) pi / 4)` (half-integer j), `n = 2j`.
pub fn check_twist_jpi(spins: &[SpinParams], tol: f64) -> Result<IdentityCheck> {
    sweep("twist_jpi", spins, tol, |s| {
        let n = s.twice_j() as u64;
        let lhs = twist_phases(s, PI * s.j());
        let rhs: Vec<Complex64> = (0..s.dim() as u64)
            .map(|k| {
                if s.is_integer() {
                    Complex64::from_polar(FRAC_1_SQRT_2, -PI / 4.0) * (1.0 + i_pow(n + 1 + 2 * k))
                } else {
                    let c = ((n as f64 - 2.0 * k as f64) * PI / 4.0).cos();
                    Complex64::from_polar(SQRT_2 * c, -PI / 8.0)
                }
            })
            .collect();
        max_diff(&lhs, &rhs)
    })
}

/// Integer j: `U^4 = R_y(pi)` and `U^8 = I`. Half-integer j:
/// `U^6 = e^{i pi/4} R_y(pi)` (equivalently `e^{-3i pi/4} (iY)^{(x)n}`) and
/// `U^12 = e^{-i pi/2} I`. All at `kappa = pi j`.
pub fn check_u4_u6(spins: &[SpinParams], tol: f64) -> Result<IdentityCheck> {
    sweep("U4_U6", spins, tol, |s| {
        let u = build_floquet(&FloquetSpec::new(s, PI * s.j()));
        let r_pi = rotation_y(s, PI);
        let (half, phase_half, phase_full) = if s.is_integer() {
            (4, Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0))
        } else {
            (
                6,
                Complex64::from_polar(1.0, PI / 4.0),
                Complex64::from_polar(1.0, -PI / 2.0),
            )
        };
        let p_half = matrix_power(&u, half);
        let p_full = &p_half * &p_half;
        let id = DenseOperator::identity(s.dim());
        p_half
            .max_abs_diff(&r_pi.scale(phase_half))
            .max(p_full.max_abs_diff(&id.scale(phase_full)))
    })
}

/// `exp(-i pi J_z^2 / 4) = 1/2 [e^{-i pi/4} I + R_z(pi/2) + e^{3i pi/4} R_z(pi) + R_z(3 pi/2)]`
/// for integer j.
pub fn check_gaussian_sum_pij2(spins: &[SpinParams], tol: f64) -> Result<IdentityCheck> {
    if let Some(bad) = spins.iter().find(|s| !s.is_integer()) {
        return Err(Error::ParityMismatch {
            check: "gaussian_sum_pij2",
            j: bad.j(),
        });
    }
    sweep("gaussian_sum_pij2", spins, tol, |s| {
        let lhs = twist(s, PI * s.j() / 2.0);
        let id = DenseOperator::identity(s.dim());
        let rhs = id
            .scale(Complex64::from_polar(1.0, -PI / 4.0))
            .add(&rotation_z(s, PI / 2.0))
            .add(&rotation_z(s, PI).scale(Complex64::from_polar(1.0, 3.0 * PI / 4.0)))
            .add(&rotation_z(s, 1.5 * PI))
            .scale(Complex64::new(0.5, 0.0));
        lhs.max_abs_diff(&rhs)
    })
}

/// Period claims for `kappa = 3 pi j, 5 pi j / 2, 7 pi j / 2`: the detected
/// period must equal the expected one, in which case the deviation is the
/// identity error there; a mismatch counts as deviation 1.
pub fn check_3pij_and_5pij2(spins: &[SpinParams], tol: f64) -> Result<IdentityCheck> {
    let classes = [
        KappaClass::ThreePiJ,
        KappaClass::FiveHalvesPiJ,
        KappaClass::SevenHalvesPiJ,
    ];
    sweep("3pij_and_5pij2", spins, tol, |s| {
        classes
            .iter()
            .map(|&c| {
                let u = build_floquet(&FloquetSpec::new(s, c.kappa(s)));
                let expected = c.expected_period(s);
                let report = detect_period(&u, PERIOD_HORIZON, tol);
                match (report.period, expected) {
                    (Some(found), Some(want)) if found == want => {
                        identity_error(&matrix_power(&u, want as u64))
                    }
                    (None, None) => 0.0,
                    _ => 1.0,
                }
            })
            .fold(0.0, f64::max)
    })
}

pub const CHECK_NAMES: [&str; 5] = [
    "pi_twist_cases",
    "twist_jpi",
    "U4_U6",
    "gaussian_sum_pij2",
    "3pij_and_5pij2",
];

/// Runs one named check (or `all`). The integer-only Gaussian-sum check is
/// given the integer subset of `spins` when run as part of `all`.
pub fn run_checks(name: &str, spins: &[SpinParams], tol: f64) -> Result<Vec<IdentityCheck>> {
    let integer: Vec<SpinParams> = spins.iter().copied().filter(|s| s.is_integer()).collect();
    match name {
        "all" => {
            let mut out = Vec::new();
            for n in CHECK_NAMES {
                let set = if n == "gaussian_sum_pij2" {
                    &integer[..]
                } else {
                    spins
                };
                out.extend(run_checks(n, set, tol)?);
            }
            Ok(out)
        }
        "pi_twist_cases" => Ok(vec![check_pi_twist_cases(spins, tol)?]),
        "twist_jpi" => Ok(vec![check_twist_jpi(spins, tol)?]),
        "U4_U6" | "u4_u6" => Ok(vec![check_u4_u6(spins, tol)?]),
        "gaussian_sum_pij2" => Ok(vec![check_gaussian_sum_pij2(spins, tol)?]),
        "3pij_and_5pij2" => Ok(vec![check_3pij_and_5pij2(spins, tol)?]),
        other => Err(Error::InvalidArgument(format!(
            "unknown check '{other}' (expected all or one of {})",
            CHECK_NAMES.join(", ")
        ))),
    }
}

/// Every check on `j = 1/2, 1, ..., j_max`.
pub fn run_all(j_max: f64, tol: f64) -> Result<Vec<IdentityCheck>> {
    run_checks("all", &SpinParams::range(0.5, j_max)?, tol)
}

/// Flattened `{name, j, max_deviation, tolerance, pass}` list.
pub fn report_entries(checks: &[IdentityCheck]) -> Vec<IdentityEntry> {
    checks
        .iter()
        .flat_map(|c| c.entries.iter().cloned())
        .collect()
}
