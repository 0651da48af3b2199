//! Detection of state-independent recurrences `U^N = e^{i phase} I`.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::export::fmt_f64;
use crate::floquet::{build_floquet, kick_iter, FloquetSpec};
use crate::kappa::KappaClass;
use crate::observables::entropy::{min_entropy_along, EntropyKind};
use crate::operator::{DenseOperator, StateVector};
use crate::spin::{coherent_state, CoherentParams, Parity, SpinParams};

/// `1 - |Tr U| / D`; zero exactly when a unitary is a phase times identity.
pub fn identity_error(u: &DenseOperator) -> f64 {
    (1.0 - u.trace().norm() / u.dim() as f64).max(0.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecurrenceReport {
    pub period: Option<usize>,
    /// `arg Tr U^period`, radians.
    pub phase: Option<f64>,
    pub tolerance: f64,
    pub n_max: usize,
    /// `error_series[k - 1] = identity_error(U^k)` up to the period (or `n_max`).
    pub error_series: Vec<f64>,
}

impl RecurrenceReport {
    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }

    /// CSV `k,error`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "k,error")?;
        for (k, e) in self.error_series.iter().enumerate() {
            writeln!(out, "{},{}", k + 1, fmt_f64(*e))?;
        }
        Ok(())
    }
}

/// Smallest `N <= n_max` with `identity_error(U^N) < tol`, built from
/// incremental products.
pub fn detect_period(u: &DenseOperator, n_max: usize, tol: f64) -> RecurrenceReport {
    let mut error_series = Vec::new();
    let mut power = u.clone();
    for k in 1..=n_max {
        if k > 1 {
            power = &power * u;
        }
        let err = identity_error(&power);
        error_series.push(err);
        if err < tol {
            return RecurrenceReport {
                period: Some(k),
                phase: Some(power.trace().arg()),
                tolerance: tol,
                n_max,
                error_series,
            };
        }
    }
    RecurrenceReport {
        period: None,
        phase: None,
        tolerance: tol,
        n_max,
        error_series,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub j: f64,
    pub kappa_class: KappaClass,
    pub parity: Parity,
    pub period: Option<usize>,
    pub phase: Option<f64>,
    pub expected: Option<usize>,
}

impl TableRow {
    pub fn matches(&self) -> bool {
        self.period == self.expected
    }
}

/// Detected period for every spin and every `kappa = n pi j / 2` class, in
/// input order then class order.
pub fn compute_table(spins: &[SpinParams], n_max: usize, tol: f64) -> Vec<TableRow> {
    let cells: Vec<(SpinParams, KappaClass)> = spins
        .iter()
        .flat_map(|&s| KappaClass::ALL.into_iter().map(move |c| (s, c)))
        .collect();
    cells
        .par_iter()
        .map(|&(spin, class)| {
            let u = build_floquet(&FloquetSpec::new(spin, class.kappa(spin)));
            let report = detect_period(&u, n_max, tol);
            TableRow {
                j: spin.j(),
                kappa_class: class,
                parity: spin.parity(),
                period: report.period,
                phase: report.phase,
                expected: class.expected_period(spin),
            }
        })
        .collect()
}

/// Like [`compute_table`], failing on the first row that disagrees with the
/// known recurrence periods.
pub fn reproduce_table(spins: &[SpinParams], n_max: usize, tol: f64) -> Result<Vec<TableRow>> {
    if spins.is_empty() {
        return Err(Error::InvalidArgument("no spins given".into()));
    }
    let rows = compute_table(spins, n_max, tol);
    if let Some(bad) = rows.iter().find(|r| !r.matches()) {
        return Err(Error::TableMismatch {
            j: bad.j,
            class: bad.kappa_class,
            expected: bad.expected,
            found: bad.period,
        });
    }
    Ok(rows)
}

/// Smallest `N <= n_max` with `1 - |<psi|U^N|psi>| < tol`.
pub fn state_orbit_period(
    u: &DenseOperator,
    state: &StateVector,
    n_max: usize,
    tol: f64,
) -> Result<Option<usize>> {
    for (k, st) in kick_iter(u, state)?.take(n_max).enumerate() {
        if 1.0 - state.inner(&st).norm() < tol {
            return Ok(Some(k + 1));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchConfig {
    pub r_max: u32,
    pub s_max: u32,
    pub spins: Vec<SpinParams>,
    pub n_kicks: usize,
    pub entropy_floor: f64,
    pub initial_state: CoherentParams,
    /// Tolerance used to confirm candidates with [`detect_period`].
    pub tolerance: f64,
    /// Skip ratios that coincide with the tabulated classes.
    pub skip_table_classes: bool,
}

impl SearchConfig {
    pub fn new(r_max: u32, s_max: u32, spins: Vec<SpinParams>) -> Self {
        Self {
            r_max,
            s_max,
            spins,
            n_kicks: 500,
            entropy_floor: 1e-7,
            initial_state: CoherentParams::new(2.25, 2.0),
            tolerance: crate::DEFAULT_TOLERANCE,
            skip_table_classes: false,
        }
    }

    /// Coprime `(r, s)` pairs in ascending order.
    pub fn ratios(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for r in 1..=self.r_max {
            for s in 1..=self.s_max {
                if gcd(r, s) == 1 && !(self.skip_table_classes && KappaClass::is_class_ratio(s)) {
                    out.push((r, s));
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SearchRow {
    pub r: u32,
    pub s: u32,
    pub j: f64,
    pub kappa: f64,
    pub table_class: bool,
    pub min_entropy: f64,
    pub min_entropy_kick: usize,
    pub candidate: bool,
    pub period: Option<usize>,
}

fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Screens `kappa = pi j r / s` by the minimum single-qubit entropy along one
/// trajectory, then confirms candidates below the floor with [`detect_period`].
/// Rows are sorted by `(r, s, j)`.
pub fn search_rational_kappa(cfg: &SearchConfig) -> Result<Vec<SearchRow>> {
    if cfg.spins.is_empty() {
        return Err(Error::InvalidArgument(
            "search needs at least one spin".into(),
        ));
    }
    let cells: Vec<(u32, u32, SpinParams)> = cfg
        .ratios()
        .into_iter()
        .flat_map(|(r, s)| cfg.spins.iter().map(move |&j| (r, s, j)))
        .collect();
    let mut rows = cells
        .par_iter()
        .map(|&(r, s, spin)| {
            let kappa = PI * spin.j() * r as f64 / s as f64;
            let u = build_floquet(&FloquetSpec::new(spin, kappa));
            let psi = coherent_state(spin, cfg.initial_state);
            let (min_entropy, min_entropy_kick) = min_entropy_along(&u, &psi, cfg.n_kicks)?;
            let candidate = min_entropy < cfg.entropy_floor;
            let period = if candidate {
                detect_period(&u, cfg.n_kicks, cfg.tolerance).period
            } else {
                None
            };
            Ok(SearchRow {
                r,
                s,
                j: spin.j(),
                kappa,
                table_class: KappaClass::is_class_ratio(s),
                min_entropy,
                min_entropy_kick,
                candidate,
                period,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    rows.sort_by(|a, b| {
        (a.r, a.s, a.j)
            .partial_cmp(&(b.r, b.s, b.j))
            .expect("finite keys")
    });
    Ok(rows)
}

/// Single-qubit von Neumann entropy series at `kappa` and `kappa + 2 pi j`.
pub fn entropy_sequence_kappa_shift(
    spin: SpinParams,
    kappa: f64,
    state: &StateVector,
    n_kicks: usize,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let series = |k: f64| {
        let u = build_floquet(&FloquetSpec::new(spin, k));
        crate::observables::entropy_series(&u, state, n_kicks, EntropyKind::VonNeumann)
    };
    Ok((series(kappa)?, series(kappa + 2.0 * PI * spin.j())?))
}

/// Normalized vector of independent standard complex Gaussians.
pub fn haar_random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    let amps = (0..dim)
        .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    StateVector::normalized(amps).expect("gaussian vector is nonzero")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::rotation_y;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn spin(j: f64) -> SpinParams {
        SpinParams::new(j).unwrap()
    }

    fn floquet(j: f64, class: KappaClass) -> DenseOperator {
        let s = spin(j);
        build_floquet(&FloquetSpec::new(s, class.kappa(s)))
    }

    #[test]
    fn identity_error_basics() {
        let id = DenseOperator::identity(4);
        assert_eq!(identity_error(&id), 0.0);
        let phased = id.scale(Complex64::from_polar(1.0, 0.9));
        assert!(identity_error(&phased) < 1e-15);
        // Tr R_y(pi/2) at j = 1 is 1 + 2 cos(pi/2) = 1
        let r = rotation_y(spin(1.0), PI / 2.0);
        assert!((identity_error(&r) - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn identity_error_phase_invariant() {
        let u = floquet(3.5, KappaClass::PiJ);
        for alpha in [0.1, 1.0, 2.5, -3.0] {
            let e1 = identity_error(&u);
            let e2 = identity_error(&u.scale(Complex64::from_polar(1.0, alpha)));
            assert!((e1 - e2).abs() < 1e-15);
        }
    }

    #[test]
    fn spec_periods() {
        let r = detect_period(&floquet(2.0, KappaClass::TwoPiJ), 200, 1e-10);
        assert_eq!(r.period, Some(2));
        assert!(r.phase.unwrap().abs() < 1e-8);

        let r = detect_period(&floquet(1.5, KappaClass::PiJ), 200, 1e-10);
        assert_eq!(r.period, Some(12));
        assert!((r.phase.unwrap() + PI / 2.0).abs() < 1e-8);

        assert_eq!(
            detect_period(&floquet(1.0, KappaClass::HalfPiJ), 200, 1e-10).period,
            Some(16)
        );
        assert_eq!(
            detect_period(&floquet(15.5, KappaClass::HalfPiJ), 500, 1e-10).period,
            None
        );
    }

    #[test]
    fn report_minimality_invariant() {
        for (j, class) in [
            (4.0, KappaClass::ThreePiJ),
            (2.0, KappaClass::FiveHalvesPiJ),
            (2.5, KappaClass::PiJ),
        ] {
            let r = detect_period(&floquet(j, class), 200, 1e-10);
            let n = r.period.unwrap();
            assert_eq!(r.error_series.len(), n);
            assert!(r.error_series[n - 1] < r.tolerance);
            assert!(r.error_series[..n - 1].iter().all(|&e| e >= r.tolerance));
        }
    }

    #[test]
    fn table_examples() {
        let rows = reproduce_table(&[spin(4.0), spin(3.5), spin(6.0)], 200, 1e-10).unwrap();
        let find = |j: f64, c: KappaClass| {
            rows.iter()
                .find(|r| r.j == j && r.kappa_class == c)
                .unwrap()
                .period
        };
        assert_eq!(find(4.0, KappaClass::ThreePiJ), Some(8));
        assert_eq!(find(3.5, KappaClass::TwoPiJ), Some(4));
        assert_eq!(find(6.0, KappaClass::FourPiJ), Some(4));
        assert_eq!(rows.len(), 27);
        assert!(reproduce_table(&[], 10, 1e-10).is_err());
    }

    #[test]
    fn table_mismatch_is_an_error() {
        // a horizon too short for 48 cannot reproduce the row
        let err = reproduce_table(&[spin(2.0)], 20, 1e-10).unwrap_err();
        assert!(matches!(
            err,
            Error::TableMismatch {
                class: KappaClass::HalfPiJ,
                ..
            }
        ));
    }

    #[test]
    fn special_state_orbits() {
        let plus_y = |j: f64| coherent_state(spin(j), CoherentParams::plus_y());
        let cases = [
            (4.0, KappaClass::PiJ, 4),
            (2.5, KappaClass::PiJ, 3),
            (6.0, KappaClass::HalfPiJ, 24),
            (5.0, KappaClass::HalfPiJ, 4),
        ];
        for (j, class, n) in cases {
            let got = state_orbit_period(&floquet(j, class), &plus_y(j), 100, 1e-9).unwrap();
            assert_eq!(got, Some(n), "j = {j}, {class}");
        }
    }

    #[test]
    fn state_independence_of_recurrences() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for j in [2.0, 3.5, 6.0] {
            for class in [KappaClass::PiJ, KappaClass::TwoPiJ] {
                let u = floquet(j, class);
                let n = detect_period(&u, 200, 1e-10).period.unwrap();
                for _ in 0..10 {
                    let psi = haar_random_state(u.dim(), &mut rng);
                    let back = crate::floquet::evolve(&u, &psi, n).unwrap();
                    assert!(1.0 - psi.inner(&back).norm() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn kappa_shift_preserves_entropy() {
        for (j, kappa) in [(2.0, 1.7), (2.5, 3.3)] {
            let s = spin(j);
            let psi = coherent_state(s, CoherentParams::new(2.25, 2.0));
            let (a, b) = entropy_sequence_kappa_shift(s, kappa, &psi, 50).unwrap();
            assert_eq!(a.len(), 50);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() < 1e-10);
            }
        }
        let s = spin(3.0);
        let psi = coherent_state(s, CoherentParams::new(1.0, 1.0));
        let (a, b) = entropy_sequence_kappa_shift(s, 0.0, &psi, 20).unwrap();
        assert!(a.iter().chain(&b).all(|&x| x < 1e-12));
    }

    #[test]
    fn search_finds_two_pi_j() {
        let mut cfg = SearchConfig::new(2, 1, vec![spin(2.0), spin(2.5)]);
        cfg.n_kicks = 100;
        let rows = search_rational_kappa(&cfg).unwrap();
        let r21: Vec<_> = rows.iter().filter(|r| r.r == 2 && r.s == 1).collect();
        assert_eq!(r21[0].period, Some(2));
        assert_eq!(r21[1].period, Some(4));
        assert!(r21.iter().all(|r| r.candidate && r.table_class));
    }

    #[test]
    fn search_half_integer_half_pi_j() {
        let mut cfg = SearchConfig::new(1, 2, vec![spin(1.5), spin(2.5)]);
        cfg.n_kicks = 500;
        let rows = search_rational_kappa(&cfg).unwrap();
        let half: Vec<_> = rows.iter().filter(|r| r.s == 2).collect();
        assert_eq!(half.len(), 2);
        for r in half {
            assert!(r.min_entropy > 1e-5);
            assert_eq!(r.period, None);
        }
    }

    #[test]
    fn ratios_are_coprime() {
        let cfg = SearchConfig::new(4, 4, vec![spin(1.0)]);
        let ratios = cfg.ratios();
        assert!(!ratios.contains(&(2, 2)));
        assert!(!ratios.contains(&(2, 4)));
        assert!(ratios.contains(&(3, 4)));
        assert_eq!(ratios.len(), 11);
    }

    #[test]
    fn report_json_field_names() {
        let r = detect_period(&floquet(1.0, KappaClass::Zero), 10, 1e-10);
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        let obj = v.as_object().unwrap();
        let mut keys: Vec<_> = obj.keys().cloned().collect();
        keys.sort();
        assert_eq!(
            keys,
            ["error_series", "n_max", "period", "phase", "tolerance"]
        );
        assert_eq!(obj["period"], 4);
        let none = detect_period(&floquet(2.5, KappaClass::HalfPiJ), 5, 1e-10);
        assert!(serde_json::to_value(&none).unwrap()["period"].is_null());
    }
}
