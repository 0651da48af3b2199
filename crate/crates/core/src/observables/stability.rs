//! Entropy landscapes of detuned recurrences.
//!
//! For a recurrence twist `kappa~` with period `N`, each initial coherent state
//! on a grid is kicked with `U_{kappa~ + delta}` and the single-qubit entropy is
//! sampled every `N` kicks and averaged over a number of applications.

use std::io::Write;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::export::fmt_f64;
use crate::floquet::{build_perturbed, matrix_power, FloquetSpec, PerturbedSpec};
use crate::kappa::KappaClass;
use crate::observables::entropy::EntropyKind;
use crate::observables::husimi::{phi_grid, theta_grid};
use crate::operator::StateVector;
use crate::spin::{coherent_state, CoherentParams, SpinParams};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StabilityConfig {
    pub spin: SpinParams,
    pub kappa_class: KappaClass,
    pub delta: f64,
    pub applications: usize,
    pub theta_count: usize,
    pub phi_count: usize,
}

impl StabilityConfig {
    /// 70 x 140 grid, 10 applications.
    pub fn new(spin: SpinParams, kappa_class: KappaClass, delta: f64) -> Self {
        Self {
            spin,
            kappa_class,
            delta,
            applications: 10,
            theta_count: 70,
            phi_count: 140,
        }
    }

    pub fn with_grid(mut self, theta_count: usize, phi_count: usize) -> Self {
        self.theta_count = theta_count;
        self.phi_count = phi_count;
        self
    }
}

/// Sidecar metadata for an exported landscape.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LandscapeMeta {
    pub j: f64,
    pub kappa_class: KappaClass,
    pub kappa_tilde: f64,
    pub delta: f64,
    pub orbit_n: usize,
    pub applications: usize,
    pub theta_count: usize,
    pub phi_count: usize,
    pub s_max: f64,
    pub mean: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EntropyLandscape {
    pub config: StabilityConfig,
    pub orbit_n: usize,
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    /// Row-major time-averaged entropies.
    pub values: Vec<f64>,
    pub s_max: f64,
}

impl EntropyLandscape {
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.values[i * self.phis.len() + k]
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    pub fn meta(&self) -> LandscapeMeta {
        LandscapeMeta {
            j: self.config.spin.j(),
            kappa_class: self.config.kappa_class,
            kappa_tilde: self.config.kappa_class.kappa(self.config.spin),
            delta: self.config.delta,
            orbit_n: self.orbit_n,
            applications: self.config.applications,
            theta_count: self.thetas.len(),
            phi_count: self.phis.len(),
            s_max: self.s_max,
            mean: self.mean(),
        }
    }

    /// CSV `theta,phi,avg_entropy`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "theta,phi,avg_entropy")?;
        for (i, &t) in self.thetas.iter().enumerate() {
            for (k, &p) in self.phis.iter().enumerate() {
                writeln!(
                    out,
                    "{},{},{}",
                    fmt_f64(t),
                    fmt_f64(p),
                    fmt_f64(self.get(i, k))
                )?;
            }
        }
        Ok(())
    }
}

pub fn stability_landscape(cfg: &StabilityConfig) -> Result<EntropyLandscape> {
    if cfg.applications == 0 {
        return Err(Error::InvalidArgument(
            "applications must be at least 1".into(),
        ));
    }
    if cfg.theta_count == 0 || cfg.phi_count == 0 {
        return Err(Error::InvalidArgument(
            "landscape grid must be non-empty".into(),
        ));
    }
    let orbit_n = cfg
        .kappa_class
        .expected_period(cfg.spin)
        .ok_or(Error::NoRecurrence {
            j: cfg.spin.j(),
            class: cfg.kappa_class,
        })?;

    let base = FloquetSpec::new(cfg.spin, cfg.kappa_class.kappa(cfg.spin));
    let u = build_perturbed(&PerturbedSpec {
        base,
        delta: cfg.delta,
    });
    let orbit = matrix_power(&u, orbit_n as u64);

    let thetas = theta_grid(cfg.theta_count);
    let phis = phi_grid(cfg.phi_count);
    let cells: Vec<(f64, f64)> = thetas
        .iter()
        .flat_map(|&t| phis.iter().map(move |&p| (t, p)))
        .collect();

    let values = cells
        .par_iter()
        .map(|&(theta, phi)| {
            let mut psi = coherent_state(cfg.spin, CoherentParams::new(theta, phi));
            let mut total = 0.0;
            for _ in 0..cfg.applications {
                psi = orbit.apply(&psi)?;
                psi = StateVector::normalized(psi.amplitudes().to_vec())?;
                total += EntropyKind::VonNeumann.of(&psi)?;
            }
            Ok(total / cfg.applications as f64)
        })
        .collect::<Result<Vec<f64>>>()?;

    let s_max = values.iter().copied().fold(0.0, f64::max);
    Ok(EntropyLandscape {
        config: *cfg,
        orbit_n,
        thetas,
        phis,
        values,
        s_max,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeanEntropyRow {
    pub j: f64,
    pub delta: f64,
    pub mean: f64,
    pub s_max: f64,
}

/// Grid-mean of the time-averaged entropy for every `(j, delta)` pair.
pub fn mean_landscape_vs_spin(
    spins: &[SpinParams],
    deltas: &[f64],
    kappa_class: KappaClass,
    applications: usize,
    theta_count: usize,
    phi_count: usize,
) -> Result<Vec<MeanEntropyRow>> {
    let mut rows = Vec::with_capacity(spins.len() * deltas.len());
    for &spin in spins {
        for &delta in deltas {
            let cfg = StabilityConfig {
                spin,
                kappa_class,
                delta,
                applications,
                theta_count,
                phi_count,
            };
            let land = stability_landscape(&cfg)?;
            rows.push(MeanEntropyRow {
                j: spin.j(),
                delta,
                mean: land.mean(),
                s_max: land.s_max,
            });
        }
    }
    Ok(rows)
}
