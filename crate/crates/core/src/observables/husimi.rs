//! Husimi Q function on a uniform (theta, phi) grid.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::export::fmt_f64;
use crate::operator::StateVector;
use crate::spin::{coherent_column, SpinParams};

/// Cell-centred polar grid: `theta_i = (i + 1/2) pi / n`, poles excluded.
pub fn theta_grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| (i as f64 + 0.5) * PI / n as f64).collect()
}

/// `phi_k = 2 pi k / n`.
pub fn phi_grid(n: usize) -> Vec<f64> {
    (0..n).map(|k| k as f64 * TAU / n as f64).collect()
}

/// Fejer first-rule weights on the cell-centred theta grid: `sum_i w_i f(theta_i)`
/// integrates `f sin(theta) dtheta` over `[0, pi]` exactly when `f` is a
/// polynomial in `cos(theta)` of degree below `n`. They differ from
/// `sin(theta_i) pi / n` by `O(1/n^2)`.
pub fn theta_weights(n: usize) -> Vec<f64> {
    theta_grid(n)
        .into_iter()
        .map(|t| {
            let tail: f64 = (1..=n / 2)
                .map(|k| (2.0 * k as f64 * t).cos() / (4.0 * (k * k) as f64 - 1.0))
                .sum();
            2.0 / n as f64 * (1.0 - 2.0 * tail)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct HusimiField {
    pub spin: SpinParams,
    pub thetas: Vec<f64>,
    pub phis: Vec<f64>,
    /// Row-major, theta then phi.
    pub values: Vec<f64>,
    pub q_max: f64,
    theta_weights: Vec<f64>,
}

impl HusimiField {
    pub fn theta_count(&self) -> usize {
        self.thetas.len()
    }

    pub fn phi_count(&self) -> usize {
        self.phis.len()
    }

    #[inline]
    pub fn get(&self, i: usize, k: usize) -> f64 {
        self.values[i * self.phis.len() + k]
    }

    /// Quadrature weight of cell `(i, .)`: `(2j+1)/(4 pi) w_i dphi` with `w_i`
    /// from [`theta_weights`]. Exact for Q when `theta_count > 2j` and
    /// `phi_count > 2j`.
    pub fn weight(&self, i: usize) -> f64 {
        let dphi = TAU / self.phis.len() as f64;
        self.spin.dim() as f64 / (4.0 * PI) * self.theta_weights[i] * dphi
    }

    /// Weighted sum of Q; approximates 1.
    pub fn normalization(&self) -> f64 {
        (0..self.theta_count())
            .map(|i| {
                let row: f64 = self.values[i * self.phi_count()..(i + 1) * self.phi_count()]
                    .iter()
                    .sum();
                row * self.weight(i)
            })
            .sum()
    }

    /// Grid angles of the largest value.
    pub fn argmax(&self) -> (f64, f64) {
        let idx = self
            .values
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let n_phi = self.phi_count();
        (self.thetas[idx / n_phi], self.phis[idx % n_phi])
    }

    /// Cells no smaller than any of their 8 neighbours and at least
    /// `fraction * q_max`. Phi wraps around; theta does not.
    pub fn local_maxima(&self, fraction: f64) -> Vec<(usize, usize)> {
        let (nt, np) = (self.theta_count(), self.phi_count());
        let floor = fraction * self.q_max;
        let mut peaks = Vec::new();
        for i in 0..nt {
            for k in 0..np {
                let v = self.get(i, k);
                if v < floor {
                    continue;
                }
                let is_peak = (-1isize..=1).all(|di| {
                    (-1isize..=1).all(|dk| {
                        let ii = i as isize + di;
                        if (di == 0 && dk == 0) || ii < 0 || ii >= nt as isize {
                            return true;
                        }
                        let kk = (k as isize + dk).rem_euclid(np as isize) as usize;
                        self.get(ii as usize, kk) <= v
                    })
                });
                if is_peak {
                    peaks.push((i, k));
                }
            }
        }
        peaks
    }

    /// CSV with header `theta,phi,q`, theta-major.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "theta,phi,q")?;
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

/// `Q(theta, phi) = |<theta, phi|psi>|^2` on the cell-centred grid.
pub fn husimi(state: &StateVector, theta_count: usize, phi_count: usize) -> Result<HusimiField> {
    if theta_count < 2 || phi_count < 2 {
        return Err(Error::InvalidArgument(
            "Husimi grid needs at least 2 points per axis".into(),
        ));
    }
    let spin = SpinParams::from_dim(state.dim())?;
    let thetas = theta_grid(theta_count);
    let phis = phi_grid(phi_count);
    let psi = state.amplitudes();
    let ms: Vec<f64> = spin.m_values().collect();

    let values: Vec<f64> = thetas
        .par_iter()
        .flat_map_iter(|&theta| {
            // <theta,phi|psi> = sum_m conj(d_m(theta)) e^{i phi m} psi_m
            let weighted: Vec<Complex64> = coherent_column(spin, theta)
                .iter()
                .zip(psi)
                .map(|(d, a)| d.conj() * a)
                .collect();
            let ms = &ms;
            phis.iter().map(move |&phi| {
                let amp: Complex64 = weighted
                    .iter()
                    .zip(ms)
                    .map(|(w, &m)| w * Complex64::from_polar(1.0, phi * m))
                    .sum();
                amp.norm_sqr()
            })
        })
        .collect();

    let q_max = values.iter().copied().fold(0.0, f64::max);
    Ok(HusimiField {
        spin,
        theta_weights: theta_weights(theta_count),
        thetas,
        phis,
        values,
        q_max,
    })
}
