//! Classical kicked top: the stroboscopic map of the rescaled angular momentum
//! on the unit sphere.

use std::f64::consts::{PI, TAU};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::export::fmt_f64;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ClassicalPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn from_angles(theta: f64, phi: f64) -> Self {
        Self {
            x: theta.sin() * phi.cos(),
            y: theta.sin() * phi.sin(),
            z: theta.cos(),
        }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    /// `(arccos z, atan2(y, x))`.
    pub fn angles(&self) -> (f64, f64) {
        (self.z.clamp(-1.0, 1.0).acos(), self.y.atan2(self.x))
    }

    fn check_unit(&self) -> Result<()> {
        if (self.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidArgument(format!(
                "classical point ({}, {}, {}) is not on the unit sphere",
                self.x, self.y, self.z
            )));
        }
        Ok(())
    }
}

/// Rotation by `pi/2` about y followed by a twist about z of angle `kappa x`.
pub fn classical_step(p: ClassicalPoint, kappa: f64) -> ClassicalPoint {
    let (s, c) = (kappa * p.x).sin_cos();
    ClassicalPoint {
        x: p.z * c + p.y * s,
        y: p.y * c - p.z * s,
        z: -p.x,
    }
}

/// `(theta, phi)` after each of `kicks` steps, excluding the initial point.
pub type Trajectory = Vec<(f64, f64)>;

pub fn stroboscopic_map(
    initials: &[ClassicalPoint],
    kappa: f64,
    kicks: usize,
) -> Result<Vec<Trajectory>> {
    for p in initials {
        p.check_unit()?;
    }
    Ok(initials
        .par_iter()
        .map(|&p0| {
            let mut p = p0;
            (0..kicks)
                .map(|_| {
                    p = classical_step(p, kappa);
                    p.angles()
                })
                .collect()
        })
        .collect())
}

/// `n_theta x n_phi` grid of initial points, `theta` cell-centred and
/// `phi_k = 2 pi k / n_phi`.
pub fn uniform_grid(n_theta: usize, n_phi: usize) -> Vec<ClassicalPoint> {
    let mut out = Vec::with_capacity(n_theta * n_phi);
    for i in 0..n_theta {
        let theta = (i as f64 + 0.5) * PI / n_theta as f64;
        for k in 0..n_phi {
            let phi = k as f64 * TAU / n_phi as f64;
            out.push(ClassicalPoint::from_angles(theta, phi));
        }
    }
    out
}

/// Fraction of `n_theta x n_phi` equal-angle bins visited by an orbit of
/// `kicks` steps from `start`.
pub fn coverage_fraction(
    start: ClassicalPoint,
    kappa: f64,
    kicks: usize,
    n_theta: usize,
    n_phi: usize,
) -> f64 {
    let mut seen = vec![false; n_theta * n_phi];
    let mut p = start;
    for _ in 0..kicks {
        p = classical_step(p, kappa);
        let (theta, phi) = p.angles();
        let i = ((theta / PI * n_theta as f64) as usize).min(n_theta - 1);
        let k = ((phi.rem_euclid(TAU) / TAU * n_phi as f64) as usize).min(n_phi - 1);
        seen[i * n_phi + k] = true;
    }
    seen.iter().filter(|&&v| v).count() as f64 / seen.len() as f64
}

/// CSV `traj_id,kick,theta,phi`; kick 0 is the initial point.
pub fn write_trajectories_csv<W: Write>(
    initials: &[ClassicalPoint],
    trajectories: &[Trajectory],
    mut out: W,
) -> Result<()> {
    writeln!(out, "traj_id,kick,theta,phi")?;
    for (id, (p0, traj)) in initials.iter().zip(trajectories).enumerate() {
        let first = std::iter::once(p0.angles());
        for (kick, (theta, phi)) in first.chain(traj.iter().copied()).enumerate() {
            writeln!(out, "{id},{kick},{},{}", fmt_f64(theta), fmt_f64(phi))?;
        }
    }
    Ok(())
}
