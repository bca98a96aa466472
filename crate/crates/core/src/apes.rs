//! Quadratic E⊗e adiabatic potential energy surface.
//!
//! Coordinates are dimensionless, `q = (a + a†)/√2`, so the elastic term is
//! `(ħω/2)(qx² + qy²)` and both couplings carry energy units. The 2×2
//! potential matrix is
//!
//! ```text
//! (ħω/2)(qx²+qy²)·1 + F(qx σz + qy σx) + G[(qx²−qy²) σz − 2 qx qy σx]
//! ```
//!
//! whose off-diagonal modulus is `|F ρ e^{iφ} + G ρ² e^{−2iφ}|`, giving the
//! three-fold warping `2FGρ³ cos 3φ`. With `G > 0` the minima lie at
//! `cos 3φ = +1` (φ = 0°, 120°, 240°) and the saddles at `cos 3φ = −1`.

use std::f64::consts::PI;

use crate::catalog::DefectParams;
use crate::error::{Error, Result};

/// Linear (`f`) and quadratic (`g`) vibronic constants with the phonon
/// quantum, all in meV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JTCoupling {
    pub f: f64,
    pub g: f64,
    pub homega: f64,
}

impl JTCoupling {
    pub fn new(f: f64, g: f64, homega: f64) -> Result<Self> {
        if !(f.is_finite() && g.is_finite() && homega.is_finite()) {
            return Err(Error::InvalidArgument("coupling constants must be finite".into()));
        }
        if homega <= 0.0 {
            return Err(Error::validation("homega", format!("must be > 0, got {homega}")));
        }
        if f < 0.0 {
            return Err(Error::validation("f", format!("must be >= 0, got {f}")));
        }
        if g < 0.0 {
            return Err(Error::validation("g", format!("must be >= 0, got {g}")));
        }
        if g >= homega / 2.0 {
            return Err(Error::UnboundedSurface {
                g,
                half_homega: homega / 2.0,
            });
        }
        Ok(JTCoupling { f, g, homega })
    }

    /// Uncoupled oscillator.
    pub fn decoupled(homega: f64) -> Result<Self> {
        Self::new(0.0, 0.0, homega)
    }
}

/// Exact inverse of the quadratic surface: the (F, G) whose minima lie
/// `e_jt` below the origin and whose saddles lie `delta_jt` above the minima.
///
/// From `E_JT = F²/2(ħω−2G)` and `δ = 4 E_JT G/(ħω+2G)`:
/// `G = δ ħω/(4E_JT − 2δ)`, `F = √(2 E_JT (ħω − 2G))`.
pub fn coupling_from_energies(e_jt: f64, delta_jt: f64, homega: f64) -> Result<JTCoupling> {
    if !(e_jt.is_finite() && delta_jt.is_finite() && homega.is_finite()) {
        return Err(Error::InvalidArgument("surface energies must be finite".into()));
    }
    if e_jt <= 0.0 {
        return Err(Error::validation("e_jt", format!("must be > 0, got {e_jt}")));
    }
    if delta_jt < 0.0 {
        return Err(Error::validation("delta_jt", format!("must be >= 0, got {delta_jt}")));
    }
    if homega <= 0.0 {
        return Err(Error::validation("homega", format!("must be > 0, got {homega}")));
    }
    let denom = 4.0 * e_jt - 2.0 * delta_jt;
    let g = if denom > 0.0 {
        delta_jt * homega / denom
    } else {
        f64::INFINITY
    };
    if g >= homega / 2.0 {
        return Err(Error::UnboundedSurface {
            g,
            half_homega: homega / 2.0,
        });
    }
    let f = (2.0 * e_jt * (homega - 2.0 * g)).sqrt();
    JTCoupling::new(f, g, homega)
}

pub fn coupling_from_apes(p: &DefectParams) -> Result<JTCoupling> {
    coupling_from_energies(p.e_jt, p.delta_jt, p.homega)
}

/// Weak-warping closed forms `F = √(2 E_JT ħω)`, `G = δ ħω / (2 E_JT)`.
///
/// These do not invert the quadratic surface (the round trip through
/// [`trivial_points`] does not recover the inputs); kept for comparison only.
pub fn coupling_from_apes_closed_form(e_jt: f64, delta_jt: f64, homega: f64) -> (f64, f64) {
    ((2.0 * e_jt * homega).sqrt(), delta_jt * homega / (2.0 * e_jt))
}

/// Both adiabatic sheets at `(qx, qy)`, lower first (meV).
pub fn apes_energy(c: &JTCoupling, qx: f64, qy: f64) -> (f64, f64) {
    let elastic = 0.5 * c.homega * (qx * qx + qy * qy);
    let z = c.f * qx + c.g * (qx * qx - qy * qy);
    let x = c.f * qy - 2.0 * c.g * qx * qy;
    let split = z.hypot(x);
    (elastic - split, elastic + split)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApesPoint {
    pub qx: f64,
    pub qy: f64,
    pub energy: f64,
}

impl ApesPoint {
    fn polar(radius: f64, angle: f64, energy: f64) -> Self {
        ApesPoint {
            qx: radius * angle.cos(),
            qy: radius * angle.sin(),
            energy,
        }
    }

    pub fn radius(&self) -> f64 {
        self.qx.hypot(self.qy)
    }

    /// Polar angle in `[0, 2π)`.
    pub fn angle(&self) -> f64 {
        self.qy.atan2(self.qx).rem_euclid(2.0 * PI)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrivialPoints {
    /// Three C1h minima, ascending angle.
    pub minima: Vec<ApesPoint>,
    /// Three C1h saddle points, ascending angle.
    pub barriers: Vec<ApesPoint>,
    /// The C3v point at the origin.
    pub symmetric_point: ApesPoint,
    /// Set when the lower sheet has a continuous circular trough (G = 0).
    pub trough: bool,
    /// Radius of the minima (of the trough when `trough` is set).
    pub trough_radius: f64,
}

impl TrivialPoints {
    pub fn e_jt(&self) -> f64 {
        self.symmetric_point.energy - self.minima[0].energy
    }

    pub fn delta_jt(&self) -> f64 {
        self.barriers[0].energy - self.minima[0].energy
    }
}

/// Lower sheet in polar form.
fn lower_polar(c: &JTCoupling, rho: f64, phi: f64) -> f64 {
    let s = warped_split(c, rho, (3.0 * phi).cos());
    0.5 * c.homega * rho * rho - rho * s
}

fn warped_split(c: &JTCoupling, rho: f64, cos3: f64) -> f64 {
    (c.f * c.f + c.g * c.g * rho * rho + 2.0 * c.f * c.g * rho * cos3)
        .max(0.0)
        .sqrt()
}

/// d/dρ of the lower sheet at fixed angle.
fn radial_slope(c: &JTCoupling, rho: f64, cos3: f64) -> f64 {
    let s = warped_split(c, rho, cos3);
    if s <= f64::EPSILON * c.f.max(1.0) {
        // cusp at a secondary conical intersection; only reached beyond
        // the radial minimum, where the slope is positive on both sides
        return c.homega * rho;
    }
    c.homega * rho - s - rho * (c.g * c.g * rho + c.f * c.g * cos3) / s
}

/// Radius minimizing the lower sheet along the ray at angle `phi`.
fn radial_minimum(c: &JTCoupling, phi: f64) -> f64 {
    if c.f == 0.0 {
        return 0.0;
    }
    let cos3 = (3.0 * phi).cos();
    let upper = 2.0 * c.f / (c.homega - 2.0 * c.g);
    bisect(|r| radial_slope(c, r, cos3), 0.0, upper)
}

/// d/dφ of the radially minimized profile (envelope theorem).
fn angular_slope(c: &JTCoupling, phi: f64) -> f64 {
    let rho = radial_minimum(c, phi);
    let cos3 = (3.0 * phi).cos();
    let s = warped_split(c, rho, cos3);
    if s == 0.0 {
        return 0.0;
    }
    3.0 * c.f * c.g * rho * rho * (3.0 * phi).sin() / s
}

/// Root of `f` in `[a, b]` assuming `f(a) < 0 < f(b)`, refined to the
/// resolution of f64.
fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if f(mid) < 0.0 {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

const ANGLE_GRID: usize = 360;

/// Locate the minima, saddles and symmetric point of the lower sheet by
/// radial minimization along rays followed by a scan over the ray angle.
pub fn trivial_points(c: &JTCoupling) -> Result<TrivialPoints> {
    let symmetric_point = ApesPoint {
        qx: 0.0,
        qy: 0.0,
        energy: 0.0,
    };

    if c.g == 0.0 || c.f == 0.0 {
        let rho = radial_minimum(c, 0.0);
        let energy = lower_polar(c, rho, 0.0);
        let ring = |offset: f64| -> Vec<ApesPoint> {
            (0..3)
                .map(|k| ApesPoint::polar(rho, offset + 2.0 * PI * k as f64 / 3.0, energy))
                .collect()
        };
        return Ok(TrivialPoints {
            minima: ring(0.0),
            barriers: ring(PI / 3.0),
            symmetric_point,
            trough: true,
            trough_radius: rho,
        });
    }

    let step = 2.0 * PI / ANGLE_GRID as f64;
    let grid: Vec<(f64, f64)> = (0..ANGLE_GRID)
        .map(|i| {
            let phi = (i as f64 + 0.5) * step;
            (phi, angular_slope(c, phi))
        })
        .collect();

    let mut minima = Vec::new();
    let mut barriers = Vec::new();
    for i in 0..ANGLE_GRID {
        let (a, sa) = grid[i];
        let (mut b, sb) = grid[(i + 1) % ANGLE_GRID];
        if b < a {
            b += 2.0 * PI;
        }
        if sa < 0.0 && sb >= 0.0 {
            let phi = bisect(|x| angular_slope(c, x), a, b);
            minima.push(phi.rem_euclid(2.0 * PI));
        } else if sa > 0.0 && sb <= 0.0 {
            let phi = bisect(|x| -angular_slope(c, x), a, b);
            barriers.push(phi.rem_euclid(2.0 * PI));
        }
    }

    if minima.len() != 3 || barriers.len() != 3 {
        return Err(Error::InvalidState(format!(
            "expected 3 minima and 3 saddles, found {} and {}",
            minima.len(),
            barriers.len()
        )));
    }

    let to_points = |angles: Vec<f64>| -> Vec<ApesPoint> {
        let mut pts: Vec<ApesPoint> = angles
            .into_iter()
            .map(|phi| {
                let rho = radial_minimum(c, phi);
                ApesPoint::polar(rho, phi, lower_polar(c, rho, phi))
            })
            .collect();
        pts.sort_by(|a, b| a.angle().total_cmp(&b.angle()));
        pts
    };
    let minima = to_points(minima);
    let barriers = to_points(barriers);
    let trough_radius = minima[0].radius();

    Ok(TrivialPoints {
        minima,
        barriers,
        symmetric_point,
        trough: false,
        trough_radius,
    })
}

/// Evaluate both sheets on a square grid `[-extent, extent]²` with
/// `points` samples per axis; rows are `(qx, qy, lower, upper)`, qx major.
pub fn apes_grid(c: &JTCoupling, extent: f64, points: usize) -> Vec<[f64; 4]> {
    let axis: Vec<f64> = match points {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n)
            .map(|i| -extent + 2.0 * extent * i as f64 / (n - 1) as f64)
            .collect(),
    };
    let mut rows = Vec::with_capacity(axis.len() * axis.len());
    for &qx in &axis {
        for &qy in &axis {
            let (lo, hi) = apes_energy(c, qx, qy);
            rows.push([qx, qy, lo, hi]);
        }
    }
    rows
}
