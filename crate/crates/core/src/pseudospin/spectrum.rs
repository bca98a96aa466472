//! Effective spin Hamiltonian of one or two pseudospin-1/2 manifolds with
//! optional nuclear hyperfine coupling, diagonalized at a given field.
//!
//! Basis order: manifold, then pseudospin `+1/2, −1/2`, then `m_I` from
//! `+I` down to `−I`. Energies are in GHz.

use num_complex::Complex64;
use serde::Serialize;

use super::gtensor::GTensor;
use crate::eigen::{eigh, CMatrix};
use crate::error::{Error, Result};
use crate::units::{mhz_to_ghz, UNITS};

/// Transitions weaker than this are dropped from [`SpinSpectrum::transitions`].
pub const INTENSITY_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Manifold {
    /// Energy offset of the manifold (GHz).
    pub offset: f64,
    pub g: GTensor,
}

/// Axial hyperfine coupling, constants in MHz.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Hyperfine {
    pub nuclear_spin: f64,
    pub a_par: f64,
    pub a_perp: f64,
}

/// Inputs of [`spin_spectrum`].
#[derive(Debug, Clone, PartialEq)]
pub struct SpinParams {
    /// GS1 g tensor.
    pub g: GTensor,
    /// GS2 g tensor; when set, GS2 is placed `de_soc_red` above GS1.
    pub g_upper: Option<GTensor>,
    /// GHz
    pub de_soc_red: Option<f64>,
    pub nuclear_spin: Option<f64>,
    /// MHz
    pub a_par: Option<f64>,
    /// MHz
    pub a_perp: Option<f64>,
}

impl SpinParams {
    pub fn single(g: GTensor) -> Self {
        SpinParams {
            g,
            g_upper: None,
            de_soc_red: None,
            nuclear_spin: None,
            a_par: None,
            a_perp: None,
        }
    }

    pub fn with_hyperfine(mut self, nuclear_spin: f64, a_par: f64, a_perp: f64) -> Self {
        self.nuclear_spin = Some(nuclear_spin);
        self.a_par = Some(a_par);
        self.a_perp = Some(a_perp);
        self
    }

    pub fn with_upper(mut self, g_upper: GTensor, de_soc_red: f64) -> Self {
        self.g_upper = Some(g_upper);
        self.de_soc_red = Some(de_soc_red);
        self
    }

    pub fn manifolds(&self) -> Result<Vec<Manifold>> {
        let mut out = vec![Manifold { offset: 0.0, g: self.g }];
        match (self.g_upper, self.de_soc_red) {
            (Some(g), Some(offset)) => out.push(Manifold { offset, g }),
            (None, None) => {}
            _ => {
                return Err(Error::InvalidArgument(
                    "the upper manifold needs both its g tensor and de_soc_red".into(),
                ))
            }
        }
        Ok(out)
    }

    pub fn hyperfine(&self) -> Result<Option<Hyperfine>> {
        if self.a_par.is_none() && self.a_perp.is_none() {
            return Ok(None);
        }
        let nuclear_spin = self
            .nuclear_spin
            .ok_or_else(|| Error::InvalidArgument("hyperfine constants given without nuclear_spin".into()))?;
        if nuclear_spin < 0.0 || (2.0 * nuclear_spin).fract() != 0.0 {
            return Err(Error::validation(
                "nuclear_spin",
                format!("must be a non-negative multiple of 1/2, got {nuclear_spin}"),
            ));
        }
        Ok(Some(Hyperfine {
            nuclear_spin,
            a_par: self.a_par.unwrap_or(0.0),
            a_perp: self.a_perp.unwrap_or(0.0),
        }))
    }
}

/// Magnetic field: magnitude (T) and polar angle from the c axis (rad).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Field {
    pub magnitude: f64,
    pub theta: f64,
}

impl Field {
    pub fn new(magnitude: f64, theta: f64) -> Self {
        Field { magnitude, theta }
    }

    pub fn parallel(magnitude: f64) -> Self {
        Field::new(magnitude, 0.0)
    }

    fn validate(&self) -> Result<()> {
        if !self.magnitude.is_finite() || self.magnitude < 0.0 {
            return Err(Error::InvalidArgument(format!(
                "field magnitude must be >= 0, got {}",
                self.magnitude
            )));
        }
        if !(0.0..=std::f64::consts::PI).contains(&self.theta) {
            return Err(Error::InvalidArgument(format!(
                "field angle must lie in [0, pi], got {}",
                self.theta
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Transition {
    pub lower: usize,
    pub upper: usize,
    /// GHz
    pub frequency: f64,
    /// `|⟨upper|S̃_x|lower⟩|²`.
    pub intensity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpinSpectrum {
    pub field: Field,
    /// Ascending (GHz).
    pub levels: Vec<f64>,
    pub transitions: Vec<Transition>,
}

/// Spin-`j` operators `(S_z, S_+)` with `m` descending from `+j`.
pub(crate) fn spin_operators(j: f64) -> (CMatrix, CMatrix) {
    let dim = (2.0 * j).round() as usize + 1;
    let mut sz = CMatrix::zeros(dim, dim);
    let mut sp = CMatrix::zeros(dim, dim);
    for k in 0..dim {
        let m = j - k as f64;
        sz[(k, k)] = Complex64::from(m);
        if k > 0 {
            // S+ |m⟩ = √(j(j+1) − m(m+1)) |m+1⟩, |m+1⟩ sits at index k−1
            sp[(k - 1, k)] = Complex64::from((j * (j + 1.0) - m * (m + 1.0)).sqrt());
        }
    }
    (sz, sp)
}

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Hamiltonian matrix (GHz) and the pseudospin `S̃_x` in the same basis.
pub fn spin_hamiltonian(params: &SpinParams, field: Field) -> Result<(CMatrix, CMatrix)> {
    field.validate()?;
    let manifolds = params.manifolds()?;
    let hyperfine = params.hyperfine()?;

    let (sz, sp) = spin_operators(0.5);
    let sm = sp.adjoint();
    let half = Complex64::from(0.5);
    let sx = (&sp + &sm) * half;

    let nuclear_dim = hyperfine.map_or(1, |h| (2.0 * h.nuclear_spin).round() as usize + 1);
    let id_n = CMatrix::identity(nuclear_dim, nuclear_dim);
    let local_dim = 2 * nuclear_dim;
    let dim = manifolds.len() * local_dim;

    let mut h = CMatrix::zeros(dim, dim);
    let mut sx_full = CMatrix::zeros(dim, dim);

    let hf_block = hyperfine.map(|hf| {
        let (iz, ip) = spin_operators(hf.nuclear_spin);
        let im = ip.adjoint();
        let a_par = Complex64::from(mhz_to_ghz(hf.a_par));
        let a_perp = Complex64::from(mhz_to_ghz(hf.a_perp));
        kron(&sz, &iz) * a_par + (kron(&sp, &im) + kron(&sm, &ip)) * (a_perp * half)
    });

    let b = field.magnitude * UNITS.bohr_magneton_over_h;
    let (bz, bx) = (b * field.theta.cos(), b * field.theta.sin());

    for (k, m) in manifolds.iter().enumerate() {
        let zeeman = &sz * Complex64::from(m.g.g_par * bz) + &sx * Complex64::from(m.g.g_perp * bx);
        let mut block = kron(&zeeman, &id_n);
        if let Some(hf) = &hf_block {
            block += hf;
        }
        for d in 0..local_dim {
            block[(d, d)] += m.offset;
        }
        let start = k * local_dim;
        h.view_mut((start, start), (local_dim, local_dim)).copy_from(&block);
        sx_full
            .view_mut((start, start), (local_dim, local_dim))
            .copy_from(&kron(&sx, &id_n));
    }
    Ok((h, sx_full))
}

pub fn spin_spectrum(params: &SpinParams, field: Field) -> Result<SpinSpectrum> {
    let (h, sx) = spin_hamiltonian(params, field)?;
    let eig = eigh(&h)?;
    let coupling = eig.vectors.adjoint() * sx * &eig.vectors;

    let dim = eig.values.len();
    let mut transitions = Vec::new();
    for lower in 0..dim {
        for upper in lower + 1..dim {
            let intensity = coupling[(upper, lower)].norm_sqr();
            if intensity > INTENSITY_FLOOR {
                transitions.push(Transition {
                    lower,
                    upper,
                    frequency: eig.values[upper] - eig.values[lower],
                    intensity,
                });
            }
        }
    }
    Ok(SpinSpectrum {
        field,
        levels: eig.values,
        transitions,
    })
}

/// Levels at `steps` evenly spaced field magnitudes in `[b_min, b_max]`
/// (a single point when `b_min == b_max`).
pub fn zeeman_sweep(
    params: &SpinParams,
    b_min: f64,
    b_max: f64,
    steps: usize,
    theta: f64,
) -> Result<Vec<SpinSpectrum>> {
    if b_max < b_min {
        return Err(Error::InvalidArgument("bmax must be >= bmin".into()));
    }
    let count = if b_min == b_max { 1 } else { steps.max(2) };
    (0..count)
        .map(|i| {
            let b = if count == 1 {
                b_min
            } else {
                b_min + (b_max - b_min) * i as f64 / (count - 1) as f64
            };
            spin_spectrum(params, Field::new(b, theta))
        })
        .collect()
}
