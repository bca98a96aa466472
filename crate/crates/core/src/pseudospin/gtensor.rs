//! g-tensor components, reduced spin-orbit splitting and effective orbital
//! angular momentum.

use num_complex::Complex64;
use serde::Serialize;

use super::kramers::{Component, KramersDoublet, Spin};
use crate::catalog::DEFAULT_G0;

/// Axial g tensor of a C3v Kramers doublet.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GTensor {
    pub g_par: f64,
    pub g_perp: f64,
}

impl GTensor {
    pub fn axial(g_par: f64, g_perp: f64) -> Self {
        GTensor { g_par, g_perp }
    }
}

/// `ΔE_SOC^red = p ΔE_SOC`.
pub fn reduced_soc(p: f64, de_soc: f64) -> f64 {
    p * de_soc
}

/// `L_z^eff = p L_z^o`.
pub fn effective_lz(p: f64, lz_o: f64) -> f64 {
    p * lz_o
}

/// `ΔL_z^eff = p (L_z^o(GS2) − L_z^o(GS1))`.
pub fn delta_effective_lz(p: f64, lz_o_gs1: f64, lz_o_gs2: f64) -> f64 {
    p * (lz_o_gs2 - lz_o_gs1)
}

/// `g∥ = 2(g0 S_z + L_z^eff)`; the published values use `S_z = +1/2`.
pub fn g_parallel(g0: f64, lz_eff: f64, s_z: f64) -> f64 {
    2.0 * (g0 * s_z + lz_eff)
}

/// Magnetic dipole operator `μ̂ = −μ_B (k L̂ + g0 Ŝ)` in units of μ_B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleOperator {
    pub g0: f64,
    /// Orbital reduction applied to L̂ (p·r for a reduced doublet).
    pub orbital_reduction: f64,
}

impl Default for DipoleOperator {
    fn default() -> Self {
        DipoleOperator {
            g0: DEFAULT_G0,
            orbital_reduction: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Ladder {
    Raise,
    Lower,
}

impl Ladder {
    fn step(self) -> i32 {
        match self {
            Ladder::Raise => 1,
            Ladder::Lower => -1,
        }
    }
}

/// `⟨bra| L± |ket⟩` for l = 2 and `⟨bra| S± |ket⟩` for s = 1/2, as
/// `(orbital, spin)` parts. `None` when neither operator connects the pair.
fn ladder_elements(bra: &Component, ket: &Component, dir: Ladder) -> Option<(f64, f64)> {
    let step = dir.step();
    if bra.spin == ket.spin && bra.m_l == ket.m_l + step {
        let m = ket.m_l;
        let l_elem = ((6 - m * (m + step)) as f64).sqrt();
        return Some((l_elem, 0.0));
    }
    if bra.m_l == ket.m_l && bra.spin.twice() == ket.spin.twice() + 2 * step {
        return Some((0.0, 1.0));
    }
    None
}

/// Whether any component pair is connected by L± or S± (exact integer
/// selection rules on `m_l` and `m_s`).
pub fn ladder_coupling_allowed(kd: &KramersDoublet, partner: &KramersDoublet) -> bool {
    kd.composition.iter().any(|a| {
        partner
            .composition
            .iter()
            .any(|b| ladder_elements(a, b, Ladder::Raise).is_some() || ladder_elements(a, b, Ladder::Lower).is_some())
    })
}

/// `(⟨kd|μ̂₊|partner⟩, ⟨kd|μ̂₋|partner⟩)` in units of μ_B.
pub fn ladder_moments(kd: &KramersDoublet, partner: &KramersDoublet, op: &DipoleOperator) -> (Complex64, Complex64) {
    let mut out = [Complex64::from(0.0); 2];
    for (slot, dir) in [Ladder::Raise, Ladder::Lower].into_iter().enumerate() {
        for a in &kd.composition {
            for b in &partner.composition {
                if let Some((l_elem, s_elem)) = ladder_elements(a, b, dir) {
                    let weight = -(op.orbital_reduction * l_elem + op.g0 * s_elem);
                    out[slot] += a.amplitude.conj() * b.amplitude * weight;
                }
            }
        }
    }
    (out[0], out[1])
}

/// Transverse g factor `|⟨kd|μ̂₊ + μ̂₋|partner⟩| / μ_B`.
///
/// Exactly zero when no component pair is connected by a ladder operator,
/// which is the case for every doublet made of Ψ1/Ψ4 or Ψ2/Ψ3.
pub fn g_perp(kd: &KramersDoublet, partner: &KramersDoublet) -> f64 {
    g_perp_with(kd, partner, &DipoleOperator::default())
}

pub fn g_perp_with(kd: &KramersDoublet, partner: &KramersDoublet, op: &DipoleOperator) -> f64 {
    if !ladder_coupling_allowed(kd, partner) {
        return 0.0;
    }
    let (plus, minus) = ladder_moments(kd, partner, op);
    (plus + minus).norm()
}

/// Parallel g factor of a doublet member from its composition,
/// `2⟨kd|k L_z + g0 S_z|kd⟩`.
pub fn g_parallel_of(kd: &KramersDoublet, op: &DipoleOperator) -> f64 {
    let mut mu_z = 0.0;
    for c in &kd.composition {
        let s_z = match c.spin {
            Spin::Up => 0.5,
            Spin::Down => -0.5,
        };
        mu_z += c.amplitude.norm_sqr() * (op.orbital_reduction * c.m_l as f64 + op.g0 * s_z);
    }
    2.0 * mu_z
}
