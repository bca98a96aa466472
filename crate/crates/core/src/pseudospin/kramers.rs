//! Kramers doublets built from d orbitals under C3v.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

const NORM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    /// `2 m_s`.
    pub fn twice(self) -> i32 {
        match self {
            Spin::Up => 1,
            Spin::Down => -1,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }
}

/// One term `amplitude · |d_{m_l}, m_s⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Component {
    /// `m_l ∈ {−2, …, 2}`.
    pub m_l: i32,
    pub spin: Spin,
    pub amplitude: Complex64,
}

impl Component {
    pub fn new(m_l: i32, spin: Spin, amplitude: impl Into<Complex64>) -> Self {
        Component {
            m_l,
            spin,
            amplitude: amplitude.into(),
        }
    }

    /// `2 m_j = 2 m_l + 2 m_s`.
    pub fn twice_mj(&self) -> i32 {
        2 * self.m_l + self.spin.twice()
    }
}

/// Half-integer `m_j`, stored as `2 m_j` to keep arithmetic exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfInteger(pub i32);

impl HalfInteger {
    pub fn value(self) -> f64 {
        self.0 as f64 / 2.0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 % 2 == 0 {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

/// C3v double-group irrep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DoubleGroupIrrep {
    /// Γ4
    EHalf,
    /// Γ5,6
    EThreeHalves,
}

impl fmt::Display for DoubleGroupIrrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DoubleGroupIrrep::EHalf => "E_1/2 (Γ4)",
            DoubleGroupIrrep::EThreeHalves => "E_3/2 (Γ5,6)",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SingleGroupIrrep {
    /// ²E
    E,
    /// ²A1
    A1,
}

impl fmt::Display for SingleGroupIrrep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SingleGroupIrrep::E => "2E",
            SingleGroupIrrep::A1 => "2A1",
        })
    }
}

/// Irrep from `2 m_j`: `|m_j| ∈ {1/2, 5/2, …}` (mod 3) is E_1/2,
/// `|m_j| = 3/2` (mod 3) is E_3/2.
pub fn irrep_of(twice_mj: HalfInteger) -> DoubleGroupIrrep {
    if twice_mj.0.rem_euclid(6) == 3 {
        DoubleGroupIrrep::EThreeHalves
    } else {
        DoubleGroupIrrep::EHalf
    }
}

/// One member of a Kramers doublet.
#[derive(Debug, Clone, PartialEq)]
pub struct KramersDoublet {
    pub composition: Vec<Component>,
    pub m_j: HalfInteger,
    pub irrep: DoubleGroupIrrep,
    pub single_group: SingleGroupIrrep,
}

impl KramersDoublet {
    /// Time-reversal partner, `Θ = −iσ_y K` with `Θ|l, m⟩ = (−1)^m |l, −m⟩`.
    pub fn time_reversed(&self) -> KramersDoublet {
        let composition = self
            .composition
            .iter()
            .map(|c| {
                let orbital_phase = if c.m_l.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                let spin_phase = match c.spin {
                    Spin::Up => 1.0,
                    Spin::Down => -1.0,
                };
                Component {
                    m_l: -c.m_l,
                    spin: c.spin.flipped(),
                    amplitude: c.amplitude.conj() * orbital_phase * spin_phase,
                }
            })
            .collect();
        KramersDoublet {
            composition,
            m_j: HalfInteger(-self.m_j.0),
            irrep: self.irrep,
            single_group: self.single_group,
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.composition.iter().map(|c| c.amplitude.norm_sqr()).sum()
    }

    pub fn amplitude(&self, m_l: i32, spin: Spin) -> Complex64 {
        self.composition
            .iter()
            .find(|c| c.m_l == m_l && c.spin == spin)
            .map_or(Complex64::from(0.0), |c| c.amplitude)
    }
}

/// Classify a spinor state built from d orbitals.
pub fn classify_kd(composition: Vec<Component>) -> Result<KramersDoublet> {
    if composition.is_empty() {
        return Err(Error::InvalidState("empty composition".into()));
    }
    for (i, c) in composition.iter().enumerate() {
        if !(-2..=2).contains(&c.m_l) {
            return Err(Error::InvalidState(format!("m_l = {} is not a d orbital", c.m_l)));
        }
        if composition[..i].iter().any(|o| o.m_l == c.m_l && o.spin == c.spin) {
            return Err(Error::InvalidState(format!(
                "component |d{}, {:?}⟩ listed twice",
                c.m_l, c.spin
            )));
        }
    }
    let norm: f64 = composition.iter().map(|c| c.amplitude.norm_sqr()).sum();
    if (norm - 1.0).abs() > NORM_TOL {
        return Err(Error::InvalidState(format!(
            "amplitudes not normalized (|ψ|² = {norm})"
        )));
    }

    let class = composition[0].twice_mj().rem_euclid(6);
    if let Some(bad) = composition.iter().find(|c| c.twice_mj().rem_euclid(6) != class) {
        return Err(Error::InvalidState(format!(
            "mixed m_j classes: {} and {}",
            HalfInteger(composition[0].twice_mj()),
            HalfInteger(bad.twice_mj())
        )));
    }

    let mut dominant = &composition[0];
    for c in &composition[1..] {
        if c.amplitude.norm_sqr() > dominant.amplitude.norm_sqr() {
            dominant = c;
        }
    }
    let m_j = HalfInteger(dominant.twice_mj());
    let single_group = if dominant.m_l == 0 {
        SingleGroupIrrep::A1
    } else {
        SingleGroupIrrep::E
    };

    Ok(KramersDoublet {
        irrep: irrep_of(m_j),
        m_j,
        single_group,
        composition,
    })
}

/// The five atomic doublets formed by d orbitals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AtomicDoublet {
    Psi1,
    Psi2,
    Psi3,
    Psi4,
    Psi5,
}

impl AtomicDoublet {
    pub const ALL: [AtomicDoublet; 5] = [
        AtomicDoublet::Psi1,
        AtomicDoublet::Psi2,
        AtomicDoublet::Psi3,
        AtomicDoublet::Psi4,
        AtomicDoublet::Psi5,
    ];

    /// `(m_l, spin)` of the positive-m_j member and of its partner.
    pub fn orbitals(self) -> [(i32, Spin); 2] {
        match self {
            AtomicDoublet::Psi1 => [(2, Spin::Up), (-2, Spin::Down)],
            AtomicDoublet::Psi2 => [(2, Spin::Down), (-2, Spin::Up)],
            AtomicDoublet::Psi3 => [(1, Spin::Up), (-1, Spin::Down)],
            AtomicDoublet::Psi4 => [(1, Spin::Down), (-1, Spin::Up)],
            AtomicDoublet::Psi5 => [(0, Spin::Up), (0, Spin::Down)],
        }
    }

    /// Member `k` (0 or 1) as a classified state.
    pub fn member(self, k: usize) -> KramersDoublet {
        let (m_l, spin) = self.orbitals()[k];
        classify_kd(vec![Component::new(m_l, spin, 1.0)]).expect("single normalized component")
    }
}

/// E_3/2 ground sublevel `α|d−2, ↑⟩ + β|d+1, ↑⟩` (Ψ2 and Ψ3 members with
/// `S_z = +1/2`), with `α ≥ 0` and `β = √(1 − α²)` fixed by
/// `L_z^o = −2α + β`.
pub fn e32_sublevel(lz_o: f64) -> Result<KramersDoublet> {
    if !(-2.0..=1.0).contains(&lz_o) {
        return Err(Error::InvalidArgument(format!("L_z^o = {lz_o} lies outside [-2, 1]")));
    }
    // −2α + √(1−α²) falls monotonically from 1 to −2 on [0, 1]
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if -2.0 * mid + (1.0 - mid * mid).sqrt() > lz_o {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let alpha = 0.5 * (lo + hi);
    let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
    let norm = alpha.hypot(beta);
    let mut composition = Vec::with_capacity(2);
    for (m_l, amp) in [(-2, alpha / norm), (1, beta / norm)] {
        if amp != 0.0 {
            composition.push(Component::new(m_l, Spin::Up, amp));
        }
    }
    classify_kd(composition)
}
