//! Unit conversions. Energies are carried internally in meV; spectroscopic
//! quantities leave the crate in GHz (or MHz for hyperfine constants).

/// Elementary charge (C), exact since the 2019 SI redefinition.
const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Planck constant (J s), exact.
const PLANCK: f64 = 6.626_070_15e-34;
/// Bohr magneton (J/T), CODATA 2018.
const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitConstants {
    /// GHz per meV.
    pub mev_to_ghz: f64,
    /// GHz per tesla.
    pub bohr_magneton_over_h: f64,
}

impl UnitConstants {
    pub const fn codata() -> Self {
        UnitConstants {
            mev_to_ghz: ELEMENTARY_CHARGE * 1e-3 / PLANCK * 1e-9,
            bohr_magneton_over_h: BOHR_MAGNETON / PLANCK * 1e-9,
        }
    }
}

impl Default for UnitConstants {
    fn default() -> Self {
        Self::codata()
    }
}

pub const UNITS: UnitConstants = UnitConstants::codata();

/// meV -> GHz.
pub fn to_ghz(mev: f64) -> f64 {
    mev * UNITS.mev_to_ghz
}

/// GHz -> meV.
pub fn to_mev(ghz: f64) -> f64 {
    ghz / UNITS.mev_to_ghz
}

pub fn mhz_to_ghz(mhz: f64) -> f64 {
    mhz * 1e-3
}
