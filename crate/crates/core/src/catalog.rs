//! Per-defect scalar parameters and the TOML parameter-file format.
//!
//! A parameter file is a list of `[[defect]]` tables whose keys are the
//! lower_snake_case field names of [`DefectParams`]. Units are fixed:
//! energies in meV, `de_soc` and `*_de_soc*` in GHz, hyperfine constants in
//! MHz. `#` starts a comment.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BUILTIN_SOURCE: &str = include_str!("../data/vanadium.toml");

/// Free-electron g factor used when a record does not set `g0`.
pub const DEFAULT_G0: f64 = 2.003;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Polytype {
    #[serde(rename = "4H")]
    FourH,
    #[serde(rename = "6H")]
    SixH,
}

impl fmt::Display for Polytype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polytype::FourH => "4H",
            Polytype::SixH => "6H",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Site {
    H,
    K,
    K1,
    K2,
}

impl Site {
    fn allowed_in(self, polytype: Polytype) -> bool {
        match polytype {
            Polytype::FourH => matches!(self, Site::H | Site::K),
            Polytype::SixH => matches!(self, Site::H | Site::K1 | Site::K2),
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Site::H => "h",
            Site::K => "k",
            Site::K1 => "k1",
            Site::K2 => "k2",
        })
    }
}

/// Photoluminescence center assigned to the defect by experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlCenter {
    Alpha,
    Beta,
    Gamma,
}

impl fmt::Display for PlCenter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PlCenter::Alpha => "alpha",
            PlCenter::Beta => "beta",
            PlCenter::Gamma => "gamma",
        })
    }
}

/// Published and measured values kept alongside a record for reports.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ReferenceValues {
    pub p: Option<f64>,
    /// GHz
    pub de_soc_red: Option<f64>,
    /// GHz
    pub exp_de_soc: Option<f64>,
    pub lz_eff_gs1: Option<f64>,
    pub lz_eff_gs2: Option<f64>,
    pub delta_lz_eff: Option<f64>,
    pub g_par_gs1: Option<f64>,
    pub g_par_gs2: Option<f64>,
    pub exp_g_par_gs1: Option<f64>,
    pub exp_g_par_gs2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DefectParams {
    pub impurity: String,
    pub polytype: Polytype,
    pub site: Site,
    pub pl_center: Option<PlCenter>,
    /// Jahn-Teller stabilization energy (meV).
    pub e_jt: f64,
    /// Barrier between adjacent minima (meV).
    pub delta_jt: f64,
    /// Effective e-mode phonon energy (meV).
    pub homega: f64,
    /// Intrinsic ground-state spin-orbit splitting GS2 - GS1 (GHz).
    pub de_soc: f64,
    pub lz_o_gs1: f64,
    pub lz_o_gs2: f64,
    pub nuclear_spin: f64,
    /// MHz
    pub a_par: Option<f64>,
    /// MHz
    pub a_perp: Option<f64>,
    pub g0: f64,
    pub reference: ReferenceValues,
}

impl DefectParams {
    /// Lookup key, e.g. `4H:k2`. Non-vanadium records are prefixed with
    /// the impurity symbol (`Mo:6H:h`).
    pub fn key(&self) -> String {
        if self.impurity == "V" {
            format!("{}:{}", self.polytype, self.site)
        } else {
            format!("{}:{}:{}", self.impurity, self.polytype, self.site)
        }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [
            ("e_jt", self.e_jt),
            ("delta_jt", self.delta_jt),
            ("homega", self.homega),
            ("de_soc", self.de_soc),
            ("lz_o_gs1", self.lz_o_gs1),
            ("lz_o_gs2", self.lz_o_gs2),
            ("nuclear_spin", self.nuclear_spin),
            ("g0", self.g0),
        ];
        for (field, value) in finite {
            if !value.is_finite() {
                return Err(Error::validation(field, "must be finite"));
            }
        }
        if self.e_jt <= 0.0 {
            return Err(Error::validation("e_jt", format!("must be > 0, got {}", self.e_jt)));
        }
        if self.homega <= 0.0 {
            return Err(Error::validation("homega", format!("must be > 0, got {}", self.homega)));
        }
        if self.delta_jt < 0.0 {
            return Err(Error::validation(
                "delta_jt",
                format!("must be >= 0, got {}", self.delta_jt),
            ));
        }
        if self.delta_jt >= 2.0 * self.e_jt {
            return Err(Error::validation(
                "delta_jt",
                format!("must be < 2*e_jt = {}, got {}", 2.0 * self.e_jt, self.delta_jt),
            ));
        }
        if !self.site.allowed_in(self.polytype) {
            return Err(Error::validation(
                "site",
                format!("site `{}` does not exist in {}", self.site, self.polytype),
            ));
        }
        let twice = 2.0 * self.nuclear_spin;
        if self.nuclear_spin < 0.0 || twice.fract() != 0.0 {
            return Err(Error::validation(
                "nuclear_spin",
                format!("must be a non-negative multiple of 1/2, got {}", self.nuclear_spin),
            ));
        }
        for (field, value) in [("a_par", self.a_par), ("a_perp", self.a_perp)] {
            if matches!(value, Some(v) if !v.is_finite()) {
                return Err(Error::validation(field, "must be finite"));
            }
        }
        if self.impurity.is_empty() {
            return Err(Error::validation("impurity", "must not be empty"));
        }
        Ok(())
    }
}

/// One `[[defect]]` table as it appears on disk.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Record {
    #[serde(default = "default_impurity")]
    impurity: String,
    polytype: Polytype,
    site: Site,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pl_center: Option<PlCenter>,
    e_jt: f64,
    delta_jt: f64,
    homega: f64,
    de_soc: f64,
    lz_o_gs1: f64,
    lz_o_gs2: f64,
    nuclear_spin: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a_par: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    a_perp: Option<f64>,
    #[serde(default = "default_g0")]
    g0: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ref_p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ref_de_soc_red: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exp_de_soc: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ref_lz_eff_gs1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ref_lz_eff_gs2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ref_delta_lz_eff: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ref_g_par_gs1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ref_g_par_gs2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exp_g_par_gs1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    exp_g_par_gs2: Option<f64>,
}

fn default_impurity() -> String {
    "V".to_owned()
}

fn default_g0() -> f64 {
    DEFAULT_G0
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    #[serde(default)]
    defect: Vec<Record>,
}

impl From<Record> for DefectParams {
    fn from(r: Record) -> Self {
        DefectParams {
            impurity: r.impurity,
            polytype: r.polytype,
            site: r.site,
            pl_center: r.pl_center,
            e_jt: r.e_jt,
            delta_jt: r.delta_jt,
            homega: r.homega,
            de_soc: r.de_soc,
            lz_o_gs1: r.lz_o_gs1,
            lz_o_gs2: r.lz_o_gs2,
            nuclear_spin: r.nuclear_spin,
            a_par: r.a_par,
            a_perp: r.a_perp,
            g0: r.g0,
            reference: ReferenceValues {
                p: r.ref_p,
                de_soc_red: r.ref_de_soc_red,
                exp_de_soc: r.exp_de_soc,
                lz_eff_gs1: r.ref_lz_eff_gs1,
                lz_eff_gs2: r.ref_lz_eff_gs2,
                delta_lz_eff: r.ref_delta_lz_eff,
                g_par_gs1: r.ref_g_par_gs1,
                g_par_gs2: r.ref_g_par_gs2,
                exp_g_par_gs1: r.exp_g_par_gs1,
                exp_g_par_gs2: r.exp_g_par_gs2,
            },
        }
    }
}

impl From<&DefectParams> for Record {
    fn from(p: &DefectParams) -> Self {
        let r = &p.reference;
        Record {
            impurity: p.impurity.clone(),
            polytype: p.polytype,
            site: p.site,
            pl_center: p.pl_center,
            e_jt: p.e_jt,
            delta_jt: p.delta_jt,
            homega: p.homega,
            de_soc: p.de_soc,
            lz_o_gs1: p.lz_o_gs1,
            lz_o_gs2: p.lz_o_gs2,
            nuclear_spin: p.nuclear_spin,
            a_par: p.a_par,
            a_perp: p.a_perp,
            g0: p.g0,
            ref_p: r.p,
            ref_de_soc_red: r.de_soc_red,
            exp_de_soc: r.exp_de_soc,
            ref_lz_eff_gs1: r.lz_eff_gs1,
            ref_lz_eff_gs2: r.lz_eff_gs2,
            ref_delta_lz_eff: r.delta_lz_eff,
            ref_g_par_gs1: r.g_par_gs1,
            ref_g_par_gs2: r.g_par_gs2,
            exp_g_par_gs1: r.exp_g_par_gs1,
            exp_g_par_gs2: r.exp_g_par_gs2,
        }
    }
}

/// Validated, immutable list of defect records.
#[derive(Debug, Clone, PartialEq)]
pub struct Catalog {
    defects: Vec<DefectParams>,
}

impl Catalog {
    /// The five vanadium defects shipped with the crate.
    pub fn builtin() -> Self {
        load_catalog(BUILTIN_SOURCE).expect("built-in catalog is valid")
    }

    pub fn builtin_source() -> &'static str {
        BUILTIN_SOURCE
    }

    pub fn defects(&self) -> &[DefectParams] {
        &self.defects
    }

    pub fn len(&self) -> usize {
        self.defects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defects.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, DefectParams> {
        self.defects.iter()
    }

    /// Case-insensitive lookup by [`DefectParams::key`].
    pub fn get(&self, key: &str) -> Option<&DefectParams> {
        self.defects.iter().find(|d| d.key().eq_ignore_ascii_case(key.trim()))
    }

    pub fn keys(&self) -> Vec<String> {
        self.defects.iter().map(DefectParams::key).collect()
    }

    pub fn to_toml(&self) -> String {
        serialize_catalog(&self.defects)
    }
}

impl<'a> IntoIterator for &'a Catalog {
    type Item = &'a DefectParams;
    type IntoIter = std::slice::Iter<'a, DefectParams>;

    fn into_iter(self) -> Self::IntoIter {
        self.defects.iter()
    }
}

impl FromStr for Catalog {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        load_catalog(s)
    }
}

/// Parse and validate a parameter file.
pub fn load_catalog(source: &str) -> Result<Catalog> {
    let file: CatalogFile = toml::from_str(source).map_err(|e| Error::Parse(e.to_string()))?;
    let mut defects = Vec::with_capacity(file.defect.len());
    for (index, record) in file.defect.into_iter().enumerate() {
        let params = DefectParams::from(record);
        params.validate().map_err(|e| match e {
            Error::Validation { field, reason } => Error::Validation {
                field: format!("defect[{index}].{field}"),
                reason,
            },
            other => other,
        })?;
        if defects.iter().any(|d: &DefectParams| d.key() == params.key()) {
            return Err(Error::validation(
                &format!("defect[{index}]"),
                format!("duplicate key `{}`", params.key()),
            ));
        }
        defects.push(params);
    }
    Ok(Catalog { defects })
}

pub fn serialize_catalog(defects: &[DefectParams]) -> String {
    let file = CatalogFile {
        defect: defects.iter().map(Record::from).collect(),
    };
    toml::to_string(&file).expect("catalog records serialize")
}
