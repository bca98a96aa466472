//! Proportionality check between the reduced SOC splitting and ΔL_z^eff.

use serde::Serialize;

use crate::error::{Error, Result};

/// Rows whose `|ΔL_z^eff|` falls below this are excluded from the ratio.
pub const MIN_DELTA_LZ: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct SocLzRow {
    pub label: String,
    /// GHz
    pub de_soc_red: f64,
    pub delta_lz_eff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SocLzEntry {
    pub label: String,
    /// GHz per unit L_z; `None` when excluded.
    pub ratio: Option<f64>,
    pub excluded: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SocLzReport {
    pub entries: Vec<SocLzEntry>,
    pub mean_ratio: Option<f64>,
    /// `(max − min) / mean` over the included rows.
    pub relative_spread: Option<f64>,
}

/// `ΔE_SOC^red / ΔL_z^eff` per row with its spread; a diagnostic, not an
/// invariant.
pub fn soc_lz_proportionality(rows: &[SocLzRow]) -> Result<SocLzReport> {
    if rows.len() < 2 {
        return Err(Error::InvalidArgument("need at least two rows".into()));
    }
    let entries: Vec<SocLzEntry> = rows
        .iter()
        .map(|r| {
            if r.delta_lz_eff.abs() < MIN_DELTA_LZ {
                SocLzEntry {
                    label: r.label.clone(),
                    ratio: None,
                    excluded: true,
                    note: Some(format!(
                        "|delta_lz_eff| = {} below {MIN_DELTA_LZ}",
                        r.delta_lz_eff.abs()
                    )),
                }
            } else {
                SocLzEntry {
                    label: r.label.clone(),
                    ratio: Some(r.de_soc_red / r.delta_lz_eff),
                    excluded: false,
                    note: None,
                }
            }
        })
        .collect();

    let ratios: Vec<f64> = entries.iter().filter_map(|e| e.ratio).collect();
    let (mean_ratio, relative_spread) = if ratios.is_empty() {
        (None, None)
    } else {
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        let max = ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
        (Some(mean), Some((max - min) / mean))
    };
    Ok(SocLzReport {
        entries,
        mean_ratio,
        relative_spread,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn row(label: &str, de: f64, dl: f64) -> SocLzRow {
        SocLzRow {
            label: label.into(),
            de_soc_red: de,
            delta_lz_eff: dl,
        }
    }

    #[test]
    fn table_ratios() {
        let rep = soc_lz_proportionality(&[
            row("4H:h", 6.29, 0.005),
            row("4H:k", 490.37, 0.128),
            row("6H:k2", 493.23, 0.123),
        ])
        .unwrap();
        assert!(rep.entries[0].excluded);
        assert_abs_diff_eq!(rep.entries[1].ratio.unwrap(), 3831.0, epsilon = 0.1);
        assert_abs_diff_eq!(rep.entries[2].ratio.unwrap(), 4010.0, epsilon = 0.1);
        assert!(rep.relative_spread.unwrap() < 0.05);
    }

    #[test]
    fn needs_two_rows() {
        assert!(soc_lz_proportionality(&[row("a", 1.0, 1.0)]).is_err());
    }

    #[test]
    fn all_excluded() {
        let rep = soc_lz_proportionality(&[row("a", 1.0, 0.0), row("b", 1.0, 0.001)]).unwrap();
        assert_eq!(rep.mean_ratio, None);
    }
}
