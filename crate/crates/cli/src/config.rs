//! Flag/JSON configuration merging and density-matrix input.

use std::fs;
use std::path::Path;

use clap::{Args, ValueEnum};
use serde::Deserialize;

use spindiscord::matrix::{Mat4, C64};
use spindiscord::{CouplingConstants, Drive, MixtureKind, ScenarioConfig, TwoQubitState};

use crate::Failure;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioKind {
    Constant,
    DoubleDouble,
    DoubleBright,
    BrightDouble,
    BrightBright,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CouplingPreset {
    Standard,
    Swapped,
}

/// Everything a `--config` file may set. Field names follow the long flags
/// with `_` in place of `-`.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub scenario: Option<ScenarioKind>,
    pub omega_plus: Option<f64>,
    pub omega_minus: Option<f64>,
    pub couplings: Option<CouplingPreset>,
    pub gxx: Option<f64>,
    pub gyy: Option<f64>,
    pub gzz: Option<f64>,
    pub gxy: Option<f64>,
    pub gyx: Option<f64>,
    pub mixture: Option<String>,
    pub p: Option<Vec<f64>>,
    pub tau_max: Option<f64>,
    pub points: Option<usize>,
    pub tau: Option<f64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self, Failure> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::Usage(format!("--config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| Failure::Usage(format!("--config {}: {e}", path.display())))
    }
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Field profile of the two blocks.
    #[arg(long, value_enum)]
    pub scenario: Option<ScenarioKind>,
    /// Constant plus-block field W+ (in units of c).
    #[arg(long, allow_hyphen_values = true)]
    pub omega_plus: Option<f64>,
    /// Constant minus-block field W-; defaults to 2 W+.
    #[arg(long, allow_hyphen_values = true)]
    pub omega_minus: Option<f64>,
    /// Coupling preset, before individual overrides.
    #[arg(long, value_enum)]
    pub couplings: Option<CouplingPreset>,
    #[arg(long, allow_hyphen_values = true)]
    pub gxx: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gyy: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gzz: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gxy: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub gyx: Option<f64>,
}

fn finite(flag: &str, v: f64) -> Result<f64, Failure> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Failure::Usage(format!("--{flag}: value {v} is not finite")))
    }
}

impl ScenarioArgs {
    pub fn resolve(&self, file: &FileConfig) -> Result<ScenarioConfig, Failure> {
        let kind = self
            .scenario
            .or(file.scenario)
            .unwrap_or(ScenarioKind::Constant);
        let omega_plus = finite(
            "omega-plus",
            self.omega_plus.or(file.omega_plus).unwrap_or(0.0),
        )?;
        let omega_minus = match self.omega_minus.or(file.omega_minus) {
            Some(w) => finite("omega-minus", w)?,
            None => 2.0 * omega_plus,
        };
        let mut k = match self
            .couplings
            .or(file.couplings)
            .unwrap_or(CouplingPreset::Standard)
        {
            CouplingPreset::Standard => CouplingConstants::standard(),
            CouplingPreset::Swapped => CouplingConstants::swapped(),
        };
        for (flag, slot, flag_value, file_value) in [
            ("gxx", &mut k.gxx, self.gxx, file.gxx),
            ("gyy", &mut k.gyy, self.gyy, file.gyy),
            ("gzz", &mut k.gzz, self.gzz, file.gzz),
            ("gxy", &mut k.gxy, self.gxy, file.gxy),
            ("gyx", &mut k.gyx, self.gyx, file.gyx),
        ] {
            if let Some(v) = flag_value.or(file_value) {
                *slot = finite(flag, v)?;
            }
        }
        use Drive::{SechBright, SechDouble};
        let (plus, minus) = match kind {
            ScenarioKind::Constant => (Drive::Constant(omega_plus), Drive::Constant(omega_minus)),
            ScenarioKind::DoubleDouble => (SechDouble, SechDouble),
            ScenarioKind::DoubleBright => (SechDouble, SechBright),
            ScenarioKind::BrightDouble => (SechBright, SechDouble),
            ScenarioKind::BrightBright => (SechBright, SechBright),
        };
        Ok(ScenarioConfig::new(plus, minus, k))
    }
}

pub fn mixture(flag: Option<&str>, file: &FileConfig) -> Result<MixtureKind, Failure> {
    let id = flag.or(file.mixture.as_deref()).unwrap_or("phi+psi+");
    id.parse()
        .map_err(|e| Failure::Usage(format!("--mixture: {e}")))
}

pub fn check_p(p: f64) -> Result<f64, Failure> {
    if (0.0..=1.0).contains(&p) {
        Ok(p)
    } else {
        Err(Failure::Usage(format!("--p: value {p} outside [0, 1]")))
    }
}

/// Reads a 4x4 array of `[re, im]` pairs from a file, or stdin for `-`.
pub fn read_density(path: &Path) -> Result<TwoQubitState, Failure> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        fs::read_to_string(path)
    }
    .map_err(|e| Failure::Usage(format!("--density {}: {e}", path.display())))?;
    parse_density(&text)
}

pub fn parse_density(text: &str) -> Result<TwoQubitState, Failure> {
    let rows: Vec<Vec<[f64; 2]>> = serde_json::from_str(text)
        .map_err(|e| Failure::Validation(format!("density matrix: {e}")))?;
    if rows.len() != 4 || rows.iter().any(|r| r.len() != 4) {
        return Err(Failure::Validation(
            "density matrix must be a 4x4 array of [re, im] pairs".into(),
        ));
    }
    let mut m = Mat4::zeros();
    for (i, row) in rows.iter().enumerate() {
        for (j, &[re, im]) in row.iter().enumerate() {
            m[(i, j)] = C64::new(re, im);
        }
    }
    TwoQubitState::new(m).map_err(|e| Failure::Validation(e.to_string()))
}

pub fn density_json(m: &Mat4) -> Vec<Vec<[f64; 2]>> {
    m.entries
        .iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn density_shape_is_checked() {
        assert!(matches!(
            parse_density("[[[1,0]]]"),
            Err(Failure::Validation(_))
        ));
        assert!(matches!(
            parse_density("not json"),
            Err(Failure::Validation(_))
        ));
        let ok = "[[[0.25,0],[0,0],[0,0],[0,0]],[[0,0],[0.25,0],[0,0],[0,0]],\
                  [[0,0],[0,0],[0.25,0],[0,0]],[[0,0],[0,0],[0,0],[0.25,0]]]";
        assert!(parse_density(ok).is_ok());
    }

    #[test]
    fn flags_override_file() {
        let file: FileConfig =
            serde_json::from_str(r#"{"scenario": "double-bright", "gzz": 0.5, "omega_plus": 4}"#)
                .unwrap();
        let args = ScenarioArgs {
            scenario: Some(ScenarioKind::Constant),
            omega_plus: None,
            omega_minus: None,
            couplings: None,
            gxx: None,
            gyy: None,
            gzz: Some(1.5),
            gxy: None,
            gyx: None,
        };
        let cfg = args.resolve(&file).unwrap();
        assert_eq!(cfg.drive_plus, Drive::Constant(4.0));
        assert_eq!(cfg.drive_minus, Drive::Constant(8.0));
        assert_eq!(cfg.couplings.gzz, 1.5);
    }

    #[test]
    fn unknown_config_keys_rejected() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"omega": 1}"#).is_err());
    }
}
