//! Run configuration: a JSON file (`--config`) overlaid by command-line
//! flags, resolved into one [`RunConfig`] that is echoed into every output.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use pseudospec_core::exact::{display, rat, Rational};
use pseudospec_core::operators::GridSpec;
use pseudospec_core::params::SwansonParams;
use pseudospec_core::superpotential::Superpotential;
use pseudospec_core::verify::{Model, Tolerances};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Rm1,
    Rm2,
    Rm1Pt,
    Rm2Pt,
    Harmonic,
}

impl ModelKind {
    fn is_pt(self) -> bool {
        matches!(self, ModelKind::Rm1Pt | ModelKind::Rm2Pt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Csv,
}

/// A number written as a decimal or as p/q. The exact rational is kept when
/// the text is a short decimal or fraction.
#[derive(Debug, Clone, PartialEq)]
pub struct Number {
    pub value: f64,
    pub exact: Option<Rational>,
}

impl Number {
    pub fn from_f64(value: f64) -> Self {
        Number {
            value,
            exact: exact_decimal(&format!("{value}")),
        }
    }

    pub fn fraction(n: i128, d: i128) -> Self {
        let r = rat(n, d);
        Number {
            value: n as f64 / d as f64,
            exact: Some(r),
        }
    }
}

/// Bounds that keep the exact parameter formulas inside i128.
const MAX_EXACT_DENOM: i128 = 1000;
const MAX_EXACT_NUMER: i128 = 1_000_000;

fn small(r: Rational) -> Option<Rational> {
    (r.denom().abs() <= MAX_EXACT_DENOM && r.numer().abs() <= MAX_EXACT_NUMER).then_some(r)
}

fn exact_decimal(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if int.is_empty() && frac.is_empty() || frac.len() > 6 || int.len() > 7 {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let num: i128 = format!("{int}{frac}").parse().ok()?;
    let r = rat(if neg { -num } else { num }, 10i128.pow(frac.len() as u32));
    small(r)
}

impl FromStr for Number {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some((n, d)) = s.split_once('/') {
            let n: i128 = n.trim().parse().map_err(|_| format!("bad numerator in '{s}'"))?;
            let d: i128 = d.trim().parse().map_err(|_| format!("bad denominator in '{s}'"))?;
            if d == 0 {
                return Err(format!("zero denominator in '{s}'"));
            }
            let r = rat(n, d);
            return Ok(Number {
                value: n as f64 / d as f64,
                exact: small(r),
            });
        }
        let value: f64 = s.trim().parse().map_err(|_| format!("'{s}' is not a number"))?;
        if !value.is_finite() {
            return Err(format!("'{s}' is not finite"));
        }
        Ok(Number {
            value,
            exact: exact_decimal(s),
        })
    }
}

impl fmt::Display for Number {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.exact {
            Some(r) => write!(f, "{}", display(r)),
            None => write!(f, "{}", self.value),
        }
    }
}

impl Serialize for Number {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match &self.exact {
            Some(r) if !r.is_integer() && (self.value * 1e6).fract() != 0.0 => s.serialize_str(&display(r)),
            _ => s.serialize_f64(self.value),
        }
    }
}

impl<'de> Deserialize<'de> for Number {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(Number::from_f64(v)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileGrid {
    pub n_interior: Option<usize>,
    #[serde(rename = "L")]
    pub half_width: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileTolerances {
    pub spectrum: Option<f64>,
    pub gram: Option<f64>,
    pub ratio_min: Option<f64>,
    pub ratio_max: Option<f64>,
    pub floor: Option<f64>,
    pub marginal: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileScan {
    pub alpha_min: Option<f64>,
    pub alpha_max: Option<f64>,
    pub beta_min: Option<f64>,
    pub beta_max: Option<f64>,
    pub resolution: Option<usize>,
}

/// Everything a config file may set; all optional.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub model: Option<ModelKind>,
    pub alpha: Option<Number>,
    pub beta: Option<Number>,
    #[serde(rename = "A1")]
    pub a1: Option<Number>,
    #[serde(rename = "B1")]
    pub b1: Option<Number>,
    #[serde(rename = "A2")]
    pub a2: Option<Number>,
    #[serde(rename = "B2")]
    pub b2: Option<Number>,
    #[serde(default)]
    pub grid: FileGrid,
    pub levels: Option<usize>,
    #[serde(default)]
    pub tolerances: FileTolerances,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    #[serde(default)]
    pub scan: FileScan,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone, Default, Args)]
pub struct ModelArgs {
    /// Model family.
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// α, decimal or p/q.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<Number>,
    /// β, decimal or p/q.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<Number>,
    #[arg(long = "A1")]
    pub a1: Option<Number>,
    #[arg(long = "B1")]
    pub b1: Option<Number>,
    #[arg(long = "A2")]
    pub a2: Option<Number>,
    #[arg(long = "B2")]
    pub b2: Option<Number>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GridArgs {
    /// Interior grid points.
    #[arg(long = "n-interior", short = 'n')]
    pub n_interior: Option<usize>,
    /// Half-width of the truncated line for RM-II and harmonic models.
    #[arg(long = "L")]
    pub half_width: Option<f64>,
    /// Number of levels.
    #[arg(long)]
    pub levels: Option<usize>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct ToleranceArgs {
    #[arg(long = "tol-spectrum")]
    pub spectrum: Option<f64>,
    #[arg(long = "tol-gram")]
    pub gram: Option<f64>,
    #[arg(long = "ratio-min")]
    pub ratio_min: Option<f64>,
    #[arg(long = "ratio-max")]
    pub ratio_max: Option<f64>,
    #[arg(long = "tol-floor")]
    pub floor: Option<f64>,
    #[arg(long = "tol-marginal")]
    pub marginal: Option<f64>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct OutputArgs {
    /// Output file; standard output when absent.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

/// Fully resolved configuration.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub model: ModelKind,
    pub alpha: Number,
    pub beta: Number,
    #[serde(rename = "A1", skip_serializing_if = "Option::is_none")]
    pub a1: Option<Number>,
    #[serde(rename = "B1", skip_serializing_if = "Option::is_none")]
    pub b1: Option<Number>,
    #[serde(rename = "A2", skip_serializing_if = "Option::is_none")]
    pub a2: Option<Number>,
    #[serde(rename = "B2", skip_serializing_if = "Option::is_none")]
    pub b2: Option<Number>,
    pub n_interior: usize,
    /// Requested half-width; the default rule applies when absent.
    #[serde(rename = "L")]
    pub half_width: Option<f64>,
    pub levels: usize,
    pub tolerances: Tolerances,
    #[serde(skip)]
    pub output: Option<PathBuf>,
    pub format: Format,
    #[serde(skip)]
    pub warnings: Vec<String>,
}

pub struct Sources<'a> {
    pub file: &'a FileConfig,
    pub model: &'a ModelArgs,
    pub grid: &'a GridArgs,
    pub tol: &'a ToleranceArgs,
    pub out: &'a OutputArgs,
}

fn pick<T: Clone>(flag: &Option<T>, file: &Option<T>) -> Option<T> {
    flag.clone().or_else(|| file.clone())
}

impl RunConfig {
    pub fn resolve(src: &Sources, default_format: Format) -> Result<Self, CliError> {
        let (f, m) = (src.file, src.model);
        let model = pick(&m.model, &f.model).unwrap_or(ModelKind::Rm1);
        let (alpha0, beta0) = if model.is_pt() {
            (Number::fraction(0, 1), Number::fraction(1, 2))
        } else {
            (Number::fraction(1, 4), Number::fraction(1, 2))
        };
        let mut warnings = Vec::new();
        let mut force_zero = |given: Option<Number>, name: &str| {
            if let Some(g) = given.filter(|g| g.value != 0.0) {
                warnings.push(format!("{name} = {g} ignored: the PT model fixes {name} = 0"));
            }
            Some(Number::fraction(0, 1))
        };
        let (mut a1, mut b1, mut a2, mut b2) = (None, None, None, None);
        match model {
            ModelKind::Rm1 | ModelKind::Rm1Pt => {
                a1 = Some(pick(&m.a1, &f.a1).unwrap_or(Number::fraction(3, 2)));
                b1 = if model.is_pt() {
                    force_zero(pick(&m.b1, &f.b1), "B1")
                } else {
                    Some(pick(&m.b1, &f.b1).unwrap_or(Number::fraction(1, 8)))
                };
            }
            ModelKind::Rm2 | ModelKind::Rm2Pt => {
                a2 = Some(pick(&m.a2, &f.a2).unwrap_or(Number::fraction(3, 2)));
                b2 = if model.is_pt() {
                    force_zero(pick(&m.b2, &f.b2), "B2")
                } else {
                    Some(pick(&m.b2, &f.b2).unwrap_or(Number::fraction(1, 4)))
                };
            }
            ModelKind::Harmonic => {}
        }
        let default_n = if matches!(model, ModelKind::Rm1 | ModelKind::Rm1Pt) { 3999 } else { 4000 };
        let n_interior = pick(&src.grid.n_interior, &f.grid.n_interior).unwrap_or(default_n);
        if n_interior < 3 {
            return Err(CliError::Parse(format!("n_interior = {n_interior} is too small")));
        }
        let half_width = pick(&src.grid.half_width, &f.grid.half_width);
        if let Some(l) = half_width {
            if !(l.is_finite() && l > 0.0) {
                return Err(CliError::Parse(format!("L = {l} must be positive")));
            }
        }
        let d = Tolerances::default();
        let (t, ft) = (src.tol, &f.tolerances);
        let tolerances = Tolerances {
            spectrum: pick(&t.spectrum, &ft.spectrum).unwrap_or(d.spectrum),
            gram: pick(&t.gram, &ft.gram).unwrap_or(d.gram),
            ratio_min: pick(&t.ratio_min, &ft.ratio_min).unwrap_or(d.ratio_min),
            ratio_max: pick(&t.ratio_max, &ft.ratio_max).unwrap_or(d.ratio_max),
            floor: pick(&t.floor, &ft.floor).unwrap_or(d.floor),
            marginal: pick(&t.marginal, &ft.marginal).unwrap_or(d.marginal),
        };
        Ok(RunConfig {
            model,
            alpha: pick(&m.alpha, &f.alpha).unwrap_or(alpha0),
            beta: pick(&m.beta, &f.beta).unwrap_or(beta0),
            a1,
            b1,
            a2,
            b2,
            n_interior,
            half_width,
            levels: pick(&src.grid.levels, &f.levels).unwrap_or(5),
            tolerances,
            output: pick(&src.out.output, &f.output),
            format: pick(&src.out.format, &f.format).unwrap_or(default_format),
            warnings,
        })
    }

    pub fn params(&self) -> SwansonParams {
        SwansonParams::new(self.alpha.value, self.beta.value)
    }

    pub fn superpotential(&self) -> Result<Superpotential, CliError> {
        let v = |n: &Option<Number>| n.as_ref().map_or(0.0, |n| n.value);
        Ok(match self.model {
            ModelKind::Rm1 | ModelKind::Rm1Pt => Superpotential::rm1(v(&self.a1), v(&self.b1))?,
            ModelKind::Rm2 | ModelKind::Rm2Pt => Superpotential::rm2(v(&self.a2), v(&self.b2))?,
            ModelKind::Harmonic => Superpotential::Harmonic,
        })
    }

    /// Exact (α, β, A, B) when every input is a short rational.
    pub fn exact_inputs(&self) -> Option<(Rational, Rational, Rational, Rational)> {
        let (p1, p2) = match self.model {
            ModelKind::Rm1 | ModelKind::Rm1Pt => (&self.a1, &self.b1),
            ModelKind::Rm2 | ModelKind::Rm2Pt => (&self.a2, &self.b2),
            ModelKind::Harmonic => return None,
        };
        Some((self.alpha.exact?, self.beta.exact?, p1.as_ref()?.exact?, p2.as_ref()?.exact?))
    }

    pub fn model(&self) -> Result<Model, CliError> {
        Ok(Model::new(self.params(), self.superpotential()?)?)
    }

    pub fn grid(&self, m: &Model) -> Result<GridSpec, CliError> {
        Ok(m.grid(self.n_interior, self.half_width)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers() {
        let n: Number = "1/3".parse().unwrap();
        assert_eq!(n.exact, Some(rat(1, 3)));
        let n: Number = "0.125".parse().unwrap();
        assert_eq!(n.exact, Some(rat(1, 8)));
        assert_eq!(n.value, 0.125);
        let n: Number = "1e-3".parse().unwrap();
        assert_eq!(n.exact, None);
        assert!("x".parse::<Number>().is_err());
        assert!("1/0".parse::<Number>().is_err());
        assert_eq!(Number::from_f64(0.25).exact, Some(rat(1, 4)));
    }

    #[test]
    fn flags_override_file() {
        let file: FileConfig = serde_json::from_str(r#"{"model":"rm2","alpha":0.1,"beta":"1/3","grid":{"L":9}}"#).unwrap();
        let model = ModelArgs {
            alpha: Some("0.2".parse().unwrap()),
            ..Default::default()
        };
        let src = Sources {
            file: &file,
            model: &model,
            grid: &GridArgs::default(),
            tol: &ToleranceArgs::default(),
            out: &OutputArgs::default(),
        };
        let cfg = RunConfig::resolve(&src, Format::Csv).unwrap();
        assert_eq!(cfg.model, ModelKind::Rm2);
        assert_eq!(cfg.alpha.value, 0.2);
        assert_eq!(cfg.beta.exact, Some(rat(1, 3)));
        assert_eq!(cfg.half_width, Some(9.0));
        assert_eq!(cfg.a2.as_ref().unwrap().value, 1.5);
    }

    #[test]
    fn pt_forces_zero_b() {
        let model = ModelArgs {
            model: Some(ModelKind::Rm1Pt),
            b1: Some("0.5".parse().unwrap()),
            ..Default::default()
        };
        let file = FileConfig::default();
        let src = Sources {
            file: &file,
            model: &model,
            grid: &GridArgs::default(),
            tol: &ToleranceArgs::default(),
            out: &OutputArgs::default(),
        };
        let cfg = RunConfig::resolve(&src, Format::Csv).unwrap();
        assert_eq!(cfg.b1.as_ref().unwrap().value, 0.0);
        assert_eq!(cfg.warnings.len(), 1);
        assert_eq!(cfg.alpha.value, 0.0);
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(serde_json::from_str::<FileConfig>(r#"{"alpah":0.1}"#).is_err());
    }
}
