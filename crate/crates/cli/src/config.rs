use std::path::{Path, PathBuf};

use inls::evolve::SolverConfig;
use inls::model::{Expr, Inhomogeneity, DEFAULT_TAIL_TOL};
use inls::profiles::ExtractionConfig;
use inls::spectral::{low_pass, Field, Grid1D};
use inls::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// JSON-Schema description of [`RunConfig`].
pub const SCHEMA: &str = include_str!("../schema/run_config.schema.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    pub grid: GridConfig,
    pub model: ModelConfig,
    #[serde(default)]
    pub initial: InitialConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub sweep: SweepAxes,
    #[serde(default)]
    pub profiles: ProfilesConfig,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub n: usize,
    pub half_length: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub p: f64,
    /// Expression in `x`, e.g. `"exp(-x^2)"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inhomogeneity: Option<String>,
    /// Two-column text file of samples on a uniform mesh.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_file: Option<PathBuf>,
    #[serde(default = "default_tail_tol")]
    pub tail_tol: f64,
}

fn default_tail_tol() -> f64 {
    DEFAULT_TAIL_TOL
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InitialKind {
    Zero,
    Gaussian,
    Soliton,
    Expr,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InitialConfig {
    pub kind: InitialKind,
    pub amplitude: f64,
    pub width: f64,
    pub center: f64,
    /// Linear phase `e^{i velocity x}`.
    pub velocity: f64,
    /// Frequency of the standing wave for `kind = "soliton"`.
    pub omega: f64,
    /// Real-valued profile for `kind = "expr"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expr: Option<String>,
    /// Amplitude of seeded smooth noise added to the profile.
    pub noise: f64,
}

impl Default for InitialConfig {
    fn default() -> Self {
        Self {
            kind: InitialKind::Gaussian,
            amplitude: 1.0,
            width: 1.0,
            center: 0.0,
            velocity: 0.0,
            omega: 1.0,
            expr: None,
            noise: 0.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DiagnosticsConfig {
    pub scattering: bool,
    pub morawetz: bool,
    pub compactness: bool,
    /// Time at which the weighted-integral plateau is reported.
    pub t_report: f64,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            scattering: true,
            morawetz: true,
            compactness: true,
            t_report: 50.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
    pub checkpoints: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        Self {
            dir: PathBuf::from("inls-out"),
            checkpoints: true,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepAxes {
    pub p: Vec<f64>,
    pub amplitude: Vec<f64>,
    /// Translations of the initial profile.
    pub x0: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfilesConfig {
    pub extraction: ExtractionConfig,
    pub max_bubbles: usize,
}

impl Default for ProfilesConfig {
    fn default() -> Self {
        Self {
            extraction: ExtractionConfig::default(),
            max_bubbles: 4,
        }
    }
}

impl RunConfig {
    pub fn from_toml(src: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(src).map_err(|e| CliError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let src = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&src)?;
        if let (Some(file), Some(dir)) = (&cfg.model.sample_file, path.parent()) {
            if file.is_relative() {
                cfg.model.sample_file = Some(dir.join(file));
            }
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// Checks everything that can be checked without building fields.
    pub fn validate(&self) -> Result<(), CliError> {
        Grid1D::new(self.grid.n, self.grid.half_length)?;
        inls::model::exponents_for(self.model.p)?;
        match (&self.model.inhomogeneity, &self.model.sample_file) {
            (Some(e), None) => {
                e.parse::<Expr>()?;
            }
            (None, Some(_)) => {}
            _ => {
                return Err(CliError::Config(
                    "model needs exactly one of `inhomogeneity` or `sample_file`".into(),
                ))
            }
        }
        self.solver.validate()?;
        if self.initial.kind == InitialKind::Expr {
            match &self.initial.expr {
                Some(e) => {
                    e.parse::<Expr>()?;
                }
                None => return Err(CliError::Config("initial kind `expr` needs `expr`".into())),
            }
        }
        if !(self.initial.width > 0.0 && self.initial.omega > 0.0 && self.initial.noise >= 0.0) {
            return Err(CliError::Config(
                "initial width and omega must be positive, noise nonnegative".into(),
            ));
        }
        for &p in &self.sweep.p {
            inls::model::exponents_for(p)?;
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<Grid1D, CliError> {
        Ok(Grid1D::new(self.grid.n, self.grid.half_length)?)
    }

    pub fn inhomogeneity(&self, grid: &Grid1D) -> Result<Inhomogeneity, CliError> {
        let tol = self.model.tail_tol;
        Ok(match (&self.model.inhomogeneity, &self.model.sample_file) {
            (Some(e), _) => Inhomogeneity::from_expr(grid, &e.parse::<Expr>()?, tol)?,
            (None, Some(path)) => Inhomogeneity::from_sample_file(grid, path, tol)?,
            (None, None) => unreachable!("validated"),
        })
    }

    pub fn initial_field(&self, grid: &Grid1D) -> Result<Field, CliError> {
        let ic = &self.initial;
        let p = self.model.p;
        let profile = |x: f64| -> f64 {
            let y = x - ic.center;
            match ic.kind {
                InitialKind::Zero => 0.0,
                InitialKind::Gaussian => {
                    ic.amplitude * (-y * y / (2.0 * ic.width * ic.width)).exp()
                }
                InitialKind::Soliton => {
                    let w = ic.omega;
                    ((p + 2.0) * w / 2.0 / (p * w.sqrt() * y / 2.0).cosh().powi(2)).powf(1.0 / p)
                }
                InitialKind::Expr => unreachable!(),
            }
        };
        let mut field = if ic.kind == InitialKind::Expr {
            let e: Expr = ic.expr.as_deref().unwrap_or_default().parse()?;
            Field::from_fn(grid, |x| {
                Complex64::from_polar(ic.amplitude * e.eval(x - ic.center), ic.velocity * x)
            })?
        } else {
            Field::from_fn(grid, |x| Complex64::from_polar(profile(x), ic.velocity * x))?
        };
        if ic.noise > 0.0 {
            let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
            let raw = Field::from_fn(grid, |_| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            })?;
            let smooth = low_pass(&raw, 1.0)?;
            let peak = smooth
                .samples()
                .iter()
                .map(|v| v.norm())
                .fold(0.0, f64::max);
            if peak > 0.0 {
                field = field.add(&smooth.scale(Complex64::new(ic.noise / peak, 0.0)))?;
            }
        }
        Ok(field)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
[grid]
n = 256
half_length = 20.0

[model]
p = 3.0
inhomogeneity = "exp(-x^2)"
"#;

    #[test]
    fn minimal_config_uses_defaults() {
        let cfg = RunConfig::from_toml(MINIMAL).unwrap();
        assert_eq!(cfg.solver, SolverConfig::default());
        assert_eq!(cfg.initial.kind, InitialKind::Gaussian);
        assert_eq!(cfg.profiles.max_bubbles, 4);
    }

    #[test]
    fn unknown_keys_rejected() {
        let bad = format!("{MINIMAL}\n[solver]\ndt = 0.01\nbogus = 1\n");
        assert!(matches!(
            RunConfig::from_toml(&bad),
            Err(CliError::Config(_))
        ));
        let top = format!("colour = 1\n{MINIMAL}");
        assert!(RunConfig::from_toml(&top).is_err());
    }

    #[test]
    fn exactly_one_inhomogeneity_source() {
        let both = MINIMAL.replace(
            "inhomogeneity = \"exp(-x^2)\"",
            "inhomogeneity = \"1\"\nsample_file = \"a.txt\"",
        );
        assert!(RunConfig::from_toml(&both).is_err());
        let none = MINIMAL.replace("inhomogeneity = \"exp(-x^2)\"", "");
        assert!(RunConfig::from_toml(&none).is_err());
    }

    #[test]
    fn noise_is_seeded() {
        let mut cfg = RunConfig::from_toml(MINIMAL).unwrap();
        cfg.initial.noise = 0.1;
        let grid = cfg.grid().unwrap();
        let a = cfg.initial_field(&grid).unwrap();
        let b = cfg.initial_field(&grid).unwrap();
        assert_eq!(a.samples(), b.samples());
        cfg.seed = 1;
        assert_ne!(a.samples(), cfg.initial_field(&grid).unwrap().samples());
    }
}
