//! Metal permittivity and the ATR layer stack.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::config::{parse_f64, ConfigFile};
use crate::error::{domain, Error, Result};
use crate::numeric::bracketed_root;

/// Drude permittivity with a background correction,
///
/// `ε_m(ω) = 1 − ω_p² / (ω² + iωΓ) + c_r ω²/ω_p² + i c_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PermittivityModel {
    /// Plasma frequency ω_p [rad/s].
    pub omega_p: f64,
    /// Damping rate Γ [rad/s].
    pub gamma: f64,
    /// Coefficient `c_r` of the real background term `c_r ω²/ω_p²`.
    pub bg_real_coeff: f64,
    /// Constant imaginary background `c_i`.
    pub bg_imag: f64,
}

impl PermittivityModel {
    pub fn new(omega_p: f64, gamma: f64, bg_real_coeff: f64, bg_imag: f64) -> Result<Self> {
        if !(omega_p.is_finite() && omega_p > 0.0) {
            return Err(domain(format!("omega_p must be positive, got {omega_p}")));
        }
        if !(gamma.is_finite() && gamma >= 0.0) {
            return Err(domain(format!("gamma must be non-negative, got {gamma}")));
        }
        if !(bg_imag.is_finite() && bg_imag >= 0.0) {
            return Err(domain(format!(
                "bg_imag must be non-negative, got {bg_imag}"
            )));
        }
        if !bg_real_coeff.is_finite() {
            return Err(domain("bg_real_coeff must be finite"));
        }
        Ok(Self {
            omega_p,
            gamma,
            bg_real_coeff,
            bg_imag,
        })
    }

    /// Silver: ω_p = 1.402×10¹⁶ rad/s, Γ = 6.25×10¹³ rad/s, background
    /// `29 ω²/ω_p² + 0.22 i`.
    pub fn silver() -> Self {
        Self {
            omega_p: 1.402e16,
            gamma: 6.25e13,
            bg_real_coeff: 29.0,
            bg_imag: 0.22,
        }
    }

    /// Same model with Γ and the imaginary background removed.
    pub fn without_loss(self) -> Self {
        Self {
            gamma: 0.0,
            bg_imag: 0.0,
            ..self
        }
    }

    pub fn is_lossless(&self) -> bool {
        self.gamma == 0.0 && self.bg_imag == 0.0
    }

    pub fn eval_lossy(&self, omega: f64) -> Result<Complex64> {
        check_omega(omega)?;
        let wp2 = self.omega_p * self.omega_p;
        let drude = wp2 / Complex64::new(omega * omega, omega * self.gamma);
        let background = Complex64::new(self.bg_real_coeff * omega * omega / wp2, self.bg_imag);
        Ok(Complex64::new(1.0, 0.0) - drude + background)
    }

    /// Real permittivity neglecting Γ and the imaginary background.
    pub fn eval_lossless(&self, omega: f64) -> Result<f64> {
        check_omega(omega)?;
        let u = (omega / self.omega_p).powi(2);
        Ok(1.0 - 1.0 / u + self.bg_real_coeff * u)
    }

    /// Smallest ω with `eval_lossless(ω) = −1`, the surface plasma frequency.
    pub fn surface_plasma_frequency(&self) -> Result<f64> {
        self.frequency_for_permittivity(-1.0)
    }

    /// Smallest ω below ω_p where the lossless permittivity equals `target`.
    ///
    /// The lossless model is strictly increasing on `(0, ω_p)` for
    /// `bg_real_coeff ≥ 0`, so the root on the bracket `(10¹², ω_p]` is unique.
    pub fn frequency_for_permittivity(&self, target: f64) -> Result<f64> {
        let lo = 1e12_f64.min(0.5 * self.omega_p);
        let hi = self.omega_p;
        let f = |w: f64| {
            self.eval_lossless(w)
                .map(|e| e - target)
                .unwrap_or(f64::NAN)
        };
        bracketed_root(f, lo, hi, 1e-15).ok_or(Error::RootNotFound { target })
    }
}

impl Default for PermittivityModel {
    fn default() -> Self {
        Self::silver()
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if omega.is_finite() && omega > 0.0 {
        Ok(())
    } else {
        Err(domain(format!("frequency must be positive, got {omega}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Geometry {
    /// Prism | air gap of thickness d | metal.
    Otto,
    /// Prism | metal film of thickness d | air.
    KretschmannRaether,
}

impl Geometry {
    pub const ALL: [Geometry; 2] = [Geometry::Otto, Geometry::KretschmannRaether];

    pub fn short_name(self) -> &'static str {
        match self {
            Geometry::Otto => "otto",
            Geometry::KretschmannRaether => "kr",
        }
    }

    /// Thickness interval [m] covering the optimal gap/film over the visible
    /// and near-infrared.
    pub fn default_thickness_range(self) -> (f64, f64) {
        match self {
            Geometry::Otto => (1e-8, 1e-4),
            Geometry::KretschmannRaether => (1e-9, 1e-6),
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Geometry {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "otto" | "o" => Ok(Geometry::Otto),
            "kr" | "kretschmann" | "kretschmann-raether" => Ok(Geometry::KretschmannRaether),
            other => Err(domain(format!(
                "unknown geometry `{other}` (expected otto|kr)"
            ))),
        }
    }
}

/// Prism (layer I), layer II of thickness `d`, semi-infinite layer III.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerStack {
    pub geometry: Geometry,
    /// Prism permittivity ε₁.
    pub eps1: f64,
    /// Layer-II thickness [m].
    pub d: f64,
    pub metal: PermittivityModel,
}

impl LayerStack {
    pub fn new(geometry: Geometry, eps1: f64, d: f64, metal: PermittivityModel) -> Result<Self> {
        if !(eps1.is_finite() && eps1 > 1.0) {
            return Err(domain(format!(
                "prism permittivity must exceed 1, got {eps1}"
            )));
        }
        if !(d.is_finite() && d > 0.0) {
            return Err(domain(format!("thickness must be positive, got {d}")));
        }
        Ok(Self {
            geometry,
            eps1,
            d,
            metal,
        })
    }

    pub fn with_thickness(&self, d: f64) -> Result<Self> {
        Self::new(self.geometry, self.eps1, d, self.metal)
    }

    /// Complex permittivities `(ε₂, ε₃)` of layers II and III at ω.
    pub fn layer_permittivities(&self, omega: f64) -> Result<(Complex64, Complex64)> {
        let metal = self.metal.eval_lossy(omega)?;
        let air = Complex64::new(1.0, 0.0);
        Ok(match self.geometry {
            Geometry::Otto => (air, metal),
            Geometry::KretschmannRaether => (metal, air),
        })
    }
}

/// Named metal models. Always contains `silver`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaterialRegistry {
    materials: BTreeMap<String, PermittivityModel>,
}

impl Default for MaterialRegistry {
    fn default() -> Self {
        let mut materials = BTreeMap::new();
        materials.insert("silver".to_string(), PermittivityModel::silver());
        Self { materials }
    }
}

impl MaterialRegistry {
    pub fn get(&self, name: &str) -> Option<&PermittivityModel> {
        self.materials.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.materials.keys().map(String::as_str)
    }

    pub fn insert(&mut self, name: impl Into<String>, model: PermittivityModel) {
        self.materials.insert(name.into(), model);
    }

    /// Adds (or overrides) the materials defined in `config`. Keys a section
    /// does not set fall back to zero, except `omega_p` which is required.
    pub fn extend_from_config(&mut self, config: &ConfigFile) -> Result<()> {
        for (name, section) in config.materials() {
            let mut omega_p = None;
            let mut gamma = 0.0;
            let mut bg_real_coeff = 0.0;
            let mut bg_imag = 0.0;
            for (key, value, line) in &section.entries {
                let v = parse_f64(value, *line, key)?;
                match key.as_str() {
                    "omega_p" => omega_p = Some(v),
                    "gamma" => gamma = v,
                    "bg_real_coeff" => bg_real_coeff = v,
                    "bg_imag" => bg_imag = v,
                    other => {
                        return Err(Error::Config {
                            line: *line,
                            msg: format!("unknown material key `{other}`"),
                        })
                    }
                }
            }
            let omega_p = omega_p.ok_or_else(|| Error::Config {
                line: section.line,
                msg: format!("material `{name}` is missing omega_p"),
            })?;
            let model =
                PermittivityModel::new(omega_p, gamma, bg_real_coeff, bg_imag).map_err(|e| {
                    Error::Config {
                        line: section.line,
                        msg: e.to_string(),
                    }
                })?;
            self.insert(name, model);
        }
        Ok(())
    }

    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut registry = Self::default();
        registry.extend_from_config(&ConfigFile::parse(text)?)?;
        Ok(registry)
    }
}
