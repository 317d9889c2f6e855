use spp_core::config::parse_f64;
use spp_core::{ConfigFile, Error, Geometry, Result, Section};

/// Sweep parameters from the `[sweep]` section, with defaults covering the
/// matchable silver range.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub material: String,
    pub geometry: Geometry,
    pub eps1: f64,
    pub omega_min: f64,
    pub omega_max: f64,
    pub omega_points: usize,
    pub d_min: f64,
    pub d_max: f64,
    pub d_points: usize,
    pub x_min: f64,
    pub x_max: f64,
    pub x_points: usize,
    /// Prism angle of the reference light line in the dispersion table [deg].
    pub theta_line_deg: f64,
    pub n: u32,
    pub mu: f64,
    /// Wavepacket FWHM bandwidth in wavelength [m].
    pub delta_lambda: f64,
}

impl SweepConfig {
    pub fn defaults(geometry: Geometry) -> Self {
        let (d_min, d_max) = geometry.default_thickness_range();
        Self {
            material: "silver".into(),
            geometry,
            eps1: 1.51,
            omega_min: 1e15,
            omega_max: 5.4e15,
            omega_points: 45,
            d_min,
            d_max,
            d_points: 41,
            x_min: 0.0,
            x_max: 5e-5,
            x_points: 11,
            theta_line_deg: 85.0,
            n: 1,
            mu: 0.65,
            delta_lambda: 1e-8,
        }
    }

    /// Applies the sweep section (if any) on top of the defaults. Flags given
    /// on the command line win over both.
    pub fn resolve(
        config: Option<&ConfigFile>,
        material: Option<&str>,
        geometry: Option<Geometry>,
    ) -> Result<Self> {
        let section = config.and_then(ConfigFile::sweep);
        let file_geometry = match section.and_then(|s| s.get("geometry")) {
            Some((v, line)) => Some(v.parse::<Geometry>().map_err(|_| Error::Config {
                line,
                msg: format!("unknown geometry {v:?}"),
            })?),
            None => None,
        };
        let mut cfg = Self::defaults(geometry.or(file_geometry).unwrap_or(Geometry::Otto));
        if let Some(s) = section {
            cfg.apply(s)?;
        }
        if let Some(m) = material {
            cfg.material = m.to_string();
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn apply(&mut self, s: &Section) -> Result<()> {
        for (key, value, line) in &s.entries {
            let (value, line) = (value.as_str(), *line);
            let f = || parse_f64(value, line, key);
            let count = || -> Result<usize> {
                value.parse().map_err(|_| Error::Config {
                    line,
                    msg: format!("{key} must be a non-negative integer, got {value:?}"),
                })
            };
            match key.as_str() {
                "geometry" => {}
                "material" => self.material = value.to_string(),
                "eps1" => self.eps1 = f()?,
                "omega_min" => self.omega_min = f()?,
                "omega_max" => self.omega_max = f()?,
                "omega_points" => self.omega_points = count()?,
                "d_min" => self.d_min = f()?,
                "d_max" => self.d_max = f()?,
                "d_points" => self.d_points = count()?,
                "x_min" => self.x_min = f()?,
                "x_max" => self.x_max = f()?,
                "x_points" => self.x_points = count()?,
                "theta_line_deg" => self.theta_line_deg = f()?,
                "n" => {
                    self.n = value.parse().map_err(|_| Error::Config {
                        line,
                        msg: format!("n must be a non-negative integer, got {value:?}"),
                    })?
                }
                "mu" => self.mu = f()?,
                "delta_lambda" => self.delta_lambda = f()?,
                other => {
                    return Err(Error::Config {
                        line,
                        msg: format!("unknown sweep key {other:?}"),
                    })
                }
            }
        }
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config { line: 0, msg });
        for (name, lo, hi, points) in [
            ("omega", self.omega_min, self.omega_max, self.omega_points),
            ("d", self.d_min, self.d_max, self.d_points),
        ] {
            if !(lo > 0.0 && hi > lo && hi.is_finite()) {
                return bad(format!(
                    "{name} range must be positive and ordered, got [{lo}, {hi}]"
                ));
            }
            if points < 2 {
                return bad(format!("{name}_points must be at least 2, got {points}"));
            }
        }
        if !(self.x_min >= 0.0 && self.x_max > self.x_min && self.x_max.is_finite()) {
            return bad(format!(
                "x range must be non-negative and ordered, got [{}, {}]",
                self.x_min, self.x_max
            ));
        }
        if self.x_points < 2 {
            return bad(format!(
                "x_points must be at least 2, got {}",
                self.x_points
            ));
        }
        if !(self.eps1 > 1.0 && self.eps1.is_finite()) {
            return bad(format!("eps1 must exceed 1, got {}", self.eps1));
        }
        if !(0.0..=1.0).contains(&self.mu) {
            return bad(format!("mu must lie in [0, 1], got {}", self.mu));
        }
        if !(self.theta_line_deg > 0.0 && self.theta_line_deg <= 90.0) {
            return bad(format!(
                "theta_line_deg must lie in (0, 90], got {}",
                self.theta_line_deg
            ));
        }
        if !(self.delta_lambda > 0.0 && self.delta_lambda.is_finite()) {
            return bad(format!(
                "delta_lambda must be positive, got {}",
                self.delta_lambda
            ));
        }
        if self.n == 0 {
            return bad("n must be at least 1".into());
        }
        Ok(())
    }

    pub fn omegas(&self) -> Vec<f64> {
        linspace(self.omega_min, self.omega_max, self.omega_points)
    }

    /// Thicknesses are spaced logarithmically.
    pub fn thicknesses(&self) -> Vec<f64> {
        let mut d: Vec<f64> = linspace(self.d_min.ln(), self.d_max.ln(), self.d_points)
            .into_iter()
            .map(f64::exp)
            .collect();
        // pin the ends so exp(ln d) round-off cannot leave the range
        d[0] = self.d_min;
        d[self.d_points - 1] = self.d_max;
        d
    }

    pub fn distances(&self) -> Vec<f64> {
        linspace(self.x_min, self.x_max, self.x_points)
    }

    pub fn echo(&self) -> Vec<(&'static str, String)> {
        let e = |x: f64| format!("{x:.16e}");
        vec![
            ("material", self.material.clone()),
            ("geometry", self.geometry.short_name().to_string()),
            ("eps1", e(self.eps1)),
            ("omega_min", e(self.omega_min)),
            ("omega_max", e(self.omega_max)),
            ("omega_points", self.omega_points.to_string()),
            ("d_min", e(self.d_min)),
            ("d_max", e(self.d_max)),
            ("d_points", self.d_points.to_string()),
            ("x_min", e(self.x_min)),
            ("x_max", e(self.x_max)),
            ("x_points", self.x_points.to_string()),
            ("theta_line_deg", e(self.theta_line_deg)),
            ("n", self.n.to_string()),
            ("mu", e(self.mu)),
            ("delta_lambda", e(self.delta_lambda)),
        ]
    }
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    let step = (b - a) / (n - 1) as f64;
    (0..n)
        .map(|i| if i == n - 1 { b } else { a + step * i as f64 })
        .collect()
}
