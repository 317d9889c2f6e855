//! Transfer-matrix coefficients, the Hamiltonian coupling `g(ω)`, the
//! penetration factor and thickness optimisation.
//!
//! At each ω the photon and SPP modes mix through the unitary
//!
//! ```text
//! ⎡a_out⎤   ⎡ α   β ⎤ ⎡a_in⎤
//! ⎣b_out⎦ = ⎣−β*  α*⎦ ⎣b_in⎦ ,   α = cos Θ,  β = e^{iΦ} sin Θ,
//! ```
//!
//! generated by an interaction with coupling `g = e^{iΦ} Θ`. The overlap
//! gives `β* = −τ ⟨φ̂|ψ̂⟩` at the mode-matching angle.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::dispersion::{matching_angle, matching_limit, spp_wavevector_lossless};
use crate::error::{domain, Error, Result};
use crate::layered_modes::{overlap, spp_profile, three_layer_profile};
use crate::materials::{Geometry, LayerStack};
use crate::propagation::sigma_from_bandwidth;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferCoefficients {
    pub omega: f64,
    /// Matched incidence angle [rad].
    pub incidence: f64,
    /// `cos Θ`, real by convention.
    pub alpha: Complex64,
    pub beta: Complex64,
    /// Θ ∈ [0, π/2].
    pub theta_mix: f64,
    /// Φ ∈ [0, 2π).
    pub phi_mix: f64,
    /// `e^{iΦ} Θ`.
    pub g: Complex64,
    /// `(2/π)|g|`: 1 is full photon → SPP conversion.
    pub g_tilde: f64,
    pub penetration: f64,
    pub tau: Complex64,
    pub overlap: Complex64,
}

impl TransferCoefficients {
    /// Builds the coefficients from `β`, pushing all phase into β.
    fn from_beta(beta_raw: Complex64, omega: f64, incidence: f64) -> Result<Self> {
        let mag = beta_raw.norm();
        if !(mag.is_finite() && mag <= 1.0 + 1e-12) {
            return Err(Error::Internal(format!("|β| = {mag} exceeds 1")));
        }
        let theta_mix = mag.min(1.0).asin();
        let phi_mix = if mag == 0.0 {
            0.0
        } else {
            beta_raw.arg().rem_euclid(TAU)
        };
        let phase = Complex64::from_polar(1.0, phi_mix);
        Ok(Self {
            omega,
            incidence,
            alpha: Complex64::new(theta_mix.cos(), 0.0),
            beta: phase * theta_mix.sin(),
            theta_mix,
            phi_mix,
            g: phase * theta_mix,
            g_tilde: 2.0 * theta_mix / PI,
            penetration: f64::NAN,
            tau: Complex64::new(0.0, 0.0),
            overlap: Complex64::new(0.0, 0.0),
        })
    }

    /// `|α|² + |β|²`.
    pub fn unitarity(&self) -> f64 {
        self.alpha.norm_sqr() + self.beta.norm_sqr()
    }
}

/// Photon → SPP transfer coefficients at ω for the stack's thickness.
///
/// The incidence angle is slaved to mode matching with the lossless SPP
/// dispersion, and the SPP profile uses the lossless permittivity. The
/// three-layer field uses the full (lossy) metal model.
pub fn transfer_coefficients(stack: &LayerStack, omega: f64) -> Result<TransferCoefficients> {
    let matched = matching_angle(&stack.metal, stack.eps1, omega)?;
    let phi = spp_profile(&stack.metal, omega, stack.geometry, stack.d)?;
    let (psi, fresnel) = three_layer_profile(stack, omega, matched.theta)?;
    let ov = overlap(&phi, &psi)?;
    let beta = (-fresnel.tau * ov).conj();
    let mut tc = TransferCoefficients::from_beta(beta, omega, matched.theta)?;
    tc.penetration = penetration_factor(stack, omega)?;
    tc.tau = fresnel.tau;
    tc.overlap = ov;
    Ok(tc)
}

/// `𝒫 = 2/(ν₀ d)` for Otto and `2/(ν d)` for Kretschmann-Raether. The SPP
/// profile is a good approximation of the isolated interface mode for 𝒫 ≤ 1.
pub fn penetration_factor(stack: &LayerStack, omega: f64) -> Result<f64> {
    if !(stack.d > 0.0) {
        return Err(domain(format!(
            "thickness must be positive, got {}",
            stack.d
        )));
    }
    let w = spp_wavevector_lossless(&stack.metal, omega)?;
    Ok(2.0 / (prism_side_decay(stack.geometry, w.nu, w.nu0) * stack.d))
}

fn prism_side_decay(geometry: Geometry, nu: f64, nu0: f64) -> f64 {
    match geometry {
        Geometry::Otto => nu0,
        Geometry::KretschmannRaether => nu,
    }
}

/// Smallest thickness with 𝒫 ≤ 1.
pub fn min_feasible_thickness(stack: &LayerStack, omega: f64) -> Result<f64> {
    let w = spp_wavevector_lossless(&stack.metal, omega)?;
    Ok(2.0 / prism_side_decay(stack.geometry, w.nu, w.nu0))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThicknessOptimum {
    pub d: f64,
    pub coefficients: TransferCoefficients,
}

const COARSE_POINTS: usize = 32;

/// Maximises `|g̃(ω)|` over `d ∈ d_range` subject to 𝒫 ≤ 1.
///
/// A 32-point logarithmic scan brackets the maximum, which golden-section
/// search then refines in `ln d`. Ties go to the smaller thickness.
pub fn optimize_thickness(
    template: &LayerStack,
    omega: f64,
    d_range: (f64, f64),
) -> Result<ThicknessOptimum> {
    let (lo, hi) = d_range;
    if !(lo > 0.0 && hi >= lo && hi.is_finite()) {
        return Err(domain(format!("invalid thickness range [{lo}, {hi}]")));
    }
    // surface the unmatchable case before the feasibility check
    matching_angle(&template.metal, template.eps1, omega)?;
    // the margin keeps exp(ln d) round-off from landing just past 𝒫 = 1
    let lo = lo.max(min_feasible_thickness(template, omega)? * (1.0 + 1e-12));
    if lo > hi {
        return Err(Error::Infeasible {
            lo: d_range.0,
            hi: d_range.1,
        });
    }
    let objective = |ln_d: f64| -> f64 {
        template
            .with_thickness(ln_d.exp())
            .and_then(|s| transfer_coefficients(&s, omega))
            .map(|tc| tc.g_tilde)
            .unwrap_or(f64::NEG_INFINITY)
    };

    let (a, b) = (lo.ln(), hi.ln());
    if b - a < 1e-12 {
        return finish(template, omega, lo);
    }
    let step = (b - a) / (COARSE_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..COARSE_POINTS).map(|i| a + step * i as f64).collect();
    let values: Vec<f64> = grid.iter().map(|&x| objective(x)).collect();
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v > values[best] {
            best = i;
        }
    }
    if !values[best].is_finite() {
        return Err(Error::Internal(format!(
            "coupling undefined over the whole thickness range at ω = {omega:e}"
        )));
    }
    let left = grid[best.saturating_sub(1)];
    let right = grid[(best + 1).min(COARSE_POINTS - 1)];
    let (x, fx) = golden_section_max(&objective, left, right, 1e-10);
    let ln_d = if fx > values[best] { x } else { grid[best] };
    finish(template, omega, ln_d.exp().clamp(lo, hi))
}

fn finish(template: &LayerStack, omega: f64, d: f64) -> Result<ThicknessOptimum> {
    let stack = template.with_thickness(d)?;
    Ok(ThicknessOptimum {
        d,
        coefficients: transfer_coefficients(&stack, omega)?,
    })
}

/// Golden-section search for the maximum of `f` on `[a, b]`.
pub(crate) fn golden_section_max(
    f: &impl Fn(f64) -> f64,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = b - inv_phi * (b - a);
    let mut x2 = a + inv_phi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        // ">=" keeps the left point on ties so the smaller d wins
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Spread of the matching angle and coupling across a wavepacket's band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeformationReport {
    pub omega0: f64,
    /// Wavelength bandwidth Δλ (FWHM) [m].
    pub bandwidth_lambda: f64,
    /// Spectral standard deviation σ [rad/s].
    pub sigma: f64,
    /// Evaluated band `[ω₋, ω₊]` [rad/s].
    pub band: (f64, f64),
    /// Thickness maximising `|g(ω₀)|` [m].
    pub d: f64,
    /// `|θ(ω₊) − θ(ω₋)|` [deg].
    pub delta_theta: f64,
    /// max − min of `|g(ω)|` over the band (radians of Θ).
    pub delta_g_mag: f64,
}

/// Samples used for the coupling spread.
const BAND_SAMPLES: usize = 65;

/// Deformation of a Gaussian wavepacket of FWHM bandwidth `delta_lambda`
/// centred on ω₀, at the thickness that optimises `|g(ω₀)|`.
///
/// The FWHM converts as `Δω = ω₀² Δλ / (2πc)` and `σ = Δω / (2√(2 ln 2))`.
/// Each frequency in `[ω₀ − 2σ, ω₀ + 2σ]` is evaluated at its own matching
/// angle. If the band runs past the matching limit, [`Error::PartialBand`]
/// carries the report for the matchable sub-band, whose upper edge is the
/// grazing angle θ = 90°.
pub fn deformation_metrics(
    template: &LayerStack,
    omega0: f64,
    delta_lambda: f64,
) -> Result<DeformationReport> {
    if !(delta_lambda.is_finite() && delta_lambda >= 0.0) {
        return Err(domain(format!(
            "bandwidth must be non-negative, got {delta_lambda}"
        )));
    }
    let sigma = sigma_from_bandwidth(omega0, delta_lambda);
    let (lo, hi) = (omega0 - 2.0 * sigma, omega0 + 2.0 * sigma);
    if !(lo > 0.0) {
        return Err(domain("bandwidth wider than the carrier frequency"));
    }

    let opt = optimize_thickness(
        template,
        omega0,
        template.geometry.default_thickness_range(),
    )?;
    let stack = template.with_thickness(opt.d)?;
    let limit = matching_limit(&template.metal, template.eps1)?;
    let partial = hi >= limit;
    let top = if partial { limit } else { hi };
    if partial && lo >= top {
        return Err(Error::Unmatchable {
            omega: lo,
            sin2: f64::NAN,
        });
    }

    let theta_at = |w: f64| -> Result<f64> {
        if partial && w >= limit {
            Ok(FRAC_PI_2)
        } else {
            Ok(matching_angle(&template.metal, template.eps1, w)?.theta)
        }
    };
    let delta_theta = (theta_at(top)? - theta_at(lo)?).abs().to_degrees();

    // the grazing edge itself is singular; stop just short of it
    let sample_top = if partial { limit * (1.0 - 1e-7) } else { hi };
    let mut g_min = f64::INFINITY;
    let mut g_max = f64::NEG_INFINITY;
    for i in 0..BAND_SAMPLES {
        let w = if delta_lambda == 0.0 {
            omega0
        } else {
            lo + (sample_top - lo) * i as f64 / (BAND_SAMPLES - 1) as f64
        };
        let g = transfer_coefficients(&stack, w)?.theta_mix;
        g_min = g_min.min(g);
        g_max = g_max.max(g);
    }

    let report = DeformationReport {
        omega0,
        bandwidth_lambda: delta_lambda,
        sigma,
        band: (lo, top),
        d: opt.d,
        delta_theta,
        delta_g_mag: g_max - g_min,
    };
    if partial {
        Err(Error::PartialBand {
            lo,
            hi: top,
            report: Box::new(report),
        })
    } else {
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::materials::PermittivityModel;

    fn otto(d: f64) -> LayerStack {
        LayerStack::new(Geometry::Otto, 1.51, d, PermittivityModel::silver()).unwrap()
    }

    fn kr(d: f64) -> LayerStack {
        LayerStack::new(
            Geometry::KretschmannRaether,
            1.51,
            d,
            PermittivityModel::silver(),
        )
        .unwrap()
    }

    #[test]
    fn zero_beta_is_identity() {
        let tc = TransferCoefficients::from_beta(Complex64::new(0.0, 0.0), 1.0, 0.5).unwrap();
        assert_eq!(tc.alpha, Complex64::new(1.0, 0.0));
        assert_eq!(tc.beta, Complex64::new(0.0, 0.0));
        assert_eq!(tc.g, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn unit_beta_is_full_conversion() {
        let tc = TransferCoefficients::from_beta(Complex64::new(0.0, -1.0), 1.0, 0.5).unwrap();
        assert!((tc.theta_mix - FRAC_PI_2).abs() < 1e-15);
        assert!((tc.g_tilde - 1.0).abs() < 1e-15);
        assert!((tc.phi_mix - 1.5 * PI).abs() < 1e-15);
        assert!(TransferCoefficients::from_beta(Complex64::new(1.1, 0.0), 1.0, 0.5).is_err());
    }

    #[test]
    fn decoupled_for_thick_gap() {
        let tc = transfer_coefficients(&otto(2e-5), 3e15).unwrap();
        assert!(tc.beta.norm() < 1e-6);
        assert!((tc.alpha.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn coefficients_are_unitary_and_consistent() {
        for stack in [otto(4e-7), kr(5e-8)] {
            for omega in [1.5e15, 3e15, 4.5e15] {
                let tc = transfer_coefficients(&stack, omega).unwrap();
                assert!((tc.unitarity() - 1.0).abs() < 1e-12);
                assert!((tc.g_tilde - 2.0 / PI * tc.g.norm()).abs() < 1e-15);
                assert!((tc.beta.norm() - (tc.tau * tc.overlap).norm()).abs() < 1e-12);
                assert!((0.0..=1.0).contains(&tc.g_tilde));
            }
        }
    }

    #[test]
    fn penetration_factor_scaling() {
        let omega = 2e15;
        let w = spp_wavevector_lossless(&PermittivityModel::silver(), omega).unwrap();
        let p = penetration_factor(&otto(2.0 / w.nu0), omega).unwrap();
        assert!((p - 1.0).abs() < 1e-14);
        let p1 = penetration_factor(&kr(4e-8), omega).unwrap();
        let p2 = penetration_factor(&kr(8e-8), omega).unwrap();
        assert!((p1 / p2 - 2.0).abs() < 1e-14);
        assert!((p1 - 2.0 / (w.nu * 4e-8)).abs() < 1e-14 * p1);
    }

    #[test]
    fn unit_penetration_bounds_intensity_at_prism_face() {
        let omega = 2e15;
        let metal = PermittivityModel::silver();
        let w = spp_wavevector_lossless(&metal, omega).unwrap();
        for geometry in Geometry::ALL {
            let d = 2.0 / prism_side_decay(geometry, w.nu, w.nu0);
            let phi = spp_profile(&metal, omega, geometry, d).unwrap();
            let peak = phi.intensity(d).max(phi.intensity(d * (1.0 - 1e-12)));
            assert!(phi.intensity(0.0) < 0.02 * peak, "{geometry}");
        }
    }

    #[test]
    fn golden_section_finds_parabola_peak() {
        let (x, fx) = golden_section_max(&|x: f64| -(x - 0.3) * (x - 0.3), -1.0, 2.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-6);
        assert!(fx <= 0.0);
    }

    #[test]
    fn optimum_respects_penetration_bound() {
        for stack in [otto(1e-7), kr(1e-8)] {
            for omega in [1e15, 3e15, 4.8e15] {
                let range = stack.geometry.default_thickness_range();
                let opt = optimize_thickness(&stack, omega, range).unwrap();
                assert!(opt.coefficients.penetration <= 1.0);
            }
        }
    }

    #[test]
    fn optimum_curve_values() {
        // regression values; Otto stays below 0.9 until ~4e15
        let cases = [
            (otto(1e-7), 1e15, 8.64e-6, 0.4721),
            (otto(1e-7), 3e15, 1.011e-6, 0.7789),
            (otto(1e-7), 5e15, 1.768e-7, 0.5032),
            (kr(1e-8), 1e15, 4.426e-8, 0.4402),
            (kr(1e-8), 4e15, 5.174e-8, 0.9304),
        ];
        for (stack, omega, d, g) in cases {
            let opt = optimize_thickness(&stack, omega, stack.geometry.default_thickness_range())
                .unwrap();
            assert!((opt.d / d - 1.0).abs() < 1e-3, "{omega:e}: {}", opt.d);
            assert!((opt.coefficients.g_tilde - g).abs() < 1e-4, "{omega:e}");
        }
    }

    #[test]
    fn infeasible_range() {
        assert!(matches!(
            optimize_thickness(&otto(1e-7), 2e15, (1e-9, 2e-9)),
            Err(Error::Infeasible { .. })
        ));
        assert!(matches!(
            optimize_thickness(&otto(1e-7), 5.2e15, (1e-9, 1e-4)),
            Err(Error::Unmatchable { .. })
        ));
    }

    #[test]
    fn zero_bandwidth_has_no_spread() {
        let r = deformation_metrics(&otto(1e-7), 2e15, 0.0).unwrap();
        assert_eq!(r.delta_theta, 0.0);
        assert_eq!(r.delta_g_mag, 0.0);
    }

    #[test]
    fn spread_shrinks_with_bandwidth() {
        let wide = deformation_metrics(&kr(1e-8), 3e15, 10e-9).unwrap();
        let narrow = deformation_metrics(&kr(1e-8), 3e15, 1e-9).unwrap();
        assert!(narrow.delta_theta < wide.delta_theta / 5.0);
        assert!(narrow.delta_g_mag < wide.delta_g_mag);
    }

    #[test]
    fn partial_band_reports_sub_band() {
        let stack = otto(1e-7);
        let limit = matching_limit(&stack.metal, stack.eps1).unwrap();
        match deformation_metrics(&stack, 5e15, 10e-9) {
            Err(Error::PartialBand { hi, report, .. }) => {
                assert_eq!(hi, limit);
                assert_eq!(report.band.1, limit);
                assert!(report.delta_theta > 1.0);
            }
            other => panic!("expected a partial band, got {other:?}"),
        }
    }
}
