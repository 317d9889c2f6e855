//! SPP dispersion, decay constants, mode matching and group velocity.
//!
//! The wavevector here is geometry-free: the Otto/Kretschmann-Raether swap of
//! the decay constants is applied by the callers that need it.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::materials::PermittivityModel;
use crate::SPEED_OF_LIGHT;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SppWavevector {
    /// Propagation constant [rad/m].
    pub k: f64,
    /// Amplitude attenuation κ(ω) [1/m]; the intensity decays as `e^{−2κx}`.
    pub kappa: f64,
    /// Decay constant into the metal [1/m].
    pub nu: f64,
    /// Decay constant into the air [1/m].
    pub nu0: f64,
}

/// Lossless SPP wavevector `k = (ω/c)√(ε_m/(1+ε_m))`.
///
/// With `s = −(1+ε_m) > 0` the decay constants reduce to `ν₀ = (ω/c)/√s` and
/// `ν = −ε_m ν₀`, which avoids the cancellation in `k² − ω²/c²` near the
/// light line.
pub fn spp_wavevector_lossless(metal: &PermittivityModel, omega: f64) -> Result<SppWavevector> {
    let eps = metal.eval_lossless(omega)?;
    if eps >= -1.0 {
        return Err(Error::NoBoundMode { omega, eps });
    }
    let k0 = omega / SPEED_OF_LIGHT;
    let s = -(1.0 + eps);
    let k = k0 * (eps / (1.0 + eps)).sqrt();
    let nu0 = k0 / s.sqrt();
    let nu = -eps * nu0;
    Ok(SppWavevector {
        k,
        kappa: 0.0,
        nu,
        nu0,
    })
}

/// Complex SPP wavevector `K = (ω/c)√(ε_m/(1+ε_m)) = k + iκ` for the lossy
/// permittivity. The branch is fixed by `Im K ≥ 0`.
pub fn spp_wavevector_lossy(metal: &PermittivityModel, omega: f64) -> Result<SppWavevector> {
    let eps = metal.eval_lossy(omega)?;
    if eps.re >= -1.0 {
        return Err(Error::NoBoundMode { omega, eps: eps.re });
    }
    let k0 = omega / SPEED_OF_LIGHT;
    let one = Complex64::new(1.0, 0.0);
    let mut big_k = k0 * (eps / (one + eps)).sqrt();
    if big_k.im < 0.0 {
        big_k = -big_k;
    }
    if big_k.re <= 0.0 {
        return Err(Error::Internal(format!(
            "wavevector branch {big_k} is not forward-propagating and decaying"
        )));
    }
    let nu0 = principal_decay(big_k * big_k - k0 * k0);
    let nu = principal_decay(big_k * big_k - eps * k0 * k0);
    Ok(SppWavevector {
        k: big_k.re,
        kappa: big_k.im,
        nu: nu.re,
        nu0: nu0.re,
    })
}

/// Square root with non-negative real part (decaying evanescent branch).
pub(crate) fn principal_decay(z: Complex64) -> Complex64 {
    let s = z.sqrt();
    if s.re < 0.0 {
        -s
    } else {
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchCondition {
    /// Incidence angle in the prism [rad].
    pub theta: f64,
    pub omega: f64,
    /// In-plane photon wavevector `√ε₁ (ω/c) sin θ` [rad/m].
    pub kappa_parallel: f64,
}

/// Incidence angle at which the in-plane prism wavevector equals the lossless
/// SPP wavevector: `sin²θ = ε_m / (ε₁(1+ε_m))`.
pub fn matching_angle(metal: &PermittivityModel, eps1: f64, omega: f64) -> Result<MatchCondition> {
    if !(eps1.is_finite() && eps1 > 0.0) {
        return Err(domain(format!(
            "prism permittivity must be positive, got {eps1}"
        )));
    }
    let eps = metal.eval_lossless(omega)?;
    if eps >= -1.0 {
        return Err(Error::NoBoundMode { omega, eps });
    }
    let sin2 = eps / (eps1 * (1.0 + eps));
    if sin2 > 1.0 {
        return Err(Error::Unmatchable { omega, sin2 });
    }
    let theta = sin2.sqrt().asin();
    Ok(MatchCondition {
        theta,
        omega,
        kappa_parallel: eps1.sqrt() * omega / SPEED_OF_LIGHT * theta.sin(),
    })
}

/// Highest frequency that can still be mode matched with a prism of
/// permittivity `eps1` (the matching angle reaches 90° there).
///
/// Solves `ε_m(ω) = −ε₁/(ε₁−1)`, the point where `sin²θ = 1`.
pub fn matching_limit(metal: &PermittivityModel, eps1: f64) -> Result<f64> {
    if !(eps1.is_finite() && eps1 > 1.0) {
        return Err(domain(format!(
            "prism permittivity must exceed 1, got {eps1}"
        )));
    }
    metal.frequency_for_permittivity(-eps1 / (eps1 - 1.0))
}

/// Group velocity `v_G = (∂k/∂ω)⁻¹` of the lossless dispersion at ω₀, by a
/// central difference with step `10⁻⁶ ω₀`.
pub fn group_velocity(metal: &PermittivityModel, omega0: f64) -> Result<f64> {
    if !(omega0.is_finite() && omega0 > 0.0) {
        return Err(domain(format!("frequency must be positive, got {omega0}")));
    }
    let h = 1e-6 * omega0;
    let k = |w: f64| {
        spp_wavevector_lossless(metal, w).map(|s| s.k).map_err(|_| {
            domain(format!(
                "ω₀ ± h leaves the bound-mode range at ω₀ = {omega0:e}"
            ))
        })
    };
    let dk = k(omega0 + h)? - k(omega0 - h)?;
    let vg = 2.0 * h / dk;
    if !(vg.is_finite() && vg > 0.0) {
        return Err(Error::Internal(format!("non-physical group velocity {vg}")));
    }
    Ok(vg)
}

#[cfg(test)]
mod tests {
    use super::*;

    const C: f64 = SPEED_OF_LIGHT;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn silver_wavevector_at_1e15() {
        // (ω/c)·√(ε/(1+ε)) with ε = −195.41286265270114
        let s = spp_wavevector_lossless(&PermittivityModel::silver(), 1e15).unwrap();
        assert!(rel(s.k, 3_344_208.704_456_593) < 1e-12, "{}", s.k);
        assert_eq!(s.kappa, 0.0);
    }

    #[test]
    fn synthetic_minus_two() {
        // pure Drude with ε(ω) = −2 at ω = c (so ω/c = 1): ω_p² = 3ω²
        let omega = C;
        let m = PermittivityModel::new(3f64.sqrt() * omega, 0.0, 0.0, 0.0).unwrap();
        assert!((m.eval_lossless(omega).unwrap() + 2.0).abs() < 1e-12);
        let s = spp_wavevector_lossless(&m, omega).unwrap();
        assert!(rel(s.k, 2f64.sqrt()) < 1e-12);
    }

    #[test]
    fn diverges_toward_surface_plasma_frequency() {
        let m = PermittivityModel::silver();
        let wsp = m.surface_plasma_frequency().unwrap();
        let k1 = spp_wavevector_lossless(&m, 3e15).unwrap().k;
        let k2 = spp_wavevector_lossless(&m, wsp * (1.0 - 1e-5)).unwrap().k;
        assert!(k2 > 10.0 * k1);
        assert!(matches!(
            spp_wavevector_lossless(&m, wsp * 1.01),
            Err(Error::NoBoundMode { .. })
        ));
        // above ω_p the permittivity is positive
        assert!(matches!(
            spp_wavevector_lossless(&m, 2e16),
            Err(Error::NoBoundMode { .. })
        ));
    }

    #[test]
    fn lossy_attenuation_silver() {
        // independent complex square root of ε/(1+ε) with ε = −194.648036… + 12.457223…i
        let s = spp_wavevector_lossy(&PermittivityModel::silver(), 1e15).unwrap();
        assert!(rel(s.kappa, 550.347_472_442_683_5) < 1e-9, "{}", s.kappa);
        assert!(rel(s.k, 3_344_207.141_934_827) < 1e-12);
    }

    #[test]
    fn lossy_reduces_to_lossless_without_damping() {
        let m = PermittivityModel::silver().without_loss();
        for w in [1e15, 3e15, 5e15] {
            let a = spp_wavevector_lossy(&m, w).unwrap();
            let b = spp_wavevector_lossless(&m, w).unwrap();
            assert_eq!(a.kappa, 0.0);
            assert!(rel(a.k, b.k) < 1e-13);
        }
    }

    #[test]
    fn kappa_first_order_in_imaginary_part() {
        // finite-difference perturbation: doubling a small Im ε doubles κ
        let base = PermittivityModel::new(1.402e16, 0.0, 29.0, 1e-3).unwrap();
        let doubled = PermittivityModel {
            bg_imag: 2e-3,
            ..base
        };
        let w = 2e15;
        let k1 = spp_wavevector_lossy(&base, w).unwrap().kappa;
        let k2 = spp_wavevector_lossy(&doubled, w).unwrap().kappa;
        assert!((k2 / k1 - 2.0).abs() < 0.05 * 2.0, "{}", k2 / k1);
    }

    #[test]
    fn matching_angle_silver() {
        // arcsin √(ε/(1.51(1+ε))) with ε = −195.41286…: 54.674339930°
        let m = matching_angle(&PermittivityModel::silver(), 1.51, 1e15).unwrap();
        assert!((m.theta.to_degrees() - 54.674_339_930_286_93).abs() < 1e-9);
        let k = spp_wavevector_lossless(&PermittivityModel::silver(), 1e15)
            .unwrap()
            .k;
        assert!(rel(m.kappa_parallel, k) < 1e-12);
    }

    #[test]
    fn grazing_when_prism_exactly_matches() {
        let metal = PermittivityModel::silver();
        let w = 3e15;
        let eps = metal.eval_lossless(w).unwrap();
        let eps1 = eps / (1.0 + eps);
        let m = matching_angle(&metal, eps1, w).unwrap();
        assert!((m.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-7);
    }

    #[test]
    fn unmatchable_near_surface_plasma_frequency() {
        let metal = PermittivityModel::silver();
        let limit = matching_limit(&metal, 1.51).unwrap();
        let wsp = metal.surface_plasma_frequency().unwrap();
        assert!(limit < wsp);
        assert!(matching_angle(&metal, 1.51, limit * 0.999).is_ok());
        assert!(matches!(
            matching_angle(&metal, 1.51, limit * 1.001),
            Err(Error::Unmatchable { .. })
        ));
        assert!(matches!(
            matching_angle(&metal, 1.51, 0.5 * (limit + wsp)),
            Err(Error::Unmatchable { .. })
        ));
    }

    #[test]
    fn group_velocity_near_light_line() {
        let vg = group_velocity(&PermittivityModel::silver(), 1e15).unwrap();
        assert!(vg < C && vg > 0.99 * C, "{}", vg / C);
    }

    #[test]
    fn group_velocity_free_photon_limit() {
        let m = PermittivityModel::new(1e19, 0.0, 0.0, 0.0).unwrap();
        let vg = group_velocity(&m, 1e15).unwrap();
        assert!((vg - C).abs() < 1e-3 * C);
    }

    #[test]
    fn group_velocity_flattens_near_surface_plasma_frequency() {
        let m = PermittivityModel::silver();
        let wsp = m.surface_plasma_frequency().unwrap();
        let vg = group_velocity(&m, 0.99 * wsp).unwrap();
        assert!(vg < 0.5 * C, "{}", vg / C);
        assert!(group_velocity(&m, wsp * (1.0 - 1e-7)).is_err());
    }
}
