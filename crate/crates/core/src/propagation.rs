//! Lossy propagation of the excited SPP wavepacket.
//!
//! Loss is modelled by a continuum array of beamsplitters coupling the SPP to
//! vacuum bath modes. For a narrow band the attenuation is frozen at
//! `κ₀ = κ(ω₀)`, so the flux at distance `x` is a retarded, attenuated copy of
//! the emitted temporal profile:
//!
//! ```text
//! f_out(t) = e^{−2κ₀x} n |ξ̃(t − x/v_G)|²
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Result};
use crate::numeric::gauss_legendre;
use crate::SPEED_OF_LIGHT;

/// Gaussian n-excitation wavepacket emitted at `t0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavepacketSpec {
    pub omega0: f64,
    /// Spectral standard deviation of `|ξ(ω)|²` [rad/s].
    pub sigma: f64,
    pub n: u32,
    pub t0: f64,
}

impl WavepacketSpec {
    /// Requires `0 < σ < ω₀/50` so the narrow-band approximations hold.
    pub fn new(omega0: f64, sigma: f64, n: u32) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(domain(format!(
                "central frequency must be positive, got {omega0}"
            )));
        }
        if !(sigma > 0.0 && sigma < omega0 / 50.0) {
            return Err(domain(format!(
                "spectral width must satisfy 0 < σ < ω₀/50, got σ = {sigma:e}"
            )));
        }
        Ok(Self {
            omega0,
            sigma,
            n,
            t0: 0.0,
        })
    }

    /// Spectral amplitude `ξ(ω) = (2πσ²)^{−1/4} exp(−(ω−ω₀)²/(4σ²))`.
    pub fn spectral_amplitude(&self, omega: f64) -> f64 {
        let d = omega - self.omega0;
        (2.0 * PI * self.sigma * self.sigma).powf(-0.25)
            * (-d * d / (4.0 * self.sigma * self.sigma)).exp()
    }

    /// Half-width `1/σ` of the detector window.
    pub fn window_half_width(&self) -> f64 {
        1.0 / self.sigma
    }
}

/// Spectral standard deviation for a FWHM bandwidth `Δλ` about ω₀:
/// `Δω = ω₀² Δλ / (2πc)` and `σ = Δω / (2√(2 ln 2))`.
pub fn sigma_from_bandwidth(omega0: f64, delta_lambda: f64) -> f64 {
    let delta_omega = omega0 * omega0 * delta_lambda / (2.0 * PI * SPEED_OF_LIGHT);
    delta_omega / (2.0 * (2.0 * 2f64.ln()).sqrt())
}

/// Fourier transform of the spectral amplitude,
/// `ξ̃(t) = (2σ²/π)^{1/4} e^{−σ²(t−t₀)²} e^{−iω₀(t−t₀)}`, with `∫|ξ̃|² dt = 1`.
pub fn temporal_profile(wp: &WavepacketSpec, t: f64) -> Complex64 {
    let s = t - wp.t0;
    let env = (2.0 * wp.sigma * wp.sigma / PI).powf(0.25) * (-(wp.sigma * s).powi(2)).exp();
    Complex64::from_polar(env, -wp.omega0 * s)
}

fn intensity_at_delay(wp: &WavepacketSpec, s: f64) -> f64 {
    (2.0 * wp.sigma * wp.sigma / PI).sqrt() * (-2.0 * (wp.sigma * s).powi(2)).exp()
}

fn check_propagation(kappa0: f64, vg: f64, x: f64) -> Result<()> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(domain(format!(
            "propagation distance must be non-negative, got {x}"
        )));
    }
    if !(kappa0.is_finite() && kappa0 >= 0.0) {
        return Err(domain(format!(
            "attenuation must be non-negative, got {kappa0}"
        )));
    }
    if !(vg.is_finite() && vg > 0.0) {
        return Err(domain(format!("group velocity must be positive, got {vg}")));
    }
    Ok(())
}

/// SPP flux at distance `x` and time `t`.
pub fn flux(wp: &WavepacketSpec, kappa0: f64, vg: f64, x: f64, t: f64) -> Result<f64> {
    check_propagation(kappa0, vg, x)?;
    let retarded = t - wp.t0 - x / vg;
    Ok((-2.0 * kappa0 * x).exp() * wp.n as f64 * intensity_at_delay(wp, retarded))
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationResult {
    pub x: f64,
    pub kappa0: f64,
    /// `(t, f_out(t))` samples centred on the retarded arrival time.
    pub flux_profile: Vec<(f64, f64)>,
    /// `μ n e^{−2κ₀x}`, the count over the whole pulse.
    pub mean_count: f64,
    /// μ times the flux integrated over `x/v_G ± 1/σ`.
    pub windowed_count: f64,
    /// `|β₀|²` times `mean_count`.
    pub expected_count: f64,
    /// `|β₀|²` times `windowed_count`.
    pub expected_windowed_count: f64,
    pub retarded_time_offset: f64,
}

/// Samples in [`PropagationResult::flux_profile`]; odd so the centre sample
/// sits on the arrival time.
pub const PROFILE_SAMPLES: usize = 201;

/// Detector counts for a wavepacket launched with transfer coefficient `β₀`
/// and detected with efficiency `μ` after propagating a distance `x`.
pub fn detector_counts(
    wp: &WavepacketSpec,
    beta0: Complex64,
    mu: f64,
    kappa0: f64,
    vg: f64,
    x: f64,
) -> Result<PropagationResult> {
    check_propagation(kappa0, vg, x)?;
    if !(0.0..=1.0).contains(&mu) {
        return Err(domain(format!(
            "detector efficiency must lie in [0, 1], got {mu}"
        )));
    }
    let transfer = beta0.norm_sqr();
    if !(transfer <= 1.0 + 1e-12) {
        return Err(domain(format!(
            "|β₀| must not exceed 1, got {}",
            transfer.sqrt()
        )));
    }
    let attenuation = (-2.0 * kappa0 * x).exp();
    let n = wp.n as f64;
    let delay = wp.t0 + x / vg;

    let half = wp.window_half_width();
    // integrate in the retarded variable so the arrival time cannot cancel digits
    let captured = gauss_legendre(|s| intensity_at_delay(wp, s), -half, half, 32);
    let windowed = mu * attenuation * n * captured;

    let span = 3.0 * half;
    let step = 2.0 * span / (PROFILE_SAMPLES - 1) as f64;
    let flux_profile = (0..PROFILE_SAMPLES)
        .map(|i| {
            let s = -span + step * i as f64;
            (delay + s, attenuation * n * intensity_at_delay(wp, s))
        })
        .collect();

    let mean = mu * n * attenuation;
    Ok(PropagationResult {
        x,
        kappa0,
        flux_profile,
        mean_count: mean,
        windowed_count: windowed,
        expected_count: transfer * mean,
        expected_windowed_count: transfer * windowed,
        retarded_time_offset: x / vg,
    })
}

/// `|e^{iKx}|² + 2κ₀∫₀ˣ e^{−2κ₀(x−x′)} dx′`, evaluated by quadrature.
///
/// The bath terms restore whatever the attenuation removes, so the result is
/// 1 when the array model preserves `[b, b†] = 1`.
pub fn commutator_check(kappa0: f64, x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(domain(format!(
            "propagation distance must be non-negative, got {x}"
        )));
    }
    if !(kappa0.is_finite() && kappa0 >= 0.0) {
        return Err(domain(format!(
            "attenuation must be non-negative, got {kappa0}"
        )));
    }
    let survive = (-2.0 * kappa0 * x).exp();
    if kappa0 == 0.0 || x == 0.0 {
        return Ok(survive);
    }
    // the bath kernel is concentrated within 1/(2κ₀) of x; refine accordingly
    let panels = 64 + (8.0 * kappa0 * x).ceil() as usize;
    let bath = gauss_legendre(
        |xp| 2.0 * kappa0 * (-2.0 * kappa0 * (x - xp)).exp(),
        0.0,
        x,
        panels,
    );
    Ok(survive + bath)
}
