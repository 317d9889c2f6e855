//! Electromagnetic mode profiles along z and their overlap.
//!
//! A [`ModeProfile`] is a piecewise sum of exponentials. Each [`Term`] carries
//! the complex `(x, z)` amplitude of an E-field-like vector and a complex rate,
//! `amp · e^{rate (z − origin)}`. Anchoring every exponential at the interface
//! where it is largest keeps the amplitudes O(1) for thick layers.
//!
//! Inner products between profiles are evaluated in closed form per piece.

use num_complex::Complex64;

use crate::dispersion::{principal_decay, spp_wavevector_lossless};
use crate::error::{domain, Error, Result};
use crate::materials::{Geometry, LayerStack, PermittivityModel};
use crate::numeric::{expm1, solve_linear};
use crate::SPEED_OF_LIGHT;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    /// `(x, z)` vector amplitude at `z = origin`.
    pub amp: [Complex64; 2],
    pub rate: Complex64,
    pub origin: f64,
}

impl Term {
    fn value(&self, z: f64) -> [Complex64; 2] {
        let e = (self.rate * (z - self.origin)).exp();
        [self.amp[0] * e, self.amp[1] * e]
    }
}

/// Terms supported on `[lo, hi]`; the bounds may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub lo: f64,
    pub hi: f64,
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeProfile {
    pub pieces: Vec<Piece>,
    /// `φ₁…φ₆` of the three-layer field: x and z amplitudes of the
    /// `e^{−γ₂z}` term (referenced to z = 0), of the `e^{+γ₂z}` term and of
    /// the layer-III term (both referenced to z = d). `None` for the SPP.
    pub coefficients: Option<[Complex64; 6]>,
    /// L² norm `(∫|v(z)|² dz)^{1/2}`.
    pub norm: f64,
}

impl ModeProfile {
    pub fn new(pieces: Vec<Piece>, coefficients: Option<[Complex64; 6]>) -> Result<Self> {
        for p in &pieces {
            if !(p.lo < p.hi) {
                return Err(domain(format!("empty piece [{}, {}]", p.lo, p.hi)));
            }
        }
        let mut profile = Self {
            pieces,
            coefficients,
            norm: 0.0,
        };
        let n2 = profile.inner(&profile)?.re;
        if !(n2.is_finite() && n2 > 0.0) {
            return Err(Error::Internal(format!("profile norm² = {n2}")));
        }
        profile.norm = n2.sqrt();
        Ok(profile)
    }

    /// Field vector at `z`; zero outside the support. At a shared boundary
    /// the upper piece wins.
    pub fn field(&self, z: f64) -> [Complex64; 2] {
        let piece = self.pieces.iter().rev().find(|p| z >= p.lo && z <= p.hi);
        let mut v = [ZERO; 2];
        if let Some(p) = piece {
            for t in &p.terms {
                let tv = t.value(z);
                v[0] += tv[0];
                v[1] += tv[1];
            }
        }
        v
    }

    /// `|v(z)|²`.
    pub fn intensity(&self, z: f64) -> f64 {
        let v = self.field(z);
        v[0].norm_sqr() + v[1].norm_sqr()
    }

    /// Unnormalised inner product `∫ self*(z) · other(z) dz`.
    pub fn inner(&self, other: &ModeProfile) -> Result<Complex64> {
        let mut total = ZERO;
        for p in &self.pieces {
            for q in &other.pieces {
                let lo = p.lo.max(q.lo);
                let hi = p.hi.min(q.hi);
                if !(lo < hi) {
                    continue;
                }
                for s in &p.terms {
                    for t in &q.terms {
                        let dot = s.amp[0].conj() * t.amp[0] + s.amp[1].conj() * t.amp[1];
                        if dot == ZERO {
                            continue;
                        }
                        total += dot * exp_integral(s, t, lo, hi)?;
                    }
                }
            }
        }
        Ok(total)
    }
}

/// `∫_lo^hi exp(conj(r₁)(z − o₁) + r₂(z − o₂)) dz`.
fn exp_integral(s: &Term, t: &Term, lo: f64, hi: f64) -> Result<Complex64> {
    let rate = s.rate.conj() + t.rate;
    let exponent = |z: f64| s.rate.conj() * (z - s.origin) + t.rate * (z - t.origin);
    let divergent = || Error::Internal(format!("non-decaying product {rate} on [{lo}, {hi}]"));
    match (lo.is_finite(), hi.is_finite()) {
        (true, true) => {
            let len = hi - lo;
            let w = rate * len;
            if w == ZERO {
                Ok(exponent(lo).exp() * len)
            } else if w.re > 0.0 {
                // anchor at the large end: e^{lo}·expm1(w) would be 0·∞ for thick layers
                Ok(-exponent(hi).exp() * expm1(-w) / rate)
            } else {
                Ok(exponent(lo).exp() * expm1(w) / rate)
            }
        }
        (true, false) => {
            if rate.re >= 0.0 {
                return Err(divergent());
            }
            Ok(-exponent(lo).exp() / rate)
        }
        (false, true) => {
            if rate.re <= 0.0 {
                return Err(divergent());
            }
            Ok(exponent(hi).exp() / rate)
        }
        (false, false) => Err(divergent()),
    }
}

/// Reflection and transmission amplitudes with `|r|² + |τ|² = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FresnelPair {
    pub r: Complex64,
    pub tau: Complex64,
    /// Factor `√(|r_raw|² + |τ_raw|²)` removed by the renormalisation.
    pub scale: f64,
}

impl FresnelPair {
    fn renormalized(r: Complex64, tau: Complex64) -> Result<Self> {
        let scale = (r.norm_sqr() + tau.norm_sqr()).sqrt();
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Internal(format!(
                "degenerate Fresnel pair r={r}, τ={tau}"
            )));
        }
        Ok(Self {
            r: r / scale,
            tau: tau / scale,
            scale,
        })
    }
}

/// SPP mode profile of the II/III interface located at `z = interface`,
/// using the lossless dispersion.
///
/// The x amplitude is `i` on both sides; the z amplitude is `−k/ν` on the
/// decaying side above the interface and `+k/ν₀` below it for Otto (metal
/// above), with `ν ↔ ν₀` for Kretschmann-Raether (air above).
pub fn spp_profile(
    metal: &PermittivityModel,
    omega: f64,
    geometry: Geometry,
    interface: f64,
) -> Result<ModeProfile> {
    let w = spp_wavevector_lossless(metal, omega)?;
    let (above, below) = match geometry {
        Geometry::Otto => (w.nu, w.nu0),
        Geometry::KretschmannRaether => (w.nu0, w.nu),
    };
    let k = w.k;
    let pieces = vec![
        Piece {
            lo: f64::NEG_INFINITY,
            hi: interface,
            terms: vec![Term {
                amp: [I, Complex64::new(k / below, 0.0)],
                rate: Complex64::new(below, 0.0),
                origin: interface,
            }],
        },
        Piece {
            lo: interface,
            hi: f64::INFINITY,
            terms: vec![Term {
                amp: [I, Complex64::new(-k / above, 0.0)],
                rate: Complex64::new(-above, 0.0),
                origin: interface,
            }],
        },
    ];
    ModeProfile::new(pieces, None)
}

/// Solves the TM boundary-value problem for a prism wave incident at angle
/// `theta` onto layers II (thickness `d`) and III, with the metal's lossy
/// permittivity.
///
/// The incident wave has unit x amplitude. Inside the stack the field is
/// `A e^{−γ₂z} + B e^{γ₂(z−d)}` in layer II and `C e^{−γ₃(z−d)}` in layer III,
/// with `γ_i = (κ² − ε_i ω²/c²)^{1/2}` on the branch `Re γ ≥ 0`. Tangential E
/// and normal D (equivalently tangential H) are continuous at `z = 0, d`.
///
/// `|τ|²` is the fraction of the incident power flux that enters the stack at
/// `z = 0⁺`; the phase of τ is that of the field at the II/III interface.
/// `(r, τ)` are then jointly rescaled so that `|r|² + |τ|² = 1` holds exactly.
pub fn three_layer_profile(
    stack: &LayerStack,
    omega: f64,
    theta: f64,
) -> Result<(ModeProfile, FresnelPair)> {
    let half_pi = std::f64::consts::FRAC_PI_2;
    if !(theta.is_finite() && (0.0..=half_pi).contains(&theta)) {
        return Err(domain(format!(
            "incidence angle must lie in [0, π/2], got {theta}"
        )));
    }
    if theta == 0.0 {
        log::warn!("normal incidence: no in-plane momentum, mode matching is impossible");
    }
    let k0 = omega / SPEED_OF_LIGHT;
    let kappa = stack.eps1.sqrt() * k0 * theta.sin();
    let k1z = stack.eps1.sqrt() * k0 * theta.cos();
    if !(k1z > 1e-12 * k0) {
        return Err(Error::Singular(format!(
            "grazing incidence (θ = {theta}) carries no flux into the stack"
        )));
    }
    let (eps2, eps3) = stack.layer_permittivities(omega)?;
    let kappa2 = Complex64::new(kappa * kappa, 0.0);
    let g2 = principal_decay(kappa2 - eps2 * k0 * k0);
    let g3 = principal_decay(kappa2 - eps3 * k0 * k0);
    if g2.norm() <= 1e-12 * k0 || g3.norm() <= 1e-12 * k0 {
        return Err(Error::Singular(format!(
            "γ vanishes at θ = {theta}, ω = {omega:e} (critical angle)"
        )));
    }
    // p = ε/γ; the prism's incident wave is e^{−γ₁z} with γ₁ = −i k₁z
    let p1 = I * stack.eps1 / k1z;
    let p2 = eps2 / g2;
    let p3 = eps3 / g3;
    let e = (-g2 * stack.d).exp();
    let one = Complex64::new(1.0, 0.0);
    // unknowns [R, A, B, C]
    let m = [
        [-one, one, e, ZERO],
        [p1, p2, -p2 * e, ZERO],
        [ZERO, e, one, -one],
        [ZERO, p2 * e, -p2, -p3],
    ];
    let [refl, a, b, c] = solve_linear(m, [one, p1, ZERO, ZERO])
        .ok_or_else(|| Error::Singular(format!("boundary system at θ = {theta}, ω = {omega:e}")))?;

    let zx = I * kappa / g2;
    let z3 = I * kappa / g3;
    let coefficients = [a, b, zx * a, -zx * b, c, z3 * c];
    let pieces = vec![
        Piece {
            lo: 0.0,
            hi: stack.d,
            terms: vec![
                Term {
                    amp: [a, zx * a],
                    rate: -g2,
                    origin: 0.0,
                },
                Term {
                    amp: [b, -zx * b],
                    rate: g2,
                    origin: stack.d,
                },
            ],
        },
        Piece {
            lo: stack.d,
            hi: f64::INFINITY,
            terms: vec![Term {
                amp: [c, z3 * c],
                rate: -g3,
                origin: stack.d,
            }],
        },
    ];
    let profile = ModeProfile::new(pieces, Some(coefficients))?;

    // time-averaged S_z ∝ Re(E_x H_y*), with H_y ∝ −i p E_x per exponential
    let incident_flux = (I * p1.conj()).re;
    let ex0 = a + b * e;
    let hy0 = -I * p2 * (a - b * e);
    let transmitted_flux = (ex0 * hy0.conj()).re;
    let fraction = (transmitted_flux / incident_flux).max(0.0);
    let phase = if c == ZERO { ZERO } else { c / c.norm() };
    let tau_raw = if phase == ZERO {
        Complex64::new(fraction.sqrt(), 0.0)
    } else {
        phase * fraction.sqrt()
    };
    let fresnel = FresnelPair::renormalized(refl, tau_raw)?;
    Ok((profile, fresnel))
}

/// Normalised overlap `∫ φ̂*(z) · ψ̂(z) dz` of two profiles, each scaled to
/// unit L² norm.
pub fn overlap(phi: &ModeProfile, psi: &ModeProfile) -> Result<Complex64> {
    let value = phi.inner(psi)? / (phi.norm * psi.norm);
    if value.norm() > 1.0 + 1e-9 {
        return Err(Error::Internal(format!(
            "overlap magnitude {} exceeds 1; profiles are not normalised",
            value.norm()
        )));
    }
    Ok(value)
}
