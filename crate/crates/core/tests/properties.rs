use num_complex::Complex64;
use proptest::prelude::*;
use spp_core::{
    apply_loss_chain, commutator_check, detector_counts, fock_loss_distribution, fock_loss_oracle,
    g2_classical_bound_check, g2_fock, matching_angle, matching_limit, overlap, spp_profile,
    spp_wavevector_lossless, spp_wavevector_lossy, three_layer_profile, transfer_coefficients,
    Classification, Geometry, LayerStack, LossChain, PermittivityModel, WavepacketSpec,
    SPEED_OF_LIGHT,
};

fn silver() -> PermittivityModel {
    PermittivityModel::silver()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn geometry() -> impl Strategy<Value = Geometry> {
    prop_oneof![Just(Geometry::Otto), Just(Geometry::KretschmannRaether)]
}

proptest! {
    #[test]
    fn lossless_permittivity_increases_with_frequency(a in 1e14f64..1.4e16, b in 1e14f64..1.4e16) {
        prop_assume!(a < b);
        let m = silver();
        prop_assert!(m.eval_lossless(a).unwrap() < m.eval_lossless(b).unwrap());
    }

    #[test]
    fn lossy_model_tends_to_lossless(omega in 5e14f64..1.3e16, t in 1e-12f64..1e-8) {
        let m = silver();
        let damped = PermittivityModel { gamma: m.gamma * t, bg_imag: m.bg_imag * t, ..m };
        let lossy = damped.eval_lossy(omega).unwrap();
        let lossless = m.eval_lossless(omega).unwrap();
        prop_assert!((lossy.re - lossless).abs() <= 1e-6 * lossless.abs().max(1.0));
        prop_assert!(lossy.im.abs() <= 1e-6);
    }

    #[test]
    fn permittivity_inverts(omega in 2e14f64..1.3e16) {
        let m = silver();
        let eps = m.eval_lossless(omega).unwrap();
        let back = m.frequency_for_permittivity(eps).unwrap();
        prop_assert!(rel(back, omega) < 1e-10, "{back} vs {omega}");
    }

    #[test]
    fn decay_constants_consistent(omega in 1e14f64..5.5e15) {
        let w = spp_wavevector_lossless(&silver(), omega).unwrap();
        let eps = silver().eval_lossless(omega).unwrap();
        let k0 = omega / SPEED_OF_LIGHT;
        prop_assert!(rel(w.nu, -eps * w.nu0) < 1e-12);
        prop_assert!(rel(w.k * w.k, k0 * k0 + w.nu0 * w.nu0) < 1e-12);
        // ν² ≫ k² here, so compare the well-conditioned side
        prop_assert!(rel(w.nu * w.nu - w.k * w.k, -eps * k0 * k0) < 1e-12);
        prop_assert!(w.k > k0);
    }

    #[test]
    fn lossy_wavevector_decays_forward(omega in 1e14f64..5.4e15) {
        let w = spp_wavevector_lossy(&silver(), omega).unwrap();
        prop_assert!(w.kappa > 0.0 && w.k > 0.0);
    }

    #[test]
    fn matching_round_trip(frac in 0.0f64..1.0) {
        let limit = matching_limit(&silver(), 1.51).unwrap();
        let omega = 1e14 + frac * (limit * (1.0 - 1e-9) - 1e14);
        let m = matching_angle(&silver(), 1.51, omega).unwrap();
        let k = spp_wavevector_lossless(&silver(), omega).unwrap().k;
        prop_assert!(rel(m.kappa_parallel, k) < 1e-10);
    }

    #[test]
    fn overlap_obeys_cauchy_schwarz(g in geometry(), frac in 0.0f64..1.0, t in 0.0f64..1.0) {
        let limit = matching_limit(&silver(), 1.51).unwrap();
        let omega = 1e15 + frac * (limit * (1.0 - 1e-6) - 1e15);
        let (lo, hi) = g.default_thickness_range();
        let d = (lo.ln() + t * (hi / lo).ln()).exp();
        let stack = LayerStack::new(g, 1.51, d, silver()).unwrap();
        let theta = matching_angle(&silver(), 1.51, omega).unwrap().theta;
        let phi = spp_profile(&silver(), omega, g, d).unwrap();
        let (psi, fresnel) = three_layer_profile(&stack, omega, theta).unwrap();
        prop_assert!(overlap(&phi, &psi).unwrap().norm() <= 1.0 + 1e-9);
        prop_assert!((fresnel.r.norm_sqr() + fresnel.tau.norm_sqr() - 1.0).abs() < 1e-12);
        let tc = transfer_coefficients(&stack, omega).unwrap();
        prop_assert!((tc.unitarity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn commutator_preserved(kappa in 0.0f64..1e6, x in 0.0f64..1e-3) {
        prop_assert!((commutator_check(kappa, x).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn g2_invariant_under_loss(n in 1u64..=20, etas in prop::collection::vec(0.01f64..=1.0, 0..=8)) {
        let chain = LossChain::new(etas).unwrap();
        let exact = fock_loss_oracle(n, &chain).unwrap();
        let g2 = g2_fock(n).unwrap();
        prop_assert!((exact.g2().unwrap() - g2).abs() < 1e-12);
        prop_assert_eq!(g2_classical_bound_check(g2).unwrap(), Classification::Nonclassical);
        let closed = apply_loss_chain(n, &chain);
        prop_assert!((closed.mean - exact.mean).abs() < 1e-12 * closed.mean.max(1.0));
        prop_assert!((closed.factorial_second - exact.factorial_second).abs()
            < 1e-12 * closed.factorial_second.max(1.0));
    }

    #[test]
    fn chain_order_irrelevant(
        n in 0u64..=20,
        etas in prop::collection::vec(0.0f64..=1.0, 1..=8),
        rot in 0usize..8,
    ) {
        let mut permuted = etas.clone();
        permuted.rotate_left(rot % etas.len());
        permuted.reverse();
        let a = fock_loss_distribution(n, &LossChain::new(etas).unwrap()).unwrap();
        let b = fock_loss_distribution(n, &LossChain::new(permuted).unwrap()).unwrap();
        for (p, q) in a.iter().zip(&b) {
            prop_assert!((p - q).abs() < 1e-13);
        }
    }

    #[test]
    fn windowing_cancels_in_g2(n in 2u64..=20, eta in 0.05f64..=1.0, captured in 0.05f64..=1.0) {
        let m = apply_loss_chain(n, &LossChain::new(vec![eta]).unwrap());
        let w = m.windowed(captured).unwrap();
        prop_assert!((w.g2().unwrap() - m.g2().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn statistics_mean_equals_propagation_count(
        n in 1u32..=20,
        beta in 0.0f64..=1.0,
        kappa in 0.0f64..5e3,
        x in 0.0f64..1e-3,
        mu in 0.0f64..=1.0,
    ) {
        let wp = WavepacketSpec::new(3e15, 1e13, n).unwrap();
        let r = detector_counts(&wp, Complex64::new(beta, 0.0), mu, kappa, 2.9e8, x).unwrap();
        let chain = LossChain::from_stages(beta * beta, (-2.0 * kappa * x).exp(), mu).unwrap();
        let m = apply_loss_chain(n as u64, &chain);
        prop_assert!((m.mean - r.expected_count).abs() <= 1e-12 * m.mean.max(1e-300));
    }
}
