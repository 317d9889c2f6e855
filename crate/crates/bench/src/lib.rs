//! Benchmark fixtures for the coupling pipeline.

use spp_core::{matching_limit, Geometry, LayerStack, PermittivityModel};

/// Silver behind a glass prism with the given gap or film thickness.
pub fn silver_stack(geometry: Geometry, d: f64) -> LayerStack {
    LayerStack::new(geometry, 1.51, d, PermittivityModel::silver()).expect("valid stack")
}

/// `n` evenly spaced frequencies from 1e15 rad/s to just below the matching limit.
pub fn matchable_frequencies(n: usize) -> Vec<f64> {
    let top =
        matching_limit(&PermittivityModel::silver(), 1.51).expect("silver matches") * (1.0 - 1e-4);
    (0..n)
        .map(|i| 1e15 + (top - 1e15) * i as f64 / (n.max(2) - 1) as f64)
        .collect()
}
