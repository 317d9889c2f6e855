//! Counting moments and second-order coherence `g²(0)` under loss.
//!
//! Every loss stage (photon → SPP transfer, propagation, detection) acts on a
//! Fock-diagonal state as a beamsplitter with a vacuum ancilla that is traced
//! out, i.e. a binomial thinning of the excitation number. Thinning scales
//! `⟨m⟩` by η and `⟨m(m−1)⟩` by η², so `g²(0) = ⟨m(m−1)⟩/⟨m⟩²` is unchanged.

use std::fmt;

use crate::error::{domain, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CountingMoments {
    pub mean: f64,
    /// `⟨m(m−1)⟩`.
    pub factorial_second: f64,
}

impl CountingMoments {
    /// `⟨m(m−1)⟩/⟨m⟩²`; undefined when nothing survives.
    pub fn g2(&self) -> Result<f64> {
        if !(self.mean > 0.0) {
            return Err(domain("g² is undefined for zero mean count"));
        }
        Ok(self.factorial_second / (self.mean * self.mean))
    }

    /// Moments seen by a detector that integrates a fraction `captured` of
    /// the pulse energy.
    pub fn windowed(&self, captured: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&captured) {
            return Err(domain(format!(
                "captured fraction must lie in [0, 1], got {captured}"
            )));
        }
        Ok(Self {
            mean: captured * self.mean,
            factorial_second: captured * captured * self.factorial_second,
        })
    }
}

/// Ordered per-stage efficiencies.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LossChain {
    etas: Vec<f64>,
}

impl LossChain {
    pub fn new(etas: Vec<f64>) -> Result<Self> {
        if let Some(bad) = etas.iter().find(|e| !(0.0..=1.0).contains(*e)) {
            return Err(domain(format!(
                "stage efficiency must lie in [0, 1], got {bad}"
            )));
        }
        Ok(Self { etas })
    }

    /// Chain of transfer `|β₀|²`, propagation `e^{−2κ₀x}` and detection μ.
    pub fn from_stages(transfer: f64, propagation: f64, detection: f64) -> Result<Self> {
        Self::new(vec![transfer, propagation, detection])
    }

    pub fn etas(&self) -> &[f64] {
        &self.etas
    }

    pub fn total(&self) -> f64 {
        self.etas.iter().product()
    }
}

/// `g²(0) = 1 − 1/n` of an n-excitation Fock state.
pub fn g2_fock(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(domain("g² is undefined for the vacuum"));
    }
    Ok(1.0 - 1.0 / n as f64)
}

/// Closed-form moments of an n-excitation Fock state after the chain.
pub fn apply_loss_chain(n: u64, chain: &LossChain) -> CountingMoments {
    let eta = chain.total();
    let n = n as f64;
    CountingMoments {
        mean: eta * n,
        factorial_second: eta * eta * n * (n - 1.0),
    }
}

pub const ORACLE_MAX_N: u64 = 20;
pub const ORACLE_MAX_STAGES: usize = 8;

/// Exact distribution `P(k)`, `k = 0..=n`, of surviving excitations.
///
/// Each stage applies `P(k|j) = C(j,k) η^k (1−η)^{j−k}` to the running
/// distribution.
pub fn fock_loss_distribution(n: u64, chain: &LossChain) -> Result<Vec<f64>> {
    if n > ORACLE_MAX_N || chain.etas.len() > ORACLE_MAX_STAGES {
        return Err(Error::Scale(format!(
            "oracle is limited to n ≤ {ORACLE_MAX_N} and {ORACLE_MAX_STAGES} stages, got n = {n} and {} stages",
            chain.etas.len()
        )));
    }
    let n = n as usize;
    let binom = pascal(n);
    let mut dist = vec![0.0; n + 1];
    dist[n] = 1.0;
    for &eta in &chain.etas {
        let mut next = vec![0.0; n + 1];
        for (j, &pj) in dist.iter().enumerate() {
            if pj == 0.0 {
                continue;
            }
            for (k, slot) in next.iter_mut().enumerate().take(j + 1) {
                *slot += pj * binom[j][k] * eta.powi(k as i32) * (1.0 - eta).powi((j - k) as i32);
            }
        }
        dist = next;
    }
    Ok(dist)
}

fn pascal(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let mut row = vec![1.0; j + 1];
        for k in 1..j {
            row[k] = rows[j - 1][k - 1] + rows[j - 1][k];
        }
        rows.push(row);
    }
    rows
}

/// Moments of [`fock_loss_distribution`].
pub fn fock_loss_oracle(n: u64, chain: &LossChain) -> Result<CountingMoments> {
    let dist = fock_loss_distribution(n, chain)?;
    let mut mean = 0.0;
    let mut factorial_second = 0.0;
    for (k, p) in dist.iter().enumerate() {
        let k = k as f64;
        mean += k * p;
        factorial_second += k * (k - 1.0) * p;
    }
    Ok(CountingMoments {
        mean,
        factorial_second,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// `g²(0) < 1`: impossible for a classical field.
    Nonclassical,
    ClassicalCompatible,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Nonclassical => "nonclassical",
            Self::ClassicalCompatible => "classical-compatible",
        })
    }
}

/// Classical fields obey `1 ≤ g²(0)`.
pub fn g2_classical_bound_check(value: f64) -> Result<Classification> {
    if !(value >= 0.0) {
        return Err(domain(format!("g² must be non-negative, got {value}")));
    }
    Ok(if value < 1.0 {
        Classification::Nonclassical
    } else {
        Classification::ClassicalCompatible
    })
}
