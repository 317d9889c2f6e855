//! The five sweep/report commands. Each returns rows in (ω, d, x) order;
//! parallel maps collect in index order, so the thread count never changes
//! the output.

use rayon::prelude::*;
use serde::Serialize;

use spp_core::{
    apply_loss_chain, detector_counts, fock_loss_oracle, g2_classical_bound_check, g2_fock,
    group_velocity, matching_angle, optimize_thickness, penetration_factor, sigma_from_bandwidth,
    spp_wavevector_lossless, spp_wavevector_lossy, transfer_coefficients, Complex64, Error,
    LayerStack, LossChain, PermittivityModel, Result, ThicknessOptimum, WavepacketSpec,
    SPEED_OF_LIGHT,
};

use crate::output::{Cell, Table};
use crate::sweep::SweepConfig;

pub struct Context {
    pub sweep: SweepConfig,
    pub metal: PermittivityModel,
}

impl Context {
    fn stack(&self, d: f64) -> Result<LayerStack> {
        LayerStack::new(self.sweep.geometry, self.sweep.eps1, d, self.metal)
    }

    /// Optimum at ω, or `None` where ω cannot be coupled.
    fn optimum(&self, omega: f64) -> Result<Option<ThicknessOptimum>> {
        let template = self.stack(self.sweep.d_max)?;
        match optimize_thickness(&template, omega, (self.sweep.d_min, self.sweep.d_max)) {
            Ok(opt) => Ok(Some(opt)),
            Err(e) if uncoupled(&e) => {
                log::debug!("ω = {omega:e}: {e}");
                Ok(None)
            }
            Err(e) => Err(e),
        }
    }
}

/// Errors that mark a grid point infeasible instead of failing the run.
fn uncoupled(e: &Error) -> bool {
    matches!(
        e,
        Error::Unmatchable { .. } | Error::NoBoundMode { .. } | Error::Infeasible { .. }
    )
}

fn feasible(flag: bool) -> Cell {
    Cell::Int(flag as i64)
}

pub fn dispersion(ctx: &Context) -> Result<Table> {
    let s = &ctx.sweep;
    let sin_line = s.theta_line_deg.to_radians().sin();
    let rows = ctx
        .sweep
        .omegas()
        .par_iter()
        .map(|&omega| {
            let k_light = omega / SPEED_OF_LIGHT;
            let k_spp = match spp_wavevector_lossless(&ctx.metal, omega) {
                Ok(w) => Some(w.k),
                Err(Error::NoBoundMode { .. }) => None,
                Err(e) => return Err(e),
            };
            let theta = match matching_angle(&ctx.metal, s.eps1, omega) {
                Ok(m) => Some(m.theta.to_degrees()),
                Err(e) if uncoupled(&e) => None,
                Err(e) => return Err(e),
            };
            Ok(vec![
                Cell::Float(omega),
                Cell::opt(k_spp),
                Cell::Float(k_light),
                Cell::opt(theta),
                Cell::Float(s.eps1.sqrt() * k_light * sin_line),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        columns: vec![
            "omega",
            "k_spp",
            "k_light",
            "theta_match_deg",
            "k_prism_theta",
        ],
        rows,
    })
}

pub fn coupling_map(ctx: &Context) -> Result<Table> {
    let points: Vec<(f64, f64)> = ctx
        .sweep
        .omegas()
        .into_iter()
        .flat_map(|w| ctx.sweep.thicknesses().into_iter().map(move |d| (w, d)))
        .collect();
    let rows = points
        .par_iter()
        .map(|&(omega, d)| {
            let stack = ctx.stack(d)?;
            let penetration = match penetration_factor(&stack, omega) {
                Ok(p) => Some(p),
                Err(e) if uncoupled(&e) => None,
                Err(e) => return Err(e),
            };
            let g = match transfer_coefficients(&stack, omega) {
                Ok(tc) => Some(tc.g_tilde),
                Err(e) if uncoupled(&e) => None,
                Err(e) => return Err(e),
            };
            let ok = g.is_some() && penetration.is_some_and(|p| p <= 1.0);
            Ok(vec![
                Cell::Float(omega),
                Cell::Float(d),
                Cell::opt(g),
                Cell::opt(penetration),
                feasible(ok),
            ])
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Table {
        columns: vec!["omega", "d", "g_tilde", "penetration", "feasible"],
        rows,
    })
}

pub fn optimize(ctx: &Context) -> Result<Table> {
    let rows = ctx
        .sweep
        .omegas()
        .par_iter()
        .map(|&omega| {
            let opt = ctx.optimum(omega)?;
            Ok(match opt {
                Some(o) => vec![
                    Cell::Float(omega),
                    Cell::Float(o.d),
                    Cell::Float(o.coefficients.g_tilde),
                    Cell::Float(o.coefficients.penetration),
                    Cell::Float(o.coefficients.incidence.to_degrees()),
                    feasible(true),
                ],
                None => vec![
                    Cell::Float(omega),
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    Cell::Empty,
                    feasible(false),
                ],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    require_some_feasible(&rows, 5, ctx)?;
    Ok(Table {
        columns: vec![
            "omega",
            "d_opt",
            "g_tilde_opt",
            "penetration",
            "theta_match_deg",
            "feasible",
        ],
        rows,
    })
}

pub fn propagate(ctx: &Context) -> Result<Table> {
    let s = &ctx.sweep;
    let xs = s.distances();
    let blocks = s
        .omegas()
        .par_iter()
        .map(|&omega| {
            let Some(opt) = ctx.optimum(omega)? else {
                return Ok(xs
                    .iter()
                    .map(|&x| {
                        let mut row = vec![Cell::Float(omega), Cell::Float(x)];
                        row.extend(std::iter::repeat_n(Cell::Empty, 4));
                        row.push(feasible(false));
                        row
                    })
                    .collect::<Vec<_>>());
            };
            let kappa0 = spp_wavevector_lossy(&ctx.metal, omega)?.kappa;
            let vg = group_velocity(&ctx.metal, omega)?;
            let sigma = sigma_from_bandwidth(omega, s.delta_lambda);
            let wp = WavepacketSpec::new(omega, sigma, s.n).map_err(|e| Error::Config {
                line: 0,
                msg: format!("delta_lambda too wide at ω = {omega:e}: {e}"),
            })?;
            let beta: Complex64 = opt.coefficients.beta;
            let n = s.n as f64;
            xs.iter()
                .map(|&x| {
                    let r = detector_counts(&wp, beta, s.mu, kappa0, vg, x)?;
                    Ok(vec![
                        Cell::Float(omega),
                        Cell::Float(x),
                        Cell::Float(r.expected_count / n),
                        Cell::Float(r.expected_windowed_count / n),
                        Cell::Float(kappa0),
                        Cell::Float(beta.norm_sqr()),
                        feasible(true),
                    ])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<Cell>> = blocks.into_iter().flatten().collect();
    require_some_feasible(&rows, 6, ctx)?;
    Ok(Table {
        columns: vec![
            "omega",
            "x",
            "me_over_n",
            "me_over_n_windowed",
            "kappa0",
            "beta_sq",
            "feasible",
        ],
        rows,
    })
}

fn require_some_feasible(rows: &[Vec<Cell>], col: usize, ctx: &Context) -> Result<()> {
    if rows.iter().any(|r| r[col] == Cell::Int(1)) {
        Ok(())
    } else {
        Err(Error::Infeasible {
            lo: ctx.sweep.d_min,
            hi: ctx.sweep.d_max,
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct StatsReport {
    pub n: u64,
    pub eta_total: f64,
    pub mean: f64,
    pub factorial_second: f64,
    pub g2: f64,
    pub classification: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleCheck>,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleCheck {
    pub mean: f64,
    pub factorial_second: f64,
    pub g2: f64,
    pub agrees: bool,
}

pub fn parse_chain(text: &str) -> Result<LossChain> {
    let etas = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| Error::Domain(format!("invalid efficiency {t:?} in chain")))
        })
        .collect::<Result<Vec<_>>>()?;
    LossChain::new(etas)
}

pub fn stats(n: u64, chain: &LossChain, oracle: bool) -> Result<StatsReport> {
    let g2 = g2_fock(n)?;
    let m = apply_loss_chain(n, chain);
    let check = if oracle {
        let o = fock_loss_oracle(n, chain)?;
        let og2 = o.g2()?;
        Some(OracleCheck {
            mean: o.mean,
            factorial_second: o.factorial_second,
            g2: og2,
            agrees: (og2 - g2).abs() <= 1e-12
                && (o.mean - m.mean).abs() <= 1e-12 * m.mean.max(1.0)
                && (o.factorial_second - m.factorial_second).abs()
                    <= 1e-12 * m.factorial_second.max(1.0),
        })
    } else {
        None
    };
    Ok(StatsReport {
        n,
        eta_total: chain.total(),
        mean: m.mean,
        factorial_second: m.factorial_second,
        g2,
        classification: g2_classical_bound_check(g2)?.to_string(),
        oracle: check,
    })
}

impl StatsReport {
    pub fn table(&self) -> Table {
        Table {
            columns: vec![
                "n",
                "eta_total",
                "mean",
                "factorial_second",
                "g2",
                "classification",
            ],
            rows: vec![vec![
                Cell::Int(self.n as i64),
                Cell::Float(self.eta_total),
                Cell::Float(self.mean),
                Cell::Float(self.factorial_second),
                Cell::Float(self.g2),
                Cell::Text(self.classification.clone()),
            ]],
        }
    }
}
