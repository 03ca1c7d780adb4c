//! Geometric lower bound on entropy production.
//!
//! The bound is `s(2 L / pi)` where `L` is the Bures angle and
//! `s(x) = min_{x<r<1} S((r-x, 1-r+x) || (r, 1-r))` with `S` the binary
//! relative entropy. `s` is sandwiched by `2x^2 <= s(x) <= -ln(1-x)`.

use std::f64::consts::FRAC_2_PI;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::dynamics::{PreparedQuench, QuenchSpec, TimeGrid};
use crate::error::{Error, Result};
use crate::geometry::{BuresSeries, Reference};
use crate::harness::{fingerprint, SweepResult, SweepRow};
use crate::spectral::diagonalize_lmg;
use crate::spinops::build_spin_ops;

/// Points in the coarse scan that brackets the global minimum of `g`.
const SCAN_POINTS: usize = 64;
/// Distance kept from the logarithmic singularities at both ends of the
/// search interval, relative to its width.
const EDGE_MARGIN: f64 = 1e-14;
/// Golden-section stopping width, relative to the interval width (at most
/// `1e-10` in absolute terms).
const SEARCH_TOLERANCE: f64 = 1e-10;
/// Smallest `1 - x` fed to `s` from a Bures series, capping the bound near
/// `-ln(1e-200)`.
pub const MIN_COMPLEMENT: f64 = 1e-200;

/// `p ln(p/q) + (1-p) ln((1-p)/(1-q))`, with `0 ln 0 = 0`.
pub fn binary_kl(p: f64, q: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) || !(0.0..=1.0).contains(&q) {
        return Err(Error::domain(format!("probabilities out of range: p = {p}, q = {q}")));
    }
    let term = |a: f64, b: f64| -> Result<f64> {
        if a == 0.0 {
            Ok(0.0)
        } else if b == 0.0 {
            Err(Error::Divergence { p, q })
        } else {
            Ok(a * (a / b).ln())
        }
    };
    Ok((term(p, q)? + term(1.0 - p, 1.0 - q)?).max(0.0))
}

/// `g` at offset `u = r - x`, for `0 < u < c` with `c = 1 - x`.
///
/// Written as `S((u, 1-u) || (u+x, c-u))`; taking `c` as input keeps `c - u`
/// exact when `x` is close to 1.
fn objective(x: f64, c: f64, u: f64) -> f64 {
    let first = -u * (x / u).ln_1p();
    let second = (1.0 - u) * ((-u).ln_1p() - (c - u).ln());
    (first + second).max(0.0)
}

/// `s(x)` together with its minimizer and the analytic sandwich.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundEvaluation {
    pub x: f64,
    pub s: f64,
    /// Minimizing `r`, in `(x, 1)`.
    pub minimizer_r: f64,
    /// `r - x` at the minimum, kept separately since `r` rounds to 1 when
    /// `x` is close to 1.
    pub minimizer_offset: f64,
    /// `2 x^2`.
    pub lower: f64,
    /// `-ln(1 - x)`.
    pub upper: f64,
}

/// `s(x)` for `0 <= x < 1`.
pub fn s_of_x(x: f64) -> Result<BoundEvaluation> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::domain(format!("s(x) needs 0 <= x < 1, got {x}")));
    }
    evaluate(x, 1.0 - x)
}

/// `s(1 - c)` from the complement `c = 1 - x`, for `0 < c <= 1`.
///
/// Near `x = 1` the complement carries the information; `1 - c` alone would
/// round to 1.
pub fn s_of_complement(c: f64) -> Result<BoundEvaluation> {
    if !(c > 0.0 && c <= 1.0) {
        return Err(Error::domain(format!("complement must lie in (0, 1], got {c}")));
    }
    evaluate(1.0 - c, c)
}

fn evaluate(x: f64, c: f64) -> Result<BoundEvaluation> {
    let lower = 2.0 * x * x;
    let upper = -c.ln() + 0.0;
    if x == 0.0 {
        // both distributions coincide for every r
        return Ok(BoundEvaluation { x, s: 0.0, minimizer_r: 0.5, minimizer_offset: 0.5, lower, upper });
    }

    let g = |u: f64| objective(x, c, u);
    let lo = EDGE_MARGIN * c;
    let hi = c - EDGE_MARGIN * c;
    let step = (hi - lo) / (SCAN_POINTS - 1) as f64;
    let (best, _) = (0..SCAN_POINTS)
        .map(|k| (k, g(lo + k as f64 * step)))
        .fold((0, f64::INFINITY), |acc, (k, v)| if v < acc.1 { (k, v) } else { acc });
    let mut a = lo + best.saturating_sub(1) as f64 * step;
    let mut b = (lo + (best + 1) as f64 * step).min(hi);

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let tol = SEARCH_TOLERANCE * c;
    let mut u1 = b - inv_phi * (b - a);
    let mut u2 = a + inv_phi * (b - a);
    let (mut g1, mut g2) = (g(u1), g(u2));
    while b - a > tol {
        if g1 <= g2 {
            b = u2;
            u2 = u1;
            g2 = g1;
            u1 = b - inv_phi * (b - a);
            g1 = g(u1);
        } else {
            a = u1;
            u1 = u2;
            g1 = g2;
            u2 = a + inv_phi * (b - a);
            g2 = g(u2);
        }
    }
    let (u, s) = if g1 <= g2 { (u1, g1) } else { (u2, g2) };
    if !s.is_finite() {
        return Err(Error::NonFinite(format!("s({x}) evaluated to {s}")));
    }
    Ok(BoundEvaluation { x, s, minimizer_r: x + u, minimizer_offset: u, lower, upper })
}

/// `s(x)`, `2x^2` and `-ln(1-x)` on `points` evenly spaced values of `x`
/// in `[0, x_max]`.
pub fn s_curve(points: usize, x_max: f64) -> Result<Vec<BoundEvaluation>> {
    if points < 2 {
        return Err(Error::domain("s curve needs at least two points"));
    }
    (0..points)
        .into_par_iter()
        .map(|k| s_of_x(x_max * k as f64 / (points - 1) as f64))
        .collect()
}

/// Lower bound on the entropy production along a quench.
#[derive(Clone, Debug, PartialEq)]
pub struct EntropyProductionSeries {
    pub times: Vec<f64>,
    /// `s(2 L(t) / pi)`.
    pub sigma_lower: Vec<f64>,
    /// Trapezoidal mean of `sigma_lower` over `[0, horizon_t]`.
    pub time_average: f64,
    pub horizon_t: f64,
}

impl EntropyProductionSeries {
    /// First time after which the series stays within `rel` of `target`.
    pub fn settling_time(&self, target: f64, rel: f64) -> Option<f64> {
        let band = rel * target.abs();
        let last_out = self.sigma_lower.iter().rposition(|v| (v - target).abs() > band);
        match last_out {
            None => self.times.first().copied(),
            Some(k) => self.times.get(k + 1).copied(),
        }
    }

    /// Mean of the series over `t >= from`.
    pub fn tail_mean(&self, from: f64) -> f64 {
        let tail: Vec<f64> = self
            .times
            .iter()
            .zip(&self.sigma_lower)
            .filter(|(t, _)| **t >= from)
            .map(|(_, v)| *v)
            .collect();
        tail.iter().sum::<f64>() / tail.len() as f64
    }
}

/// Trapezoidal mean of samples taken on a uniform grid.
pub fn trapezoid_mean(values: &[f64]) -> f64 {
    match values {
        [] => 0.0,
        [v] => *v,
        [first, .., last] => {
            let interior: f64 = values.iter().sum::<f64>() - 0.5 * (first + last);
            interior / (values.len() - 1) as f64
        }
    }
}

/// Evaluates the bound at every point of a Bures series.
pub fn entropy_bound_series(bures: &BuresSeries) -> Result<EntropyProductionSeries> {
    let sigma_lower = (0..bures.times.len())
        .into_par_iter()
        .map(|k| {
            let angle = bures.angle[k];
            if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&angle) {
                return Err(Error::domain(format!("Bures angle {angle} outside [0, pi/2]")));
            }
            // an overlap of exactly zero would put x at 1, where s diverges
            let c = (FRAC_2_PI * bures.complement(k)).max(MIN_COMPLEMENT);
            s_of_complement(c).map(|e| e.s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyProductionSeries {
        horizon_t: bures.times.last().copied().unwrap_or(0.0),
        times: bures.times.clone(),
        time_average: trapezoid_mean(&sigma_lower),
        sigma_lower,
    })
}

/// Time-averaged bound for every field in `h_grid`, starting from the
/// initial state of `base` and averaging over `[0, horizon]` with the grid
/// spacing of `base`.
///
/// The spin operators and the pre-quench decomposition are built once and
/// shared; one task per field runs on the current rayon pool.
pub fn time_averaged_entropy_vs_h(h_grid: &[f64], base: &QuenchSpec, horizon: f64) -> Result<SweepResult> {
    if h_grid.is_empty() {
        return Err(Error::domain("field grid is empty"));
    }
    let grid = TimeGrid::new(base.grid().dt(), horizon)?;
    let base = base.clone().with_grid(grid);
    let ops = Arc::new(build_spin_ops(base.initial().j)?);
    let initial = Arc::new(diagonalize_lmg(base.initial(), &ops)?);
    let rows = h_grid
        .par_iter()
        .map(|&h| {
            let spec = QuenchSpec::new(*base.initial(), h, base.beta(), *base.grid())?
                .with_initial_state(base.initial_state());
            let quenched = if spec.quenched() == spec.initial() {
                Arc::clone(&initial)
            } else {
                Arc::new(diagonalize_lmg(spec.quenched(), &ops)?)
            };
            let prepared = PreparedQuench::from_parts(spec, Arc::clone(&ops), Arc::clone(&initial), quenched)?;
            let series = entropy_bound_series(&prepared.bures_series(Reference::Initial)?)?;
            Ok(SweepRow {
                h,
                j: base.initial().j.j(),
                beta: base.beta(),
                value: series.time_average,
                quantity: "entropy_bound_time_average".into(),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let inputs = serde_json::json!({
        "h_grid": h_grid,
        "h0": base.initial().h,
        "gamma": base.initial().gamma,
        "g": base.initial().g,
        "j": base.initial().j.j(),
        "beta": base.beta(),
        "dt": base.grid().dt(),
        "horizon": horizon,
        "initial_state": base.initial_state(),
    });
    SweepResult::new(rows, fingerprint(&inputs)?)
}
