//! Bures angle between a Gibbs state and its quenched evolution, for several
//! temperatures.
//!
//!     cargo run --release --example bures_angle -- 0.8

use std::f64::consts::FRAC_PI_2;

use dqpt::dynamics::{QuenchSpec, TimeGrid};
use dqpt::geometry::bures_series;
use dqpt::spectral::LmgParams;
use dqpt::spinops::SpinQuantumNumber;

fn main() -> dqpt::Result<()> {
    let h: f64 = std::env::args().nth(1).map_or(Ok(0.8), |s| s.parse()).expect("h must be a number");
    let initial = LmgParams::standard(0.0, SpinQuantumNumber::from_j(300.0)?);

    println!("quench 0 -> {h}, j = 300");
    println!(" beta  first t with L > 0.9 pi/2   late min   late max");
    for beta in [5.0, 2.0, 1.0, 0.5] {
        let series = bures_series(&QuenchSpec::new(initial, h, Some(beta), TimeGrid::new(0.05, 10.0)?)?)?;
        let late = &series.angle[series.angle.len() / 2..];
        let lo = late.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = late.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let first = series
            .first_crossing(0.9 * FRAC_PI_2)
            .map_or_else(|| "never".to_string(), |t| format!("{t:.2}"));
        println!("{beta:5}  {first:>26}   {lo:8.4}   {hi:8.4}");
    }
    Ok(())
}
