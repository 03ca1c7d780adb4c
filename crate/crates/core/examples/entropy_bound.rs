//! Lower bound on entropy production along two thermal quenches.
//!
//!     cargo run --release --example entropy_bound

use dqpt::dynamics::{QuenchSpec, TimeGrid};
use dqpt::entropy::entropy_bound_series;
use dqpt::geometry::bures_series;
use dqpt::spectral::LmgParams;
use dqpt::spinops::SpinQuantumNumber;

fn main() -> dqpt::Result<()> {
    let initial = LmgParams::standard(0.0, SpinQuantumNumber::from_j(300.0)?);
    let grid = TimeGrid::new(0.05, 10.0)?;

    let mut columns = Vec::new();
    for h in [0.8, 0.2] {
        let bound = entropy_bound_series(&bures_series(&QuenchSpec::new(initial, h, Some(1.0), grid)?)?)?;
        println!("h = {h}: time average {:.4}, mean over [5, 10] {:.4}", bound.time_average, bound.tail_mean(5.0));
        columns.push(bound);
    }
    println!("\n     t   h=0.8    h=0.2");
    for k in (0..grid.len()).step_by(10) {
        println!("{:6.2} {:7.3} {:8.3}", grid.time(k), columns[0].sigma_lower[k], columns[1].sigma_lower[k]);
    }
    Ok(())
}
