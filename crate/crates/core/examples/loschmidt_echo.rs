//! Loschmidt echo and rate function after quenches from the broken phase,
//! one crossing the dynamical critical field and one staying below it.
//!
//!     cargo run --release --example loschmidt_echo

use dqpt::dynamics::{detect_critical_times, loschmidt_series, QuenchSpec, TimeGrid};
use dqpt::spectral::{dynamical_critical_field, LmgParams};
use dqpt::spinops::SpinQuantumNumber;

fn main() -> dqpt::Result<()> {
    let j = SpinQuantumNumber::from_j(300.0)?;
    let initial = LmgParams::standard(0.0, j);
    println!("h_c = {}", dynamical_critical_field(initial.h, initial.g));

    for h in [0.8, 0.2] {
        let quench = QuenchSpec::new(initial, h, None, TimeGrid::new(0.01, 10.0)?)?;
        let res = loschmidt_series(&quench)?;
        let cusps = detect_critical_times(&res);
        println!("\nh = {h}: min echo {:.3e}, {} critical times", res.min_echo(), cusps.len());
        for t in &cusps {
            println!("  t* = {t:.4}");
        }
        println!("      t        echo        rate  sector");
        for k in (0..res.times.len()).step_by(100) {
            println!(
                "{:7.2}  {:10.3e}  {:10.6}  {:>6}",
                res.times[k], res.echo[k], res.rate[k], res.active_sector[k]
            );
        }
    }
    Ok(())
}
