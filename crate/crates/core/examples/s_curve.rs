//! The function s(x) next to its bounds 2x^2 and -ln(1-x).
//!
//!     cargo run --release --example s_curve

use dqpt::entropy::s_of_x;

fn main() -> dqpt::Result<()> {
    println!("    x        2x^2          s(x)     -ln(1-x)    argmin r");
    for k in 0..=20 {
        let x = 0.999 * k as f64 / 20.0;
        let e = s_of_x(x)?;
        println!("{x:6.4}  {:10.6}  {:12.8}  {:10.6}  {:10.6}", e.lower, e.s, e.upper, e.minimizer_r);
    }
    Ok(())
}
