//! Builds collective spin operators and checks the angular-momentum algebra.
//!
//!     cargo run --release --example spin_algebra -- 50

use dqpt::linalg::{cmul, commutator, max_abs, CMatrix};
use dqpt::spectral::{build_lmg_hamiltonian, parity_operator, LmgParams};
use dqpt::spinops::{build_spin_ops, SpinQuantumNumber};
use num_complex::Complex64;

fn main() -> dqpt::Result<()> {
    let j: f64 = std::env::args().nth(1).map_or(Ok(50.0), |s| s.parse()).expect("j must be a number");
    let ops = build_spin_ops(SpinQuantumNumber::from_j(j)?)?;
    let i = Complex64::new(0.0, 1.0);

    let xy = max_abs(&(commutator(&ops.jx, &ops.jy) - ops.jz.map(|z| z * i)));
    let yz = max_abs(&(commutator(&ops.jy, &ops.jz) - ops.jx.map(|z| z * i)));
    let zx = max_abs(&(commutator(&ops.jz, &ops.jx) - ops.jy.map(|z| z * i)));
    let casimir = cmul(&ops.jx, &ops.jx) + cmul(&ops.jy, &ops.jy) + cmul(&ops.jz, &ops.jz);
    let d = ops.dim();
    let casimir_err = max_abs(&(casimir - CMatrix::identity(d, d).scale(j * (j + 1.0))));

    let h = build_lmg_hamiltonian(&LmgParams::standard(0.8, ops.j), &ops)?;
    let parity = max_abs(&commutator(&parity_operator(ops.j), &h)) / max_abs(&h);

    println!("j = {} (dimension {d})", ops.j);
    println!("[Jx,Jy] - iJz  {xy:.3e}");
    println!("[Jy,Jz] - iJx  {yz:.3e}");
    println!("[Jz,Jx] - iJy  {zx:.3e}");
    println!("J^2 - j(j+1)   {casimir_err:.3e}");
    println!("[P,H]/|H|      {parity:.3e}");
    Ok(())
}
