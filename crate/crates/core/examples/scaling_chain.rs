//! From the endpoint constant of the equilibrium density to the hard-edge
//! scale `c_V`, and its agreement with the derivative of the conformal map
//! at the origin.

use hardedge::equilibrium::{g_functions, scaling_constants, solution_vx_explicit, LinearField};
use hardedge::{Precision, Result};
use std::sync::Arc;

fn main() -> Result<()> {
    let prec = Precision::new(30)?;
    let sol = solution_vx_explicit(400, prec)?;
    let gf = g_functions(&sol, Arc::new(LinearField), prec)?;
    let sc = scaling_constants(&gf, &sol)?;
    let expected = 2f64.powf(-2.0 / 3.0);
    let cv = sc.c_v.to_f64();
    println!("c0 = {:.12}", sol.c0.to_f64());
    println!("c_V = {cv:.12} (2^(-2/3) = {expected:.12})");
    println!(
        "f'(0) = {:.12}, c_V^3 = {:.12}",
        sc.fprime_at_0.to_f64(),
        cv.powi(3)
    );
    Ok(())
}
