//! Equilibrium measure for `V(x) = x`: closed-form density against the
//! spectral-curve root, endpoint constants, and the discretized minimizer.

use hardedge::equilibrium::{
    density_vx_cardano, density_vx_explicit, equilibrium_minimize, fit_edge_constant,
    fit_origin_constant, variational_residual, LinearField, MinimizeOptions, VX_Q,
};
use hardedge::{Precision, Result};

fn main() -> Result<()> {
    let prec = Precision::new(40)?;
    let mut worst = 0.0f64;
    for k in 1..100 {
        let s = prec.real(VX_Q) * k / 100u32;
        let e = density_vx_explicit(&s, prec)?;
        let c = density_vx_cardano(&s, prec)?;
        worst = worst.max((e - c).abs().to_f64());
    }
    println!("max |closed form - cubic root| on 99 points: {worst:.2e}");
    let c0 = fit_origin_constant(density_vx_explicit, 1e-2, prec)?;
    let c1 = fit_edge_constant(density_vx_explicit, &prec.real(VX_Q), 1e-2, prec)?;
    println!("s^(2/3) rho(s) -> {c0:.12}, rho(s)/sqrt(q - s) -> {c1:.12}");

    let opts = MinimizeOptions::default();
    let sol = equilibrium_minimize(&LinearField, &opts, prec)?;
    let resid = variational_residual(&sol, &LinearField);
    println!(
        "minimizer with {} cells: q = {:.5}, c0 = {:.5}, {} iterations",
        opts.cells,
        sol.q.to_f64(),
        sol.c0.to_f64(),
        sol.iterations
    );
    println!(
        "equality defect {:.2e}, inequality max {:.3}",
        resid.equality_dev, resid.inequality_max
    );
    Ok(())
}
