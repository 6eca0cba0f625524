//! Runs the identity suite of the model Riemann-Hilbert matrices `Φ_α`,
//! `Ψ_α`: determinant, jumps on the four rays, inverse and frame relations.

use hardedge::rhframe::invariant_suite;
use hardedge::{Precision, Result};

fn main() -> Result<()> {
    let prec = Precision::new(40)?;
    for alpha in ["-0.4", "0", "0.3", "1.2"] {
        let checks = invariant_suite(&prec.parse(alpha)?, prec)?;
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed()).collect();
        let worst = checks
            .iter()
            .map(|c| c.residual / c.tolerance)
            .fold(0.0, f64::max);
        println!(
            "alpha = {alpha:>4}: {} checks, {} failed, worst residual/tolerance {worst:.1e}",
            checks.len(),
            failed.len()
        );
        for c in failed {
            println!(
                "  {} residual {:.2e} > {:.0e}",
                c.name, c.residual, c.tolerance
            );
        }
    }
    Ok(())
}
