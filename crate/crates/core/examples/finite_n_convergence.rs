//! Scaled finite-n kernels of the Laguerre ensemble approaching the
//! hard-edge limit; prints the convergence table as CSV.

use hardedge::finiten::{convergence_csv, hard_edge_convergence};
use hardedge::{Precision, Result};

fn main() -> Result<()> {
    let prec = Precision::new(320)?;
    for alpha in ["0", "0.5"] {
        let rows = hard_edge_convergence(
            &prec.parse(alpha)?,
            &prec.real(1),
            &prec.real(2),
            &[4, 8, 16, 32],
            prec,
        )?;
        println!("alpha = {alpha}");
        print!("{}", convergence_csv(&rows));
    }
    Ok(())
}
