//! The limiting hard-edge kernel by the Meijer-G matrix formula and by the
//! Wright-function integral, on a small grid.

use hardedge::kernel::{kernel_diag_limit, kernel_integral_matched, kernel_meijer};
use hardedge::{Precision, Result};

fn main() -> Result<()> {
    let prec = Precision::new(30)?;
    let alpha = prec.real(0);
    let points = [0.2, 1.0, 3.0];
    println!("{:>5} {:>5} {:>24} {:>10}", "x", "y", "kernel", "rel diff");
    for x in points {
        for y in points {
            let (xf, yf) = (prec.real(x), prec.real(y));
            let integral = kernel_integral_matched(&alpha, &xf, &yf, prec)?;
            if x == y {
                let diag = kernel_diag_limit(&alpha, &xf, prec)?;
                println!("{x:>5} {y:>5} {:>24.16e} {:>10}", diag.to_f64(), "diagonal");
                continue;
            }
            let meijer = kernel_meijer(&alpha, &xf, &yf, prec)?;
            let rel = ((meijer.clone() - &integral) / &integral).abs().to_f64();
            println!("{x:>5} {y:>5} {:>24.16e} {rel:>10.2e}", meijer.to_f64());
        }
    }
    Ok(())
}
