//! Biorthogonal polynomials of the Laguerre-type ensemble from half-integer
//! moments, with their consistency checks.

use hardedge::finiten::{
    biortho_build, cd_formula_check, condition_equivalence, kernel_trace, moments,
    multiple_orthogonality_check, WeightField,
};
use hardedge::{Precision, Result};

fn main() -> Result<()> {
    let prec = Precision::new(160)?;
    let mt = moments(&prec.real(0), 16, WeightField::Laguerre, 48, prec)?;
    let bs = biortho_build(&mt, 16)?;
    println!("nmax = 16 at 160 digits");
    println!(
        "  biorthogonality residual  {:.2e}",
        bs.biortho_residual().to_f64()
    );
    println!(
        "  multiple orthogonality    {:.2e}",
        multiple_orthogonality_check(&bs).to_f64()
    );
    println!(
        "  condition-set agreement   {:.2e}",
        condition_equivalence(&bs)?.to_f64()
    );

    let prec = Precision::new(64)?;
    let mt = moments(&prec.real(0), 6, WeightField::Laguerre, 18, prec)?;
    let bs = biortho_build(&mt, 6)?;
    let trace = kernel_trace(&bs, 1e-12)?;
    println!("n = 6: trace of the kernel {:.12}", trace.to_f64());
    let (x, y) = (prec.real(0.8), prec.real(1.7));
    for delta in [None, Some(1e-6), Some(1e-2)] {
        let r = cd_formula_check(&bs, &x, &y, delta)?;
        println!(
            "  Christoffel-Darboux residual, offset {delta:?}: {:.2e}",
            r.to_f64()
        );
    }
    Ok(())
}
