//! Evaluates `G^{3,0}_{0,3}(z | 0, -α, -α-1/2)` on three sheets of the
//! logarithm, once by the residue series and once by the loop integral.

use hardedge::meijer::{g303_series, mb_loop, GParams303, SectorPoint};
use hardedge::mp::rel_diff;
use hardedge::{Precision, Result};

fn main() -> Result<()> {
    let prec = Precision::new(40)?;
    let alpha = prec.parse("0.3")?;
    let params = GParams303::phi_family(&alpha, prec);
    println!(
        "{:>8} {:>6} {:>44} {:>10}",
        "|z|", "sheet", "series value", "rel diff"
    );
    for modulus in [0.5, 1.5, 5.0] {
        for sheet in [-1, 0, 1] {
            let arg = prec.real(0.4) + prec.pi() * 2i32 * sheet;
            let z = SectorPoint::new(prec.real(modulus), arg)?;
            let series = g303_series(&params, &z, prec)?;
            let looped = mb_loop(&params, &z, prec)?;
            println!(
                "{modulus:>8} {sheet:>6} {:>21.12e} {:>21.12e}i {:>10.2e}",
                series.real().to_f64(),
                series.imag().to_f64(),
                rel_diff(&series, &looped)
            );
        }
    }
    Ok(())
}
