//! The finite-n kernel of the Laguerre ensemble under the hard-edge scaling,
//! compared with the limiting kernel.

use super::{biortho_build, finite_kernel, moments, required_digits, WeightField};
use crate::error::{Error, Result};
use crate::kernel::kernel_meijer;
use crate::mp::Precision;
use rayon::prelude::*;
use rug::Float;

/// Digits used for the limiting kernel; only a few are needed for the
/// relative error.
const LIMIT_DIGITS: u32 = 40;

/// One line of a convergence table.
#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub n: usize,
    pub scaled_kernel: Float,
    pub limit_kernel: Float,
    pub rel_err: f64,
}

/// For each `n`, `(1/(c n)³) K_n(x/(c n)³, y/(c n)³)` against the limiting
/// kernel, with weight `x^α e^{-nx}` and `c³ = 1/4`.
///
/// Each `n` is built at `max(prec, required_digits(n))`; rows are computed
/// in parallel and returned in the order of `ns`.
pub fn hard_edge_convergence(
    alpha: &Float,
    x: &Float,
    y: &Float,
    ns: &[usize],
    prec: Precision,
) -> Result<Vec<ConvergenceRow>> {
    if ns.is_empty() || ns.windows(2).any(|w| w[1] <= w[0]) || ns[0] == 0 {
        return Err(Error::Domain(
            "ns must be positive and strictly ascending".into(),
        ));
    }
    let limit_prec = Precision::new(LIMIT_DIGITS)?;
    let limit = kernel_meijer(alpha, x, y, limit_prec)?;
    ns.par_iter()
        .map(|&n| {
            let nmax = n - 1;
            let work = Precision::new(prec.digits().max(required_digits(nmax)))?;
            let bits = work.bits();
            let mt = moments(alpha, n, WeightField::Laguerre, 3 * nmax, work)?;
            let bs = biortho_build(&mt, nmax)?;
            // (c n)³ = n³ / 4
            let scale = Float::with_val(bits, (n * n * n) as u64) / 4u32;
            let xs = Float::with_val(bits, x) / &scale;
            let ys = Float::with_val(bits, y) / &scale;
            let scaled = finite_kernel(&bs, &xs, &ys)? / &scale;
            let lim = Float::with_val(bits, &limit);
            let rel_err = (Float::with_val(bits, &scaled - &lim) / &lim)
                .abs()
                .to_f64();
            Ok(ConvergenceRow {
                n,
                scaled_kernel: scaled,
                limit_kernel: lim,
                rel_err,
            })
        })
        .collect()
}

/// CSV with columns `n,scaled_kernel,limit_kernel,rel_err`.
pub fn convergence_csv(rows: &[ConvergenceRow]) -> String {
    let mut out = String::from("n,scaled_kernel,limit_kernel,rel_err\n");
    for r in rows {
        out.push_str(&format!(
            "{},{:.20e},{:.20e},{:e}\n",
            r.n, r.scaled_kernel, r.limit_kernel, r.rel_err
        ));
    }
    out
}
