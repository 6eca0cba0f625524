use thiserror::Error;

/// Failures raised by the numerical routines in this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("precision of {0} digits is below the supported minimum of 30")]
    Precision(u32),

    #[error("gamma function pole at z = {0}")]
    GammaPole(String),

    #[error("Gauss-Legendre node search did not converge for order {0}")]
    NodeSearch(usize),

    #[error(
        "quadrature did not reach tolerance: last estimate {last}, previous estimate {previous}"
    )]
    QuadratureConvergence { last: String, previous: String },

    #[error("vanishing pivot in leading principal minor of order {minor}")]
    SingularMinor { minor: usize },

    #[error("resonant parameters: {0}")]
    Resonance(String),

    #[error("series did not converge within {0} terms")]
    SeriesConvergence(usize),

    #[error("Mellin-Barnes tail did not converge, last tail estimate {0}")]
    TailConvergence(String),

    #[error("point lies on the ray {0}; an explicit boundary side is required")]
    BoundarySideRequired(&'static str),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no cubic root with positive imaginary part at s = {0}")]
    BranchSelection(String),

    #[error("energy minimizer stagnated after {iterations} iterations at objective {objective}")]
    Stagnation { objective: f64, iterations: usize },

    #[error("|x - y| is below 1e-6 max(x, y); use kernel_diag_limit for diagonal values")]
    DiagonalPoint,

    #[error("moment integral tail exceeds tolerance at the domain end {0}")]
    MomentTail(String),
}

pub type Result<T> = std::result::Result<T, Error>;
