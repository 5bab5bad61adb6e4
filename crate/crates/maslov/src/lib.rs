//! Maslov index of paths of symmetric unitary matrices.
//!
//! The complex symmetric unitary matrices
//!
//! ```text
//! Σ = { x ∈ Sym(ℂⁿ) : conj(x)·x = I }
//! ```
//!
//! are the invertible tripotents of the JB*-triple Sym(ℂⁿ) and, through the
//! graph map and Cayley transform, a faithful model of the Lagrangian
//! Grassmannian of ℝ²ⁿ. A continuous path t ↦ x(t) in Σ, watched relative to
//! a base unit e ∈ Σ, drives the eigenvalues of the unitary x(t)·conj(e)
//! around the circle; the Maslov index counts their net flow through 1.
//!
//! The crate computes that index and the finite-dimensional index calculus
//! around it:
//!
//! * [`jordan`] — the triple product {x,y,z} = ½(x·conj(y)·z + z·conj(y)·x),
//!   Bergman operators, quadratic representation, and axiom residual checks;
//! * [`bridge`] — the dictionary between Σ and Lagrangian subspaces of ℝ²ⁿ,
//!   with frames, intersection dimensions, and the unitary action;
//! * [`spectral`] — relative spectra U_{x,e}, transversality indices
//!   μ(x, e, θ), spectral idempotents, and perturbation budgets;
//! * [`path`] — paths in Σ, admissible subdivisions with certification, the
//!   Maslov index itself, and the determinant winding oracle for loops;
//! * [`calculus`] — universal-cover lifts, the two-point index, the Kashiwara
//!   triple index, the Souriau-type two-point index m, and checkers for the
//!   half-integer identity relating all of them ("formula (E)") and its
//!   Leray-type cocycle consequence;
//! * [`io`] / the `maslov` binary — JSON documents, CSV eigenvalue flows, and
//!   the `verify` property suites.
//!
//! Start with the runnable examples: `circle_index` (one eigenvalue walking
//! the circle), `loop_winding` (index = winding for loops), `spectral_toolkit`
//! (clusters, idempotents, budgets), `bridge_dictionary` (Lagrangian planes),
//! `formula_e` (the index identity), `eigenvalue_flow` (CSV flows), and
//! `axiom_residuals` (the triple axioms at machine precision).
//!
//! Numerical contract: matrices are validated on ingestion ([`SymUnitary`]),
//! spectra are clustered at [`Params::tol_cluster`], and every index either
//! comes back `certified` (no eigenvalue can have crossed an arc endpoint
//! between samples, by a Hoffman–Wielandt bound) or is flagged otherwise.

pub mod angle;
pub mod bridge;
pub mod cmat;
pub mod eigen;
pub mod error;
pub mod calculus;
pub mod io;
pub mod jordan;
pub mod path;
pub mod sample;
pub mod spectral;
pub mod verify;

pub use cmat::{CMat, RMat, SymUnitary, C64};
pub use error::{Error, Result};

/// Structural tolerance (Frobenius) for membership of matrices in Σ and of
/// frames in the Lagrangian Grassmannian; absorbs file-format rounding
/// without masking genuine violations.
pub const TOL_STRUCT: f64 = 1e-9;

/// Relative rank tolerance: singular values below `TOL_RANK · σ_max` count
/// as zero.
pub const TOL_RANK: f64 = 1e-8;

/// Arc-distance tolerance for merging eigenvalue clusters on the circle.
pub const TOL_CLUSTER: f64 = 1e-8;

/// Default cap on bisection refinement rounds per step for analytic paths.
pub const MAX_REFINE: usize = 20;

/// Default minimum number of grid points used to realize an analytic path.
pub const MIN_GRID: usize = 33;

/// Numerical policy shared by the spectral and path machinery.
#[derive(Clone, Debug)]
pub struct Params {
    /// Structural (Frobenius) tolerance for Σ membership and frames.
    pub tol_struct: f64,
    /// Relative rank threshold for singular-value decisions.
    pub tol_rank: f64,
    /// Arc distance below which circle eigenvalues merge into one cluster.
    pub tol_cluster: f64,
    /// Maximum bisection rounds per step when refining analytic paths.
    pub max_refine: usize,
    /// When true, an uncertifiable subdivision is reported as a failure by
    /// the CLI (exit code 2); the library always computes the index and sets
    /// the `certified` flag either way.
    pub certified: bool,
    /// Minimum number of realization points for analytic paths.
    pub min_grid: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            tol_struct: TOL_STRUCT,
            tol_rank: TOL_RANK,
            tol_cluster: TOL_CLUSTER,
            max_refine: MAX_REFINE,
            certified: false,
            min_grid: MIN_GRID,
        }
    }
}
