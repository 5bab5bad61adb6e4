//! Crate-wide error type.
//!
//! Errors split into two families that callers (in particular the CLI) treat
//! differently:
//!
//! * *structural* errors — the input data violates an invariant (not
//!   symmetric, not unitary, bad frame, mismatched endpoints, corrupted lift
//!   data, too-coarse non-refinable samples, malformed documents);
//! * *numerical* errors — the input is well-formed but the computation cannot
//!   be carried out reliably (a cluster sits on an arc endpoint, no admissible
//!   arc width exists, an internal consistency check failed).
//!
//! [`Error::is_structural`] encodes the split.

use thiserror::Error;

/// Everything this crate can fail with.
#[derive(Debug, Error)]
pub enum Error {
    /// Operands have incompatible dimensions.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },

    /// A matrix which must be (complex) symmetric is not.
    #[error("matrix is not symmetric: asymmetry {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotSymmetric { residual: f64, tol: f64 },

    /// A matrix which must satisfy conj(x)·x = I is too far from that.
    #[error("matrix is not unitary: defect {residual:.3e} exceeds tolerance {tol:.3e}")]
    NotUnitary { residual: f64, tol: f64 },

    /// Frame columns are not orthonormal.
    #[error("frame columns are not orthonormal: defect {0:.3e}")]
    NotOrthonormal(f64),

    /// A 2n×n frame does not span an isotropic (Lagrangian) subspace.
    #[error("frame does not span a Lagrangian subspace: symplectic-form residual {0:.3e}")]
    NotLagrangian(f64),

    /// A subspace came out with the wrong rank (degenerate frame extraction).
    #[error("rank defect: expected rank {expected}, found {found}")]
    RankDefect { expected: usize, found: usize },

    /// A spectral cluster sits within tolerance of the requested arc endpoint,
    /// so the count at that endpoint is ambiguous.
    #[error(
        "spectral cluster at angle {angle:.9} lies within {tol:.1e} of the arc endpoint {eps:.9}"
    )]
    AmbiguousEndpoint { angle: f64, eps: f64, tol: f64 },

    /// A requested arc angle does not match any spectral cluster.
    #[error("arc angle {0:.9} does not match any spectral cluster")]
    NonSpectralArc(f64),

    /// The punctured arc 0 < |θ| ≤ ε contains spectrum, violating the
    /// perturbation-budget precondition.
    #[error("spectrum at angle {angle:.9} lies inside the punctured arc 0 < |θ| ≤ {eps:.9}")]
    ArcNotClear { angle: f64, eps: f64 },

    /// The joint spectra of a segment leave no gap wide enough to place an
    /// admissible arc endpoint.
    #[error("no admissible arc width: largest spectral gap {0:.3e} is too narrow")]
    NoAdmissibleEps(f64),

    /// Polyline breakpoints must increase strictly from 0 to 1.
    #[error("polyline parameters must increase strictly from 0 to 1")]
    BadPolyline,

    /// A sampled path needs ≥ 2 samples, parameters 0 = t₀ < … < t_M = 1.
    #[error("sampled path needs parameters 0 = t_0 < ... < t_M = 1 with one sample per parameter")]
    BadSamples,

    /// A path was evaluated outside [0, 1].
    #[error("path parameter {0} is outside [0, 1]")]
    ParamRange(f64),

    /// A sampled path cannot be evaluated between its samples.
    #[error("sampled path has no sample at t = {0} and cannot be refined")]
    NotRefinable(f64),

    /// Concatenation endpoints disagree.
    #[error("paths do not share an endpoint: gap {0:.3e}")]
    EndpointMismatch(f64),

    /// A loop-only operation was applied to an open path.
    #[error("path is not closed: endpoint gap {0:.3e}")]
    NotClosed(f64),

    /// Sample steps stay too large after the refinement budget is spent.
    #[error("samples too coarse: step change still exceeds the tracking guard after {0} refinements")]
    TooCoarse(usize),

    /// A rotation generator must be skew-symmetric.
    #[error("generator is not skew-symmetric: defect {0:.3e}")]
    NotSkew(f64),

    /// A stored lift disagrees with the determinant it must track.
    #[error("lift {lift:.9} disagrees with det(x·conj(e_ref)): defect {defect:.3e}")]
    LiftMismatch { lift: f64, defect: f64 },

    /// Two lifted points live over different cover bases.
    #[error("lifted points use different cover bases: gap {0:.3e}")]
    CoverMismatch(f64),

    /// Matching prescribed lifts would require a non-integer number of deck
    /// twists; the lift data is corrupted.
    #[error("required deck twist {0:.9} is not an integer")]
    NonIntegerTwist(f64),

    /// Unsupported document schema version.
    #[error("schema_version {0} is not supported (expected 1)")]
    BadSchema(u32),

    /// Malformed document (missing/unknown fields, wrong shapes).
    #[error("document error: {0}")]
    Document(String),

    /// Unknown verification suite.
    #[error("unknown verification suite '{0}'")]
    UnknownSuite(String),

    /// Internal numerical failure (a residual check that must hold for valid
    /// inputs did not).
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl Error {
    /// True when the error indicates bad *input* rather than a numerical
    /// breakdown. The CLI maps structural errors to exit code 1 and the rest
    /// to exit code 3.
    pub fn is_structural(&self) -> bool {
        !matches!(
            self,
            Error::AmbiguousEndpoint { .. }
                | Error::NonSpectralArc(_)
                | Error::ArcNotClear { .. }
                | Error::NoAdmissibleEps(_)
                | Error::Numerical(_)
        )
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
