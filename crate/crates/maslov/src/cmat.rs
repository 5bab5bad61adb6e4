//! Dense complex matrices and the symmetric-unitary model.
//!
//! The ambient triple system is Sym(ℂⁿ), the complex *symmetric* (not
//! Hermitian) n×n matrices, with conjugation x ↦ conj(x) acting entrywise.
//! Its invertible tripotents form
//!
//! ```text
//! Σ = { x ∈ Sym(ℂⁿ) : conj(x)·x = I },
//! ```
//!
//! the symmetric unitary matrices — the matrix model of the Lagrangian
//! Grassmannian of ℝ²ⁿ (see [`crate::bridge`]). [`SymUnitary`] enforces
//! membership in Σ at construction: inputs are re-symmetrized and then both
//! invariants are validated against [`crate::TOL_STRUCT`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::TOL_STRUCT;

/// Complex scalar used everywhere.
pub type C64 = Complex64;
/// Dense complex matrix.
pub type CMat = DMatrix<C64>;
/// Dense complex vector.
pub type CVec = DVector<C64>;
/// Dense real matrix.
pub type RMat = DMatrix<f64>;

/// The complex identity matrix of size n.
pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

/// Entrywise complex conjugate (the triple-system conjugation τ x τ).
pub fn conj(m: &CMat) -> CMat {
    m.map(|z| z.conj())
}

/// Embed a real matrix into the complex matrices.
pub fn complexify(r: &RMat) -> CMat {
    r.map(|v| C64::new(v, 0.0))
}

/// Entrywise real part.
pub fn real_part(m: &CMat) -> RMat {
    m.map(|z| z.re)
}

/// Entrywise imaginary part.
pub fn imag_part(m: &CMat) -> RMat {
    m.map(|z| z.im)
}

/// Frobenius norm.
pub fn frobenius(m: &CMat) -> f64 {
    m.norm()
}

/// Operator (spectral) norm: largest singular value, computed as the square
/// root of the top eigenvalue of the Gram matrix m†·m.
pub fn operator_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let gram = m.adjoint() * m;
    let eigs = gram.symmetric_eigen().eigenvalues;
    eigs.iter().fold(0.0f64, |acc, &v| acc.max(v)).max(0.0).sqrt()
}

/// ‖m − mᵀ‖_F, the deviation from complex symmetry.
pub fn symmetry_defect(m: &CMat) -> f64 {
    (m - m.transpose()).norm()
}

/// ‖conj(m)·m − I‖_F, the deviation from Σ-membership for symmetric m.
pub fn unitarity_defect(m: &CMat) -> f64 {
    (conj(m) * m - identity(m.nrows())).norm()
}

/// (m + mᵀ)/2.
pub fn symmetrize(m: &CMat) -> CMat {
    (m + m.transpose()) * C64::new(0.5, 0.0)
}

/// Check two matrices share the square dimension `n`; return it.
pub fn same_n(a: &CMat, b: &CMat) -> Result<usize> {
    let n = square_n(a)?;
    let m = square_n(b)?;
    if n != m {
        return Err(Error::DimMismatch { expected: n, got: m });
    }
    Ok(n)
}

/// Dimension of a square matrix, or a dimension-mismatch error.
pub fn square_n(a: &CMat) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::DimMismatch {
            expected: a.nrows(),
            got: a.ncols(),
        });
    }
    Ok(a.nrows())
}

/// An element of Σ: a complex symmetric unitary matrix.
///
/// The stored matrix is exactly symmetric (it is re-symmetrized on ingestion)
/// and satisfies ‖conj(x)·x − I‖_F ≤ tol.
#[derive(Clone, Debug, PartialEq)]
pub struct SymUnitary {
    m: CMat,
}

impl SymUnitary {
    /// Validate membership in Σ at the default structural tolerance.
    pub fn new(m: CMat) -> Result<Self> {
        Self::with_tol(m, TOL_STRUCT)
    }

    /// Validate membership in Σ at a caller-chosen tolerance.
    ///
    /// The input is re-symmetrized ((m + mᵀ)/2) after the symmetry check, so
    /// the stored matrix is exactly symmetric; the unitarity check runs on
    /// the symmetrized matrix.
    pub fn with_tol(m: CMat, tol: f64) -> Result<Self> {
        square_n(&m)?;
        let sym_res = symmetry_defect(&m);
        if !sym_res.is_finite() || sym_res > tol {
            return Err(Error::NotSymmetric {
                residual: sym_res,
                tol,
            });
        }
        let m = symmetrize(&m);
        let uni_res = unitarity_defect(&m);
        if !uni_res.is_finite() || uni_res > tol {
            return Err(Error::NotUnitary {
                residual: uni_res,
                tol,
            });
        }
        Ok(SymUnitary { m })
    }

    /// The unit e = I_n.
    pub fn identity(n: usize) -> Self {
        SymUnitary {
            m: identity(n),
        }
    }

    /// The scalar unitary e^{iθ}·I_n.
    pub fn scalar(n: usize, theta: f64) -> Self {
        let z = C64::new(0.0, theta).exp();
        SymUnitary {
            m: identity(n) * z,
        }
    }

    /// Build O·diag(e^{iφ_j})·Oᵀ from a real orthogonal frame and angles.
    ///
    /// Every element of Σ arises this way (Takagi/Autonne factorization);
    /// this is the workhorse constructor for tests and samplers.
    pub fn from_frame_angles(frame: &RMat, angles: &[f64]) -> Result<Self> {
        let n = frame.nrows();
        if frame.ncols() != n || angles.len() != n {
            return Err(Error::DimMismatch {
                expected: n,
                got: if frame.ncols() != n { frame.ncols() } else { angles.len() },
            });
        }
        let ortho_defect = (frame.transpose() * frame - RMat::identity(n, n)).norm();
        if !(ortho_defect <= TOL_STRUCT) {
            return Err(Error::NotOrthonormal(ortho_defect));
        }
        let o = complexify(frame);
        let d = CMat::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(0.0, angles[i]).exp()
            } else {
                C64::new(0.0, 0.0)
            }
        });
        SymUnitary::with_tol(&o * d * o.transpose(), TOL_STRUCT)
    }

    /// Matrix dimension n.
    pub fn n(&self) -> usize {
        self.m.nrows()
    }

    /// Borrow the underlying matrix.
    pub fn matrix(&self) -> &CMat {
        &self.m
    }

    /// Consume into the underlying matrix.
    pub fn into_matrix(self) -> CMat {
        self.m
    }

    /// Entrywise conjugate conj(x) (which equals both x̄ and x⁻¹ = x† here).
    pub fn conj(&self) -> CMat {
        conj(&self.m)
    }

    /// Frobenius distance to another element.
    pub fn dist(&self, other: &SymUnitary) -> f64 {
        (&self.m - &other.m).norm()
    }
}
