//! The JB*-triple structure of Sym(ℂⁿ).
//!
//! Sym(ℂⁿ) carries the triple product
//!
//! ```text
//! {x, y, z} = ½ (x·conj(y)·z + z·conj(y)·x),
//! ```
//!
//! whose invertible tripotents are exactly the symmetric unitaries Σ. For a
//! unit e ∈ Σ the binary product x∘y = {x, e, y} makes Sym(ℂⁿ) a Jordan
//! algebra with unit e, and the Jordan inverse of x ∈ Σ is e·conj(x)·e.
//!
//! The Bergman operator
//!
//! ```text
//! B(x, y)·z = (I − x·conj(y))·z·(I − conj(y)·x)
//! ```
//!
//! measures transversality: for x, e ∈ Σ it is invertible iff 1 is not an
//! eigenvalue of x·conj(e). [`Bergman::dense`] materializes it on the
//! orthonormal basis {E_jj} ∪ {(E_jk + E_kj)/√2 : j < k} of Sym(ℂⁿ); on that
//! basis B(x, e) is a *normal* matrix whose spectrum is contained in the
//! product set {(1−λ)(1−μ) : λ, μ ∈ U_{x,e}} of relative eigenvalues.

use crate::cmat::{conj, frobenius, identity, operator_norm, same_n, square_n, CMat, SymUnitary, C64};
use crate::error::{Error, Result};

/// Dimension of Sym(ℂⁿ) as a complex vector space: n(n+1)/2.
pub fn sym_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

/// The orthonormal basis {E_jj} ∪ {(E_jk + E_kj)/√2, j < k} of Sym(ℂⁿ),
/// diagonal elements first, then off-diagonal pairs in lexicographic order.
pub fn sym_basis(n: usize) -> Vec<CMat> {
    let mut basis = Vec::with_capacity(sym_dim(n));
    for j in 0..n {
        let mut m = CMat::zeros(n, n);
        m[(j, j)] = C64::new(1.0, 0.0);
        basis.push(m);
    }
    let w = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    for j in 0..n {
        for k in (j + 1)..n {
            let mut m = CMat::zeros(n, n);
            m[(j, k)] = w;
            m[(k, j)] = w;
            basis.push(m);
        }
    }
    basis
}

/// The triple product {x, y, z} = ½(x·conj(y)·z + z·conj(y)·x).
pub fn triple_product(x: &CMat, y: &CMat, z: &CMat) -> Result<CMat> {
    let n = same_n(x, y)?;
    let m = square_n(z)?;
    if n != m {
        return Err(Error::DimMismatch { expected: n, got: m });
    }
    let yc = conj(y);
    Ok((x * &yc * z + z * &yc * x) * C64::new(0.5, 0.0))
}

/// The quadratic representation Q(x)·y = x·conj(y)·x = {x, y, x}.
pub fn quadratic_rep(x: &CMat, y: &CMat) -> Result<CMat> {
    same_n(x, y)?;
    Ok(x * conj(y) * x)
}

/// The Bergman operator B(x, y) in factored form, usable as an evaluator on
/// Sym(ℂⁿ) or materialized as a dense sym_dim × sym_dim matrix.
#[derive(Clone, Debug)]
pub struct Bergman {
    /// I − x·conj(y); the operator is z ↦ a·z·aᵀ... not quite: the right
    /// factor is I − conj(y)·x = aᵀ exactly when x and y are symmetric.
    a: CMat,
    right: CMat,
    n: usize,
}

/// Construct B(x, y): z ↦ (I − x·conj(y))·z·(I − conj(y)·x).
pub fn bergman(x: &CMat, y: &CMat) -> Result<Bergman> {
    let n = same_n(x, y)?;
    let yc = conj(y);
    Ok(Bergman {
        a: identity(n) - x * &yc,
        right: identity(n) - yc * x,
        n,
    })
}

impl Bergman {
    /// Apply the operator to z.
    pub fn apply(&self, z: &CMat) -> Result<CMat> {
        let m = square_n(z)?;
        if m != self.n {
            return Err(Error::DimMismatch {
                expected: self.n,
                got: m,
            });
        }
        Ok(&self.a * z * &self.right)
    }

    /// Ambient dimension n (the operator acts on n×n symmetric matrices).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Dense matrix on the orthonormal basis [`sym_basis`], using the
    /// Frobenius pairing ⟨a, b⟩ = tr(b†·a).
    pub fn dense(&self) -> CMat {
        let basis = sym_basis(self.n);
        let d = basis.len();
        let mut out = CMat::zeros(d, d);
        for (col, b) in basis.iter().enumerate() {
            let image = &self.a * b * &self.right;
            for (row, c) in basis.iter().enumerate() {
                // ⟨image, c⟩ with c real: sum of image ⊙ conj(c)
                let mut acc = C64::new(0.0, 0.0);
                for i in 0..self.n {
                    for j in 0..self.n {
                        acc += image[(i, j)] * c[(i, j)].conj();
                    }
                }
                out[(row, col)] = acc;
            }
        }
        out
    }

    /// Smallest singular value of the dense matrix; the operator is
    /// invertible on Sym(ℂⁿ) iff this is bounded away from zero.
    pub fn min_singular_value(&self) -> f64 {
        let svd = self.dense().svd(false, false);
        svd.singular_values.iter().fold(f64::INFINITY, |a, &b| a.min(b))
    }
}

/// Jordan inverse of x in the algebra with unit e: x^{-1} = e·conj(x)·e.
///
/// For x, e ∈ Σ this is again in Σ and satisfies {x, e, x^{-1}} ... more
/// precisely x ∘ x^{-1} = e where ∘ is the e-product, which callers can check
/// through [`triple_product`].
pub fn jordan_inverse(x: &SymUnitary, e: &SymUnitary) -> Result<CMat> {
    if x.n() != e.n() {
        return Err(Error::DimMismatch {
            expected: x.n(),
            got: e.n(),
        });
    }
    Ok(e.matrix() * x.conj() * e.matrix())
}

/// Residuals of the JB*-triple axioms at concrete arguments.
#[derive(Clone, Debug, serde::Serialize)]
pub struct AxiomReport {
    /// Frobenius residual of the Jordan triple identity
    /// {u,v,{x,y,z}} − {{u,v,x},y,z} + {x,{v,u,y},z} − {x,y,{u,v,z}}.
    pub triple_identity_residual: f64,
    /// Relative error of the cubic norm axiom ‖{x,x,x}‖ = ‖x‖³ in the
    /// operator norm, evaluated at x.
    pub norm_axiom_rel_error: f64,
}

/// Evaluate the triple-identity residual at (x, y, z, u, v) and the norm
/// axiom at x. The identity is exact in exact arithmetic; the report shows
/// pure floating-point noise unless the inputs break symmetry.
pub fn validate_axioms(x: &CMat, y: &CMat, z: &CMat, u: &CMat, v: &CMat) -> Result<AxiomReport> {
    let lhs = triple_product(u, v, &triple_product(x, y, z)?)?;
    let t1 = triple_product(&triple_product(u, v, x)?, y, z)?;
    let t2 = triple_product(x, &triple_product(v, u, y)?, z)?;
    let t3 = triple_product(x, y, &triple_product(u, v, z)?)?;
    let residual = frobenius(&(lhs - t1 + t2 - t3));

    let xn = operator_norm(x);
    let cube = operator_norm(&triple_product(x, x, x)?);
    let denom = xn.powi(3);
    let rel = if denom > 0.0 {
        (cube - denom).abs() / denom
    } else {
        cube.abs()
    };
    Ok(AxiomReport {
        triple_identity_residual: residual,
        norm_axiom_rel_error: rel,
    })
}
