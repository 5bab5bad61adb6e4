//! Dense eigen kernels for the small normal matrices this crate lives on.
//!
//! Everything spectral in the crate reduces to three factorizations:
//!
//! * [`normal_eigen`] — eigen-decomposition of a *normal* matrix a, via joint
//!   diagonalization of the commuting Hermitian parts H = (a + a†)/2 and
//!   K = (a − a†)/(2i). H is diagonalized first; inside each H-cluster the
//!   restriction of K is diagonalized, which resolves exactly the directions
//!   H cannot see. For a unitary matrix the dangerous near-degeneracies are
//!   conjugate pairs e^{±iθ} (equal real parts, opposite imaginary parts),
//!   and the second stage separates them cleanly.
//! * [`takagi`] — the Autonne–Takagi factorization x = O·diag(e^{iφ_j})·Oᵀ of
//!   a symmetric unitary with a *real orthogonal* O. Here Re x and Im x are
//!   commuting real symmetric matrices (conj(x)·x = I forces both), so the
//!   same two-stage scheme runs over the reals.
//! * [`RotationExp`] — e^{tA} for real skew-symmetric A, through the
//!   Hermitian eigendecomposition of iA, factored once and evaluated at any t.
//!
//! Eigenvalues are recovered as Rayleigh quotients v†·a·v of the computed
//! vectors, which is second-order accurate and keeps clustered values honest.
//!
//! The Hermitian kernel underneath everything is a cyclic Jacobi iteration
//! rather than a tridiagonalization-based solver. The matrices here are tiny
//! but their spectra are routinely *exactly* degenerate (projector Grams,
//! relative unitaries of shared-frame pairs, swept angles colliding with
//! resting ones), and that is precisely the regime where fast QR-style
//! solvers have been observed to hand back an orthonormal basis that is not
//! an eigenbasis. Jacobi cannot fail that way: a repeated eigenvalue only
//! makes some rotations unnecessary, never wrong.

use crate::angle::canonical_angle;
use crate::cmat::{complexify, conj, imag_part, real_part, CMat, CVec, RMat, C64};
use crate::error::{Error, Result};

/// Cluster width used when deciding which H-eigenvalues may share an
/// eigenspace. Deliberately generous: merging too much is harmless (the
/// second stage re-separates), merging too little pollutes eigenvectors with
/// O(machine-eps / gap) mixing.
const CLUSTER_GAP: f64 = 1e-7;

/// Residual guard: ‖a·v − λ·v‖ beyond this (relative to 1 + ‖a‖_F) means the
/// input was not normal or the kernel lost it, and silent output is forbidden.
const RESIDUAL_GUARD: f64 = 1e-6;

/// Sweep cap for the Jacobi kernels. Convergence is quadratic and single
/// digits suffice at these sizes; the cap is pure paranoia.
const JACOBI_MAX_SWEEPS: usize = 48;

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix:
/// eigenvalues ascending, unitary eigenvector columns.
///
/// Each rotation acts in the (p, q) plane as J = [[c, −s·e^{iφ}],
/// [s·e^{−iφ}, c]] with φ the phase of a_pq and tan θ the smaller root of
/// t² − 2τt − 1 = 0, τ = (a_qq − a_pp)/(2|a_pq|); J†·a·J zeroes the pair
/// exactly. Sweeps repeat until the off-diagonal mass sits at rounding level.
fn jacobi_hermitian(h: &CMat) -> (Vec<f64>, CMat) {
    let n = h.nrows();
    let mut a = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let mut v = crate::cmat::identity(n);
    let scale = a.norm();
    if n > 1 && scale > 0.0 {
        let exit = n as f64 * f64::EPSILON * scale;
        let skip = 0.01 * f64::EPSILON * scale;
        for _ in 0..JACOBI_MAX_SWEEPS {
            let mut off = 0.0;
            for p in 0..n {
                for q in (p + 1)..n {
                    off += 2.0 * a[(p, q)].norm_sqr();
                }
            }
            if off.sqrt() <= exit {
                break;
            }
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    let apq = a[(p, q)];
                    let b = apq.norm();
                    if b <= skip {
                        a[(p, q)] = C64::new(0.0, 0.0);
                        a[(q, p)] = C64::new(0.0, 0.0);
                        continue;
                    }
                    let phase = apq / C64::new(b, 0.0);
                    let tau = (a[(q, q)].re - a[(p, p)].re) / (2.0 * b);
                    let t = -tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let sp = phase * (t * c); // s·e^{iφ}
                    // a ← a·J, then a ← J†·a, then accumulate v ← v·J.
                    for r in 0..n {
                        let arp = a[(r, p)];
                        let arq = a[(r, q)];
                        a[(r, p)] = arp * c + arq * sp.conj();
                        a[(r, q)] = arq * c - arp * sp;
                    }
                    for col in 0..n {
                        let apc = a[(p, col)];
                        let aqc = a[(q, col)];
                        a[(p, col)] = apc * c + aqc * sp;
                        a[(q, col)] = aqc * c - apc * sp.conj();
                    }
                    for r in 0..n {
                        let vrp = v[(r, p)];
                        let vrq = v[(r, q)];
                        v[(r, p)] = vrp * c + vrq * sp.conj();
                        v[(r, q)] = vrq * c - vrp * sp;
                    }
                    // The rotation zeroes this pair by construction; keep the
                    // Hermitian structure exact against rounding crumbs.
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);
                    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
                    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = CMat::from_fn(n, n, |r, c| v[(r, order[c])]);
    (values, vectors)
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending,
/// eigenvectors as orthonormal columns.
pub fn hermitian_eigen(h: &CMat) -> (Vec<f64>, CMat) {
    jacobi_hermitian(h)
}

/// Real symmetric eigen-decomposition, eigenvalues ascending.
///
/// Runs the complex Jacobi kernel on the embedded matrix: real input keeps
/// every rotation phase at ±1, so the iterates never grow an imaginary part
/// and the projection back to ℝ is exact, not a truncation.
pub(crate) fn real_symmetric_eigen(s: &RMat) -> (Vec<f64>, RMat) {
    let (values, cvecs) = jacobi_hermitian(&complexify(s));
    (values, real_part(&cvecs))
}

/// Split `0..n` into runs of consecutive near-equal sorted values.
fn cluster_ranges(sorted: &[f64], gap: f64) -> Vec<std::ops::Range<usize>> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=sorted.len() {
        if i == sorted.len() || sorted[i] - sorted[i - 1] > gap {
            out.push(start..i);
            start = i;
        }
    }
    out
}

/// Result of [`normal_eigen`]: `a · vectors = vectors · diag(values)` with
/// orthonormal columns.
#[derive(Clone, Debug)]
pub struct NormalEigen {
    pub values: Vec<C64>,
    pub vectors: CMat,
}

/// Eigen-decomposition of a normal matrix with orthonormal eigenvectors.
///
/// The input must be normal (a·a† = a†·a); a residual guard rejects inputs
/// that were not, rather than returning silently wrong projections.
pub fn normal_eigen(a: &CMat) -> Result<NormalEigen> {
    let n = crate::cmat::square_n(a)?;
    if n == 0 {
        return Ok(NormalEigen {
            values: vec![],
            vectors: CMat::zeros(0, 0),
        });
    }
    let h = (a + a.adjoint()) * C64::new(0.5, 0.0);
    let k = (a - a.adjoint()) * C64::new(0.0, -0.5);
    let scale = 1.0 + a.norm();

    let (hvals, hvecs) = hermitian_eigen(&h);
    let mut vectors = hvecs.clone();
    for range in cluster_ranges(&hvals, CLUSTER_GAP * scale) {
        if range.len() < 2 {
            continue;
        }
        let w = hvecs.columns(range.start, range.len()).into_owned();
        // K commutes with H, so it preserves this (numerically fuzzy)
        // eigenspace; diagonalizing its compression resolves the cluster.
        let b = w.adjoint() * &k * &w;
        let b = (&b + b.adjoint()) * C64::new(0.5, 0.0);
        let (_, q) = hermitian_eigen(&b);
        let fixed = w * q;
        vectors.view_mut((0, range.start), (n, range.len())).copy_from(&fixed);
    }

    let mut values = Vec::with_capacity(n);
    let mut worst: f64 = 0.0;
    for j in 0..n {
        let v: CVec = vectors.column(j).into_owned();
        let av = a * &v;
        let lambda = v.dotc(&av); // v† (a v)
        worst = worst.max((&av - &v * lambda).norm());
        values.push(lambda);
    }
    if !(worst <= RESIDUAL_GUARD * scale) {
        return Err(Error::Numerical(format!(
            "normal eigen residual {worst:.3e} exceeds guard (input not normal?)"
        )));
    }
    Ok(NormalEigen { values, vectors })
}

/// Result of [`unitary_eigen`]: angles in (−π, π] sorted ascending, with
/// `u · vectors = vectors · diag(e^{i·angles})`.
#[derive(Clone, Debug)]
pub struct UnitaryEigen {
    pub angles: Vec<f64>,
    pub vectors: CMat,
}

/// Eigen-decomposition of a unitary matrix, reported as angles.
///
/// Eigenvalue moduli are checked against 1 and the values are radially
/// projected onto the circle, so downstream angle arithmetic sees exactly
/// unit-modulus data.
pub fn unitary_eigen(u: &CMat) -> Result<UnitaryEigen> {
    let ne = normal_eigen(u)?;
    let mut pairs: Vec<(f64, usize)> = Vec::with_capacity(ne.values.len());
    for (j, lambda) in ne.values.iter().enumerate() {
        let r = lambda.norm();
        if (r - 1.0).abs() > 1e-7 {
            return Err(Error::Numerical(format!(
                "eigenvalue modulus {r:.12} of a supposedly unitary matrix is off the circle"
            )));
        }
        pairs.push((canonical_angle(lambda.arg()), j));
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = ne.values.len();
    let angles: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let vectors = CMat::from_fn(n, n, |r, c| ne.vectors[(r, pairs[c].1)]);
    Ok(UnitaryEigen { angles, vectors })
}

/// Autonne–Takagi factorization of a symmetric unitary:
/// `x = frame · diag(e^{i·angles}) · frameᵀ` with a real orthogonal frame.
#[derive(Clone, Debug)]
pub struct Takagi {
    pub frame: RMat,
    pub angles: Vec<f64>,
}

/// Takagi factorization of x ∈ Σ through the commuting real symmetric pair
/// (Re x, Im x). Angles come out canonical in (−π, π], sorted ascending.
pub fn takagi(x: &crate::cmat::SymUnitary) -> Result<Takagi> {
    let n = x.n();
    let xr = real_part(x.matrix());
    let xi = imag_part(x.matrix());

    let (cvals, cvecs) = real_symmetric_eigen(&xr);
    let mut frame = cvecs.clone();
    // Re x has spectrum in [−1, 1]; the absolute gap is the right scale.
    for range in cluster_ranges(&cvals, CLUSTER_GAP) {
        if range.len() < 2 {
            continue;
        }
        let w = cvecs.columns(range.start, range.len()).into_owned();
        let b = w.transpose() * &xi * &w;
        let b = (&b + b.transpose()) * 0.5;
        let (_, q) = real_symmetric_eigen(&b);
        let fixed = w * q;
        frame.view_mut((0, range.start), (n, range.len())).copy_from(&fixed);
    }

    let mut pairs: Vec<(f64, usize)> = (0..n)
        .map(|j| {
            let o = frame.column(j);
            let c = (o.transpose() * &xr * o)[(0, 0)];
            let s = (o.transpose() * &xi * o)[(0, 0)];
            (canonical_angle(s.atan2(c)), j)
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let angles: Vec<f64> = pairs.iter().map(|p| p.0).collect();
    let frame = RMat::from_fn(n, n, |r, c| frame[(r, pairs[c].1)]);

    // Reconstruction guard: a failure here means the commuting-pair argument
    // was violated, i.e. the input was not actually in Σ at working accuracy.
    let oc = complexify(&frame);
    let d = CMat::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(0.0, angles[i]).exp()
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let res = (&oc * d * oc.transpose() - x.matrix()).norm();
    if !(res <= 1e-7 * (1.0 + n as f64)) {
        return Err(Error::Numerical(format!(
            "Takagi reconstruction residual {res:.3e}"
        )));
    }
    Ok(Takagi { frame, angles })
}

/// Factored one-parameter rotation group t ↦ e^{tA} for real skew A.
#[derive(Clone, Debug)]
pub struct RotationExp {
    v: CMat,
    d: Vec<f64>,
    n: usize,
}

impl RotationExp {
    /// Factor a real skew-symmetric generator. iA is Hermitian; with
    /// iA = V·diag(d)·V† we get e^{tA} = V·diag(e^{−i·t·d})·V†, which is real.
    pub fn new(a: &RMat) -> Result<Self> {
        let n = a.nrows();
        if a.ncols() != n {
            return Err(Error::DimMismatch {
                expected: n,
                got: a.ncols(),
            });
        }
        let skew_defect = (a + a.transpose()).norm();
        if !(skew_defect <= crate::TOL_STRUCT * (1.0 + a.norm())) {
            return Err(Error::NotSkew(skew_defect));
        }
        let ia = complexify(a) * C64::new(0.0, 1.0);
        let ia = (&ia + ia.adjoint()) * C64::new(0.5, 0.0);
        let (d, v) = hermitian_eigen(&ia);
        Ok(RotationExp { v, d, n })
    }

    /// Evaluate e^{tA} (a real orthogonal matrix).
    pub fn at(&self, t: f64) -> RMat {
        let diag = CMat::from_fn(self.n, self.n, |i, j| {
            if i == j {
                C64::new(0.0, -t * self.d[i]).exp()
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let m = &self.v * diag * self.v.adjoint();
        debug_assert!(crate::cmat::imag_part(&m).norm() < 1e-9 * (1.0 + self.n as f64));
        real_part(&m)
    }
}

/// Determinant-based winding helper: arg det(m), in (−π, π].
pub fn det_arg(m: &CMat) -> f64 {
    canonical_angle(m.determinant().arg())
}

/// conj-sandwich u ↦ conj(u) used in a few spots; kept here so callers avoid
/// re-rolling entrywise maps.
pub fn entry_conj(m: &CMat) -> CMat {
    conj(m)
}
