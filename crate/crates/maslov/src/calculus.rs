//! Two-point index calculus on the universal cover of Σ.
//!
//! det: Σ → S¹ induces the fundamental group; a point of the cover Σ̃ is a
//! unit σ together with a real lift of arg det(σ·conj(e_ref)). Two lifted
//! points pin down a homotopy class of paths between their projections, so
//! the Maslov index of "the" path between them is well defined: we realize
//! the class by shrinking σ's Takagi angles to 0, growing τ's from 0, and
//! appending the number of full 2π twists the lifts demand.
//!
//! On top of the two-point index sit the classical indices: the Souriau
//! index m(σ̃, τ̃), the Kashiwara index ι of Lagrangian triples, and the
//! relation between them (the rational right-hand side is reported exactly
//! through its doubled integer value).

use serde::Serialize;

use crate::bridge::{omega_matrix, tripotent_to_lagrangian, LagrangianFrame};
use crate::cmat::{complexify, conj, CMat, RMat, SymUnitary, C64};
use crate::eigen::{real_symmetric_eigen, takagi};
use crate::error::{Error, Result};
use crate::path::{concatenate, det_arg_delta, maslov_index, Polyline, TripotentPath};
use crate::spectral::mu;
use crate::Params;

/// How far e^{i·lift} may sit from det(x·conj(e_ref)) before a lifted point
/// is rejected.
const LIFT_TOL: f64 = 1e-8;

/// How far the implied twist count may sit from an integer. Lifts passing
/// [`LIFT_TOL`] always produce twists far inside this; the check guards
/// against mixing lifts over different references.
const TWIST_TOL: f64 = 1e-6;

/// A point of the universal cover Σ̃: a unit with a real determinant lift.
#[derive(Clone, Debug)]
pub struct LiftedPoint {
    x: SymUnitary,
    lift: f64,
    e_ref: SymUnitary,
}

impl LiftedPoint {
    /// Validate that e^{i·lift} = det(x·conj(e_ref)) within [`LIFT_TOL`].
    pub fn new(x: SymUnitary, lift: f64, e_ref: SymUnitary) -> Result<Self> {
        if x.n() != e_ref.n() {
            return Err(Error::DimMismatch {
                expected: x.n(),
                got: e_ref.n(),
            });
        }
        let det = (x.matrix() * e_ref.conj()).determinant();
        let defect = (det - C64::new(0.0, lift).exp()).norm();
        if defect > LIFT_TOL {
            return Err(Error::LiftMismatch { lift, defect });
        }
        Ok(LiftedPoint { x, lift, e_ref })
    }

    /// Lift over the identity reference.
    pub fn over_identity(x: SymUnitary, lift: f64) -> Result<Self> {
        let e = SymUnitary::identity(x.n());
        LiftedPoint::new(x, lift, e)
    }

    /// The projected unit.
    pub fn x(&self) -> &SymUnitary {
        &self.x
    }

    /// The determinant lift.
    pub fn lift(&self) -> f64 {
        self.lift
    }

    /// The covering reference.
    pub fn e_ref(&self) -> &SymUnitary {
        &self.e_ref
    }
}

/// The Peirce data of a unit relative to a base: x = Σⱼ e^{iθⱼ} cⱼ with
/// mutually orthogonal symmetric tripotents cⱼ = T·Pⱼ·Tᵀ, T·Tᵀ = e.
#[derive(Clone, Debug)]
pub struct JordanDecomposition {
    /// T with T·Tᵀ = e; its columns carry the decomposition.
    pub transport: CMat,
    /// The real orthogonal Takagi frame of the transported unit.
    pub frame: RMat,
    /// All n relative angles, ascending in (−π, π].
    pub angles: Vec<f64>,
    /// One representative angle per cluster.
    pub cluster_angles: Vec<f64>,
    /// Cluster multiplicities (sum = n).
    pub cluster_sizes: Vec<usize>,
    /// One tripotent per cluster: cⱼ = T·Pⱼ·Tᵀ, equal to Πⱼ·e for the
    /// spectral projector Πⱼ of x·conj(e).
    pub idempotents: Vec<CMat>,
}

impl JordanDecomposition {
    /// Σⱼ e^{iθⱼ}·(column outer products): reproduces x exactly up to
    /// roundoff.
    pub fn reconstruct(&self) -> CMat {
        let n = self.transport.nrows();
        let d = CMat::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(0.0, self.angles[i]).exp()
            } else {
                C64::new(0.0, 0.0)
            }
        });
        &self.transport * d * self.transport.transpose()
    }
}

/// Decompose x relative to e: x = Σ e^{iθⱼ}cⱼ with cⱼ orthogonal tripotents
/// summing (against conj(e)) to the identity.
pub fn jordan_decompose(x: &SymUnitary, e: &SymUnitary, params: &Params) -> Result<JordanDecomposition> {
    if x.n() != e.n() {
        return Err(Error::DimMismatch {
            expected: x.n(),
            got: e.n(),
        });
    }
    let n = x.n();
    // square root w of e with w·wᵀ = e: Takagi e = O·diag(e^{iψ})·Oᵀ,
    // w = O·diag(e^{iψ/2})
    let te = takagi(e)?;
    let oe = complexify(&te.frame);
    let half = CMat::from_fn(n, n, |i, j| {
        if i == j {
            C64::new(0.0, 0.5 * te.angles[i]).exp()
        } else {
            C64::new(0.0, 0.0)
        }
    });
    let w = &oe * half;
    // transported unit x' = w†·x·conj(w) is again in Σ
    let xp = SymUnitary::with_tol(w.adjoint() * x.matrix() * conj(&w), crate::TOL_STRUCT)?;
    let tx = takagi(&xp)?;
    let transport = &w * complexify(&tx.frame);

    let clusters = crate::spectral::cluster_indices(&tx.angles, params.tol_cluster);
    let mut cluster_angles = Vec::with_capacity(clusters.len());
    let mut cluster_sizes = Vec::with_capacity(clusters.len());
    let mut idempotents = Vec::with_capacity(clusters.len());
    for (angle, members) in &clusters {
        cluster_angles.push(*angle);
        cluster_sizes.push(members.len());
        let mut c = CMat::zeros(n, n);
        for &j in members {
            let col = transport.column(j);
            // unconjugated outer product: T·E_jj·Tᵀ
            for r in 0..n {
                for s in 0..n {
                    c[(r, s)] += col[r] * col[s];
                }
            }
        }
        idempotents.push(c);
    }
    Ok(JordanDecomposition {
        transport,
        frame: tx.frame,
        angles: tx.angles,
        cluster_angles,
        cluster_sizes,
        idempotents,
    })
}

/// Continuously lift arg det(x(t)·conj(e_ref)) along the path, starting
/// from a validated lift of x(0); returns the lift at t = 1.
pub fn lift_path(path: &TripotentPath, e_ref: &SymUnitary, lift0: f64, params: &Params) -> Result<f64> {
    let x0 = path.eval(0.0)?;
    LiftedPoint::new(x0, lift0, e_ref.clone())?;
    Ok(lift0 + det_arg_delta(path, e_ref, params)?)
}

/// Angles of a Takagi factorization pushed to [0, 2π).
fn angles_mod_tau(angles: &[f64]) -> Vec<f64> {
    angles
        .iter()
        .map(|&a| if a < 0.0 { a + std::f64::consts::TAU } else { a })
        .collect()
}

/// The canonical path between two lifted points: Takagi angles of σ shrink
/// to 0, τ's grow from 0, and the twist count demanded by the lifts is
/// spent on the last angle of τ.
fn canonical_path(sigma: &LiftedPoint, tau: &LiftedPoint, params: &Params) -> Result<TripotentPath> {
    let gap = sigma.e_ref.dist(&tau.e_ref);
    if !(gap <= params.tol_struct) {
        return Err(Error::CoverMismatch(gap));
    }
    let tau_const = std::f64::consts::TAU;
    let ts = takagi(&sigma.x)?;
    let tt = takagi(&tau.x)?;
    let phi_s = angles_mod_tau(&ts.angles);
    let phi_t = angles_mod_tau(&tt.angles);
    let sum_s: f64 = phi_s.iter().sum();
    let sum_t: f64 = phi_t.iter().sum();
    let k_real = (tau.lift - sigma.lift - (sum_t - sum_s)) / tau_const;
    let k = k_real.round();
    if (k_real - k).abs() > TWIST_TOL {
        return Err(Error::NonIntegerTwist(k_real));
    }
    let leg_shrink = TripotentPath::frame_diagonal(
        ts.frame.clone(),
        phi_s.iter().map(|&p| Polyline::linear(p, 0.0)).collect(),
    )?;
    let leg_grow = TripotentPath::frame_diagonal(
        tt.frame.clone(),
        phi_t.iter().map(|&p| Polyline::linear(0.0, p)).collect(),
    )?;
    let mut path = concatenate(&leg_shrink, &leg_grow)?;
    if k != 0.0 {
        let n = phi_t.len();
        let polys = (0..n)
            .map(|j| {
                if j + 1 == n {
                    Polyline::linear(phi_t[j], phi_t[j] + tau_const * k)
                } else {
                    Polyline::constant(phi_t[j])
                }
            })
            .collect();
        let leg_twist = TripotentPath::frame_diagonal(tt.frame.clone(), polys)?;
        path = concatenate(&path, &leg_twist)?;
    }
    Ok(path)
}

/// Maslov index, relative to e, of the path class the two lifted points
/// determine.
pub fn mas_two_points(
    sigma: &LiftedPoint,
    tau: &LiftedPoint,
    e: &SymUnitary,
    params: &Params,
) -> Result<i64> {
    let path = canonical_path(sigma, tau, params)?;
    Ok(maslov_index(&path, e, params)?.value)
}

/// The Souriau index m(σ̃, τ̃) = 2·Mas(σ̃, τ̃; σ) − μ(τ, σ) + n.
pub fn souriau_m(sigma: &LiftedPoint, tau: &LiftedPoint, params: &Params) -> Result<i64> {
    let mas = mas_two_points(sigma, tau, &sigma.x, params)?;
    let mu0 = mu(&tau.x, &sigma.x, 0.0, params)?;
    Ok(2 * mas - mu0 as i64 + sigma.x.n() as i64)
}

/// Kashiwara index of a Lagrangian triple: the signature of the symmetrized
/// Gram form built from ω on ℓ₁ ⊕ ℓ₂ ⊕ ℓ₃.
pub fn kashiwara_index(
    l1: &LagrangianFrame,
    l2: &LagrangianFrame,
    l3: &LagrangianFrame,
    params: &Params,
) -> Result<i64> {
    let n = l1.n();
    if l2.n() != n || l3.n() != n {
        return Err(Error::DimMismatch {
            expected: n,
            got: if l2.n() != n { l2.n() } else { l3.n() },
        });
    }
    let om = omega_matrix(n);
    let a12 = l1.frame().transpose() * &om * l2.frame();
    let a23 = l2.frame().transpose() * &om * l3.frame();
    let a31 = l3.frame().transpose() * &om * l1.frame();
    let mut g = RMat::zeros(3 * n, 3 * n);
    let mut put = |bi: usize, bj: usize, a: &RMat| {
        for r in 0..n {
            for c in 0..n {
                g[(bi * n + r, bj * n + c)] += 0.5 * a[(r, c)];
                g[(bj * n + c, bi * n + r)] += 0.5 * a[(r, c)];
            }
        }
    };
    put(0, 1, &a12);
    put(1, 2, &a23);
    put(2, 0, &a31);
    let (evals, _) = real_symmetric_eigen(&g);
    let scale = evals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return Ok(0);
    }
    let thr = params.tol_rank * scale;
    let mut sig = 0i64;
    for v in evals {
        if v > thr {
            sig += 1;
        } else if v < -thr {
            sig -= 1;
        }
    }
    Ok(sig)
}

/// Both sides of the index relation
/// Mas(σ̃, τ̃; e) = ½·(m(σ̃, τ̃) + ι(e, τ, σ) + μ(τ, e) − μ(σ, e)).
#[derive(Clone, Debug, Serialize)]
pub struct FormulaEReport {
    /// Mas(σ̃, τ̃; e).
    pub lhs: i64,
    /// Souriau index m(σ̃, τ̃).
    pub m: i64,
    /// Kashiwara index ι(e, τ, σ) through the Lagrangian dictionary.
    pub iota: i64,
    /// μ(τ, e) at angle 0.
    pub mu_tau: usize,
    /// μ(σ, e) at angle 0.
    pub mu_sigma: usize,
    /// The doubled right-hand side m + ι + μ(τ,e) − μ(σ,e), kept as an
    /// integer so the half-integer arithmetic stays exact.
    pub rhs_times_two: i64,
    /// 2·lhs == rhs_times_two.
    pub equal: bool,
}

/// Evaluate the index relation for a lifted pair and a base unit.
pub fn check_formula_e(
    sigma: &LiftedPoint,
    tau: &LiftedPoint,
    e: &SymUnitary,
    params: &Params,
) -> Result<FormulaEReport> {
    let lhs = mas_two_points(sigma, tau, e, params)?;
    let m = souriau_m(sigma, tau, params)?;
    let le = tripotent_to_lagrangian(e)?;
    let lt = tripotent_to_lagrangian(&tau.x)?;
    let ls = tripotent_to_lagrangian(&sigma.x)?;
    let iota = kashiwara_index(&le, &lt, &ls, params)?;
    let mu_tau = mu(&tau.x, e, 0.0, params)?;
    let mu_sigma = mu(&sigma.x, e, 0.0, params)?;
    let rhs_times_two = m + iota + mu_tau as i64 - mu_sigma as i64;
    Ok(FormulaEReport {
        lhs,
        m,
        iota,
        mu_tau,
        mu_sigma,
        rhs_times_two,
        equal: 2 * lhs == rhs_times_two,
    })
}

/// Both sides of the Leray cocycle identity
/// m(τ̃₁, τ̃₂) + ι(e, τ₂, τ₁) + μ(τ₂, e) − μ(τ₁, e) = m(ẽ, τ̃₂) − m(ẽ, τ̃₁).
#[derive(Clone, Debug, Serialize)]
pub struct LerayReport {
    pub m12: i64,
    pub iota: i64,
    pub mu2: usize,
    pub mu1: usize,
    pub m_e2: i64,
    pub m_e1: i64,
    pub lhs: i64,
    pub rhs: i64,
    pub holds: bool,
}

/// Evaluate the Leray cocycle identity on three lifted points.
pub fn check_leray(
    tau1: &LiftedPoint,
    tau2: &LiftedPoint,
    e: &LiftedPoint,
    params: &Params,
) -> Result<LerayReport> {
    let m12 = souriau_m(tau1, tau2, params)?;
    let le = tripotent_to_lagrangian(&e.x)?;
    let l2 = tripotent_to_lagrangian(&tau2.x)?;
    let l1 = tripotent_to_lagrangian(&tau1.x)?;
    let iota = kashiwara_index(&le, &l2, &l1, params)?;
    let mu2 = mu(&tau2.x, &e.x, 0.0, params)?;
    let mu1 = mu(&tau1.x, &e.x, 0.0, params)?;
    let m_e2 = souriau_m(e, tau2, params)?;
    let m_e1 = souriau_m(e, tau1, params)?;
    let lhs = m12 + iota + mu2 as i64 - mu1 as i64;
    let rhs = m_e2 - m_e1;
    Ok(LerayReport {
        m12,
        iota,
        mu2,
        mu1,
        m_e2,
        m_e1,
        lhs,
        rhs,
        holds: lhs == rhs,
    })
}
