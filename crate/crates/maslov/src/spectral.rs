//! Relative spectra, transversality indices, and their stability.
//!
//! For x, e ∈ Σ the matrix u = x·conj(e) is unitary; its spectrum, read as
//! angles on the circle, is the spectrum of x in the Jordan algebra with
//! unit e:
//!
//! ```text
//! U_{x,e} = spec(x·conj(e)) ⊂ S¹.
//! ```
//!
//! The transversality index μ(x, e, θ) is the multiplicity of e^{iθ} in
//! U_{x,e}; in matrix terms μ(x, e, 0) = dim ker(e − x), the quantity the
//! whole Maslov machinery counts. Eigenvalues are merged into clusters at
//! arc distance [`crate::Params::tol_cluster`] — unitary matrices have
//! perfectly conditioned eigenvalues, so clustering is the honest way to
//! recover multiplicities from floating-point spectra.
//!
//! Two stability facts drive everything downstream:
//!
//! * spectral idempotents: for a spectral subset σ of clusters, the sum Π of
//!   the corresponding eigenprojections of u yields p = Π·e, a symmetric
//!   tripotent with {p, e, p} = p whose restricted spectrum is exactly σ
//!   ([`spectral_idempotent`]);
//! * a Hoffman–Wielandt budget: moving x by less than the chordal distance
//!   from U_{x,e} to the arc fence {e^{±iε}} cannot move spectrum across the
//!   fence, so the total multiplicity inside |θ| ≤ ε is conserved
//!   ([`perturbation_budget`]).

use serde::Serialize;

use crate::angle::{arc_dist, canonical_angle, chordal_dist, circular_mean};
use crate::cmat::{symmetrize, CMat, SymUnitary};
use crate::eigen::{unitary_eigen, UnitaryEigen};
use crate::error::{Error, Result};
use crate::Params;

/// One cluster of relative eigenvalues: a representative angle in (−π, π]
/// and the number of eigenvalues merged into it.
#[derive(Clone, Debug, Serialize)]
pub struct Cluster {
    pub angle: f64,
    pub multiplicity: usize,
}

/// The clustered relative spectrum U_{x,e}.
#[derive(Clone, Debug, Serialize)]
pub struct RelativeSpectrum {
    /// Ambient dimension; multiplicities sum to this.
    pub n: usize,
    /// Clusters sorted by ascending angle.
    pub clusters: Vec<Cluster>,
}

impl RelativeSpectrum {
    /// Multiplicity at angle θ: the total multiplicity of clusters within
    /// `tol` arc distance of θ (0 if none).
    pub fn mu_at(&self, theta: f64, tol: f64) -> usize {
        self.clusters
            .iter()
            .filter(|c| arc_dist(c.angle, theta) <= tol)
            .map(|c| c.multiplicity)
            .sum()
    }

    /// Total multiplicity inside the closed symmetric arc |θ| ≤ ε.
    pub fn count_symmetric_arc(&self, eps: f64, tol: f64) -> usize {
        self.clusters
            .iter()
            .filter(|c| c.angle.abs() <= eps + tol)
            .map(|c| c.multiplicity)
            .sum()
    }

    /// k-count over the closed arc [0, ε]: clusters with θ ∈ [−tol, ε).
    ///
    /// Admissibility keeps clusters away from ε, so the half-open reading is
    /// equivalent to the closed one; a cluster within `tol` of ε is an error
    /// (the count would be ambiguous), which signals an inadmissible ε.
    pub fn count_upper_arc(&self, eps: f64, tol: f64) -> Result<usize> {
        let mut total = 0;
        for c in &self.clusters {
            if arc_dist(c.angle, eps) <= tol {
                return Err(Error::AmbiguousEndpoint {
                    angle: c.angle,
                    eps,
                    tol,
                });
            }
            if c.angle >= -tol && c.angle < eps {
                total += c.multiplicity;
            }
        }
        Ok(total)
    }

    /// Smallest arc distance from any cluster to ±ε (the admissibility
    /// clearance of the fence).
    pub fn fence_clearance(&self, eps: f64) -> f64 {
        self.clusters
            .iter()
            .map(|c| arc_dist(c.angle.abs(), eps))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Group sorted circle angles into clusters at arc distance `tol`,
/// including the wrap-around merge across the ±π cut. Returns the member
/// index set and circular-mean representative of each cluster, ordered by
/// ascending representative.
pub(crate) fn cluster_indices(sorted_angles: &[f64], tol: f64) -> Vec<(f64, Vec<usize>)> {
    let n = sorted_angles.len();
    if n == 0 {
        return vec![];
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut current = vec![0usize];
    for i in 1..n {
        if sorted_angles[i] - sorted_angles[i - 1] <= tol {
            current.push(i);
        } else {
            groups.push(std::mem::take(&mut current));
            current = vec![i];
        }
    }
    groups.push(current);
    // circular wrap: the last cluster may continue into the first
    if groups.len() > 1 {
        let first = &groups[0];
        let last = groups.last().unwrap();
        let gap = (sorted_angles[first[0]] + std::f64::consts::TAU)
            - sorted_angles[*last.last().unwrap()];
        if gap <= tol {
            let last = groups.pop().unwrap();
            let mut merged = last;
            merged.extend(groups.remove(0));
            groups.insert(0, merged);
        }
    }
    let mut out: Vec<(f64, Vec<usize>)> = groups
        .into_iter()
        .map(|members| {
            let angles: Vec<f64> = members.iter().map(|&i| sorted_angles[i]).collect();
            (circular_mean(&angles), members)
        })
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// The relative unitary u = x·conj(e).
pub fn relative_unitary(x: &SymUnitary, e: &SymUnitary) -> Result<CMat> {
    if x.n() != e.n() {
        return Err(Error::DimMismatch {
            expected: x.n(),
            got: e.n(),
        });
    }
    Ok(x.matrix() * e.conj())
}

/// Raw eigen-decomposition of x·conj(e): angles sorted ascending with
/// orthonormal eigenvectors, before clustering.
pub fn relative_eigen(x: &SymUnitary, e: &SymUnitary) -> Result<UnitaryEigen> {
    unitary_eigen(&relative_unitary(x, e)?)
}

/// The clustered relative spectrum of (x, e).
pub fn relative_spectrum(x: &SymUnitary, e: &SymUnitary, params: &Params) -> Result<RelativeSpectrum> {
    let ue = relative_eigen(x, e)?;
    Ok(spectrum_from_angles(&ue.angles, params.tol_cluster))
}

/// Cluster a sorted list of eigenangles into a [`RelativeSpectrum`].
pub(crate) fn spectrum_from_angles(sorted_angles: &[f64], tol: f64) -> RelativeSpectrum {
    let clusters = cluster_indices(sorted_angles, tol)
        .into_iter()
        .map(|(angle, members)| Cluster {
            angle,
            multiplicity: members.len(),
        })
        .collect();
    RelativeSpectrum {
        n: sorted_angles.len(),
        clusters,
    }
}

/// μ(x, e, θ): multiplicity of e^{iθ} in the relative spectrum.
pub fn mu(x: &SymUnitary, e: &SymUnitary, theta: f64, params: &Params) -> Result<usize> {
    Ok(relative_spectrum(x, e, params)?.mu_at(theta, params.tol_cluster))
}

/// Check the conjugation symmetry U_{e,x} = conj(U_{x,e}): the two clustered
/// spectra must match under angle negation, cluster by cluster.
pub fn conjugate_spectrum_check(x: &SymUnitary, e: &SymUnitary, params: &Params) -> Result<bool> {
    let fwd = relative_spectrum(x, e, params)?;
    let bwd = relative_spectrum(e, x, params)?;
    if fwd.clusters.len() != bwd.clusters.len() {
        return Ok(false);
    }
    // negate-and-sort the backward spectrum, then compare pairwise
    let mut neg: Vec<(f64, usize)> = bwd
        .clusters
        .iter()
        .map(|c| (canonical_angle(-c.angle), c.multiplicity))
        .collect();
    neg.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(fwd
        .clusters
        .iter()
        .zip(neg.iter())
        .all(|(a, (angle, mult))| {
            a.multiplicity == *mult && arc_dist(a.angle, *angle) <= params.tol_cluster
        }))
}

/// A spectral idempotent p = Π·e together with the arc it selects.
#[derive(Clone, Debug)]
pub struct SpectralIdempotent {
    /// The symmetric tripotent p ∈ Sym(ℂⁿ) with {p, e, p} = p.
    pub p: CMat,
    /// Representative angles of the selected clusters.
    pub arc: Vec<f64>,
    /// Total multiplicity of the selected clusters (the rank of p).
    pub rank: usize,
}

/// Build the spectral idempotent of a union of clusters.
///
/// `arc` lists target angles; each must match a cluster of the relative
/// spectrum within tol_cluster (angles matching no cluster are an error —
/// the characteristic function of a non-spectral set is not continuous on
/// the spectrum). Duplicate angles matching one cluster are merged.
pub fn spectral_idempotent(
    x: &SymUnitary,
    e: &SymUnitary,
    arc: &[f64],
    params: &Params,
) -> Result<SpectralIdempotent> {
    let ue = relative_eigen(x, e)?;
    let clusters = cluster_indices(&ue.angles, params.tol_cluster);
    let n = x.n();

    let mut selected = vec![false; clusters.len()];
    for &target in arc {
        let hit = clusters
            .iter()
            .position(|(angle, _)| arc_dist(*angle, target) <= params.tol_cluster);
        match hit {
            Some(k) => selected[k] = true,
            None => return Err(Error::NonSpectralArc(canonical_angle(target))),
        }
    }

    // Π = Σ v·v† over all eigenvectors of the selected clusters; Hermitian.
    let mut pi = CMat::zeros(n, n);
    let mut rank = 0;
    let mut arc_out = Vec::new();
    for (k, (angle, members)) in clusters.iter().enumerate() {
        if !selected[k] {
            continue;
        }
        arc_out.push(*angle);
        rank += members.len();
        for &j in members {
            let v = ue.vectors.column(j);
            pi += &v * v.adjoint();
        }
    }
    // p = Π·e is symmetric: Πᵀ = conj(e)·Π·e because u = x·conj(e) is
    // similar to its transpose through e. Symmetrize to kill rounding.
    let p = symmetrize(&(pi * e.matrix()));
    Ok(SpectralIdempotent {
        p,
        arc: arc_out,
        rank,
    })
}

/// The perturbation budget ρ of Lemma-type multiplicity conservation.
///
/// Preconditions: ε ∈ (0, π) and the punctured closed arc 0 < |θ| ≤ ε holds
/// no spectrum. Then any y ∈ Σ with ‖(y − x)·conj(e)‖_F < ρ keeps all its
/// relative spectrum off the fence e^{±iε} and conserves the total
/// multiplicity of the arc |θ| ≤ ε (which is μ(x, e, 0)). The radius is the
/// chordal distance from U_{x,e} to the fence, by Hoffman–Wielandt on the
/// normal matrices u_x and u_y.
pub fn perturbation_budget(
    x: &SymUnitary,
    e: &SymUnitary,
    eps: f64,
    params: &Params,
) -> Result<f64> {
    if !(eps > 0.0 && eps < std::f64::consts::PI) {
        return Err(Error::ParamRange(eps));
    }
    let ue = relative_eigen(x, e)?;
    let spec = spectrum_from_angles(&ue.angles, params.tol_cluster);
    for c in &spec.clusters {
        let a = c.angle.abs();
        if a <= params.tol_cluster {
            continue; // the cluster at 1 is allowed (and is what's conserved)
        }
        if a <= eps + params.tol_cluster {
            return Err(Error::ArcNotClear {
                angle: c.angle,
                eps,
            });
        }
    }
    // distance from the raw angles (not cluster means) to the fence
    Ok(ue
        .angles
        .iter()
        .map(|&t| chordal_dist(t.abs(), eps))
        .fold(f64::INFINITY, f64::min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmat::{RMat, C64};
    use crate::jordan::triple_product;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn diag_su(angles: &[f64]) -> SymUnitary {
        let n = angles.len();
        SymUnitary::new(CMat::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(0.0, angles[i]).exp()
            } else {
                C64::new(0.0, 0.0)
            }
        }))
        .unwrap()
    }

    fn p() -> Params {
        Params::default()
    }

    #[test]
    fn spectrum_of_the_unit_is_zero() {
        let e = SymUnitary::identity(3);
        let s = relative_spectrum(&e, &e, &p()).unwrap();
        assert_eq!(s.clusters.len(), 1);
        assert!(s.clusters[0].angle.abs() < 1e-12);
        assert_eq!(s.clusters[0].multiplicity, 3);
    }

    #[test]
    fn circle_case_single_angle() {
        let x = diag_su(&[0.8]);
        let e = SymUnitary::identity(1);
        let s = relative_spectrum(&x, &e, &p()).unwrap();
        assert_eq!(s.clusters.len(), 1);
        assert!((s.clusters[0].angle - 0.8).abs() < 1e-12);
    }

    #[test]
    fn diagonal_multiplicities_cluster() {
        let x = diag_su(&[0.0, FRAC_PI_2, FRAC_PI_2]);
        let e = SymUnitary::identity(3);
        let s = relative_spectrum(&x, &e, &p()).unwrap();
        assert_eq!(s.clusters.len(), 2);
        assert_eq!(s.clusters[0].multiplicity, 1);
        assert!((s.clusters[1].angle - FRAC_PI_2).abs() < 1e-12);
        assert_eq!(s.clusters[1].multiplicity, 2);
    }

    #[test]
    fn clusters_merge_across_the_cut() {
        let x = diag_su(&[PI - 1e-11, -PI + 1e-11]);
        let e = SymUnitary::identity(2);
        let s = relative_spectrum(&x, &e, &p()).unwrap();
        assert_eq!(s.clusters.len(), 1);
        assert_eq!(s.clusters[0].multiplicity, 2);
        assert!((s.clusters[0].angle.abs() - PI).abs() < 1e-9);
    }

    #[test]
    fn mu_reads_multiplicities() {
        let x = diag_su(&[0.0, 0.0, 1.2]);
        let e = SymUnitary::identity(3);
        assert_eq!(mu(&x, &e, 0.0, &p()).unwrap(), 2);
        assert_eq!(mu(&x, &e, 1.2, &p()).unwrap(), 1);
        assert_eq!(mu(&x, &e, -0.5, &p()).unwrap(), 0);
        // total multiplicity
        let s = relative_spectrum(&x, &e, &p()).unwrap();
        let total: usize = s.clusters.iter().map(|c| c.multiplicity).sum();
        assert_eq!(total, 3);
    }

    #[test]
    fn mu_against_rank_formula() {
        // μ(x, e, 0) = n − rank(x − e)
        let x = diag_su(&[0.0, 0.0, -2.1, 0.9]);
        let e = SymUnitary::identity(4);
        let m = mu(&x, &e, 0.0, &p()).unwrap();
        let d = x.matrix() - e.matrix();
        let sv = d.svd(false, false).singular_values;
        let smax = sv.iter().fold(0.0f64, |a, &b| a.max(b));
        let rank = sv.iter().filter(|&&s| s > 1e-8 * smax).count();
        assert_eq!(m, 4 - rank);
        assert_eq!(m, 2);
    }

    #[test]
    fn rotation_of_base_shifts_spectrum() {
        // U_{x, e^{iθ}e} = e^{−iθ}·U_{x,e}
        let x = diag_su(&[0.3, -1.1]);
        let theta = 0.7;
        let e_rot = SymUnitary::scalar(2, theta);
        let s = relative_spectrum(&x, &e_rot, &p()).unwrap();
        let mut want = [0.3 - theta, -1.1 - theta];
        want.sort_by(f64::total_cmp);
        for (c, w) in s.clusters.iter().zip(want.iter()) {
            assert!(arc_dist(c.angle, *w) < 1e-12);
        }
    }

    #[test]
    fn conjugate_spectra_match() {
        let c = 0.6f64.cos();
        let s = 0.6f64.sin();
        let frame = RMat::from_row_slice(2, 2, &[c, -s, s, c]);
        let x = SymUnitary::from_frame_angles(&frame, &[2.4, -0.9]).unwrap();
        let e = SymUnitary::from_frame_angles(&frame, &[0.1, 1.8]).unwrap();
        assert!(conjugate_spectrum_check(&x, &e, &p()).unwrap());
        // and for non-commuting pairs too
        let f2 = RMat::from_row_slice(2, 2, &[(1.1f64).cos(), -(1.1f64).sin(), (1.1f64).sin(), (1.1f64).cos()]);
        let y = SymUnitary::from_frame_angles(&f2, &[1.0, -2.8]).unwrap();
        assert!(conjugate_spectrum_check(&y, &e, &p()).unwrap());
    }

    #[test]
    fn idempotent_selects_a_cluster() {
        let x = diag_su(&[0.0, FRAC_PI_2]);
        let e = SymUnitary::identity(2);
        let si = spectral_idempotent(&x, &e, &[0.0], &p()).unwrap();
        assert_eq!(si.rank, 1);
        let want = CMat::from_fn(2, 2, |i, j| {
            if i == 0 && j == 0 {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        assert!((si.p.clone() - want).norm() < 1e-12);
        // {p, e, p} = p
        let pep = triple_product(&si.p, e.matrix(), &si.p).unwrap();
        assert!((pep - &si.p).norm() < 1e-12);
    }

    #[test]
    fn idempotent_of_everything_is_e_and_of_nothing_is_zero() {
        let c = 1.3f64.cos();
        let s = 1.3f64.sin();
        let frame = RMat::from_row_slice(2, 2, &[c, -s, s, c]);
        let x = SymUnitary::from_frame_angles(&frame, &[0.4, -2.2]).unwrap();
        let e = SymUnitary::identity(2);
        let spec = relative_spectrum(&x, &e, &p()).unwrap();
        let all: Vec<f64> = spec.clusters.iter().map(|c| c.angle).collect();
        let si = spectral_idempotent(&x, &e, &all, &p()).unwrap();
        assert!((si.p.clone() - e.matrix()).norm() < 1e-10);
        let si0 = spectral_idempotent(&x, &e, &[], &p()).unwrap();
        assert!(si0.p.norm() < 1e-14);
        assert_eq!(si0.rank, 0);
    }

    #[test]
    fn idempotent_rejects_non_spectral_angles() {
        let x = diag_su(&[0.0, FRAC_PI_2]);
        let e = SymUnitary::identity(2);
        assert!(matches!(
            spectral_idempotent(&x, &e, &[0.7], &p()),
            Err(Error::NonSpectralArc(_))
        ));
    }

    #[test]
    fn idempotent_is_symmetric_for_generic_base() {
        // non-commuting frames: p must still be complex symmetric
        let c = 0.5f64.cos();
        let s = 0.5f64.sin();
        let f1 = RMat::from_row_slice(2, 2, &[c, -s, s, c]);
        let c2 = (-1.2f64).cos();
        let s2 = (-1.2f64).sin();
        let f2 = RMat::from_row_slice(2, 2, &[c2, -s2, s2, c2]);
        let x = SymUnitary::from_frame_angles(&f1, &[0.9, -2.6]).unwrap();
        let e = SymUnitary::from_frame_angles(&f2, &[0.3, 1.4]).unwrap();
        let spec = relative_spectrum(&x, &e, &p()).unwrap();
        let si = spectral_idempotent(&x, &e, &[spec.clusters[0].angle], &p()).unwrap();
        assert!(crate::cmat::symmetry_defect(&si.p) < 1e-10);
        let pep = triple_product(&si.p, e.matrix(), &si.p).unwrap();
        assert!((pep - &si.p).norm() < 1e-10);
    }

    #[test]
    fn budget_of_the_unit() {
        let e = SymUnitary::identity(2);
        let rho = perturbation_budget(&e, &e, FRAC_PI_2, &p()).unwrap();
        assert!((rho - std::f64::consts::SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn budget_minimizes_over_the_spectrum() {
        let x = diag_su(&[0.0, 3.0 * PI / 4.0]);
        let e = SymUnitary::identity(2);
        let rho = perturbation_budget(&x, &e, FRAC_PI_2, &p()).unwrap();
        let want = chordal_dist(3.0 * PI / 4.0, FRAC_PI_2).min(chordal_dist(0.0, FRAC_PI_2));
        assert!((rho - want).abs() < 1e-12);
    }

    #[test]
    fn budget_rejects_spectrum_in_the_arc() {
        let x = diag_su(&[0.0, 0.4]);
        let e = SymUnitary::identity(2);
        assert!(matches!(
            perturbation_budget(&x, &e, FRAC_PI_2, &p()),
            Err(Error::ArcNotClear { .. })
        ));
        // a cluster exactly on the fence is also rejected
        let y = diag_su(&[0.0, FRAC_PI_2]);
        assert!(matches!(
            perturbation_budget(&y, &e, FRAC_PI_2, &p()),
            Err(Error::ArcNotClear { .. })
        ));
    }

    #[test]
    fn upper_arc_count_and_ambiguity() {
        let x = diag_su(&[-0.4, 0.0, 0.3, 1.0]);
        let e = SymUnitary::identity(4);
        let s = relative_spectrum(&x, &e, &p()).unwrap();
        assert_eq!(s.count_upper_arc(0.7, 1e-8).unwrap(), 2); // angles 0, 0.3
        assert_eq!(s.count_upper_arc(1.5, 1e-8).unwrap(), 3); // + angle 1.0
        assert!(matches!(
            s.count_upper_arc(0.3, 1e-8),
            Err(Error::AmbiguousEndpoint { .. })
        ));
    }

    #[test]
    fn symmetric_arc_count() {
        let x = diag_su(&[-0.4, 0.0, 0.3, 2.0]);
        let e = SymUnitary::identity(4);
        let s = relative_spectrum(&x, &e, &p()).unwrap();
        assert_eq!(s.count_symmetric_arc(0.5, 1e-8), 3);
        assert_eq!(s.count_symmetric_arc(0.1, 1e-8), 1);
    }

    #[test]
    fn restricted_spectrum_matches_arc() {
        // eigenvalues of Π·u·Π on the range of Π are exactly the selected arc
        let c = 0.85f64.cos();
        let s = 0.85f64.sin();
        let frame = RMat::from_row_slice(3, 3, &[c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0]);
        let x = SymUnitary::from_frame_angles(&frame, &[0.5, -1.9, 2.7]).unwrap();
        let e = SymUnitary::identity(3);
        let si = spectral_idempotent(&x, &e, &[0.5, 2.7], &p()).unwrap();
        // p·conj(p) is the projector Π onto the selected eigenspace; the
        // compression of u there has spectrum {e^{i0.5}, e^{i2.7}} plus the
        // kernel's zeros.
        let u = relative_unitary(&x, &e).unwrap();
        let pi = &si.p * crate::cmat::conj(&si.p);
        let comp = &pi * u * &pi;
        let ne = crate::eigen::normal_eigen(&comp).unwrap();
        let mut big: Vec<f64> = ne
            .values
            .iter()
            .filter(|z| z.norm() > 0.5)
            .map(|z| z.arg())
            .collect();
        big.sort_by(f64::total_cmp);
        assert_eq!(big.len(), 2);
        assert!((big[0] - 0.5).abs() < 1e-10);
        assert!((big[1] - 2.7).abs() < 1e-10);
    }
}
