//! The dictionary Σ ↔ Λ(ℝ²ⁿ): units as Lagrangian subspaces.
//!
//! Every symmetric unitary corresponds to a Lagrangian subspace of ℝ²ⁿ
//! (graph map plus Cayley transform). The translation is exact enough to be
//! used as a cross-check: relative multiplicities on the Σ side must equal
//! intersection dimensions on the Lagrangian side, and the U(n) action on
//! units must match the induced symplectic rotations of subspaces.

use maslov::bridge::{
    intersection_dim, lagrangian_to_tripotent, pair_report, subspace_projector_equivariance,
    tripotent_to_lagrangian, unitary_act, unitary_symplectic,
};
use maslov::spectral::mu;
use maslov::{sample, Params, SymUnitary};

fn main() {
    let params = Params::default();
    let mut rng = sample::rng(3);

    // Round trip Σ → Λ → Σ.
    let x = sample::rand_unit(&mut rng, 3);
    let lambda = tripotent_to_lagrangian(&x).unwrap();
    let back = lagrangian_to_tripotent(&lambda).unwrap();
    println!("round trip drift ‖x′ − x‖ = {:.3e}", back.dist(&x));

    // Intersection dimensions equal relative multiplicities at angle 0.
    // Build pairs sharing a frame with k coinciding eigenvalues.
    println!("\nshared-frame pairs, k coinciding eigenvalues:");
    for k in 0..=3usize {
        let frame = sample::rand_orthogonal(&mut rng, 3);
        let a = sample::rand_separated_angles(&mut rng, 3, 1e-2);
        let mut b = sample::rand_separated_angles(&mut rng, 3, 1e-2);
        b[..k].copy_from_slice(&a[..k]);
        let x = SymUnitary::from_frame_angles(&frame, &a).unwrap();
        let y = SymUnitary::from_frame_angles(&frame, &b).unwrap();
        let mu0 = mu(&y, &x, 0.0, &params).unwrap();
        let dim = intersection_dim(
            &tripotent_to_lagrangian(&x).unwrap(),
            &tripotent_to_lagrangian(&y).unwrap(),
        )
        .unwrap();
        let report = pair_report(&x, &y).unwrap();
        println!(
            "    k = {k}:  μ(y,x,0) = {mu0}   dim(λ∩μ) = {dim}   transverse: {}",
            if report.transverse { "yes" } else { "no" }
        );
    }

    // Equivariance: u acting on units (x ↦ u·x·uᵀ) matches the symplectic
    // matrix M_u acting on subspaces. Any unit is in particular a unitary.
    let u = sample::rand_unit(&mut rng, 3).into_matrix();
    let x2 = sample::rand_unit(&mut rng, 3);
    let moved = SymUnitary::new(unitary_act(&u, x2.matrix()).unwrap()).unwrap();
    let m_u = unitary_symplectic(&u).unwrap();
    println!(
        "\nsymplectic lift M_u: ‖M_uᵀ·Ω·M_u − Ω‖ = {:.3e}",
        (m_u.transpose() * maslov::bridge::omega_matrix(3) * &m_u
            - maslov::bridge::omega_matrix(3))
        .norm()
    );
    let drift = subspace_projector_equivariance(
        &u,
        &tripotent_to_lagrangian(&x2).unwrap(),
        &tripotent_to_lagrangian(&moved).unwrap(),
    )
    .unwrap();
    println!("equivariance defect ‖P(λ(u·x·uᵀ)) − M_u·P(λ(x))·M_uᵀ‖ = {drift:.3e}");
}
