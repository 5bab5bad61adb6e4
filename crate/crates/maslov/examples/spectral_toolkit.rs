//! Relative spectra: clusters, multiplicities, idempotents, budgets.
//!
//! Everything the index machinery consumes is derived from the unitary
//! x·conj(e): its eigenvalues (the relative spectrum U_{x,e}), their
//! clustered multiplicities, the spectral idempotent of a cluster, and the
//! perturbation budget — how far x may move before eigenvalues can enter or
//! leave a fixed arc.

use maslov::spectral::{mu, perturbation_budget, relative_spectrum, spectral_idempotent};
use maslov::{jordan, sample, Params, SymUnitary};

fn main() {
    let params = Params::default();
    let mut rng = sample::rng(5);

    // A unit with a deliberately repeated eigenvalue: angles (0.8, 0.8, −1.9)
    // in a random orthogonal frame.
    let frame = sample::rand_orthogonal(&mut rng, 3);
    let x = SymUnitary::from_frame_angles(&frame, &[0.8, 0.8, -1.9]).unwrap();
    let e = SymUnitary::identity(3);

    let spec = relative_spectrum(&x, &e, &params).unwrap();
    println!("relative spectrum of x against I (n = {}):", spec.n);
    for c in &spec.clusters {
        println!("    angle {:>12.9}   multiplicity {}", c.angle, c.multiplicity);
    }
    println!("μ(x, e, 0)    = {}", mu(&x, &e, 0.0, &params).unwrap());
    println!("μ(x, e, 0.8)  = {}", mu(&x, &e, 0.8, &params).unwrap());

    // The spectral idempotent of the doubled cluster: a rank-2 tripotent c
    // with {c, e, c} = c, reconstructing x's component.
    let idem = spectral_idempotent(&x, &e, &[0.8], &params).unwrap();
    let c = &idem.p;
    let triple_defect = (jordan::triple_product(c, e.matrix(), c).unwrap() - c).norm();
    println!("\nidempotent of the 0.8-cluster:");
    println!("    rank            {}", idem.rank);
    println!("    ‖{{c,e,c}} − c‖   {triple_defect:.3e}");

    // Budget: how far may a unit move before multiplicity leaks out of the
    // arc |θ| ≤ ε? The arc must contain no spectrum besides the cluster at 0,
    // so take a unit that actually touches the base point: angles (0, 0, −1.9).
    let touching = SymUnitary::from_frame_angles(
        &sample::rand_orthogonal(&mut rng, 3),
        &[0.0, 0.0, -1.9],
    )
    .unwrap();
    let eps = 0.6;
    let budget = perturbation_budget(&touching, &e, eps, &params).unwrap();
    println!("\nμ(touching, e) = 2, perturbation budget at ε = {eps}: {budget:.6}");
    let y = sample::perturb_unit(&mut rng, &touching, 0.9 * budget).unwrap();
    let after = relative_spectrum(&y, &e, &params).unwrap();
    println!(
        "    after a 0.9·budget kick the doubled eigenvalue splits but stays in the arc: \
         count |θ| ≤ ε = {}",
        after.count_symmetric_arc(eps, params.tol_cluster)
    );
    for c in &after.clusters {
        println!("    angle {:>12.9}   multiplicity {}", c.angle, c.multiplicity);
    }
}
