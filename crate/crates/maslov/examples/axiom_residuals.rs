//! The JB*-triple axioms of Sym(ℂⁿ), checked at machine precision.
//!
//! The triple product {x,y,z} = ½(x·conj(y)·z + z·conj(y)·x) must satisfy
//! the Jordan triple identity and the cubic norm axiom ‖{x,x,x}‖ = ‖x‖³
//! (in the operator norm). Residuals on random inputs sit at the rounding
//! floor — this example prints the worst cases over a quick sweep.

use maslov::jordan::{bergman, validate_axioms};
use maslov::{cmat, sample, SymUnitary, C64};
use rand::Rng;

fn main() {
    let mut rng = sample::rng(4);
    let mut worst_triple = 0.0f64;
    let mut worst_norm = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(1..=5usize);
        let draw = |rng: &mut _| {
            let a = sample::rand_unit(rng, n).into_matrix();
            let b = sample::rand_unit(rng, n).into_matrix();
            cmat::symmetrize(&(a + b * C64::new(0.6, 0.3)))
        };
        let (x, y, z, u, v) = (
            draw(&mut rng),
            draw(&mut rng),
            draw(&mut rng),
            draw(&mut rng),
            draw(&mut rng),
        );
        let report = validate_axioms(&x, &y, &z, &u, &v).unwrap();
        worst_triple = worst_triple.max(report.triple_identity_residual);
        worst_norm = worst_norm.max(report.norm_axiom_rel_error);
    }
    println!("200 random quintuples, n ≤ 5:");
    println!("    worst Jordan triple identity residual: {worst_triple:.3e}");
    println!("    worst cubic norm axiom relative error: {worst_norm:.3e}");

    // Bergman operators B(x, y) = Id − 2·L(x,y) + Q(x)·Q(y) acting on an
    // orthonormal basis of Sym(ℂⁿ); the spectrum of B(x, e) is pinned to the
    // relative spectrum of x (see the spectral module).
    let x = sample::rand_unit(&mut rng, 3);
    let e = SymUnitary::identity(3);
    let b = bergman(x.matrix(), e.matrix()).unwrap();
    let dense = b.dense();
    println!(
        "\nBergman operator B(x, e) at n = 3: dense matrix is {}×{}, min singular value {:.3e}",
        dense.nrows(),
        dense.ncols(),
        b.min_singular_value(),
    );
}
