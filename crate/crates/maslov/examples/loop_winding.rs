//! For closed paths the Maslov index is a winding number.
//!
//! On a loop the index does not depend on the base unit, and it equals the
//! winding number of t ↦ det(x(t)·conj(e)) around the origin — a completely
//! independent computation (continuous argument tracking of one determinant
//! versus arc counting of n eigenvalues). This example checks both claims on
//! the standard full circle x(t) = e^{2πit}·I and on random loops.

use maslov::path::{maslov_index, winding_number_det, Polyline, TripotentPath};
use maslov::{sample, Params, RMat, SymUnitary};

fn full_circle(n: usize) -> TripotentPath {
    let turn = std::f64::consts::TAU;
    TripotentPath::frame_diagonal(
        RMat::identity(n, n),
        (0..n).map(|_| Polyline::linear(0.0, turn)).collect(),
    )
    .expect("identity frame")
}

fn main() {
    let params = Params::default();

    println!("x(t) = e^{{2πit}}·I_n relative to e = I_n:");
    for n in 1..=4 {
        let path = full_circle(n);
        let e = SymUnitary::identity(n);
        let mas = maslov_index(&path, &e, &params).unwrap().value;
        let wind = winding_number_det(&path, &e, &params).unwrap();
        println!("    n = {n}:  Maslov {mas:>2}   det winding {wind:>2}");
    }

    println!("\nrandom loops at n = 3, three random bases each:");
    let mut rng = sample::rng(11);
    for case in 0..4 {
        let (path, expected) = sample::rand_loop(&mut rng, 3, 2);
        let wind = winding_number_det(&path, &SymUnitary::identity(3), &params).unwrap();
        let indices: Vec<i64> = (0..3)
            .map(|_| {
                let e = sample::rand_unit(&mut rng, 3);
                maslov_index(&path, &e, &params).unwrap().value
            })
            .collect();
        println!(
            "    loop {case}: built to wind {expected:>2}, det winding {wind:>2}, \
             indices over three bases {indices:?}"
        );
    }
}
