//! The circle case n = 1: one eigenvalue walking around U(1).
//!
//! Three classical arcs relative to the base unit e = [1]:
//!
//! * rise:   x(t) = e^{itφ}        starts at e, leaves upward      → index 0
//! * chord:  x(t) = e^{i(tφ+ψ)}    never passes through 1          → index 0
//! * drop:   x(t) = e^{−itφ}       starts at e, leaves downward    → index −1
//!
//! The asymmetry between rise and drop is the half-open counting convention:
//! the arc [0, ε) is closed at 0, so a path sitting at 1 and departing
//! downward loses an eigenvalue from the arc, while departing upward keeps it
//! until it crosses ε (which admissibility forbids).

use maslov::path::{maslov_index, Polyline, TripotentPath};
use maslov::{Params, RMat, SymUnitary};

fn arc(from: f64, to: f64) -> TripotentPath {
    TripotentPath::frame_diagonal(
        RMat::identity(1, 1),
        vec![Polyline::linear(from, to)],
    )
    .expect("1x1 identity frame")
}

fn main() {
    let e = SymUnitary::identity(1);
    let params = Params::default();

    let phi = 2.2;
    let psi = 0.9;
    let cases = [
        ("rise  e^{itφ}", arc(0.0, phi)),
        ("chord e^{i(tφ+ψ)}", arc(psi, psi + phi)),
        ("drop  e^{−itφ}", arc(0.0, -phi)),
    ];

    println!("φ = {phi}, ψ = {psi}\n");
    for (name, path) in &cases {
        let report = maslov_index(path, &e, &params).expect("circle arcs are tame");
        println!("{name}: index {}", report.value);
        for seg in &report.segments {
            println!(
                "    [{:.3}, {:.3}]  ε = {:.4}  k: {} → {}",
                seg.t_start, seg.t_end, seg.eps, seg.k_start, seg.k_end
            );
        }
        println!(
            "    certified: {}\n",
            if report.certified { "yes" } else { "no" }
        );
    }

    // The same drop relative to a rotated base e^{iγ} is a chord: the index
    // depends on where the base sits on the circle.
    let gamma = 1.0;
    let rotated = SymUnitary::scalar(1, gamma);
    let drop = arc(0.0, -phi);
    let report = maslov_index(&drop, &rotated, &params).expect("rotated base");
    println!("drop relative to e^{{iγ}}, γ = {gamma}: index {}", report.value);
}
