//! Continuously tracked eigenangle flow along a path, as CSV.
//!
//! The index counts crossings; the flow shows them. Angles are matched
//! between consecutive parameters by minimal total arc movement and lifted
//! to ℝ (not wrapped), so a crossing of the base point appears as a column
//! passing through a multiple of 2π. Pipe the output into any plotting tool.

use maslov::path::{eigen_flow, maslov_index, Polyline, TripotentPath};
use maslov::{sample, Params, SymUnitary};

fn main() {
    let params = Params::default();
    let mut rng = sample::rng(2);

    // Three eigenangles in a random frame: one sweeps up through the base
    // point, one dips and returns, one stays put.
    let frame = sample::rand_orthogonal(&mut rng, 3);
    let path = TripotentPath::frame_diagonal(
        frame,
        vec![
            Polyline::linear(-0.7, 1.9),
            Polyline::new(vec![0.0, 0.5, 1.0], vec![1.2, 0.6, 1.2]).unwrap(),
            Polyline::constant(-2.4),
        ],
    )
    .unwrap();
    let e = SymUnitary::identity(3);

    let index = maslov_index(&path, &e, &params).unwrap().value;
    eprintln!("Maslov index of the flow below: {index}");

    let table = eigen_flow(&path, &e, 17, &params).unwrap();
    println!("t,theta_1,theta_2,theta_3");
    for (t, row) in table.ts.iter().zip(&table.angles) {
        println!("{t:.6},{:.9},{:.9},{:.9}", row[0], row[1], row[2]);
    }
}
