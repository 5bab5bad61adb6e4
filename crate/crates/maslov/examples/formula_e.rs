//! The half-integer identity tying the two-point index to ι and μ.
//!
//! For lifted points σ̃, τ̃ over a common cover base and any unit e,
//!
//! ```text
//! Mas(σ̃, τ̃; e) = ½·( m(σ̃, τ̃) + ι(e, τ, σ) + μ(τ, e) − μ(σ, e) )
//! ```
//!
//! where m is the Souriau-type two-point index and ι the Kashiwara triple
//! index read through the Lagrangian dictionary. Every term is computed by
//! an independent route (path subdivision, determinant lifts, a quadratic
//! form signature, eigenvalue clustering), so agreement is a strong whole-
//! library consistency check. The example also prints the JSON document the
//! `formula-e` CLI subcommand accepts.

use maslov::bridge::tripotent_to_lagrangian;
use maslov::calculus::{check_formula_e, kashiwara_index, souriau_m};
use maslov::{io, sample, Params};

fn main() {
    let params = Params::default();
    let mut rng = sample::rng(9);

    println!("random configurations (n = 3, deck twists in [−2, 2]):\n");
    for case in 0..5 {
        let sigma = sample::rand_lifted(&mut rng, 3, -2..=2);
        let tau = sample::rand_lifted(&mut rng, 3, -2..=2);
        let e = sample::rand_unit(&mut rng, 3);
        let report = check_formula_e(&sigma, &tau, &e, &params).unwrap();
        println!(
            "    case {case}: Mas = {:>2}   m = {:>2}  ι = {:>2}  μτ = {}  μσ = {}   \
             2·lhs = rhs: {}",
            report.lhs,
            report.m,
            report.iota,
            report.mu_tau,
            report.mu_sigma,
            if report.equal { "yes" } else { "NO" }
        );
    }

    // The ingredients are available on their own.
    let sigma = sample::rand_lifted(&mut rng, 2, 0..=0);
    let tau = sample::rand_lifted(&mut rng, 2, -1..=1);
    let e = sample::rand_unit(&mut rng, 2);
    let frames = [&e, tau.x(), sigma.x()].map(|x| tripotent_to_lagrangian(x).unwrap());
    println!(
        "\nstandalone: m(σ̃,τ̃) = {}   ι(e,τ,σ) = {}",
        souriau_m(&sigma, &tau, &params).unwrap(),
        kashiwara_index(&frames[0], &frames[1], &frames[2], &params).unwrap(),
    );

    println!("\nCLI document for this configuration:\n");
    println!(
        "{}",
        io::to_json_string(&io::formula_e_document(&sigma, &tau, &e, None))
    );
}
