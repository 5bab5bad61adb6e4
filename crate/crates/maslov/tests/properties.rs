//! Property-based tests: algebraic identities that must hold for *all*
//! inputs, driven by `proptest` over seeds and parameters rather than a
//! frozen case list. Case counts are kept modest — every property is cheap,
//! and the seeded verify suites already grind large volumes.

use std::f64::consts::PI;

use proptest::prelude::*;

use maslov::angle::{arc_dist, canonical_angle, chordal_dist};
use maslov::bridge::{lagrangian_to_tripotent, tripotent_to_lagrangian};
use maslov::cmat::{symmetrize, C64};
use maslov::eigen::takagi;
use maslov::jordan::triple_product;
use maslov::path::{concatenate, maslov_index, winding_number_det};
use maslov::spectral::relative_spectrum;
use maslov::{sample, Params};

fn cfg(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        // Deterministic enough without regression files; don't litter.
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cfg(64))]

    /// canonical_angle lands in (−π, π] and is 2π-periodic.
    #[test]
    fn canonical_angle_is_canonical(theta in -50.0..50.0f64, k in -3i32..=3) {
        let a = canonical_angle(theta);
        prop_assert!(a > -PI && a <= PI);
        let b = canonical_angle(theta + k as f64 * 2.0 * PI);
        prop_assert!(arc_dist(a, b) < 1e-9);
    }

    /// arc_dist is a metric on the circle with the chordal comparison
    /// 2·sin(arc/2) = chord.
    #[test]
    fn arc_and_chord_agree(a in -10.0..10.0f64, b in -10.0..10.0f64) {
        let arc = arc_dist(a, b);
        prop_assert!((0.0..=PI + 1e-12).contains(&arc));
        prop_assert!((arc_dist(b, a) - arc).abs() < 1e-12);
        let chord = chordal_dist(a, b);
        prop_assert!((chord - 2.0 * (arc / 2.0).sin()).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(cfg(24))]

    /// {x,y,z} is symmetric in its outer arguments and conjugate-linear in
    /// the middle one, for arbitrary symmetric matrices.
    #[test]
    fn triple_product_outer_symmetry(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = sample::rng(seed);
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
            let a = sample::rand_unit(rng, n).into_matrix();
            let b = sample::rand_unit(rng, n).into_matrix();
            symmetrize(&(a + b * C64::new(0.35, -0.6)))
        };
        let (x, y, z) = (draw(&mut rng), draw(&mut rng), draw(&mut rng));
        let xyz = triple_product(&x, &y, &z).unwrap();
        let zyx = triple_product(&z, &y, &x).unwrap();
        prop_assert!((&xyz - &zyx).norm() < 1e-12 * (1.0 + xyz.norm()));
        // conjugate-linearity: {x, α·y, z} = conj(α)·{x,y,z}
        let alpha = C64::new(0.7, 1.3);
        let scaled = triple_product(&x, &(&y * alpha), &z).unwrap();
        prop_assert!((&scaled - &xyz * alpha.conj()).norm() < 1e-11 * (1.0 + xyz.norm()));
    }

    /// Takagi: real orthogonal frame, canonical sorted angles, and the
    /// factorization reproduces the unit.
    #[test]
    fn takagi_shape_on_random_units(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = sample::rng(seed);
        let x = sample::rand_unit(&mut rng, n);
        let tk = takagi(&x).unwrap();
        prop_assert!(tk.angles.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!(tk.angles.iter().all(|&a| a > -PI && a <= PI));
        let ortho = (tk.frame.transpose() * &tk.frame
            - maslov::cmat::RMat::identity(n, n)).norm();
        prop_assert!(ortho < 1e-10);
    }

    /// The Lagrangian dictionary round-trips every unit.
    #[test]
    fn bridge_roundtrip(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = sample::rng(seed);
        let x = sample::rand_unit(&mut rng, n);
        let l = tripotent_to_lagrangian(&x).unwrap();
        let back = lagrangian_to_tripotent(&l).unwrap();
        prop_assert!((back.matrix() - x.matrix()).norm() < 1e-8);
    }

    /// Relative spectrum multiplicities always account for the whole space,
    /// and swapping the pair conjugates the spectrum.
    #[test]
    fn relative_spectrum_is_conjugate_symmetric(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = sample::rng(seed);
        let x = sample::rand_unit(&mut rng, n);
        let e = sample::rand_unit(&mut rng, n);
        let params = Params::default();
        let fwd = relative_spectrum(&x, &e, &params).unwrap();
        let bwd = relative_spectrum(&e, &x, &params).unwrap();
        let total: usize = fwd.clusters.iter().map(|c| c.multiplicity).sum();
        prop_assert_eq!(total, n);
        for c in &fwd.clusters {
            prop_assert!(bwd.clusters.iter().any(|d|
                arc_dist(d.angle, -c.angle) <= 1e-7 && d.multiplicity == c.multiplicity));
        }
    }
}

proptest! {
    #![proptest_config(cfg(12))]

    /// A path followed by its reversal is a null-homotopic loop: Maslov
    /// index and determinant winding both vanish, for any base.
    #[test]
    fn out_and_back_is_null(seed in any::<u64>(), n in 1usize..=3, sweep in -2.2..2.2f64) {
        let mut rng = sample::rng(seed);
        let p = sample::rand_frame_path(&mut rng, n, sweep);
        let loop_path = concatenate(&p, &p.reverse().unwrap()).unwrap();
        let e = sample::rand_unit(&mut rng, n);
        let params = Params::default();
        prop_assert_eq!(maslov_index(&loop_path, &e, &params).unwrap().value, 0);
        prop_assert_eq!(winding_number_det(&loop_path, &e, &params).unwrap(), 0);
    }
}
