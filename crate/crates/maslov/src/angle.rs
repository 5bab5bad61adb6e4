//! Angle arithmetic on the unit circle.
//!
//! Throughout the crate an angle θ names the unitary eigenvalue e^{iθ}.
//! The canonical representative lives in (−π, π], with θ = π assigned to the
//! positive side so the branch cut at −π never carries spectrum of its own.

/// Map an angle to its canonical representative in (−π, π].
///
/// Exact multiples of π land on +π, never −π.
pub fn canonical_angle(theta: f64) -> f64 {
    let tau = std::f64::consts::TAU;
    let mut a = theta.rem_euclid(tau); // [0, 2π)
    if a > std::f64::consts::PI {
        a -= tau;
    }
    // rem_euclid can return exactly 2π for tiny negative inputs ≈ −0.0.
    if a <= -std::f64::consts::PI {
        a += tau;
    }
    a
}

/// Arc-length distance between two angles, in [0, π].
pub fn arc_dist(a: f64, b: f64) -> f64 {
    canonical_angle(a - b).abs()
}

/// Chordal distance |e^{ia} − e^{ib}| = 2·sin(arc/2), in [0, 2].
pub fn chordal_dist(a: f64, b: f64) -> f64 {
    2.0 * (arc_dist(a, b) / 2.0).sin()
}

/// Circular mean of a set of angles (canonical representative).
///
/// Undefined for perfectly balanced inputs; callers only use it on clusters
/// of arc-diameter ≪ π, where it is the unique Fréchet mean.
pub fn circular_mean(angles: &[f64]) -> f64 {
    let (s, c) = angles
        .iter()
        .fold((0.0, 0.0), |(s, c), &a| (s + a.sin(), c + a.cos()));
    canonical_angle(s.atan2(c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn canonical_angle_prefers_positive_pi() {
        assert_eq!(canonical_angle(PI), PI);
        assert_eq!(canonical_angle(-PI), PI);
        assert_eq!(canonical_angle(3.0 * PI), PI);
        assert!(canonical_angle(PI + 1e-12) < 0.0);
    }

    #[test]
    fn canonical_angle_fixes_range() {
        for k in -7..=7 {
            let a = canonical_angle(0.3 + k as f64 * 2.0 * PI);
            assert!((a - 0.3).abs() < 1e-12);
        }
        let a = canonical_angle(-1e-300);
        assert!(a.abs() < 1e-12, "tiny negative input must not wrap, got {a}");
    }

    #[test]
    fn arc_dist_wraps() {
        assert!((arc_dist(PI - 0.1, -PI + 0.1) - 0.2).abs() < 1e-12);
        assert!((arc_dist(0.0, PI) - PI).abs() < 1e-12);
    }

    #[test]
    fn chordal_matches_complex_modulus() {
        for &(a, b) in &[(0.0, 1.0), (2.5, -2.9), (PI, -PI + 0.3)] {
            let z = (num_complex::Complex64::i() * a).exp() - (num_complex::Complex64::i() * b).exp();
            assert!((chordal_dist(a, b) - z.norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn circular_mean_crosses_the_cut() {
        let m = circular_mean(&[PI - 0.1, -PI + 0.1]);
        assert!((m.abs() - PI).abs() < 1e-12);
    }
}
