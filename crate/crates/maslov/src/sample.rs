//! Seeded generators for units, frames, paths, and lifted points.
//!
//! Everything is driven by an explicit ChaCha stream so that test suites and
//! the `verify` command replay bit-for-bit from a seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bridge::{tripotent_to_lagrangian, LagrangianFrame};
use crate::calculus::LiftedPoint;
use crate::cmat::{RMat, SymUnitary};
use crate::eigen::det_arg;
use crate::error::{Error, Result};
use crate::path::{Polyline, TripotentPath};

/// The replayable generator used across the crate.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard normal via Box–Muller (keeps the dependency surface small).
fn gaussian<R: Rng>(rng: &mut R) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Random real orthogonal matrix: QR of a Gaussian matrix with the sign
/// ambiguity fixed by a positive R diagonal.
pub fn rand_orthogonal<R: Rng>(rng: &mut R, n: usize) -> RMat {
    let m = RMat::from_fn(n, n, |_, _| gaussian(rng));
    let qr = m.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

/// n angles uniform in (−π, π].
pub fn rand_angles<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| crate::angle::canonical_angle(rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI)))
        .collect()
}

/// n angles with pairwise circular distance at least `gap` (and at least
/// `gap` away from the ±π cut), drawn by rejection.
pub fn rand_separated_angles<R: Rng>(rng: &mut R, n: usize, gap: f64) -> Vec<f64> {
    loop {
        let angles = rand_angles(rng, n);
        let clear_cut = angles
            .iter()
            .all(|&a| std::f64::consts::PI - a.abs() >= gap);
        let separated = (0..n).all(|i| {
            (i + 1..n).all(|j| crate::angle::arc_dist(angles[i], angles[j]) >= gap)
        });
        if clear_cut && separated {
            return angles;
        }
    }
}

/// Random symmetric unitary with a generic frame and well-separated angles.
pub fn rand_unit<R: Rng>(rng: &mut R, n: usize) -> SymUnitary {
    let frame = rand_orthogonal(rng, n);
    let angles = rand_separated_angles(rng, n, 1e-3);
    SymUnitary::from_frame_angles(&frame, &angles).expect("random frame data is valid")
}

/// Random Lagrangian frame, through the unit dictionary.
pub fn rand_lagrangian<R: Rng>(rng: &mut R, n: usize) -> LagrangianFrame {
    tripotent_to_lagrangian(&rand_unit(rng, n)).expect("random units have full-rank frames")
}

/// Random real skew-symmetric generator with entries scaled by `scale`.
pub fn rand_skew<R: Rng>(rng: &mut R, n: usize, scale: f64) -> RMat {
    let mut a = RMat::zeros(n, n);
    for i in 0..n {
        for j in (i + 1)..n {
            let v = scale * gaussian(rng);
            a[(i, j)] = v;
            a[(j, i)] = -v;
        }
    }
    a
}

/// Random point of the cover over the identity, with a deck twist drawn
/// from `twists`.
pub fn rand_lifted<R: Rng>(rng: &mut R, n: usize, twists: std::ops::RangeInclusive<i64>) -> LiftedPoint {
    let x = rand_unit(rng, n);
    let k = rng.gen_range(twists);
    let lift = det_arg(x.matrix()) + std::f64::consts::TAU * k as f64;
    LiftedPoint::over_identity(x, lift).expect("principal argument lift is always valid")
}

/// A pair sharing one Takagi frame (spectrally aligned, a stress case for
/// the index relations).
pub fn rand_shared_frame_pair<R: Rng>(rng: &mut R, n: usize) -> (SymUnitary, SymUnitary) {
    let frame = rand_orthogonal(rng, n);
    let a = rand_separated_angles(rng, n, 1e-3);
    let b = rand_separated_angles(rng, n, 1e-3);
    (
        SymUnitary::from_frame_angles(&frame, &a).expect("valid frame data"),
        SymUnitary::from_frame_angles(&frame, &b).expect("valid frame data"),
    )
}

/// Random frame-diagonal path: each angle is a 2–3 piece polyline with
/// total sweep bounded by `sweep` radians.
pub fn rand_frame_path<R: Rng>(rng: &mut R, n: usize, sweep: f64) -> TripotentPath {
    // `sweep` is an amplitude: the sign is ignored and zero is nudged so the
    // sampling ranges below stay non-empty.
    let amp = sweep.abs().max(1e-9);
    let frame = rand_orthogonal(rng, n);
    let polylines = (0..n)
        .map(|_| {
            let start = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            if rng.gen_bool(0.5) {
                Polyline::linear(start, start + rng.gen_range(-amp..amp))
            } else {
                let mid_t = rng.gen_range(0.25..0.75);
                let half = 0.5 * amp;
                let mid = start + rng.gen_range(-half..half);
                let end = mid + rng.gen_range(-half..half);
                Polyline::new(vec![0.0, mid_t, 1.0], vec![start, mid, end])
                    .expect("generated breakpoints are strictly increasing")
            }
        })
        .collect();
    TripotentPath::frame_diagonal(frame, polylines).expect("generated frame is orthogonal")
}

/// Random frame-diagonal loop; returns the path and its total winding
/// Σⱼ wⱼ (each angle returns to its start after wⱼ full turns).
pub fn rand_loop<R: Rng>(rng: &mut R, n: usize, max_wind: i64) -> (TripotentPath, i64) {
    let frame = rand_orthogonal(rng, n);
    let mut total = 0i64;
    let polylines = (0..n)
        .map(|_| {
            let w = rng.gen_range(-max_wind..=max_wind);
            total += w;
            let start = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
            let bulge = rng.gen_range(-1.2..1.2);
            let mid_t = rng.gen_range(0.3..0.7);
            let end = start + std::f64::consts::TAU * w as f64;
            let mid = 0.5 * (start + end) + bulge;
            Polyline::new(vec![0.0, mid_t, 1.0], vec![start, mid, end])
                .expect("generated breakpoints are strictly increasing")
        })
        .collect();
    (
        TripotentPath::frame_diagonal(frame, polylines).expect("generated frame is orthogonal"),
        total,
    )
}

/// A structure-preserving perturbation of x with ‖y − x‖_F < budget:
/// jitter the Takagi angles and rotate the frame, shrinking until the
/// distance condition holds.
pub fn perturb_unit<R: Rng>(rng: &mut R, x: &SymUnitary, budget: f64) -> Result<SymUnitary> {
    let n = x.n();
    let t = crate::eigen::takagi(x)?;
    let mut scale = 0.45 * budget / (n as f64).sqrt();
    let dphi: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let skew = rand_skew(rng, n, 1.0);
    for _ in 0..60 {
        let angles: Vec<f64> = t
            .angles
            .iter()
            .zip(dphi.iter())
            .map(|(a, d)| a + scale * d)
            .collect();
        let rot = crate::eigen::RotationExp::new(&(scale * &skew))?.at(1.0);
        let frame = &rot * &t.frame;
        let y = SymUnitary::from_frame_angles(&frame, &angles)?;
        if x.dist(&y) < budget {
            return Ok(y);
        }
        scale *= 0.5;
    }
    Err(Error::Numerical(format!(
        "could not fit a perturbation inside budget {budget:.3e}"
    )))
}

/// Jitter the interior breakpoint values of a frame-diagonal path by at
/// most ±delta, keeping both endpoints (a fixed-endpoint homotopy).
pub fn jitter_interior<R: Rng>(rng: &mut R, path: &TripotentPath, delta: f64) -> Result<TripotentPath> {
    match &path.kind {
        crate::path::PathKind::FrameDiagonal {
            frame, polylines, ..
        } => {
            let jittered = polylines
                .iter()
                .map(|poly| {
                    let ts: Vec<f64> = if poly.breakpoints().len() == 2 {
                        // give 2-piece polylines an interior point to move
                        vec![0.0, rng.gen_range(0.35..0.65), 1.0]
                    } else {
                        poly.breakpoints().to_vec()
                    };
                    let last = ts.len() - 1;
                    let values: Vec<f64> = ts
                        .iter()
                        .enumerate()
                        .map(|(i, &t)| {
                            let v = poly.eval(t);
                            if i == 0 || i == last {
                                v
                            } else {
                                v + rng.gen_range(-delta..delta)
                            }
                        })
                        .collect();
                    Polyline::new(ts, values).expect("jitter keeps breakpoints valid")
                })
                .collect();
            TripotentPath::frame_diagonal(frame.clone(), jittered)
        }
        _ => Err(Error::BadSamples),
    }
}

/// A sampled snapshot of an analytic path at m uniform parameters.
pub fn sample_path(path: &TripotentPath, m: usize) -> Result<TripotentPath> {
    let m = m.max(2);
    let params: Vec<f64> = (0..m).map(|i| i as f64 / (m - 1) as f64).collect();
    let samples = params
        .iter()
        .map(|&t| path.eval(t))
        .collect::<Result<Vec<_>>>()?;
    TripotentPath::sampled(params, samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::winding_number_det;
    use crate::Params;

    #[test]
    fn generators_replay_from_the_seed() {
        let a = rand_unit(&mut rng(42), 3);
        let b = rand_unit(&mut rng(42), 3);
        assert_eq!(a.matrix(), b.matrix());
        let c = rand_unit(&mut rng(43), 3);
        assert!(a.dist(&c) > 1e-6);
    }

    #[test]
    fn random_orthogonal_is_orthogonal() {
        let mut r = rng(7);
        for n in 1..=6 {
            let q = rand_orthogonal(&mut r, n);
            let defect = (q.transpose() * &q - RMat::identity(n, n)).norm();
            assert!(defect < 1e-12, "n = {n}: defect {defect:.2e}");
        }
    }

    #[test]
    fn separated_angles_respect_the_gap() {
        let mut r = rng(11);
        for _ in 0..20 {
            let a = rand_separated_angles(&mut r, 5, 0.05);
            for i in 0..5 {
                for j in (i + 1)..5 {
                    assert!(crate::angle::arc_dist(a[i], a[j]) >= 0.05);
                }
            }
        }
    }

    #[test]
    fn random_loops_close_and_wind() {
        let mut r = rng(5);
        let params = Params::default();
        for n in 1..=3 {
            let (path, total) = rand_loop(&mut r, n, 2);
            assert!(path.closure_gap().unwrap() <= params.tol_struct);
            let e = rand_unit(&mut r, n);
            assert_eq!(winding_number_det(&path, &e, &params).unwrap(), total);
        }
    }

    #[test]
    fn perturbation_stays_inside_the_budget() {
        let mut r = rng(19);
        for _ in 0..10 {
            let x = rand_unit(&mut r, 4);
            let y = perturb_unit(&mut r, &x, 0.3).unwrap();
            let d = x.dist(&y);
            assert!(d < 0.3 && d > 0.0);
        }
    }

    #[test]
    fn sampled_snapshot_reproduces_the_path() {
        let mut r = rng(23);
        let path = rand_frame_path(&mut r, 3, 2.0);
        let snap = sample_path(&path, 9).unwrap();
        for i in 0..9 {
            let t = i as f64 / 8.0;
            assert!(snap.eval(t).unwrap().dist(&path.eval(t).unwrap()) < 1e-12);
        }
    }

    #[test]
    fn jitter_keeps_endpoints() {
        let mut r = rng(29);
        let path = rand_frame_path(&mut r, 2, 1.5);
        let moved = jitter_interior(&mut r, &path, 0.2).unwrap();
        assert!(path.eval(0.0).unwrap().dist(&moved.eval(0.0).unwrap()) < 1e-12);
        assert!(path.eval(1.0).unwrap().dist(&moved.eval(1.0).unwrap()) < 1e-12);
        assert!(path.eval(0.5).unwrap().dist(&moved.eval(0.5).unwrap()) > 0.0);
    }

    #[test]
    fn lifted_points_carry_their_twists() {
        let mut r = rng(31);
        let a = rand_lifted(&mut r, 2, 0..=0);
        assert!(a.lift().abs() <= std::f64::consts::PI + 1e-12);
        let b = rand_lifted(&mut r, 2, 3..=3);
        assert!(b.lift() > 2.0 * std::f64::consts::TAU);
    }
}
