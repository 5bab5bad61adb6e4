//! Seeded verification suites.
//!
//! Each suite replays a named battery of randomized checks from a seed and
//! reports the failures it saw instead of aborting on the first one, so a
//! red run shows the whole damage. The CLI exposes them through `verify`.

use serde::Serialize;

use crate::bridge::{
    intersection_dim, lagrangian_to_tripotent, subspace_projector_equivariance,
    tripotent_to_lagrangian,
};
use crate::calculus::{check_formula_e, check_leray, LiftedPoint};
use crate::cmat::SymUnitary;
use crate::error::{Error, Result};
use crate::jordan::validate_axioms;
use crate::path::{concatenate, maslov_index, winding_number_det, TripotentPath};
use crate::sample;
use crate::spectral::{conjugate_spectrum_check, mu, perturbation_budget, relative_spectrum};
use crate::Params;

/// Names of the available suites, in the order `run_all` executes them.
pub const SUITES: &[&str] = &[
    "axioms",
    "spectra",
    "perturbation",
    "subdivision",
    "homotopy",
    "additivity",
    "loops",
    "formula-e",
    "leray",
    "bridge",
];

/// The outcome of one suite.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteOutcome {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    /// True when every case passed.
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Run one named suite.
pub fn run_suite(name: &str, seed: u64, cases: usize, params: &Params) -> Result<SuiteOutcome> {
    let failures = match name {
        "axioms" => axioms(seed, cases),
        "spectra" => spectra(seed, cases, params),
        "perturbation" => perturbation(seed, cases, params),
        "subdivision" => subdivision(seed, cases, params),
        "homotopy" => homotopy(seed, cases, params),
        "additivity" => additivity(seed, cases, params),
        "loops" => loops(seed, cases, params),
        "formula-e" => formula_e(seed, cases, params),
        "leray" => leray(seed, cases, params),
        "bridge" => bridge(seed, cases, params),
        other => return Err(Error::UnknownSuite(other.to_string())),
    };
    Ok(SuiteOutcome {
        name: name.to_string(),
        cases,
        failures,
    })
}

/// Run every suite with the same seed and case count.
pub fn run_all(seed: u64, cases: usize, params: &Params) -> Result<Vec<SuiteOutcome>> {
    SUITES
        .iter()
        .map(|name| run_suite(name, seed, cases, params))
        .collect()
}

fn dims(i: usize, max: usize) -> usize {
    1 + i % max
}

/// Jordan triple identity and the C*-norm axiom on random symmetric data.
fn axioms(seed: u64, cases: usize) -> Vec<String> {
    let mut rng = sample::rng(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let n = dims(i, 6);
        let draw = |r: &mut rand_chacha::ChaCha8Rng| {
            let a = sample::rand_unit(r, n);
            let b = sample::rand_unit(r, n);
            // generic non-unitary symmetric matrix built from two units
            crate::cmat::symmetrize(&(a.matrix() + b.matrix() * crate::cmat::C64::new(0.6, 0.3)))
        };
        let x = draw(&mut rng);
        let y = draw(&mut rng);
        let z = draw(&mut rng);
        let u = draw(&mut rng);
        let v = draw(&mut rng);
        match validate_axioms(&x, &y, &z, &u, &v) {
            Ok(rep) => {
                if rep.triple_identity_residual > 1e-10 {
                    failures.push(format!(
                        "case {i}: triple identity residual {:.3e}",
                        rep.triple_identity_residual
                    ));
                }
                if rep.norm_axiom_rel_error > 1e-8 {
                    failures.push(format!(
                        "case {i}: norm axiom relative error {:.3e}",
                        rep.norm_axiom_rel_error
                    ));
                }
            }
            Err(e) => failures.push(format!("case {i}: {e}")),
        }
    }
    failures
}

/// A pair sharing a frame with a prescribed number of equal angles, so the
/// relative multiplicity at 0 is known by construction.
fn pair_with_intersection(
    rng: &mut rand_chacha::ChaCha8Rng,
    n: usize,
    k: usize,
) -> (SymUnitary, SymUnitary) {
    let frame = sample::rand_orthogonal(rng, n);
    let a = sample::rand_separated_angles(rng, n, 1e-2);
    let mut b = sample::rand_separated_angles(rng, n, 1e-2);
    b[..k].copy_from_slice(&a[..k]);
    (
        SymUnitary::from_frame_angles(&frame, &a).expect("valid frame data"),
        SymUnitary::from_frame_angles(&frame, &b).expect("valid frame data"),
    )
}

/// μ at 0 against the rank formula and the Lagrangian intersection, plus
/// conjugation and rotation laws of relative spectra.
fn spectra(seed: u64, cases: usize, params: &Params) -> Vec<String> {
    use rand::Rng;
    let mut rng = sample::rng(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let n = dims(i, 6);
        let (x, e) = if i % 2 == 0 {
            (sample::rand_unit(&mut rng, n), sample::rand_unit(&mut rng, n))
        } else {
            let k = rng.gen_range(0..=n);
            pair_with_intersection(&mut rng, n, k)
        };
        let mu0 = match mu(&x, &e, 0.0, params) {
            Ok(m) => m,
            Err(err) => {
                failures.push(format!("case {i}: mu failed: {err}"));
                continue;
            }
        };
        // rank of x − e with a relative threshold
        let svd = (x.matrix() - e.matrix()).svd(false, false);
        let smax = svd.singular_values.iter().cloned().fold(0.0f64, f64::max);
        let rank = if smax == 0.0 {
            0
        } else {
            svd.singular_values
                .iter()
                .filter(|s| **s > params.tol_rank * smax)
                .count()
        };
        if mu0 != n - rank {
            failures.push(format!("case {i}: mu(0) = {mu0} but n - rank = {}", n - rank));
        }
        let dim = tripotent_to_lagrangian(&x)
            .and_then(|lx| tripotent_to_lagrangian(&e).and_then(|le| intersection_dim(&lx, &le)));
        match dim {
            Ok(d) if d == mu0 => {}
            Ok(d) => failures.push(format!("case {i}: Lagrangian intersection {d} != mu {mu0}")),
            Err(err) => failures.push(format!("case {i}: bridge failed: {err}")),
        }
        match conjugate_spectrum_check(&x, &e, params) {
            Ok(true) => {}
            Ok(false) => failures.push(format!("case {i}: U(e,x) is not the conjugate of U(x,e)")),
            Err(err) => failures.push(format!("case {i}: conjugation check failed: {err}")),
        }
        // rotation law: spectra of (x, e^{iθ}e) are the −θ shift
        let theta: f64 = rng.gen_range(-2.5..2.5);
        let e_rot = SymUnitary::with_tol(
            e.matrix() * crate::cmat::C64::new(0.0, theta).exp(),
            params.tol_struct,
        )
        .expect("rotation keeps the unit");
        let shifted = relative_spectrum(&x, &e_rot, params).map(|s| {
            let base = relative_spectrum(&x, &e, params).expect("base spectrum exists");
            let mut want: Vec<f64> = base
                .clusters
                .iter()
                .map(|c| crate::angle::canonical_angle(c.angle - theta))
                .collect();
            want.sort_by(f64::total_cmp);
            let got: Vec<f64> = s.clusters.iter().map(|c| c.angle).collect();
            got.len() == want.len()
                && got
                    .iter()
                    .zip(want.iter())
                    .all(|(g, w)| crate::angle::arc_dist(*g, *w) < 1e-7)
        });
        match shifted {
            Ok(true) => {}
            Ok(false) => failures.push(format!("case {i}: rotation law broke at theta {theta:.3}")),
            Err(err) => failures.push(format!("case {i}: rotated spectrum failed: {err}")),
        }
    }
    failures
}

/// Multiplicity conservation inside a spectral fence under perturbations
/// within the Hoffman–Wielandt budget.
fn perturbation(seed: u64, cases: usize, params: &Params) -> Vec<String> {
    use rand::Rng;
    let mut rng = sample::rng(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let n = dims(i, 6);
        let (x, e) = if i % 2 == 0 {
            (sample::rand_unit(&mut rng, n), sample::rand_unit(&mut rng, n))
        } else {
            let k = rng.gen_range(1..=n);
            pair_with_intersection(&mut rng, n, k)
        };
        let spec = match relative_spectrum(&x, &e, params) {
            Ok(s) => s,
            Err(err) => {
                failures.push(format!("case {i}: spectrum failed: {err}"));
                continue;
            }
        };
        // fence strictly below the smallest nonzero cluster angle
        let min_nonzero = spec
            .clusters
            .iter()
            .map(|c| c.angle.abs())
            .filter(|a| *a > params.tol_cluster)
            .fold(f64::INFINITY, f64::min);
        if !min_nonzero.is_finite() {
            // x = e up to phases at 0 only; any fence works
            continue;
        }
        let eps = min_nonzero * rng.gen_range(0.3..0.7);
        let budget = match perturbation_budget(&x, &e, eps, params) {
            Ok(b) => b,
            Err(err) => {
                failures.push(format!("case {i}: budget at eps {eps:.3} failed: {err}"));
                continue;
            }
        };
        let before = spec.count_symmetric_arc(eps, params.tol_cluster);
        let y = match sample::perturb_unit(&mut rng, &x, budget) {
            Ok(y) => y,
            Err(err) => {
                failures.push(format!("case {i}: perturbation failed: {err}"));
                continue;
            }
        };
        match relative_spectrum(&y, &e, params) {
            Ok(sy) => {
                let after = sy.count_symmetric_arc(eps, params.tol_cluster);
                if after != before {
                    failures.push(format!(
                        "case {i}: arc count moved {before} -> {after} inside budget {budget:.3e}"
                    ));
                }
            }
            Err(err) => failures.push(format!("case {i}: perturbed spectrum failed: {err}")),
        }
    }
    failures
}

/// Stability of the index under grid doubling (with freshly chosen arcs).
fn subdivision(seed: u64, cases: usize, params: &Params) -> Vec<String> {
    let mut rng = sample::rng(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let n = dims(i, 6);
        let path = sample::rand_frame_path(&mut rng, n, 4.0);
        let e = sample::rand_unit(&mut rng, n);
        let dense = Params {
            min_grid: params.min_grid * 2 - 1,
            ..params.clone()
        };
        match (maslov_index(&path, &e, params), maslov_index(&path, &e, &dense)) {
            (Ok(a), Ok(b)) => {
                if a.value != b.value {
                    failures.push(format!(
                        "case {i}: index moved {} -> {} under grid doubling",
                        a.value, b.value
                    ));
                }
                if !a.certified || !b.certified {
                    failures.push(format!("case {i}: analytic path left uncertified"));
                }
            }
            (Err(err), _) | (_, Err(err)) => {
                failures.push(format!("case {i}: index failed: {err}"))
            }
        }
    }
    failures
}

/// Invariance under fixed-endpoint interior jitter.
fn homotopy(seed: u64, cases: usize, params: &Params) -> Vec<String> {
    let mut rng = sample::rng(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let n = dims(i, 6);
        let path = sample::rand_frame_path(&mut rng, n, 3.0);
        let e = sample::rand_unit(&mut rng, n);
        let moved = match sample::jitter_interior(&mut rng, &path, 0.25) {
            Ok(p) => p,
            Err(err) => {
                failures.push(format!("case {i}: jitter failed: {err}"));
                continue;
            }
        };
        match (maslov_index(&path, &e, params), maslov_index(&moved, &e, params)) {
            (Ok(a), Ok(b)) => {
                if a.value != b.value {
                    failures.push(format!(
                        "case {i}: fixed-endpoint homotopy moved the index {} -> {}",
                        a.value, b.value
                    ));
                }
            }
            (Err(err), _) | (_, Err(err)) => {
                failures.push(format!("case {i}: index failed: {err}"))
            }
        }
    }
    failures
}

/// Concatenation adds, reversal negates.
fn additivity(seed: u64, cases: usize, params: &Params) -> Vec<String> {
    use rand::Rng;
    let mut rng = sample::rng(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let n = dims(i, 6);
        let first = sample::rand_frame_path(&mut rng, n, 3.0);
        // second leg continues from the first one's endpoint in a new frame?
        // No — concatenation needs matching endpoints, so reuse the final
        // unit as a frame-diagonal start.
        let x1 = match first.eval(1.0) {
            Ok(x) => x,
            Err(err) => {
                failures.push(format!("case {i}: eval failed: {err}"));
                continue;
            }
        };
        let t1 = match crate::eigen::takagi(&x1) {
            Ok(t) => t,
            Err(err) => {
                failures.push(format!("case {i}: takagi failed: {err}"));
                continue;
            }
        };
        let polylines = t1
            .angles
            .iter()
            .map(|&a| crate::path::Polyline::linear(a, a + rng.gen_range(-2.0..2.0)))
            .collect();
        let second = match TripotentPath::frame_diagonal(t1.frame.clone(), polylines) {
            Ok(p) => p,
            Err(err) => {
                failures.push(format!("case {i}: second leg failed: {err}"));
                continue;
            }
        };
        let e = sample::rand_unit(&mut rng, n);
        let run = || -> Result<(i64, i64, i64, i64)> {
            let cat = concatenate(&first, &second)?;
            let a = maslov_index(&first, &e, params)?.value;
            let b = maslov_index(&second, &e, params)?.value;
            let c = maslov_index(&cat, &e, params)?.value;
            let r = maslov_index(&cat.reverse()?, &e, params)?.value;
            Ok((a, b, c, r))
        };
        match run() {
            Ok((a, b, c, r)) => {
                if c != a + b {
                    failures.push(format!("case {i}: {a} + {b} != {c} under concatenation"));
                }
                if r != -c {
                    failures.push(format!("case {i}: reversal gave {r}, expected {}", -c));
                }
            }
            Err(err) => failures.push(format!("case {i}: {err}")),
        }
    }
    failures
}

/// Loop index = det winding, independent of the base.
fn loops(seed: u64, cases: usize, params: &Params) -> Vec<String> {
    let mut rng = sample::rng(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let n = dims(i, 6);
        let (path, total) = sample::rand_loop(&mut rng, n, 2);
        let mut values = Vec::new();
        for _ in 0..3 {
            let e = sample::rand_unit(&mut rng, n);
            match (maslov_index(&path, &e, params), winding_number_det(&path, &e, params)) {
                (Ok(rep), Ok(w)) => {
                    if rep.value != w {
                        failures.push(format!(
                            "case {i}: index {} != winding {w}",
                            rep.value
                        ));
                    }
                    values.push(rep.value);
                }
                (Err(err), _) | (_, Err(err)) => {
                    failures.push(format!("case {i}: loop evaluation failed: {err}"))
                }
            }
        }
        if values.windows(2).any(|w| w[0] != w[1]) {
            failures.push(format!("case {i}: loop index depends on the base: {values:?}"));
        }
        if values.first().is_some_and(|v| *v != total) {
            failures.push(format!(
                "case {i}: loop index {} != constructed winding {total}",
                values[0]
            ));
        }
    }
    failures
}

/// Draw a lifted pair: independent frames, a shared frame, or a pure deck
/// twist of the same unit.
fn lifted_pair(
    rng: &mut rand_chacha::ChaCha8Rng,
    n: usize,
    style: usize,
) -> (LiftedPoint, LiftedPoint) {
    use rand::Rng;
    let twist = |rng: &mut rand_chacha::ChaCha8Rng, x: SymUnitary| {
        let k: i64 = rng.gen_range(-2..=2);
        let lift = crate::eigen::det_arg(x.matrix()) + std::f64::consts::TAU * k as f64;
        LiftedPoint::over_identity(x, lift).expect("principal lift plus full turns is valid")
    };
    match style {
        0 => (
            sample::rand_lifted(rng, n, -2..=2),
            sample::rand_lifted(rng, n, -2..=2),
        ),
        1 => {
            let (a, b) = sample::rand_shared_frame_pair(rng, n);
            (twist(rng, a), twist(rng, b))
        }
        _ => {
            let x = sample::rand_unit(rng, n);
            (twist(rng, x.clone()), twist(rng, x))
        }
    }
}

/// The index relation: 2·Mas(σ̃, τ̃; e) = m + ι + μ(τ,e) − μ(σ,e).
fn formula_e(seed: u64, cases: usize, params: &Params) -> Vec<String> {
    let mut rng = sample::rng(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let n = dims(i, 4);
        let (s, t) = lifted_pair(&mut rng, n, i % 3);
        let e = sample::rand_unit(&mut rng, n);
        match check_formula_e(&s, &t, &e, params) {
            Ok(rep) => {
                if !rep.equal {
                    failures.push(format!(
                        "case {i}: 2·{} != {} (m {}, iota {}, mu {} {})",
                        rep.lhs, rep.rhs_times_two, rep.m, rep.iota, rep.mu_tau, rep.mu_sigma
                    ));
                }
                if rep.rhs_times_two % 2 != 0 {
                    failures.push(format!(
                        "case {i}: right-hand side is not an integer: {}/2",
                        rep.rhs_times_two
                    ));
                }
            }
            Err(err) => failures.push(format!("case {i}: relation failed: {err}")),
        }
    }
    failures
}

/// The Leray cocycle identity on random lifted triples.
fn leray(seed: u64, cases: usize, params: &Params) -> Vec<String> {
    let mut rng = sample::rng(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let n = dims(i, 4);
        let t1 = sample::rand_lifted(&mut rng, n, -2..=2);
        let t2 = sample::rand_lifted(&mut rng, n, -2..=2);
        let e = sample::rand_lifted(&mut rng, n, -2..=2);
        match check_leray(&t1, &t2, &e, params) {
            Ok(rep) => {
                if !rep.holds {
                    failures.push(format!(
                        "case {i}: cocycle broke: lhs {} != rhs {}",
                        rep.lhs, rep.rhs
                    ));
                }
            }
            Err(err) => failures.push(format!("case {i}: cocycle failed: {err}")),
        }
    }
    failures
}

/// Round trips and equivariance of the Lagrangian dictionary.
fn bridge(seed: u64, cases: usize, params: &Params) -> Vec<String> {
    let mut rng = sample::rng(seed);
    let mut failures = Vec::new();
    for i in 0..cases {
        let n = dims(i, 6);
        let x = sample::rand_unit(&mut rng, n);
        let mut run = || -> Result<(f64, f64)> {
            let l = tripotent_to_lagrangian(&x)?;
            let back = lagrangian_to_tripotent(&l)?;
            let unit_trip = x.dist(&back);
            // equivariance: conjugating the unit matches the symplectic
            // action on its subspace
            let u = sample::rand_unit(&mut rng, n); // any unitary works; units are handy
            let moved = crate::bridge::unitary_act(u.matrix(), x.matrix())?;
            let lm = tripotent_to_lagrangian(&SymUnitary::with_tol(moved, params.tol_struct)?)?;
            let equiv = subspace_projector_equivariance(u.matrix(), &l, &lm)?;
            Ok((unit_trip, equiv))
        };
        match run() {
            Ok((rt, eq)) => {
                if rt > 1e-9 {
                    failures.push(format!("case {i}: round trip drifted {rt:.3e}"));
                }
                if eq > 1e-9 {
                    failures.push(format!("case {i}: equivariance defect {eq:.3e}"));
                }
            }
            Err(err) => failures.push(format!("case {i}: bridge failed: {err}")),
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_an_error() {
        assert!(matches!(
            run_suite("nonsense", 1, 1, &Params::default()),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn every_suite_passes_a_smoke_run() {
        let params = Params::default();
        for name in SUITES {
            let out = run_suite(name, 2024, 6, &params).unwrap();
            assert!(
                out.ok(),
                "suite {name} failed: {:?}",
                out.failures
            );
            assert_eq!(out.cases, 6);
        }
    }

    #[test]
    fn suites_are_deterministic() {
        let params = Params::default();
        let a = run_suite("spectra", 7, 8, &params).unwrap();
        let b = run_suite("spectra", 7, 8, &params).unwrap();
        assert_eq!(a.failures, b.failures);
    }
}
