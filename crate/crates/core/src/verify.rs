//! Numerical verification harness: residual suites for the algebraic
//! identities, finite-difference Jacobians in tangent frames, degeneracy
//! sweeps along map families, and degree-sign checks.

use nalgebra::SMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::manifold::{
    antipodal, embed7, project_s5, retract, sample_s6, sample_unit_quaternions, so4_act,
    tangent_frame, PointS6, So4Element, SPHERE_TOL,
};
use crate::maps::{
    big_b, bm, bm_pow, conj_antisymmetry_check, g_profile, homotopy_h, homotopy_unnormalized,
    j_process, j_process_inv, rational_q, rational_r, sigma_k, GroupMap, MapFamily, SelfMap,
};
use crate::quat::conj_by;

pub type Mat6 = SMatrix<f64, 6, 6>;

/// Default finite-difference step: balances truncation against rounding for
/// double precision on unit-scale geometry.
pub const DEFAULT_FD_STEP: f64 = 1e-5;

/// Threshold for algebraic-identity suites.
pub const ALGEBRAIC_TOL: f64 = 1e-11;

/// Threshold for identities that are exact up to a handful of rounding steps.
pub const TIGHT_TOL: f64 = 1e-12;

/// Threshold for the iterated power-law residual (12 compositions).
pub const POWER_TOL: f64 = 1e-10;

/// Observed lower bound asserted for |H_hat| over the sweep.
pub const HOMOTOPY_MIN_NORM: f64 = 1e-3;

/// The 21-point grid used for every s-sweep of the homotopy.
pub fn s_grid(n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![0.0];
    }
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub samples: usize,
    pub max_residual: f64,
    pub mean_residual: f64,
    pub worst_point: PointS6,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRecord {
    pub s: f64,
    pub min_abs_det: f64,
    pub min_singular_value: f64,
    pub sign_changes: usize,
    pub samples: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct DegreeSign {
    pub sign: i32,
    pub unanimous: bool,
    /// Points where |det| fell below the 10 h^2 floor; excluded from the
    /// sign tally.
    pub inconclusive: usize,
}

struct Accum {
    max: f64,
    sum: f64,
    count: usize,
    worst: PointS6,
}

impl Accum {
    fn new(fallback: PointS6) -> Self {
        Accum { max: 0.0, sum: 0.0, count: 0, worst: fallback }
    }

    fn push(&mut self, residual: f64, at: &PointS6) {
        self.sum += residual;
        self.count += 1;
        if residual > self.max {
            self.max = residual;
            self.worst = *at;
        }
    }

    fn report(self, suite: &str, samples: usize, threshold: f64) -> VerifyReport {
        let mean = if self.count == 0 { 0.0 } else { self.sum / self.count as f64 };
        VerifyReport {
            suite: suite.to_string(),
            samples,
            max_residual: self.max,
            mean_residual: mean,
            worst_point: self.worst,
            threshold,
            pass: self.max < threshold,
        }
    }
}

pub const SUITE_NAMES: &[&str] = &[
    "branch_bm",
    "equivariance_bm",
    "equivariance_H",
    "thm1_inverse",
    "thm1_power",
    "thm2_involution",
    "endpoints",
    "linear_action",
    "s5_restrict",
    "conj_antisymmetry",
    "profile_values",
    "homotopy_nondegenerate",
];

pub fn default_threshold(suite: &str) -> f64 {
    match suite {
        "thm1_power" => POWER_TOL,
        "branch_bm" | "endpoints" | "s5_restrict" | "conj_antisymmetry" | "profile_values" => {
            TIGHT_TOL
        }
        "homotopy_nondegenerate" => 1e-15,
        _ => ALGEBRAIC_TOL,
    }
}

/// Run one named residual suite. Deterministic for a given (seed, samples).
pub fn residual_suite(name: &str, samples: usize, seed: u64) -> Result<VerifyReport> {
    let threshold = default_threshold(name);
    let pts = sample_s6(seed, samples);
    let fallback = pts.first().copied().unwrap_or_else(|| sample_s6(0, 1)[0]);
    let mut acc = Accum::new(fallback);
    match name {
        "branch_bm" => {
            // random points on the singular orbit w = 0
            for q in sample_unit_quaternions(seed, samples) {
                let p = q.im().scale(1.0 / q.im().norm());
                let x = PointS6::new(p, crate::quat::Quaternion::ZERO)?;
                for n in 0..=12 {
                    let expect = if n % 2 == 0 { 1.0 } else { -1.0 };
                    let r = bm_pow(n, &x)
                        .dist(crate::quat::Quaternion::scalar(expect));
                    acc.push(r, &x);
                }
            }
        }
        "equivariance_bm" => {
            let qs = sample_unit_quaternions(seed + 1, samples);
            let rs = sample_unit_quaternions(seed + 2, samples);
            // under the action (q,r).(p,w) = (q p q̄, r w q̄) the conjugation
            // collapses onto the r factor: b(g.x) = r b(x) r̄
            for ((x, q), r) in pts.iter().zip(qs).zip(rs) {
                let g = So4Element::new(q, r)?;
                let lhs = bm(&so4_act(&g, x));
                let rhs = conj_by(g.r(), bm(x));
                acc.push(lhs.dist(rhs), x);
            }
        }
        "equivariance_H" => {
            let qs = sample_unit_quaternions(seed + 1, samples);
            let rs = sample_unit_quaternions(seed + 2, samples);
            for ((x, q), r) in pts.iter().zip(qs).zip(rs) {
                let g = So4Element::new(q, r)?;
                let gx = so4_act(&g, x);
                for s in s_grid(21) {
                    let lhs = homotopy_h(s, &gx)?;
                    let rhs = conj_by(g.r(), homotopy_h(s, x)?);
                    acc.push(lhs.dist(rhs), x);
                }
            }
        }
        "thm1_inverse" => {
            for x in &pts {
                for alpha in equivariant_alpha_set() {
                    let y = j_process(&alpha, x)?;
                    let back = j_process_inv(&alpha, &y)?;
                    acc.push(back.dist(x), x);
                }
            }
        }
        "thm1_power" => {
            let alphas = [
                GroupMap::Bm,
                GroupMap::Q,
                GroupMap::H(0.25),
                GroupMap::H(0.5),
                GroupMap::H(0.75),
            ];
            for x in &pts {
                for alpha in alphas {
                    let mut iter = *x;
                    for k in 1..=12 {
                        iter = j_process(&alpha, &iter)?;
                        let direct = j_process(&alpha.pow(k), x)?;
                        acc.push(iter.dist(&direct), x);
                    }
                }
            }
        }
        "thm2_involution" => {
            for x in &pts {
                for alpha in equivariant_alpha_set() {
                    let once = antipodal(&j_process(&alpha, x)?);
                    let twice = antipodal(&j_process(&alpha, &once)?);
                    acc.push(twice.dist(x), x);
                }
            }
        }
        "endpoints" => {
            for x in &pts {
                let r0 = homotopy_h(0.0, x)?.dist(bm(x));
                let r1 = homotopy_h(1.0, x)?.dist(rational_q(x));
                let r2 = rational_r(x).dist(&j_process(&GroupMap::Q, x)?);
                acc.push(r0.max(r1).max(r2), x);
            }
        }
        "linear_action" => {
            for x in &pts {
                let lhs = embed7(&sigma_k(1, x));
                let rhs = big_b(x) * embed7(x);
                acc.push((lhs - rhs).norm(), x);
            }
        }
        "s5_restrict" => {
            for x in &pts {
                let y = project_s5(x)?;
                let mut r: f64 = 0.0;
                for k in [1, 2, 12] {
                    r = r.max(sigma_k(k, &y).w.a.abs());
                }
                r = r.max(rational_r(&y).w.a.abs());
                acc.push(r, &y);
            }
        }
        "conj_antisymmetry" => {
            for x in &pts {
                acc.push(conj_antisymmetry_check(x), x);
            }
        }
        "profile_values" => {
            use std::f64::consts::PI;
            let x = fallback;
            acc.push((g_profile(0.0)? - PI).abs(), &x);
            acc.push((g_profile(1.0)? - PI / 2.0).abs(), &x);
            acc.push((g_profile(0.5)? - 8.0 / 3.0).abs(), &x);
        }
        "homotopy_nondegenerate" => {
            // residual is the shortfall of |H_hat| below the observed floor;
            // any positive value fails
            for x in &pts {
                for s in s_grid(21) {
                    let n = homotopy_unnormalized(s, x)?.norm();
                    acc.push((HOMOTOPY_MIN_NORM - n).max(0.0), x);
                }
            }
        }
        _ => return Err(Error::UnknownSuite(name.to_string())),
    }
    Ok(acc.report(name, samples, threshold))
}

/// The conjugation-equivariant maps exercised by the theorem suites:
/// b, Q, and the homotopy across the 21-point grid.
fn equivariant_alpha_set() -> Vec<GroupMap> {
    let mut v = vec![GroupMap::Bm, GroupMap::Q];
    v.extend(s_grid(21).into_iter().map(GroupMap::H));
    v
}

/// Central-difference Jacobian of a self-map in the deterministic tangent
/// frames at `x` and at the image point; second-order accurate in `h`.
pub fn jacobian_fd<F>(map: F, x: &PointS6, h: f64) -> Result<Mat6>
where
    F: Fn(&PointS6) -> Result<PointS6>,
{
    if !(1e-7..=1e-3).contains(&h) {
        return Err(Error::BadStep { h });
    }
    let y0 = map(x)?;
    let y0_norm = y0.norm_sq();
    if (y0_norm - 1.0).abs() >= SPHERE_TOL {
        return Err(Error::NotOnSphere { norm_sq: y0_norm });
    }
    let frame_x = tangent_frame(x);
    let frame_y = tangent_frame(&y0);
    let base = embed7(x);
    let mut m = Mat6::zeros();
    for (k, fk) in frame_x.iter().enumerate() {
        let plus = map(&retract(&(base + fk * h))?)?;
        let minus = map(&retract(&(base - fk * h))?)?;
        let d = (embed7(&plus) - embed7(&minus)) / (2.0 * h);
        for (i, fi) in frame_y.iter().enumerate() {
            m[(i, k)] = fi.dot(&d);
        }
    }
    Ok(m)
}

/// Evaluate a named self-map for Jacobian work.
pub fn self_map_fn(map: SelfMap) -> impl Fn(&PointS6) -> Result<PointS6> {
    move |x| map.eval(x)
}

/// Determinant/singular-value statistics of `J_{alpha_s}` over an s-grid.
pub fn degeneracy_sweep(
    family: MapFamily,
    grid: &[f64],
    samples: usize,
    seed: u64,
    h: f64,
) -> Result<Vec<SweepRecord>> {
    let pts = sample_s6(seed, samples);
    let mut records = Vec::with_capacity(grid.len());
    for &s in grid {
        let alpha = family.at(s);
        let mut min_abs_det = f64::INFINITY;
        let mut min_sv = f64::INFINITY;
        let mut sign_changes = 0usize;
        for x in &pts {
            let jac = jacobian_fd(|p| j_process(&alpha, p), x, h)?;
            let det = jac.determinant();
            if det <= 0.0 {
                sign_changes += 1;
            }
            min_abs_det = min_abs_det.min(det.abs());
            let sv = jac.svd(false, false).singular_values;
            min_sv = min_sv.min(sv[sv.len() - 1]);
        }
        records.push(SweepRecord {
            s,
            min_abs_det,
            min_singular_value: min_sv,
            sign_changes,
            samples,
        });
    }
    Ok(records)
}

/// Sign of the Jacobian determinant over a sample set. For a diffeomorphism
/// of a connected manifold this is the degree.
pub fn degree_sign<F>(map: F, samples: usize, seed: u64, h: f64) -> Result<DegreeSign>
where
    F: Fn(&PointS6) -> Result<PointS6>,
{
    let floor = 10.0 * h * h;
    let mut sign = 0i32;
    let mut unanimous = true;
    let mut inconclusive = 0usize;
    for x in sample_s6(seed, samples) {
        let det = jacobian_fd(&map, &x, h)?.determinant();
        if det.abs() < floor {
            inconclusive += 1;
            continue;
        }
        let s = if det > 0.0 { 1 } else { -1 };
        if sign == 0 {
            sign = s;
        } else if sign != s {
            unanimous = false;
        }
    }
    if inconclusive > 0 {
        unanimous = false;
    }
    Ok(DegreeSign { sign, unanimous, inconclusive })
}

pub fn sweep_csv_header() -> &'static str {
    "s,min_abs_det,min_singular_value,sign_changes,samples"
}

pub fn sweep_csv_row(r: &SweepRecord) -> String {
    format!(
        "{},{},{},{},{}",
        r.s, r.min_abs_det, r.min_singular_value, r.sign_changes, r.samples
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quat::Quaternion;

    #[test]
    fn identity_jacobian() {
        for x in sample_s6(21, 10) {
            let jac = jacobian_fd(|p| Ok(*p), &x, DEFAULT_FD_STEP).unwrap();
            assert!((jac - Mat6::identity()).norm() < 1e-9);
        }
    }

    #[test]
    fn antipodal_is_isometry() {
        for x in sample_s6(22, 10) {
            let jac = jacobian_fd(|p| Ok(antipodal(p)), &x, DEFAULT_FD_STEP).unwrap();
            assert!((jac.determinant().abs() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn sigma_det_positive_at_fixed_point() {
        let x = PointS6::new(
            crate::quat::PureImaginary::new(0.0, 1.0, 0.0),
            Quaternion::ZERO,
        )
        .unwrap();
        let jac = jacobian_fd(|p| Ok(sigma_k(1, p)), &x, DEFAULT_FD_STEP).unwrap();
        let det = jac.determinant();
        assert!(det > 0.0, "det = {det}");
        // cross-check |det| against the product of singular values
        let sv = jac.svd(false, false).singular_values;
        let prod: f64 = sv.iter().product();
        assert!((det.abs() - prod).abs() < 1e-8 * prod.max(1.0));
    }

    #[test]
    fn fd_step_validation() {
        let x = sample_s6(23, 1)[0];
        assert!(jacobian_fd(|p| Ok(*p), &x, 1e-2).is_err());
        assert!(jacobian_fd(|p| Ok(*p), &x, 1e-8).is_err());
    }

    #[test]
    fn fd_second_order_convergence() {
        // residual against the h/4 reference shrinks ~4x when h halves
        for x in sample_s6(24, 10) {
            let map = |p: &PointS6| Ok(sigma_k(1, p));
            let j_h = jacobian_fd(map, &x, 4e-4).unwrap();
            let j_h2 = jacobian_fd(map, &x, 2e-4).unwrap();
            let j_ref = jacobian_fd(map, &x, 1e-4).unwrap();
            let e_h = (j_h - j_ref).norm();
            let e_h2 = (j_h2 - j_ref).norm();
            // (e_h - e_h2*4) should be small relative to e_h; allow slack
            // for rounding noise
            if e_h > 1e-9 {
                let ratio = e_h / e_h2;
                assert!(ratio > 2.0 && ratio < 8.0, "ratio = {ratio}");
            }
        }
    }

    #[test]
    fn constant_family_has_unit_singular_values() {
        let grid = [0.0, 0.5, 1.0];
        let pts = 20;
        // alpha == 1 gives the identity J-process
        let records: Vec<SweepRecord> = grid
            .iter()
            .map(|&s| {
                let mut min_sv = f64::INFINITY;
                for x in sample_s6(31, pts) {
                    let jac = jacobian_fd(
                        |p| j_process(&GroupMap::Const(Quaternion::ONE), p),
                        &x,
                        DEFAULT_FD_STEP,
                    )
                    .unwrap();
                    let sv = jac.svd(false, false).singular_values;
                    min_sv = min_sv.min(sv[sv.len() - 1]);
                }
                SweepRecord {
                    s,
                    min_abs_det: 0.0,
                    min_singular_value: min_sv,
                    sign_changes: 0,
                    samples: pts,
                }
            })
            .collect();
        for r in records {
            assert!((r.min_singular_value - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn suite_registry() {
        for name in SUITE_NAMES {
            let rep = residual_suite(name, 20, 7).unwrap();
            assert_eq!(rep.pass, rep.max_residual < rep.threshold);
        }
        assert!(matches!(
            residual_suite("nosuchsuite", 1, 0),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn suite_determinism() {
        let a = residual_suite("thm1_inverse", 50, 99).unwrap();
        let b = residual_suite("thm1_inverse", 50, 99).unwrap();
        assert_eq!(a.max_residual, b.max_residual);
        assert_eq!(a.mean_residual, b.mean_residual);
    }

    #[test]
    fn equivariance_identity_element_contributes_zero() {
        let x = sample_s6(41, 1)[0];
        let g = So4Element::identity();
        let lhs = bm(&so4_act(&g, &x));
        let rhs = conj_by(g.q(), bm(&x));
        assert_eq!(lhs.dist(rhs), 0.0);
    }

    #[test]
    fn demo_nonequiv_sweep_runs() {
        let grid = [0.0, 0.5, 1.0];
        let recs = degeneracy_sweep(MapFamily::DemoNonequiv, &grid, 10, 3, DEFAULT_FD_STEP).unwrap();
        assert_eq!(recs.len(), 3);
        for r in &recs {
            assert!(r.min_singular_value >= 0.0);
            assert!(r.min_abs_det.is_finite());
        }
    }
}
