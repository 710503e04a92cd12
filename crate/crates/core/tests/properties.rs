//! Property tests for the algebraic invariants.

use proptest::prelude::*;

use jprocess::manifold::{
    antipodal, embed7, invariant_s, lift7, sample_s6, so4_act, tangent_frame, PointS6, So4Element,
};
use jprocess::maps::{bm, conj_apply, homotopy_h, j_process, j_process_inv, GroupMap};
use jprocess::quat::{conj_action, quat_exp, PureImaginary, Quaternion};

fn quat_strategy() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-2.0f64..2.0).prop_map(Quaternion::from_array)
}

fn unit_quat_strategy() -> impl Strategy<Value = Quaternion> {
    prop::array::uniform4(-1.0f64..1.0)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-2)
        .prop_map(|v| {
            let q = Quaternion::from_array(v);
            q * (1.0 / q.norm())
        })
}

fn pure_strategy() -> impl Strategy<Value = PureImaginary> {
    prop::array::uniform3(-4.0f64..4.0).prop_map(PureImaginary::from_array)
}

fn point_strategy() -> impl Strategy<Value = PointS6> {
    prop::array::uniform7(-1.0f64..1.0)
        .prop_filter("nonzero", |v| v.iter().map(|x| x * x).sum::<f64>() > 1e-2)
        .prop_map(|v| {
            let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            let w = nalgebra::SVector::<f64, 7>::from(v) / n;
            lift7(&w).unwrap()
        })
}

proptest! {
    #[test]
    fn norm_is_multiplicative(x in quat_strategy(), y in quat_strategy()) {
        let lhs = (x * y).norm();
        let rhs = x.norm() * y.norm();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(1.0));
    }

    #[test]
    fn conjugation_preserves_re_and_norm(q in unit_quat_strategy(), x in quat_strategy()) {
        let y = conj_action(q, x).unwrap();
        prop_assert!((y.re() - x.re()).abs() < 1e-12);
        prop_assert!((y.norm() - x.norm()).abs() < 1e-12);
    }

    #[test]
    fn conjugation_composes(q1 in unit_quat_strategy(), q2 in unit_quat_strategy(), x in quat_strategy()) {
        let composed = conj_action(q1 * q2, x).unwrap();
        let nested = conj_action(q1, conj_action(q2, x).unwrap()).unwrap();
        prop_assert!(composed.dist(nested) < 1e-12);
    }

    #[test]
    fn exp_lands_on_unit_sphere(p in pure_strategy()) {
        prop_assert!((quat_exp(p).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_parameter_subgroup_law(
        dir in pure_strategy(),
        s in -4.0f64 * std::f64::consts::PI..4.0 * std::f64::consts::PI,
        t in -4.0f64 * std::f64::consts::PI..4.0 * std::f64::consts::PI,
    ) {
        prop_assume!(dir.norm() > 1e-3);
        let u = dir.scale(1.0 / dir.norm());
        let lhs = quat_exp(u.scale(s)) * quat_exp(u.scale(t));
        let rhs = quat_exp(u.scale(s + t));
        prop_assert!(lhs.dist(rhs) < 1e-10);
    }

    #[test]
    fn so4_action_is_well_defined_on_sign_classes(
        q in unit_quat_strategy(),
        r in unit_quat_strategy(),
        x in point_strategy(),
    ) {
        let g = So4Element::new(q, r).unwrap();
        let h = So4Element::new(-q, -r).unwrap();
        prop_assert!(so4_act(&g, &x).dist(&so4_act(&h, &x)) < 1e-12);
    }

    #[test]
    fn so4_action_preserves_invariant_and_constraint(
        q in unit_quat_strategy(),
        r in unit_quat_strategy(),
        x in point_strategy(),
    ) {
        let g = So4Element::new(q, r).unwrap();
        let y = so4_act(&g, &x);
        prop_assert!((invariant_s(&y) - invariant_s(&x)).abs() < 1e-12);
        prop_assert!((y.norm_sq() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn so4_action_composes(
        q1 in unit_quat_strategy(), r1 in unit_quat_strategy(),
        q2 in unit_quat_strategy(), r2 in unit_quat_strategy(),
        x in point_strategy(),
    ) {
        let g1 = So4Element::new(q1, r1).unwrap();
        let g2 = So4Element::new(q2, r2).unwrap();
        let g12 = g1.compose(&g2).unwrap();
        prop_assert!(so4_act(&g12, &x).dist(&so4_act(&g1, &so4_act(&g2, &x))) < 1e-12);
    }

    #[test]
    fn antipodal_commutes_with_action(
        q in unit_quat_strategy(),
        r in unit_quat_strategy(),
        x in point_strategy(),
    ) {
        let g = So4Element::new(q, r).unwrap();
        prop_assert!(antipodal(&so4_act(&g, &x)).dist(&so4_act(&g, &antipodal(&x))) < 1e-15);
    }

    #[test]
    fn embed_lift_round_trip(x in point_strategy()) {
        let y = lift7(&embed7(&x)).unwrap();
        prop_assert!(x.dist(&y) < 1e-15);
    }

    #[test]
    fn frame_gram_matrix_is_identity(x in point_strategy()) {
        let f = tangent_frame(&x);
        let n = embed7(&x);
        for (i, fi) in f.iter().enumerate() {
            prop_assert!(fi.dot(&n).abs() < 1e-12);
            for (j, fj) in f.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                prop_assert!((fi.dot(fj) - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn bm_is_equivariant(
        q in unit_quat_strategy(),
        r in unit_quat_strategy(),
        x in point_strategy(),
    ) {
        // conjugation collapses onto the r factor of (q,r).(p,w) = (qpq̄, rwq̄)
        let g = So4Element::new(q, r).unwrap();
        let lhs = bm(&so4_act(&g, &x));
        let rhs = g.r() * bm(&x) * g.r().conj();
        prop_assert!(lhs.dist(rhs) < 1e-11);
    }

    #[test]
    fn j_process_inverts_and_preserves_sphere(x in point_strategy(), s in 0.0f64..1.0) {
        for alpha in [GroupMap::Bm, GroupMap::Q, GroupMap::H(s)] {
            let y = j_process(&alpha, &x).unwrap();
            prop_assert!((y.norm_sq() - 1.0).abs() < 1e-12);
            prop_assert!(j_process_inv(&alpha, &y).unwrap().dist(&x) < 1e-11);
        }
    }

    #[test]
    fn involution_squares_to_identity(x in point_strategy(), s in 0.0f64..1.0) {
        let alpha = GroupMap::H(s);
        let once = antipodal(&j_process(&alpha, &x).unwrap());
        let twice = antipodal(&j_process(&alpha, &once).unwrap());
        prop_assert!(twice.dist(&x) < 1e-11);
    }

    #[test]
    fn homotopy_values_are_unit(x in point_strategy(), s in 0.0f64..1.0) {
        prop_assert!((homotopy_h(s, &x).unwrap().norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn conj_apply_preserves_re_w(q in unit_quat_strategy(), x in point_strategy()) {
        let y = conj_apply(q, &x);
        prop_assert!((y.w.a - x.w.a).abs() < 1e-12);
    }
}

#[test]
fn bm_branch_continuity() {
    // approach the w = 0 orbit along fixed directions: no jump at the branch
    let p_dir = PureImaginary::new(3f64.sqrt() / 3.0, 3f64.sqrt() / 3.0, 3f64.sqrt() / 3.0);
    let w_dir = Quaternion::new(0.5, 0.5, 0.5, 0.5);
    let mut prev = f64::INFINITY;
    for wn in [1e-3, 1e-5, 1e-7] {
        let pn = (1.0f64 - wn * wn).sqrt();
        let x = PointS6::new(p_dir.scale(pn), w_dir * wn).unwrap();
        let gap = bm(&x).dist(-Quaternion::ONE);
        assert!(gap < prev, "gap {gap} did not shrink at |w| = {wn}");
        prev = gap;
    }
    assert!(prev < 1e-5);
}

#[test]
fn invariant_mean_matches_uniform_measure() {
    // E[S] = 2 E|p|^2 - 1 = 2(3/7) - 1 = -1/7 for the uniform measure
    let n = 100_000;
    let mean: f64 = sample_s6(2, n).iter().map(invariant_s).sum::<f64>() / n as f64;
    // Var(S) <= 1, so 3 standard errors is amply covered by 0.02
    assert!((mean + 1.0 / 7.0).abs() < 0.02, "mean = {mean}");
}
