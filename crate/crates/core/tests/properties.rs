use std::f64::consts::{PI, TAU};

use biorth_core::algebra::{adjoint, euler_rotation, Quat};
use biorth_core::conformal::{bump, orbit_point, FlatOrbit, PotentialField, PotentialSupport};
use biorth_core::exec::argmin;
use biorth_core::grassmann::{plane_distance, MetricTag, PlaneBase, TwoPlane};
use biorth_core::linalg::Vec5;
use biorth_core::wilking::{act, S2xS3Point};
use biorth_core::wu::{
    flat_plane_from_euler, from_p_coords, sec_wu, to_p_coords, trace_closed_form, trace_direct, HorizontalPlane,
    Interval,
};
use proptest::prelude::*;

fn vec5() -> impl Strategy<Value = Vec5> {
    prop::array::uniform5(-1.0..1.0f64)
}

fn quat() -> impl Strategy<Value = Quat> {
    prop::array::uniform4(-1.0..1.0f64)
        .prop_filter("nonzero", |a| a.iter().map(|x| x * x).sum::<f64>() > 1e-2)
        .prop_map(|a| Quat::from_array(a).normalize())
}

fn angle() -> impl Strategy<Value = f64> {
    0.0..TAU
}

fn plane(a: Vec5, b: Vec5) -> Option<TwoPlane> {
    TwoPlane::from_span(PlaneBase::origin(MetricTag::Euclidean), &a, &b).ok()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn trace_closed_form_matches_matrices(x in angle(), y in angle(), z in angle()) {
        let (c, d) = (trace_closed_form(x, y, z), trace_direct(x, y, z));
        for k in 0..4 {
            prop_assert!((c[k] - d[k]).abs() <= 1e-12);
        }
        // e88 depends on y alone, e18 on (x, y), e81 on (y, z)
        prop_assert!((c[3] - trace_closed_form(0.0, y, 0.0)[3]).abs() <= 1e-15);
        prop_assert!((c[1] - trace_closed_form(x, y, 0.3)[1]).abs() <= 1e-15);
        prop_assert!((c[2] - trace_closed_form(0.3, y, z)[2]).abs() <= 1e-15);
    }

    #[test]
    fn wu_flat_planes_are_horizontal_and_flat(x in angle(), y in angle(), z in angle()) {
        let p = flat_plane_from_euler(x, y, z);
        prop_assert!(sec_wu(&p).unwrap().abs() <= 1e-12);
        let (u, v) = p.coords();
        prop_assert!(HorizontalPlane::from_coords(&u, &v).is_ok());
    }

    #[test]
    fn wu_curvature_is_so3_invariant(a in vec5(), b in vec5(), x in angle(), y in angle(), z in angle()) {
        let Ok(p) = HorizontalPlane::from_span(&from_p_coords(&a), &from_p_coords(&b)) else {
            return Ok(());
        };
        let r = euler_rotation(x, y, z);
        let (u, v) = p.coords();
        let ru = to_p_coords(&adjoint(&r, &from_p_coords(&u)).unwrap());
        let rv = to_p_coords(&adjoint(&r, &from_p_coords(&v)).unwrap());
        let q = HorizontalPlane::from_coords(&ru, &rv).unwrap();
        let (s0, s1) = (sec_wu(&p).unwrap(), sec_wu(&q).unwrap());
        prop_assert!(s0 >= -1e-15 && (s0 - s1).abs() <= 1e-12, "{} vs {}", s0, s1);
    }

    #[test]
    fn intervals_enclose_their_functions(lo in -20.0..20.0f64, w in 0.0..7.0f64, t in 0.0..1.0f64, lo2 in -3.0..3.0f64, w2 in 0.0..2.0f64) {
        let i = Interval::new(lo, lo + w);
        let j = Interval::new(lo2, lo2 + w2);
        let x = lo + t * w;
        let y = lo2 + t * w2;
        prop_assert!(i.contains(x));
        prop_assert!(i.cos().contains(x.cos()));
        prop_assert!(i.sin().contains(x.sin()));
        prop_assert!(i.sqr().contains(x * x));
        prop_assert!((i * j).contains(x * y));
        prop_assert!((i + j).contains(x + y));
        prop_assert!((i - j).contains(x - y));
        prop_assert!(i.scale(-0.7).contains(-0.7 * x));
        prop_assert!(i.cos().lo >= -1.0 - 1e-12 && i.cos().hi <= 1.0 + 1e-12);
    }

    #[test]
    fn bump_is_a_monotone_cutoff(d in 0.0..0.5f64, e in 0.0..0.5f64) {
        let (a, b) = (bump(d, 0.1, 0.25), bump(e, 0.1, 0.25));
        prop_assert!((0.0..=1.0).contains(&a));
        if d <= e {
            prop_assert!(a >= b);
        }
    }

    #[test]
    fn plane_distance_is_a_metric(a in vec5(), b in vec5(), c in vec5(), d in vec5(), t in -3.0..3.0f64) {
        let (Some(p), Some(q)) = (plane(a, b), plane(c, d)) else {
            return Ok(());
        };
        let dpq = plane_distance(&p, &q).unwrap();
        prop_assert!(dpq >= 0.0 && dpq <= PI / 2f64.sqrt() + 1e-12);
        prop_assert!((dpq - plane_distance(&q, &p).unwrap()).abs() <= 1e-12);
        prop_assert!(plane_distance(&p, &p).unwrap() <= 1e-7);
        // another frame of the same plane
        let (ct, st) = (t.cos(), t.sin());
        let u: Vec5 = core::array::from_fn(|k| ct * p.u[k] + st * p.v[k]);
        let v: Vec5 = core::array::from_fn(|k| -st * p.u[k] + ct * p.v[k]);
        let p2 = TwoPlane::from_span(PlaneBase::origin(MetricTag::Euclidean), &u, &v).unwrap();
        prop_assert!((plane_distance(&p2, &q).unwrap() - dpq).abs() <= 1e-7);
    }

    #[test]
    fn quaternion_norm_is_multiplicative(p in quat(), q in quat(), s in 0.1..3.0f64) {
        let a = p.scale(s);
        prop_assert!(((a * q).norm() - a.norm() * q.norm()).abs() <= 1e-12);
        prop_assert!((p * p.conj()).max_abs_diff(Quat::ONE) <= 1e-15);
    }

    #[test]
    fn conjugation_preserves_flat_orbits(q in quat(), k in 0usize..40) {
        for orbit in [FlatOrbit::RealP(1), FlatOrbit::RealP(-1), FlatOrbit::RealV(1), FlatOrbit::RealV(-1), FlatOrbit::Rp3] {
            let x = act(q, q, &orbit_point(orbit, k)).unwrap();
            prop_assert!(orbit.chordal_distance(&x) <= 1e-14, "{:?}: {}", orbit, orbit.chordal_distance(&x));
        }
    }

    #[test]
    fn argmin_agrees_with_a_linear_scan(v in prop::collection::vec(-5i32..5, 1..30)) {
        let xs: Vec<f64> = v.iter().map(|&x| x as f64).collect();
        let (i, m) = argmin(xs.iter().copied()).unwrap();
        let first = xs.iter().position(|&x| x == m).unwrap();
        prop_assert_eq!(i, first);
        prop_assert!(xs.iter().all(|&x| x >= m));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn potential_stays_in_its_bound(p in quat(), v in quat()) {
        let x = S2xS3Point::normalized(p, v);
        let field = PotentialField::standard(PotentialSupport::SpheresAndRp3, 0.1, 0.25).unwrap();
        let phi = field.phi(&x).unwrap();
        prop_assert!(phi <= 0.0 && phi >= -field.phi_bound());
        // and is invariant under simultaneous conjugation
        let y = act(v, v, &x).unwrap();
        prop_assert!((field.phi(&y).unwrap() - phi).abs() <= 1e-9);
    }
}
