use num_traits::Signed;
use proptest::prelude::*;

use semigroup_core::rational::{frac, int, Rational};
use semigroup_core::semigroup::{apply, apply_basic, decompose};
use semigroup_core::{canonicalize, OmegaFn, Vertex};

fn r(n: i64, d: i64) -> Rational {
    frac(n, d)
}

/// Arbitrary PL data on [0, ∞): increasing abscissae, unconstrained values.
fn raw_vertices() -> impl Strategy<Value = Vec<Vertex>> {
    prop::collection::vec((1i64..=48, -32i64..=32), 0..7).prop_flat_map(|steps| {
        (Just(steps), -32i64..=32).prop_map(|(steps, v0)| {
            let mut u = int(0);
            let mut out = vec![Vertex::new(u.clone(), r(v0, 16))];
            for (du, v) in steps {
                u += r(du, 16);
                out.push(Vertex::new(u.clone(), r(v, 16)));
            }
            out
        })
    })
}

/// Members of C: values in [0, 1], slopes in [-1, 1].
fn member() -> impl Strategy<Value = OmegaFn> {
    (0i64..=16, 0i64..=16, prop::collection::vec((1i64..=48, -8i64..=8), 0..6)).prop_map(|(m, v0, steps)| {
        let mut u = int(0);
        let mut v = r(v0, 16);
        let mut pairs = vec![(u.clone(), v.clone())];
        for (du, slope) in steps {
            let du = r(du, 16);
            u += &du;
            v = (v + r(slope, 8) * du).clamp(int(0), int(1));
            pairs.push((u.clone(), v.clone()));
        }
        OmegaFn::from_pairs(r(m, 16), pairs).unwrap()
    })
}

fn time(max_sixteenths: i64) -> impl Strategy<Value = Rational> {
    (0..=max_sixteenths).prop_map(|n| r(n, 16))
}

fn unit() -> impl Strategy<Value = Rational> {
    (0i64..=12).prop_map(|n| r(n, 12))
}

fn probe_points(vs: &[Vertex]) -> Vec<Rational> {
    let mut us: Vec<Rational> = vs.iter().map(|p| p.u.clone()).collect();
    let mids: Vec<Rational> = us.windows(2).map(|w| (&w[0] + &w[1]) / int(2)).collect();
    let last = us.last().cloned().unwrap_or_else(|| int(0));
    us.extend(mids);
    us.push(last + int(3));
    us
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn canonicalize_is_idempotent_and_pointwise(vs in raw_vertices(), m in -16i64..=16) {
        let x = canonicalize(r(m, 16), vs.clone()).unwrap();
        let again = canonicalize(x.minus_one_value().clone(), x.breakpoints().to_vec()).unwrap();
        prop_assert_eq!(&again, &x);
        let raw = semigroup_core::Pl::new(vs.clone()).unwrap();
        for u in probe_points(&vs).iter().chain(probe_points(x.breakpoints()).iter()) {
            prop_assert_eq!(x.eval(u).unwrap(), raw.eval(u));
        }
        prop_assert_eq!(x.eval(&int(-1)).unwrap(), r(m, 16));
        // no collinear interior vertex survives
        let b = x.breakpoints();
        for w in b.windows(3) {
            let s1 = (&w[1].v - &w[0].v) / (&w[1].u - &w[0].u);
            let s2 = (&w[2].v - &w[1].v) / (&w[2].u - &w[1].u);
            prop_assert_ne!(s1, s2);
        }
    }

    #[test]
    fn json_round_trip(vs in raw_vertices(), m in -16i64..=16) {
        let x = canonicalize(r(m, 16), vs).unwrap();
        let text = x.to_json();
        let back = OmegaFn::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text);
        prop_assert_eq!(back, x);
    }

    #[test]
    fn min_max_agree_pointwise(x in member(), y in member(), ks in prop::collection::vec(0i64..=400, 20)) {
        let lo = x.pl_min(&y);
        let hi = x.pl_max(&y);
        for k in ks {
            let u = r(k, 37);
            let (a, b) = (x.eval(&u).unwrap(), y.eval(&u).unwrap());
            prop_assert_eq!(lo.eval(&u).unwrap(), a.clone().min(b.clone()));
            prop_assert_eq!(hi.eval(&u).unwrap(), a.max(b));
        }
        prop_assert_eq!(lo.combine(&int(1), &hi, &int(1)), x.combine(&int(1), &y, &int(1)));
    }

    #[test]
    fn sup_dist_is_a_metric(x in member(), y in member(), z in member()) {
        let d = |a: &OmegaFn, b: &OmegaFn| a.sup_dist(b);
        prop_assert_eq!(d(&x, &y), d(&y, &x));
        prop_assert!(d(&x, &z) <= d(&x, &y) + d(&y, &z));
        prop_assert_eq!(d(&x, &x), int(0));
        prop_assert_eq!(d(&x, &y) == int(0), x == y);
    }

    #[test]
    fn c_is_convex(x in member(), y in member(), l in unit()) {
        let z = x.combine(&l, &y, &(int(1) - &l));
        prop_assert!(z.in_c().in_c);
    }

    #[test]
    fn alpha_is_nonincreasing_and_lipschitz(x in member(), y in member(), k in 0i64..=200) {
        let a = x.alpha_fn().unwrap();
        for (_, s) in a.slopes() {
            prop_assert!(s <= int(0) && s >= int(-1));
        }
        let u = r(k, 16);
        let b = y.alpha_fn().unwrap();
        prop_assert!((a.eval(&u) - b.eval(&u)).abs() <= x.sup_dist(&y));
    }

    #[test]
    fn isometry(x in member(), y in member(), t in time(80)) {
        let (tx, ty) = (apply(&t, &x).unwrap(), apply(&t, &y).unwrap());
        prop_assert_eq!(tx.sup_dist(&ty), x.sup_dist(&y));
        prop_assert!(tx.in_c().in_c);
    }

    #[test]
    fn semigroup_law(x in member(), t1 in time(48), t2 in time(48)) {
        let lhs = apply(&t1, &apply(&t2, &x).unwrap()).unwrap();
        prop_assert_eq!(lhs, apply(&(&t1 + &t2), &x).unwrap());
        prop_assert_eq!(apply(&int(0), &x).unwrap(), x);
    }

    #[test]
    fn time_lipschitz(x in member(), t1 in time(80), t2 in time(80)) {
        let d = apply(&t1, &x).unwrap().sup_dist(&apply(&t2, &x).unwrap());
        prop_assert!(d <= (&t1 - &t2).abs());
    }

    #[test]
    fn basic_formula_matches_decomposition(x in member(), t in time(16)) {
        prop_assert_eq!(apply_basic(&t, &x).unwrap(), apply(&t, &x).unwrap());
    }

    #[test]
    fn decomposition_reconstructs(n in 0i64..=2000, d in 1i64..=64) {
        let t = r(n, d);
        let dec = decompose(&t).unwrap();
        prop_assert_eq!(dec.time(), t);
        prop_assert!(dec.t_prime >= int(0) && dec.t_prime < r(1, 2));
    }
}
