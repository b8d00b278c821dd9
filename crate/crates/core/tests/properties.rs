//! Property tests for the structural invariants.

use orbiflip::cech::{cech_strand, cover};
use orbiflip::charts::is_small;
use orbiflip::functors::{apply, equivalence_suite, line_on, roundtrip_check, FunctorName, FunctorSpec, RoundTrip};
use orbiflip::graded::torus_characters;
use orbiflip::sheaf::{pullback, pushforward_rule};
use orbiflip::weights::is_well_formed;
use orbiflip::*;
use proptest::prelude::*;

fn weights(len: std::ops::RangeInclusive<usize>, max: i64) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(1..=max, len)
}

fn sequence(
    m: std::ops::RangeInclusive<usize>,
    n: std::ops::RangeInclusive<usize>,
    max: i64,
) -> impl Strategy<Value = WeightSequence> {
    (weights(m, max), weights(n, max)).prop_map(|(a, b)| WeightSequence::new(a, b).unwrap())
}

/// Well-formed, `m, n >= 2`, `sum(a) <= sum(b)`, `m + n <= 6`, entries `<= 4`.
fn flip_side() -> impl Strategy<Value = WeightSequence> {
    sequence(2..=3, 2..=3, 4)
        .prop_filter("well-formed with sum(a) <= sum(b)", |s| is_well_formed(s) && s.sum_a() <= s.sum_b())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normalize_is_idempotent(s in sequence(1..=4, 0..=4, 30)) {
        let once = normalize(&s).output;
        prop_assert_eq!(normalize(&once).output, once.clone());
        prop_assert!(is_well_formed(&once));
    }

    #[test]
    fn classify_is_swap_symmetric(s in sequence(1..=4, 0..=4, 9)) {
        let (c, d) = (classify(&s), classify(&s.swap()));
        prop_assert_eq!(c.klevel, -d.klevel);
        prop_assert_eq!(c.kind.swapped(), d.kind);
        prop_assert_eq!(c.ff_direction.map(|f| f.swapped()), d.ff_direction);
    }

    #[test]
    fn canonical_extension_is_a_flop(s in sequence(1..=4, 0..=4, 9)) {
        prop_assume!(s.klevel() > 0);
        prop_assert_eq!(canonical_extension(&s).unwrap().klevel(), 0);
    }

    #[test]
    fn charts_of_well_formed_sequences_are_small(s in sequence(1..=3, 1..=3, 12)) {
        prop_assume!(is_well_formed(&s));
        let w = s.swap();
        for i in 1..=s.m() {
            prop_assert!(is_small(&minus_chart(&s, i).unwrap()).unwrap());
        }
        for j in 1..=s.n() {
            let c = plus_chart(&s, j).unwrap();
            prop_assert_eq!(&c, &minus_chart(&w, j).unwrap());
            prop_assert!(is_small(&c).unwrap());
        }
        for i in 1..=s.m() {
            for j in 1..=s.n() {
                let c = y_chart(&s, i, j).unwrap();
                prop_assert_eq!((s.a()[i - 1] * s.b()[j - 1]) as u64 % c.order(), 0);
                prop_assert!(is_small(&c).unwrap());
            }
        }
    }

    #[test]
    fn section_basis_grows_with_the_box(s in sequence(1..=3, 0..=2, 4), k in -6i64..=6, bound in 0i64..=4) {
        let small = section_basis(&s, TwistClass::Minus(k), bound);
        let large = section_basis(&s, TwistClass::Minus(k), bound + 1);
        prop_assert!(small.iter().all(|c| large.contains(c)));
    }

    #[test]
    fn strand_euler_characteristic(s in sequence(2..=3, 2..=3, 3), p in -4i64..=4, q in -4i64..=4, pick in 0usize..1000) {
        prop_assume!(is_well_formed(&s));
        let a = orbiflip::sheaf::anchor(&s, TwistClass::Y(p, q)).unwrap();
        let c = MonomialComplex::single(&s, Space::Y, Term::line(a));
        let chars = torus_characters(&s, Space::Y, 3);
        let chi = &chars[pick % chars.len()];
        let st = cech_strand(&c, chi, &cover(&s, Space::Y)).unwrap();
        let h = homology_dims(&st);
        let alt: i64 = h.iter().enumerate().map(|(t, &d)| if (st.start + t as i32) % 2 == 0 { d as i64 } else { -(d as i64) }).sum();
        prop_assert_eq!(st.euler_characteristic(), alt);
    }

    #[test]
    fn pushforward_of_a_pullback_is_the_line(s in flip_side(), k in -10i64..=10) {
        for side in [Space::Minus, Space::Plus] {
            let TwistClass::Y(p, q) = pullback(&s, side, k).unwrap() else { unreachable!() };
            prop_assert_eq!(pushforward_rule(&s, side, p, q).unwrap(), PushforwardResult::LineTwist(k));
        }
    }

    #[test]
    fn functors_are_torus_equivariant(s in flip_side(), k in 0i64..=5, pick in 0usize..1000) {
        let chars = torus_characters(&s, Space::Minus, 1);
        let chi = &chars[pick % chars.len()];
        let u = line_on(&s, Space::Minus, k).unwrap();
        for name in [FunctorName::F, FunctorName::FPrime] {
            let spec = FunctorSpec::new(&s, name);
            match (apply(&spec, &u), apply(&spec, &u.twisted(chi))) {
                (Ok(plain), Ok(moved)) => prop_assert_eq!(plain.twisted(chi), moved),
                (plain, moved) => prop_assert_eq!(plain.is_err(), moved.is_err()),
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn round_trips_hold(s in flip_side(), k in 0i64..=6) {
        for pair in RoundTrip::ALL {
            if pair.primed() && k < s.sum_b() - 1 {
                continue;
            }
            let r = roundtrip_check(&s, k, pair).unwrap();
            prop_assert!(r.verdict, "{} {}: {:?}", s, pair.label(), r.mismatches.first());
            prop_assert!(r.compared > 0);
        }
    }
}

#[test]
fn reports_are_deterministic() {
    let s: WeightSequence = "1,2;1,1,1".parse().unwrap();
    let a = serde_json::to_string(&equivalence_suite(&s, 0..=2).unwrap()).unwrap();
    let b = serde_json::to_string(&equivalence_suite(&s, 0..=2).unwrap()).unwrap();
    assert_eq!(a, b);
}
