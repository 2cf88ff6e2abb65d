use measurekit::cli::{parse_set_expr, parse_stepfn_expr, FnExpr};
use measurekit::intervals::IntervalSet;
use measurekit::simplefn::{sintegral, Lebesgue, StepFn};
use measurekit::structures::{check_class, generate_closure, ClassKind, FiniteFamily, FiniteUniverse, SubsetMask};
use measurekit::xreal::{int, ratio, XReal};
use proptest::prelude::*;

fn xreal() -> impl Strategy<Value = XReal> {
    prop_oneof![
        1 => Just(XReal::NegInf),
        1 => Just(XReal::PosInf),
        6 => (-40i64..40, 1i64..9).prop_map(|(n, d)| XReal::Fin(ratio(n, d))),
    ]
}

fn set() -> impl Strategy<Value = IntervalSet> {
    prop::collection::vec((-12i64..12, 0i64..6, any::<bool>(), any::<bool>()), 0..5).prop_map(|raw| {
        raw.into_iter().fold(IntervalSet::empty(), |acc, (a, len, open_lo, open_hi)| {
            let lo = if open_lo { XReal::NegInf } else { XReal::Fin(ratio(a, 2)) };
            let hi = if open_hi { XReal::PosInf } else { XReal::Fin(ratio(a + len, 2)) };
            acc.union(&IntervalSet::normalize([(lo, hi)]).unwrap())
        })
    })
}

fn bounded_step() -> impl Strategy<Value = StepFn> {
    prop::collection::vec((-6i64..6, 1i64..4, -10i64..10, 0i64..8), 0..5).prop_map(|raw| {
        StepFn::make(
            raw.into_iter()
                .map(|(n, d, a, len)| (ratio(n, d), IntervalSet::interval(ratio(a, 2), ratio(a + len, 2)))),
        )
    })
}

fn family(n: usize) -> impl Strategy<Value = FiniteFamily> {
    prop::collection::vec(0u32..(1 << n), 0..5).prop_map(move |ms| {
        FiniteFamily::new(FiniteUniverse::numbered(n).unwrap(), ms.into_iter().map(SubsetMask)).unwrap()
    })
}

proptest! {
    #[test]
    fn addition_is_a_commutative_monoid(a in xreal(), b in xreal(), c in xreal()) {
        prop_assert_eq!(a.clone() + b.clone(), b.clone() + a.clone());
        prop_assert_eq!((a.clone() + b.clone()) + c.clone(), a.clone() + (b + c));
        prop_assert_eq!(a.clone() + XReal::zero(), a);
    }

    #[test]
    fn contract_is_strictly_monotone(a in xreal(), b in xreal()) {
        prop_assert_eq!(a.cmp(&b), a.contract().cmp(&b.contract()));
        prop_assert_eq!(XReal::expand(&a.contract()).unwrap(), a);
    }

    #[test]
    fn set_ops_are_canonical(a in set(), b in set()) {
        let u = a.union(&b);
        prop_assert_eq!(IntervalSet::from_intervals(u.components().to_vec()), u.clone());
        prop_assert_eq!(u.union(&u), u.clone());
        prop_assert_eq!(a.inter(&a), a.clone());
        prop_assert_eq!(a.complement().complement(), a.clone());
        prop_assert!(u.components().windows(2).all(|w| w[0].hi() < w[1].lo()));
    }

    #[test]
    fn set_ops_obey_ring_laws(a in set(), b in set(), c in set()) {
        prop_assert_eq!(a.inter(&b.union(&c)), a.inter(&b).union(&a.inter(&c)));
        prop_assert_eq!(a.diff(&b), a.inter(&b.complement()));
        prop_assert_eq!(a.union(&b).complement(), a.complement().inter(&b.complement()));
        prop_assert!(a.diff(&b).is_disjoint(&b));
    }

    #[test]
    fn sintegral_is_additive(f in bounded_step(), g in bounded_step(), c in -5i64..5) {
        let i = |h: &StepFn| sintegral(&Lebesgue, h, false).unwrap();
        prop_assert_eq!(i(&(&f + &g)), i(&f) + i(&g));
        prop_assert_eq!(i(&f.scale(&int(c))), XReal::Fin(int(c)) * i(&f));
    }

    #[test]
    fn sets_and_functions_print_and_parse_back(a in set(), f in bounded_step()) {
        prop_assert_eq!(parse_set_expr(&a.to_string()).unwrap(), a);
        match parse_stepfn_expr(&f.to_string()).unwrap() {
            FnExpr::OneDim(g) => prop_assert_eq!(g, f),
            FnExpr::TwoDim(_) => prop_assert!(false, "parsed as two-dimensional"),
        }
    }

    #[test]
    fn stronger_classes_imply_weaker_ones(g in family(4)) {
        let sigma = generate_closure(ClassKind::SigmaAlgebra, &g);
        for kind in ClassKind::ALL {
            prop_assert!(check_class(kind, &sigma).holds, "sigma closure is not a {}", kind);
        }
        let ring = generate_closure(ClassKind::Ring, &g);
        prop_assert!(check_class(ClassKind::Semiring, &ring).holds);
    }

    #[test]
    fn closures_are_extensive_monotone_and_idempotent(g in family(4), extra in family(4)) {
        let bigger = g.with(extra.members().iter().copied());
        for kind in ClassKind::ALL {
            let c = generate_closure(kind, &g);
            prop_assert!(g.is_subfamily(&c));
            prop_assert_eq!(&generate_closure(kind, &c), &c);
            prop_assert!(c.is_subfamily(&generate_closure(kind, &bigger)));
        }
    }
}
