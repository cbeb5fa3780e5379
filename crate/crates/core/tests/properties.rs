use proptest::prelude::*;

use shecke::braid::{parse, BraidWord, Letter, Sign};
use shecke::coeffs::{q, z, Exponents, LaurentPoly, RationalFn, Var};
use shecke::hecke::{self, HeckeElem};
use shecke::invariant;
use shecke::traces;

fn laurent() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i64..=3, -2i32..=2, -2i32..=2), 0..4).prop_map(|terms| {
        LaurentPoly::from_terms(terms.into_iter().map(|(c, a, b)| {
            let mut e = Exponents::zero();
            e.0[Var::Q.index()] = a;
            e.0[Var::Z.index()] = b;
            (e, c.into())
        }))
    })
}

fn rational() -> impl Strategy<Value = RationalFn> {
    (laurent(), laurent()).prop_filter_map("zero denominator", |(n, d)| {
        if d.is_zero() {
            None
        } else {
            RationalFn::new(n, d).ok()
        }
    })
}

fn letter(n: usize) -> impl Strategy<Value = Letter> {
    (1..n, 0u8..3).prop_map(|(i, k)| match k {
        0 => Letter::Pos(i),
        1 => Letter::Neg(i),
        _ => Letter::Sing(i),
    })
}

fn word(max_n: usize, max_len: usize, singular: bool) -> impl Strategy<Value = BraidWord> {
    (2..=max_n).prop_flat_map(move |n| {
        prop::collection::vec(letter(n), 0..=max_len).prop_map(move |ls| {
            let ls = if singular {
                ls
            } else {
                ls.into_iter().filter(|l| !l.is_singular()).collect()
            };
            BraidWord::new(n, ls).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn laurent_ring_laws(a in laurent(), b in laurent(), c in laurent()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &LaurentPoly::one(), a.clone());
    }

    #[test]
    fn rational_field_laws(a in rational(), b in rational(), c in rational()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        if !b.is_zero() {
            prop_assert_eq!(&a.div(&b).unwrap() * &b, a.clone());
        }
    }

    #[test]
    fn equality_is_a_congruence(a in rational(), b in rational(), k in laurent()) {
        prop_assume!(!k.is_zero());
        let kk = RationalFn::from_poly(k.clone());
        let scaled = RationalFn::new(a.numer() * &k, a.denom() * &k).unwrap();
        prop_assert_eq!(&scaled, &a);
        prop_assert_eq!(&scaled + &b, &a + &b);
        prop_assert_eq!(&scaled * &b, &a * &b);
        prop_assert_eq!(&(&a * &kk).div(&kk).unwrap(), &a);
    }

    #[test]
    fn substitution_is_a_homomorphism(a in rational(), b in rational(), e in -2i32..=2) {
        let s = RationalFn::var(Var::S);
        let bind = [(Var::Q, s.pow(2).unwrap()), (Var::Z, s.pow(e).unwrap())];
        let (Ok(sa), Ok(sb)) = (a.substitute(&bind), b.substitute(&bind)) else {
            return Ok(());
        };
        if let Ok(sum) = (&a + &b).substitute(&bind) {
            prop_assert_eq!(sum, &sa + &sb);
        }
        if let Ok(prod) = (&a * &b).substitute(&bind) {
            prop_assert_eq!(prod, &sa * &sb);
        }
    }

    #[test]
    fn word_format_round_trips(w in word(5, 10, true)) {
        prop_assert_eq!(parse(&w.format(), Some(w.strands())).unwrap(), w.clone());
        prop_assert_eq!(parse(&w.format(), None).unwrap().with_strands(w.strands()).unwrap(), w);
    }

    #[test]
    fn rotation_preserves_counts(w in word(5, 10, true)) {
        let r = w.rotate();
        prop_assert_eq!(r.degree(), w.degree());
        prop_assert_eq!(r.epsilon(), w.epsilon());
        prop_assert_eq!(r.closure_components(), w.closure_components());
    }

    #[test]
    fn ocneanu_trace_rules(a in word(4, 6, false), b in word(4, 6, false)) {
        let n = a.strands().max(b.strands());
        let a = a.with_strands(n).unwrap();
        let b = b.with_strands(n).unwrap();
        let t = |w: &BraidWord| hecke::word_trace(w).unwrap();
        prop_assert_eq!(t(&a.concat(&b)), t(&b.concat(&a)));
        prop_assert_eq!(t(&a.markov_stabilize(Sign::Plus)), &z() * &t(&a));
        let hz = HeckeElem::from_word(&a).unwrap();
        prop_assert_eq!(hz.ocneanu_trace(), t(&a));
    }

    #[test]
    fn hecke_quadratic_relation(w in word(4, 5, false), i in 1usize..4) {
        let n = w.strands().max(i + 1);
        let w = w.with_strands(n).unwrap();
        let h = HeckeElem::from_word(&w).unwrap();
        let s = HeckeElem::generator(n, i).unwrap();
        let lhs = &(&h * &s) * &s;
        let rhs = &(&h * &s).scale(&(&q() - &RationalFn::one())) + &h.scale(&q());
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rendering_ignores_representation(a in rational(), k in laurent()) {
        prop_assume!(!k.is_zero());
        let scaled = RationalFn::new(a.numer() * &k, a.denom() * &k).unwrap();
        prop_assert_eq!(scaled.to_string(), a.to_string());
        prop_assert_eq!(a.reduced(), a);
    }

    #[test]
    fn trace_vector_is_rotation_invariant(w in word(4, 6, true)) {
        prop_assume!(w.degree() <= 2);
        prop_assert_eq!(traces::trace_vector(&w.rotate()), traces::trace_vector(&w));
    }

    #[test]
    fn invariant_is_markov_invariant(w in word(3, 5, true), seed in any::<u64>()) {
        prop_assume!(w.degree() <= 2);
        let v = shecke::braid::random_markov_walk(&w, 4, seed);
        prop_assert_eq!(invariant::invariant_raw(&w), invariant::invariant_raw(&v));
    }

    #[test]
    fn resolution_form_canonicalizes(w in word(3, 5, true)) {
        prop_assume!(w.degree() <= 2);
        let c = invariant::canonical_invariant(&w).unwrap();
        prop_assert!(invariant::is_canonical(&c));
        prop_assert_eq!(c.degree(), w.degree());
    }
}
