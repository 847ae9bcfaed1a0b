use num_bigint::BigInt;
use proptest::prelude::*;
use surfq::collect::collect;
use surfq::twist::{twist_table, InducedAction, TwistName};
use surfq::{
    intersection_pairing, Letter, ModKElement, Nil2Element, PairIndexSet, QuotientSpec,
    SurfaceContext, Word,
};

fn word(max_gen: u32, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((1..=max_gen, any::<bool>()), 0..max_len)
        .prop_map(|ls| Word::from_letters(ls.into_iter().map(|(i, inv)| Letter::new(i, inv)).collect()))
}

/// Genus together with a word on its generators.
fn genus_and_words(n: usize) -> impl Strategy<Value = (SurfaceContext, Vec<Word>)> {
    (2u32..=5).prop_flat_map(move |g| {
        (Just(SurfaceContext::new(g).unwrap()), prop::collection::vec(word(2 * g, 24), n))
    })
}

fn element(ctx: SurfaceContext) -> impl Strategy<Value = Nil2Element> {
    let pairs = PairIndexSet::new(&ctx).len();
    let gens = ctx.generator_count() as usize;
    (
        prop::collection::vec(-1000i64..=1000, gens),
        prop::collection::vec(-1000i64..=1000, pairs),
    )
        .prop_map(move |(n, m)| {
            Nil2Element::from_parts(
                &ctx,
                n.into_iter().map(BigInt::from).collect(),
                m.into_iter().map(BigInt::from).collect(),
            )
            .unwrap()
        })
}

fn genus_and_elements(n: usize) -> impl Strategy<Value = (SurfaceContext, Vec<Nil2Element>)> {
    (2u32..=5).prop_flat_map(move |g| {
        let ctx = SurfaceContext::new(g).unwrap();
        (Just(ctx), prop::collection::vec(element(ctx), n))
    })
}

proptest! {
    #[test]
    fn free_reduction_is_idempotent((_c, ws) in genus_and_words(1)) {
        let r = ws[0].free_reduce();
        prop_assert!(r.is_freely_reduced());
        prop_assert_eq!(r.free_reduce(), r);
    }

    #[test]
    fn inverse_is_an_involution((_c, ws) in genus_and_words(1)) {
        let w = &ws[0];
        prop_assert_eq!(&w.inverse().inverse(), w);
        prop_assert!(w.concat(&w.inverse()).free_reduce().is_empty());
    }

    #[test]
    fn display_round_trips((c, ws) in genus_and_words(1)) {
        let w = &ws[0];
        prop_assert_eq!(&Word::parse(&w.to_string(), &c).unwrap(), w);
    }

    #[test]
    fn substitution_is_multiplicative((c, ws) in genus_and_words(2), t in 0usize..64) {
        let names = TwistName::all(&c);
        let table = twist_table(names[t % names.len()], &c).unwrap();
        let (u, v) = (&ws[0], &ws[1]);
        prop_assert_eq!(
            u.concat(v).substitute(&table).free_reduce(),
            u.substitute(&table).concat(&v.substitute(&table)).free_reduce()
        );
    }

    #[test]
    fn evaluation_is_a_homomorphism((c, ws) in genus_and_words(2)) {
        let (u, v) = (&ws[0], &ws[1]);
        let a = Nil2Element::evaluate(&c, u).unwrap();
        let b = Nil2Element::evaluate(&c, v).unwrap();
        prop_assert_eq!(Nil2Element::evaluate(&c, &u.concat(v)).unwrap(), &a * &b);
        prop_assert_eq!(Nil2Element::evaluate(&c, &u.inverse()).unwrap(), a.inverse());
        prop_assert_eq!(Nil2Element::evaluate(&c, &u.free_reduce()).unwrap(), a.clone());
        prop_assert_eq!(collect(&c, u).unwrap(), a);
    }

    #[test]
    fn group_laws((c, es) in genus_and_elements(3)) {
        let (a, b, d) = (&es[0], &es[1], &es[2]);
        prop_assert_eq!(&(a * b) * d, a * &(b * d));
        prop_assert!((a * &a.inverse()).is_identity());
        prop_assert_eq!(a * &Nil2Element::identity(&c), a.clone());
    }

    #[test]
    fn powers_match_repeated_products((_c, es) in genus_and_elements(1), p in -12i64..=12) {
        let a = &es[0];
        let step = if p >= 0 { a.clone() } else { a.inverse() };
        let mut acc = Nil2Element::identity(a.ctx());
        for _ in 0..p.unsigned_abs() {
            acc = &acc * &step;
        }
        prop_assert_eq!(a.pow(p), acc);
        prop_assert_eq!(&a.pow(p) * &a.pow(3), a.pow(p + 3));
    }

    #[test]
    fn commutators_are_central((c, es) in genus_and_elements(3)) {
        let z = Nil2Element::from_commutators(&c, es[0].m().to_vec()).unwrap();
        prop_assert_eq!(&z * &es[1], &es[1] * &z);
        let k = es[1].commutator_class(&es[2]).unwrap();
        prop_assert!(k.is_commutator());
        prop_assert_eq!(&k * &es[0], &es[0] * &k);
    }

    #[test]
    fn projections_are_homomorphisms((c, es) in genus_and_elements(2)) {
        let (a, b) = (&es[0], &es[1]);
        let ab = a * b;
        prop_assert_eq!(
            ModKElement::project(a).multiply(&ModKElement::project(b)).unwrap(),
            ModKElement::project(&ab)
        );
        let g = c.genus();
        for e in [g, 2 * g] {
            let spec = QuotientSpec::new(&c, e).unwrap();
            let (pa, pb) = (spec.project(a).unwrap(), spec.project(b).unwrap());
            prop_assert_eq!(&pa * &pb, spec.project(&ab).unwrap());
            prop_assert_eq!(spec.project_mod_k(&ModKElement::project(a)).unwrap(), pa.clone());
            prop_assert!(pa.pow(e as i64).is_identity());
        }
    }

    #[test]
    fn pairing_is_additive((c, es) in genus_and_elements(2)) {
        let z1 = Nil2Element::from_commutators(&c, es[0].m().to_vec()).unwrap();
        let z2 = Nil2Element::from_commutators(&c, es[1].m().to_vec()).unwrap();
        let g = c.genus() as u64;
        let sum = intersection_pairing(&(&z1 * &z2)).unwrap();
        prop_assert_eq!(sum, (intersection_pairing(&z1).unwrap() + intersection_pairing(&z2).unwrap()) % g);
    }

    #[test]
    fn twists_act_compatibly((c, ws) in genus_and_words(1), t in 0usize..64) {
        let names = TwistName::all(&c);
        let table = twist_table(names[t % names.len()], &c).unwrap();
        let act = InducedAction::new(&c, &table).unwrap();
        let w = &ws[0];
        prop_assert_eq!(
            act.apply(&Nil2Element::evaluate(&c, w).unwrap()).unwrap(),
            Nil2Element::evaluate(&c, &w.substitute(&table)).unwrap()
        );
    }
}

#[test]
fn identity_five_holds_for_every_pair_power() {
    for g in 2..=5 {
        let c = SurfaceContext::new(g).unwrap();
        for i in 1..=g {
            let x = Word::generator(2 * i - 1);
            let y = Word::generator(2 * i);
            let base = Nil2Element::evaluate(&c, &Word::commutator(&x, &y)).unwrap();
            for k in -6..=6 {
                let lhs = Nil2Element::evaluate(&c, &Word::commutator(&x.pow(k), &y)).unwrap();
                assert_eq!(lhs, base.pow(k), "g={g} i={i} k={k}");
            }
        }
    }
}
