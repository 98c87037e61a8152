use proptest::prelude::*;

use khmovie::braid::{compile_braided_surface, is_compatible, psi, Band, BandFactorization, BraidWord};
use khmovie::cobordism::Movie;
use khmovie::complex::{all_generators, differential, euler_characteristic, is_cycle};
use khmovie::oracle::jones;
use khmovie::{Bidegree, Chain, Int};

fn word(max_strands: usize, max_len: usize) -> impl Strategy<Value = BraidWord> {
    (1..=max_strands).prop_flat_map(move |n| {
        let letter = if n == 1 {
            Just(0i32).boxed()
        } else {
            prop_oneof![1..n as i32, -(n as i32 - 1)..=-1].boxed()
        };
        prop::collection::vec(letter, 0..=max_len).prop_map(move |v| {
            let letters = v.into_iter().filter(|&l| l != 0).collect();
            BraidWord::new(n, letters).unwrap()
        })
    })
}

fn factorization() -> impl Strategy<Value = BandFactorization> {
    (2usize..=4).prop_flat_map(|n| {
        let gen = 1..n as i32;
        let signed = prop_oneof![gen.clone(), gen.clone().prop_map(|l| -l)];
        let band = (prop::collection::vec(signed.clone(), 0..=2), signed)
            .prop_map(|(conjugator, core)| Band { conjugator, core });
        prop::collection::vec(band, 1..=3)
            .prop_filter("at most 8 crossings", |bs| bs.iter().map(|b| 2 * b.conjugator.len() + 1).sum::<usize>() <= 8)
            .prop_map(move |bands| BandFactorization::new(n, bands).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn differential_squares_to_zero(w in word(4, 7)) {
        let d = w.closure();
        for g in all_generators(&d) {
            let dd = differential(&d, &differential(&d, &Chain::from_gen(g)));
            prop_assert!(dd.is_zero());
        }
    }

    #[test]
    fn euler_characteristic_is_the_bracket(w in word(4, 9)) {
        let d = w.closure();
        prop_assert_eq!(euler_characteristic(&d), jones(&d));
        prop_assert_eq!(euler_characteristic(&d.mirror()), jones(&d.mirror()));
    }

    #[test]
    fn psi_is_a_cycle(w in word(5, 10)) {
        let d = w.closure();
        let p = psi(&w);
        prop_assert!(is_cycle(&d, &p));
        let writhe: i64 = w.letters().iter().map(|l| l.signum() as i64).sum();
        prop_assert_eq!(p.grading(&d), Some(Bidegree::new(0, writhe - w.strands() as i64)));
    }

    #[test]
    fn incompatible_generators_die(f in factorization()) {
        let m = compile_braided_surface(&f).unwrap();
        prop_assert_eq!(m.euler_characteristic(), f.euler_characteristic());
        for g in all_generators(m.start()) {
            if !is_compatible(&g, &f) {
                prop_assert!(m.evaluate(&Chain::from_gen(g)).unwrap().is_zero());
            }
        }
        if f.bands.iter().all(|b| b.is_positive()) {
            let v = m.evaluate(&psi(&f.word().unwrap())).unwrap();
            prop_assert_eq!(v.scalar().map(|x| x.abs()), Some(Int::ONE));
        }
    }

    #[test]
    fn movie_text_round_trips(f in factorization()) {
        let m = compile_braided_surface(&f).unwrap();
        let again = Movie::parse(&m.emit()).unwrap();
        prop_assert_eq!(again.emit(), m.emit());
        prop_assert_eq!(again.hash(), m.hash());
    }

    #[test]
    fn braid_text_round_trips(w in word(5, 12)) {
        prop_assert_eq!(BraidWord::parse(&w.emit()).unwrap(), w.clone());
        let d = w.closure();
        prop_assert_eq!(khmovie::Diagram::parse(&d.emit()).unwrap(), d);
    }
}
