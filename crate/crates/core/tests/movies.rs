use khmovie::braid::{compile_braided_surface, psi, BandFactorization, BraidWord};
use khmovie::cobordism::{Event, Movie};
use khmovie::complex::all_generators;
use khmovie::{ArcId, Chain, Diagram, Error};

fn sample() -> (BandFactorization, Movie) {
    let f = BandFactorization::parse("strands 3\n[ 1 ; 2 ; + ] [ ; 1 ; + ]\n").unwrap();
    let m = compile_braided_surface(&f).unwrap();
    (f, m)
}

fn split_at(m: &Movie, k: usize) -> (Movie, Movie) {
    let events: Vec<Event> = m.events().cloned().collect();
    let a = Movie::new(m.start().clone(), events[..k].to_vec()).unwrap();
    let b = Movie::new(a.end().clone(), events[k..].to_vec()).unwrap();
    (a, b)
}

#[test]
fn concatenation_is_associative() {
    let (_, m) = sample();
    let d = m.start().clone();
    let (a, rest) = split_at(&m, 1);
    let (b, c) = split_at(&rest, 2);
    let left = a.clone().then(b.clone()).unwrap().then(c.clone()).unwrap();
    let right = a.then(b.then(c).unwrap()).unwrap();
    assert_eq!(left.emit(), right.emit());
    assert_eq!(left.emit(), m.emit());
    for g in all_generators(&d) {
        let x = Chain::from_gen(g);
        assert_eq!(left.evaluate(&x).unwrap(), right.evaluate(&x).unwrap());
    }
}

#[test]
fn evaluation_composes() {
    let (_, m) = sample();
    for k in 0..=m.len() {
        let (a, b) = split_at(&m, k);
        for g in all_generators(m.start()) {
            let x = Chain::from_gen(g);
            let two = b.evaluate(&a.evaluate(&x).unwrap()).unwrap();
            assert_eq!(two, m.evaluate(&x).unwrap());
        }
    }
}

#[test]
fn trace_sees_every_step() {
    let (f, m) = sample();
    let mut seen = vec![];
    let v = m
        .evaluate_traced(&psi(&f.word().unwrap()), &mut |i, c| seen.push((i, c.len())))
        .unwrap();
    assert_eq!(seen.len(), m.len());
    assert_eq!(seen.iter().map(|s| s.0).collect::<Vec<_>>(), (1..=m.len()).collect::<Vec<_>>());
    assert_eq!(v.scalar().map(|x| x.abs()), Some(khmovie::Int::ONE));
}

#[test]
fn bidegree_follows_the_event_census() {
    let (_, m) = sample();
    let chi = m.euler_characteristic();
    assert_eq!(m.q_shift(), chi);
    for g in all_generators(m.start()) {
        let from = g.grading(m.start());
        let img = m.evaluate(&Chain::from_gen(g)).unwrap();
        for (h, _) in img.terms() {
            let to = h.grading(m.end());
            assert_eq!((to.h, to.q), (from.h, from.q + chi));
        }
    }
}

#[test]
fn text_round_trip_and_hash() {
    let (_, m) = sample();
    let text = m.emit();
    let again = Movie::parse(&text).unwrap();
    assert_eq!(again.emit(), text);
    assert_eq!(again.hash(), m.hash());
    assert_eq!(m.hash().len(), 64);
    let b = Movie::parse("start braid\nstrands 2\n1\nevents\nresolve c1\n").unwrap();
    assert_eq!(*b.start(), BraidWord::new(2, vec![1]).unwrap().closure());
    assert_eq!(b.end().num_crossings(), 0);
    assert_eq!(b.end().free_loops().len(), 2);
}

#[test]
fn bad_events_name_their_line() {
    let text = "start\ncrossings 0\nloop 1\nevents\ndeath L1\ndeath L1\n";
    match Movie::parse(text) {
        Err(Error::BadEvent { step, .. }) => assert_eq!(step, 2),
        other => panic!("{other:?}"),
    }
    match Movie::parse("start\ncrossings 0\nloop 1\nevents\nwiggle a1\n") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 5),
        other => panic!("{other:?}"),
    }
}

#[test]
fn dotted_sphere_is_two() {
    let d = Diagram::parse("crossings 0\nloop 1\n").unwrap();
    let m = Movie::new(d.clone(), vec![Event::Birth(ArcId(2)), Event::Death(ArcId(2))]).unwrap();
    assert_eq!(m.euler_characteristic(), 2);
    for g in all_generators(&d) {
        assert!(m.evaluate(&Chain::from_gen(g)).unwrap().is_zero());
    }
    let m = Movie::new(
        d.clone(),
        vec![Event::Birth(ArcId(2)), Event::Dot(ArcId(2)), Event::Death(ArcId(2))],
    )
    .unwrap();
    for g in all_generators(&d) {
        let x = Chain::from_gen(g);
        assert_eq!(m.evaluate(&x).unwrap(), x.add(&x));
    }
}
