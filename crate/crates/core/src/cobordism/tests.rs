use super::isotopy::match_diagrams;
use super::morse::*;
use super::reidemeister::*;
use crate::braid::BraidWord;
use crate::complex::{all_generators, differential, Chain, Gen};
use crate::diagram::{ArcId, Diagram, Side, Sign};

fn closure(strands: usize, letters: &[i32]) -> Diagram {
    BraidWord::new(strands, letters.to_vec()).unwrap().closure()
}

/// Checks `f d = d f` and the q-degree shift on every generator.
fn assert_chain_map(pre: &Diagram, post: &Diagram, qshift: i64, f: &dyn Fn(&Gen) -> Chain) {
    for g in all_generators(pre) {
        let fg = f(&g);
        let lhs = differential(post, &fg);
        let mut rhs = Chain::zero();
        for (h, v) in differential(pre, &Chain::from_gen(g)).terms() {
            rhs.add_scaled(&f(h), v);
        }
        assert_eq!(lhs, rhs, "not a chain map at {g:?}");
        let dg = g.grading(pre);
        for (h, _) in fg.terms() {
            let e = h.grading(post);
            assert_eq!((e.h, e.q), (dg.h, dg.q + qshift), "degree at {g:?} -> {h:?}");
        }
    }
}

fn samples() -> Vec<Diagram> {
    vec![
        Diagram::empty(),
        Diagram::from_pd(&[], &[1]).unwrap(),
        closure(2, &[1, 1, 1]),
        closure(2, &[1, -1]),
        closure(3, &[1, -2, 1]),
        closure(2, &[-1, -1]),
    ]
}

#[test]
fn r1_creation_and_removal() {
    for d in samples() {
        for &a in d.arcs() {
            for sign in [Sign::Positive, Sign::Negative] {
                for rotation in [Rotation::Clockwise, Rotation::Counterclockwise] {
                    let site = KinkSite { arc: a, sign, rotation };
                    let (e, k) = r1inv_post(&d, site).unwrap();
                    assert!(e.is_planar());
                    assert_chain_map(&d, &e, 0, &|g| r1inv_map(&d, &e, site, k, g));
                    let c = e.num_crossings() - 1;
                    let kink = find_kink(&e, c, sign).unwrap();
                    let back = r1_post(&e, &kink).unwrap();
                    assert_chain_map(&e, &back, 0, &|g| r1_map(&e, &back, &kink, g));
                    let iso = match_diagrams(&back, &d, &(0..d.num_crossings()).collect::<Vec<_>>())
                        .expect("same diagram");
                    for g in all_generators(&d) {
                        let mut out = Chain::zero();
                        for (h, v) in r1inv_map(&d, &e, site, k, &g).terms() {
                            for (x, w) in r1_map(&e, &back, &kink, h).terms() {
                                out.add_scaled(&iso.map(&back, &d, x), &(v * w));
                            }
                        }
                        // a kink on a crossingless loop can be undone around either loop
                        let id = Chain::from_gen(g);
                        assert!(out == id || (d.num_crossings() == 0 && out == id.neg()));
                    }
                }
            }
        }
    }
}

#[test]
fn r2_creation_and_removal() {
    for d in samples() {
        let arcs = d.arcs().to_vec();
        let mut tried = 0;
        let mut round_trips = 0;
        for &p in &arcs {
            for &q in &arcs {
                for fp in [true, false] {
                    for fq in [true, false] {
                        let site = FingerSite {
                            over: Side { arc: p, forward: fp },
                            under: Side { arc: q, forward: fq },
                        };
                        let Ok((e, b)) = r2inv_post(&d, site) else { continue };
                        tried += 1;
                        assert_chain_map(&d, &e, 0, &|g| r2inv_map(&d, &e, &b, g));
                        let back = r2_post(&e, &b).unwrap();
                        assert_chain_map(&e, &back, 0, &|g| r2_map(&e, &back, &b, g));
                        let order: Vec<usize> = (0..d.num_crossings()).collect();
                        if let Some(iso) = match_diagrams(&back, &d, &order) {
                            round_trips += 1;
                            for g in all_generators(&d) {
                                let mut out = Chain::zero();
                                for (h, v) in r2inv_map(&d, &e, &b, &g).terms() {
                                    for (x, w) in r2_map(&e, &back, &b, h).terms() {
                                        out.add_scaled(&iso.map(&back, &d, x), &(v * w));
                                    }
                                }
                                assert_eq!(out, Chain::from_gen(g));
                            }
                        }
                    }
                }
            }
        }
        if arcs.len() > 1 {
            assert!(tried > 0);
            assert_eq!(round_trips, tried);
        }
    }
}

#[test]
fn saddles_are_chain_maps() {
    for d in samples() {
        let arcs = d.arcs().to_vec();
        for &p in &arcs {
            for &q in &arcs {
                let new = (p == q).then(|| ArcId(d.max_arc() + 1));
                let site = SaddleSite { p, q, new };
                let Ok(e) = saddle_post(&d, site) else { continue };
                assert_chain_map(&d, &e, -1, &|g| saddle_map(&d, &e, site, g));
            }
        }
    }
}

#[test]
fn births_deaths_dots() {
    for d in samples() {
        let k = ArcId(d.max_arc() + 1);
        let e = birth_post(&d, k).unwrap();
        assert_chain_map(&d, &e, 1, &|g| birth_map(&d, &e, k, g));
        let back = death_post(&e, k).unwrap();
        assert_eq!(back, d);
        assert_chain_map(&e, &d, 1, &|g| death_map(&e, &d, k, g));
        for &a in d.arcs() {
            assert_chain_map(&d, &d, -2, &|g| dot_map(&d, a, g));
        }
    }
}

#[test]
fn resolution() {
    for d in samples() {
        for c in 0..d.num_crossings() {
            let Ok((mid, post, kink)) = resolve_post(&d, c) else { continue };
            assert_chain_map(&d, &post, -1, &|g| resolve_map(&d, &mid, &post, c, &kink, g));
        }
    }
}

#[test]
fn r3_is_a_chain_map() {
    use super::r3::{r3_map, r3_post, Slide};
    let words: Vec<(usize, Vec<i32>)> = vec![
        (3, vec![1, 2, 1]),
        (3, vec![-1, -2, -1]),
        (3, vec![1, 2, -1]),
        (3, vec![-1, 2, 1]),
        (3, vec![2, 1, -2, 1]),
        (4, vec![3, 1, 2, 1, -3]),
    ];
    let mut found = 0;
    for (n, w) in words {
        let d = closure(n, &w);
        let m = d.num_crossings();
        for a in 0..m {
            for b in a + 1..m {
                for c in b + 1..m {
                    for slide in [Slide::Over, Slide::Under] {
                        let Ok((e, data)) = r3_post(&d, [a, b, c], slide) else { continue };
                        found += 1;
                        assert_chain_map(&d, &e, 0, &|g| r3_map(&d, &e, &data, g));
                        let (back, _) = r3_post(&e, [a, b, c], slide).unwrap();
                        assert_eq!(back, d);
                    }
                }
            }
        }
    }
    assert!(found >= 12, "{found}");
}
