//! Braided surfaces and braid rewriting as movies.

use crate::braid::{apply_step, BandFactorization, BraidWord, RewriteStep, Role};
use crate::cobordism::isotopy::match_diagrams;
use crate::cobordism::reidemeister::{FingerSite, KinkSite, Rotation};
use crate::cobordism::{Event, Movie, Slide};
use crate::diagram::{Diagram, Side, Sign};
use crate::error::{Error, Result};

fn index_of(alive: &[usize], p: usize) -> usize {
    alive.iter().position(|&x| x == p).expect("letter still present")
}

/// Movie from the closure of `f` to the empty diagram: every core is
/// resolved in band order, then each conjugator letter is cancelled against
/// its inverse by Reidemeister II (innermost pair first), then the loops of
/// the trivial closure die.
pub fn compile_braided_surface(f: &BandFactorization) -> Result<Movie> {
    let word = f.word()?;
    let roles = f.roles();
    let mut alive: Vec<usize> = (0..word.len()).collect();
    let mut m = Movie::identity(word.closure());
    for p in f.core_positions() {
        m.push(Event::Resolve(index_of(&alive, p)))?;
        alive.retain(|&x| x != p);
    }
    for (band, b) in f.bands.iter().enumerate() {
        for k in (0..b.conjugator.len()).rev() {
            let i = roles.iter().position(|r| *r == Role::Conjugator { band, k }).unwrap();
            let j = roles.iter().position(|r| *r == Role::Inverse { band, k }).unwrap();
            m.push(Event::R2 {
                crossings: [index_of(&alive, i), index_of(&alive, j)],
            })?;
            alive.retain(|&x| x != i && x != j);
        }
    }
    let loops = m.end().free_loops().to_vec();
    for l in loops {
        m.push(Event::Death(l))?;
    }
    assert!(m.end().is_empty());
    assert_eq!(m.euler_characteristic(), f.euler_characteristic());
    Ok(m)
}

/// Appends an isotopy from the end of `m` to `target`, where crossing `k`
/// of the end goes to `crossings[k]`. Identity isotopies are not recorded.
fn settle(m: &mut Movie, target: &Diagram, crossings: &[usize]) -> bool {
    let Some(iso) = match_diagrams(m.end(), target, crossings) else {
        return false;
    };
    let trivial = iso.arcs.is_empty() && iso.order.iter().enumerate().all(|(k, &i)| k == i);
    if !trivial {
        m.push(Event::Isotopy(iso)).expect("matched isotopy applies");
    }
    true
}

/// Movie from the closure of `w` to the closure of its positive
/// stabilization: a positive kink on the last strand, then an isotopy.
pub fn stabilization_movie(w: &BraidWord) -> Result<Movie> {
    let start = w.closure();
    let target = w.positive_stabilization().closure();
    let order: Vec<usize> = (0..=w.len()).collect();
    for &arc in start.arcs() {
        for rotation in [Rotation::Clockwise, Rotation::Counterclockwise] {
            let mut m = Movie::identity(start.clone());
            let kink = KinkSite {
                arc,
                sign: Sign::Positive,
                rotation,
            };
            if m.push(Event::R1Inv(kink)).is_ok() && settle(&mut m, &target, &order) {
                return Ok(m);
            }
        }
    }
    Err(Error::InvalidBraid(format!("no stabilization movie for {}", w.emit().trim())))
}

/// Movie realizing a sequence of rewriting steps on the closure of `w`.
/// After every step the diagram is brought to the closure of the new word.
pub fn rewrite_movie(w: &BraidWord, steps: &[RewriteStep]) -> Result<Movie> {
    let mut cur = w.clone();
    let mut m = Movie::identity(cur.closure());
    for (si, &step) in steps.iter().enumerate() {
        let (next, map) = apply_step(&cur, step)?;
        let target = next.closure();
        let fail = || Error::InvalidBraid(format!("step {} ({}) has no movie", si + 1, step.emit()));
        let moved: Vec<usize> = map.iter().flatten().copied().collect();
        let done = match step {
            RewriteStep::Swap(_) => settle(&mut m, &target, &moved),
            RewriteStep::Relation(p) => [Slide::Over, Slide::Under].into_iter().any(|slide| {
                let mut t = m.clone();
                let ok = t
                    .push(Event::R3 {
                        crossings: [p, p + 1, p + 2],
                        slide,
                    })
                    .is_ok()
                    && settle(&mut t, &target, &moved);
                if ok {
                    m = t.clone();
                }
                ok
            }),
            RewriteStep::Cancel(p) => {
                m.push(Event::R2 { crossings: [p, p + 1] })?;
                settle(&mut m, &target, &moved)
            }
            RewriteStep::Insert(p, l) => {
                let (_, arcs) = cur.closure_with_arcs();
                let i = l.unsigned_abs() as usize - 1;
                let (left, right) = (arcs[p][i], arcs[p][i + 1]);
                let (over, under) = if l > 0 { (left, right) } else { (right, left) };
                let mut found = false;
                'search: for fo in [true, false] {
                    for fu in [true, false] {
                        let site = FingerSite {
                            over: Side { arc: over, forward: fo },
                            under: Side { arc: under, forward: fu },
                        };
                        for new in [[p, p + 1], [p + 1, p]] {
                            let mut t = m.clone();
                            if t.push(Event::R2Inv(site)).is_err() {
                                continue;
                            }
                            let mut cs = moved.clone();
                            cs.extend(new);
                            if settle(&mut t, &target, &cs) {
                                m = t;
                                found = true;
                                break 'search;
                            }
                        }
                    }
                }
                found
            }
        };
        if !done {
            return Err(fail());
        }
        cur = next;
    }
    Ok(m)
}
