//! Greedy simplification of unlink diagrams by complexity-reducing moves.

use std::collections::{HashSet, VecDeque};

use crate::cobordism::r3::r3_diagram;
use crate::cobordism::reidemeister::{find_bigon, find_kink, r1_post, r2_post, r2inv_post, FingerSite};
use crate::cobordism::{Event, Movie, Slide};
use crate::diagram::Diagram;
use crate::error::{Error, Result};

/// A Reidemeister I or II removal available in `d`, with its result.
fn reduction(d: &Diagram) -> Option<(Event, Diagram)> {
    for (c, x) in d.crossings().iter().enumerate() {
        if let Ok(k) = find_kink(d, c, x.sign) {
            let post = r1_post(d, &k).ok()?;
            return Some((Event::R1 { crossing: c, sign: x.sign }, post));
        }
    }
    let n = d.num_crossings();
    for a in 0..n {
        for b in a + 1..n {
            let xa = d.crossing(a).slots;
            let shared = d.crossing(b).slots.iter().filter(|s| xa.contains(s)).count();
            if shared < 2 {
                continue;
            }
            if let Ok(bg) = find_bigon(d, a, b) {
                let post = r2_post(d, &bg).ok()?;
                return Some((Event::R2 { crossings: [a, b] }, post));
            }
        }
    }
    None
}

/// Triples of crossings around triangular faces.
pub(crate) fn triangles(d: &Diagram) -> Vec<[usize; 3]> {
    let mut out = vec![];
    for face in d.faces() {
        if face.len() != 3 {
            continue;
        }
        let mut cs: Vec<usize> = face
            .iter()
            .filter_map(|s| d.ends(s.arc))
            .flat_map(|e| [e.head.crossing, e.tail.crossing])
            .collect();
        cs.sort();
        cs.dedup();
        if let [a, b, c] = cs[..] {
            out.push([a, b, c]);
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Applies removals while any is available.
fn reduce(d: &Diagram) -> (Vec<Event>, Diagram) {
    let mut cur = d.clone();
    let mut events = vec![];
    while let Some((e, post)) = reduction(&cur) {
        events.push(e);
        cur = post;
    }
    (events, cur)
}

/// Events taking `d` to a crossingless diagram. When nothing can be
/// removed, searches up to `depth` Reidemeister III and finger moves deep
/// for a diagram whose removals end below the current crossing count.
pub fn simplify(d: &Diagram, depth: usize) -> Result<Vec<Event>> {
    let (mut events, mut cur) = reduce(d);
    while cur.num_crossings() > 0 {
        let (path, post) = unlock(&cur, depth).ok_or_else(|| {
            Error::Other(format!(
                "no simplification found from {} crossings",
                cur.num_crossings()
            ))
        })?;
        events.extend(path);
        cur = post;
    }
    Ok(events)
}

fn moves(d: &Diagram, fingers: bool) -> Vec<(Event, Diagram)> {
    let mut out = vec![];
    for cs in triangles(d) {
        for slide in [Slide::Over, Slide::Under] {
            if let Ok(post) = r3_diagram(d, cs, slide) {
                out.push((Event::R3 { crossings: cs, slide }, post));
            }
        }
    }
    if fingers {
        for face in d.faces() {
            for &over in &face {
                for &under in &face {
                    if over.arc == under.arc {
                        continue;
                    }
                    let site = FingerSite { over, under };
                    if let Ok((post, _)) = r2inv_post(d, site) {
                        out.push((Event::R2Inv(site), post));
                    }
                }
            }
        }
    }
    out
}

/// Breadth-first search for a short sequence of moves after which the
/// removals go below the crossing count of `d`. Finger moves are tried
/// only when Reidemeister III moves alone do not succeed, and at most two
/// moves deep.
fn unlock(d: &Diagram, depth: usize) -> Option<(Vec<Event>, Diagram)> {
    let n = d.num_crossings();
    for fingers in [false, true] {
        let mut seen: HashSet<String> = HashSet::from([d.normalized().emit()]);
        let mut queue: VecDeque<(Vec<Event>, Diagram)> = VecDeque::from([(vec![], d.clone())]);
        let limit = if fingers { depth.min(2) } else { depth };
        while let Some((path, cur)) = queue.pop_front() {
            if path.len() >= limit {
                continue;
            }
            for (e, post) in moves(&cur, fingers) {
                if !seen.insert(post.normalized().emit()) {
                    continue;
                }
                let mut p = path.clone();
                p.push(e);
                let (tail, reduced) = reduce(&post);
                if reduced.num_crossings() < n {
                    p.extend(tail);
                    return Some((p, reduced));
                }
                queue.push_back((p, post));
            }
        }
    }
    None
}

/// Simplifies `d` and then removes every remaining loop.
pub fn cap_off(d: &Diagram, depth: usize) -> Result<Movie> {
    let mut m = Movie::new(d.clone(), simplify(d, depth)?)?;
    let loops = m.end().free_loops().to_vec();
    for l in loops {
        m.push(Event::Death(l))?;
    }
    Ok(m)
}
