//! Births, deaths, saddles and dots.

use crate::cobordism::local::Transfer;
use crate::complex::{Chain, Gen, Smoothing};
use crate::diagram::{ArcId, Diagram, Side};
use crate::error::{Error, Result};
use crate::int::Int;

fn invalid(msg: String) -> Error {
    Error::InvalidDiagram(msg)
}

pub fn birth_post(d: &Diagram, k: ArcId) -> Result<Diagram> {
    if d.has_arc(k) {
        return Err(invalid(format!("arc {k} already exists")));
    }
    let mut loops = d.free_loops().to_vec();
    loops.push(k);
    Diagram::new(d.crossings().to_vec(), loops)
}

pub fn birth_map(pre: &Diagram, post: &Diagram, k: ArcId, g: &Gen) -> Chain {
    let s = Smoothing::new(pre, g.state);
    let t = Smoothing::new(post, g.state);
    let tr = Transfer {
        pre,
        pre_sm: &s,
        post,
        post_sm: &t,
        arc_map: &|a| Some(a),
    };
    let kpos = t.loop_of(post, k);
    Chain::from_gen(tr.gen(g, &[], &[(kpos, false)]))
}

pub fn death_post(d: &Diagram, k: ArcId) -> Result<Diagram> {
    if !d.is_free_loop(k) {
        return Err(invalid(format!("{k} is not a crossingless loop")));
    }
    let loops: Vec<ArcId> = d.free_loops().iter().copied().filter(|l| *l != k).collect();
    Diagram::new(d.crossings().to_vec(), loops)
}

pub fn death_map(pre: &Diagram, post: &Diagram, k: ArcId, g: &Gen) -> Chain {
    let s = Smoothing::new(pre, g.state);
    let t = Smoothing::new(post, g.state);
    let l = s.loop_of(pre, k);
    if !g.label(l) {
        return Chain::zero();
    }
    let tr = Transfer {
        pre,
        pre_sm: &s,
        post,
        post_sm: &t,
        arc_map: &|a| if a == k { None } else { Some(a) },
    };
    Chain::from_gen(tr.gen(g, &[l], &[]))
}

pub fn dot_map(d: &Diagram, p: ArcId, g: &Gen) -> Chain {
    let s = Smoothing::new(d, g.state);
    let l = s.loop_of(d, p);
    if g.label(l) {
        return Chain::zero();
    }
    let mut c = Chain::zero();
    c.add_term(Gen::new(g.state, g.labels | 1 << l, s.num_loops()), &Int::from(2));
    c
}

/// Oriented saddle exchanging the heads of `p` and `q`. When `p == q` the
/// saddle splits a new crossingless loop `new` off `p`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SaddleSite {
    pub p: ArcId,
    pub q: ArcId,
    pub new: Option<ArcId>,
}

pub fn saddle_post(d: &Diagram, site: SaddleSite) -> Result<Diagram> {
    let SaddleSite { p, q, new } = site;
    for a in [p, q] {
        if !d.has_arc(a) {
            return Err(invalid(format!("no arc {a}")));
        }
    }
    if p == q {
        let k = new.ok_or_else(|| invalid("a saddle on one arc needs a new loop id".into()))?;
        return birth_post(d, k);
    }
    if new.is_some() {
        return Err(invalid("new loop id given for a two-arc saddle".into()));
    }
    let (fp, fq) = (d.is_free_loop(p), d.is_free_loop(q));
    if fp || fq {
        let drop = match (fp, fq) {
            (true, true) => p.max(q),
            (true, false) => p,
            _ => q,
        };
        let loops: Vec<ArcId> = d.free_loops().iter().copied().filter(|l| *l != drop).collect();
        return Diagram::new(d.crossings().to_vec(), loops);
    }
    let ep = d.ends(p).unwrap();
    let eq = d.ends(q).unwrap();
    let same_piece = d
        .graph_components()
        .iter()
        .any(|c| c.contains(&ep.head.crossing) && c.contains(&eq.head.crossing));
    if same_piece {
        let faces = d.face_map();
        let f = |arc, forward| faces[&Side { arc, forward }];
        if f(p, true) != f(q, true) && f(p, false) != f(q, false) {
            return Err(invalid(format!(
                "arcs {p} and {q} are not coherently oriented around a common face"
            )));
        }
    }
    let mut crossings = d.crossings().to_vec();
    crossings[ep.head.crossing].slots[ep.head.slot] = q;
    crossings[eq.head.crossing].slots[eq.head.slot] = p;
    let out = Diagram::new(crossings, d.free_loops().to_vec())?;
    if !out.is_planar() {
        return Err(invalid(format!("saddle on {p}, {q} is not planar")));
    }
    Ok(out)
}

pub fn saddle_map(pre: &Diagram, post: &Diagram, site: SaddleSite, g: &Gen) -> Chain {
    let SaddleSite { p, q, new } = site;
    let s = Smoothing::new(pre, g.state);
    let t = Smoothing::new(post, g.state);
    let dropped: Vec<ArcId> = pre
        .free_loops()
        .iter()
        .copied()
        .filter(|l| !post.has_arc(*l))
        .collect();
    let map = |a: ArcId| if dropped.contains(&a) { None } else { Some(a) };
    let tr = Transfer {
        pre,
        pre_sm: &s,
        post,
        post_sm: &t,
        arc_map: &map,
    };
    let lp = s.loop_of(pre, p);
    let lq = s.loop_of(pre, q);
    let mut out = Chain::zero();
    if p != q && lp != lq {
        let keep = if post.has_arc(p) { p } else { q };
        let m = t.loop_of(post, keep);
        match (g.label(lp), g.label(lq)) {
            (true, true) => {}
            (a, b) => out.add_term(tr.gen(g, &[lp, lq], &[(m, a || b)]), &Int::ONE),
        }
    } else {
        let other = new.unwrap_or(q);
        let t1 = t.loop_of(post, p);
        let t2 = t.loop_of(post, other);
        debug_assert_ne!(t1, t2);
        if g.label(lp) {
            out.add_term(tr.gen(g, &[lp], &[(t1, true), (t2, true)]), &Int::ONE);
        } else {
            out.add_term(tr.gen(g, &[lp], &[(t1, true), (t2, false)]), &Int::ONE);
            out.add_term(tr.gen(g, &[lp], &[(t1, false), (t2, true)]), &Int::ONE);
        }
    }
    out
}
