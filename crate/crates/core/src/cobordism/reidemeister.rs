//! Reidemeister I and II moves in both directions, and crossing resolution.
//!
//! The maps are the Gaussian-elimination projections and inclusions
//! between the complex with the extra crossings and the complex without.

use crate::cobordism::local::{deletion_sign, drop_bits, fresh_arcs, splice, Transfer};
use crate::cobordism::morse::{dot_map, saddle_map, saddle_post, SaddleSite};
use crate::complex::{edge_sign, saddle_edge, Chain, Gen, Smoothing};
use crate::diagram::{ArcId, Crossing, Diagram, Side, Sign};
use crate::error::{Error, Result};
use crate::int::Int;

fn invalid(msg: String) -> Error {
    Error::InvalidDiagram(msg)
}

fn sign_bit(s: Sign) -> u64 {
    match s {
        Sign::Positive => 0,
        Sign::Negative => 1,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Kink {
    pub crossing: usize,
    pub loop_arc: ArcId,
    pub through_in: ArcId,
}

pub fn find_kink(d: &Diagram, c: usize, sign: Sign) -> Result<Kink> {
    if c >= d.num_crossings() {
        return Err(invalid(format!("no crossing c{}", c + 1)));
    }
    let x = d.crossing(c);
    if x.sign != sign {
        return Err(invalid(format!("crossing c{} has the other sign", c + 1)));
    }
    // the small loop closes up in the oriented smoothing
    let pairs = Crossing::pairs(x.oriented_resolution());
    for (k, (i, j)) in pairs.iter().enumerate() {
        if x.slots[*i] == x.slots[*j] {
            let (oi, oj) = pairs[1 - k];
            let inc = if x.is_incoming(oi) { oi } else { oj };
            return Ok(Kink {
                crossing: c,
                loop_arc: x.slots[*i],
                through_in: x.slots[inc],
            });
        }
    }
    Err(invalid(format!("crossing c{} is not a kink", c + 1)))
}

pub fn r1_post(d: &Diagram, k: &Kink) -> Result<Diagram> {
    Ok(splice(d, &[k.crossing])?.0)
}

pub fn r1_map(pre: &Diagram, post: &Diagram, k: &Kink, g: &Gen) -> Chain {
    let c = k.crossing;
    let bit = (g.state >> c) & 1;
    let sign = pre.crossing(c).sign;
    if bit != sign_bit(sign) {
        return Chain::zero();
    }
    let n = pre.num_crossings();
    let (_, map) = splice(pre, &[c]).expect("valid kink");
    let s = Smoothing::new(pre, g.state);
    let t = Smoothing::new(post, drop_bits(g.state, n, &[c]));
    let tr = Transfer {
        pre,
        pre_sm: &s,
        post,
        post_sm: &t,
        arc_map: &|a| map.get(&a).copied(),
    };
    let lo = s.loop_of(pre, k.loop_arc);
    let coef = deletion_sign(g.state, n, &[c]);
    let mut out = Chain::zero();
    match sign {
        Sign::Positive => {
            if g.label(lo) {
                out.add_term(tr.gen(g, &[lo], &[]), &coef);
            }
        }
        Sign::Negative => {
            let lt = s.loop_of(pre, k.through_in);
            let m = t.loop_of(post, map[&k.through_in]);
            if !g.label(lo) {
                out.add_term(tr.gen(g, &[lo], &[]), &coef);
            } else if !g.label(lt) {
                out.add_term(tr.gen(g, &[lo, lt], &[(m, true)]), &-coef);
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rotation {
    Clockwise,
    Counterclockwise,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KinkSite {
    pub arc: ArcId,
    pub sign: Sign,
    pub rotation: Rotation,
}

/// Adds a kink on `arc` as a new last crossing. Returns the diagram and
/// the new loop arc.
pub fn r1inv_post(d: &Diagram, site: KinkSite) -> Result<(Diagram, ArcId)> {
    let p = site.arc;
    if !d.has_arc(p) {
        return Err(invalid(format!("no arc {p}")));
    }
    let fresh = fresh_arcs(d, 2);
    let k = fresh[0];
    let mut crossings = d.crossings().to_vec();
    let mut loops = d.free_loops().to_vec();
    let p2 = if d.is_free_loop(p) {
        loops.retain(|l| *l != p);
        p
    } else {
        let e = d.ends(p).unwrap();
        crossings[e.head.crossing].slots[e.head.slot] = fresh[1];
        fresh[1]
    };
    let slots = match (site.sign, site.rotation) {
        (Sign::Positive, Rotation::Clockwise) => [k, k, p2, p],
        (Sign::Positive, Rotation::Counterclockwise) => [p, p2, k, k],
        (Sign::Negative, Rotation::Clockwise) => [p, k, k, p2],
        (Sign::Negative, Rotation::Counterclockwise) => [k, p, p2, k],
    };
    crossings.push(Crossing {
        sign: site.sign,
        slots,
    });
    let out = Diagram::new(crossings, loops)?;
    Ok((out, k))
}

pub fn r1inv_map(pre: &Diagram, post: &Diagram, site: KinkSite, loop_arc: ArcId, g: &Gen) -> Chain {
    let n = pre.num_crossings();
    let state = g.state | sign_bit(site.sign) << n;
    let s = Smoothing::new(pre, g.state);
    let t = Smoothing::new(post, state);
    let tr = Transfer {
        pre,
        pre_sm: &s,
        post,
        post_sm: &t,
        arc_map: &|a| Some(a),
    };
    let lo = t.loop_of(post, loop_arc);
    let mut out = Chain::zero();
    match site.sign {
        Sign::Positive => {
            // half the difference of dots on the new loop and on the strand
            let base = tr.gen(g, &[], &[(lo, false)]);
            let twice = dot_map(post, loop_arc, &base).sub(&dot_map(post, site.arc, &base));
            out = twice
                .divided(&Int::from(2))
                .expect("odd coefficient in Reidemeister I creation");
        }
        Sign::Negative => out.add_term(tr.gen(g, &[], &[(lo, false)]), &Int::ONE),
    }
    out
}

/// A Reidemeister II bigon between crossings `c1 < c2` bounded by arcs
/// `m1`, `m2`.
#[derive(Clone, Copy, Debug)]
pub struct Bigon {
    pub c1: usize,
    pub c2: usize,
    pub m1: ArcId,
    pub m2: ArcId,
    /// Local states `(bit at c1, bit at c2)`.
    pub circle: (u64, u64),
    pub parallel: (u64, u64),
}

fn slot_of(x: &Crossing, a: ArcId, avoid: Option<usize>) -> Option<usize> {
    (0..4).find(|&s| x.slots[s] == a && Some(s) != avoid)
}

fn pairing_bit(_x: &Crossing, s1: usize, s2: usize) -> Option<u64> {
    for bit in 0..2u8 {
        for (i, j) in Crossing::pairs(bit) {
            if (i, j) == (s1, s2) || (j, i) == (s1, s2) {
                return Some(bit as u64);
            }
        }
    }
    None
}

pub fn find_bigon(d: &Diagram, a: usize, b: usize) -> Result<Bigon> {
    let n = d.num_crossings();
    if a >= n || b >= n || a == b {
        return Err(invalid("Reidemeister II needs two distinct crossings".into()));
    }
    let (c1, c2) = (a.min(b), a.max(b));
    let (x1, x2) = (d.crossing(c1), d.crossing(c2));
    let mut shared: Vec<ArcId> = vec![];
    for &m in d.arcs() {
        if let Some(e) = d.ends(m) {
            let ends = [e.head.crossing, e.tail.crossing];
            if ends.contains(&c1) && ends.contains(&c2) {
                shared.push(m);
            }
        }
    }
    let faces = d.face_map();
    for i in 0..shared.len() {
        for j in i + 1..shared.len() {
            let (m1, m2) = (shared[i], shared[j]);
            let (s11, s12) = match (slot_of(x1, m1, None), slot_of(x2, m1, None)) {
                (Some(a), Some(b)) => (a, b),
                _ => continue,
            };
            let (s21, s22) = match (slot_of(x1, m2, None), slot_of(x2, m2, None)) {
                (Some(a), Some(b)) => (a, b),
                _ => continue,
            };
            let r1 = match pairing_bit(x1, s11, s21) {
                Some(r) => r,
                None => continue,
            };
            let r2 = match pairing_bit(x2, s12, s22) {
                Some(r) => r,
                None => continue,
            };
            // one strand over at both crossings
            if (s11 % 2) != (s12 % 2) {
                continue;
            }
            // the two arcs bound a face
            let bounds = [true, false].iter().any(|&f1| {
                [true, false].iter().any(|&f2| {
                    let fa = faces[&Side { arc: m1, forward: f1 }];
                    fa == faces[&Side { arc: m2, forward: f2 }]
                        && faces.values().filter(|v| **v == fa).count() == 2
                })
            });
            if !bounds || r1 == r2 {
                continue;
            }
            return Ok(Bigon {
                c1,
                c2,
                m1,
                m2,
                circle: (r1, r2),
                parallel: (1 - r1, 1 - r2),
            });
        }
    }
    Err(invalid(format!(
        "crossings c{} and c{} do not bound a Reidemeister II bigon",
        c1 + 1,
        c2 + 1
    )))
}

fn local(state: u64, b: &Bigon) -> (u64, u64) {
    ((state >> b.c1) & 1, (state >> b.c2) & 1)
}

fn with_local(state: u64, b: &Bigon, l: (u64, u64)) -> u64 {
    let s = state & !(1 << b.c1) & !(1 << b.c2);
    s | l.0 << b.c1 | l.1 << b.c2
}

/// The crossing that changes between two local states differing in one bit.
fn changed(b: &Bigon, from: (u64, u64), to: (u64, u64)) -> usize {
    if from.0 != to.0 {
        b.c1
    } else {
        b.c2
    }
}

pub fn r2_post(d: &Diagram, b: &Bigon) -> Result<Diagram> {
    Ok(splice(d, &[b.c1, b.c2])?.0)
}

pub fn r2_map(pre: &Diagram, post: &Diagram, b: &Bigon, g: &Gen) -> Chain {
    let n = pre.num_crossings();
    let removed = [b.c1, b.c2];
    let (_, map) = splice(pre, &removed).expect("valid bigon");
    let to_post = |c: &Gen| -> Gen {
        let s = Smoothing::new(pre, c.state);
        let t = Smoothing::new(post, drop_bits(c.state, n, &removed));
        let tr = Transfer {
            pre,
            pre_sm: &s,
            post,
            post_sm: &t,
            arc_map: &|a| if a == b.m1 || a == b.m2 { None } else { map.get(&a).copied() },
        };
        tr.gen(c, &[], &[])
    };
    let l = local(g.state, b);
    let mut out = Chain::zero();
    if l == b.parallel {
        out.add_term(to_post(g), &deletion_sign(g.state, n, &removed));
    } else if l == b.circle {
        let s_b = Smoothing::new(pre, g.state);
        let lo = s_b.loop_of(pre, b.m1);
        if !g.label(lo) {
            return out;
        }
        let a_state = with_local(g.state, b, (0, 0));
        let c_state = with_local(g.state, b, b.parallel);
        let s_a = Smoothing::new(pre, a_state);
        let s_c = Smoothing::new(pre, c_state);
        let a_gen = Transfer {
            pre,
            pre_sm: &s_b,
            post: pre,
            post_sm: &s_a,
            arc_map: &|a| Some(a),
        }
        .gen(g, &[lo], &[]);
        let ab = changed(b, (0, 0), b.circle);
        let ac = changed(b, (0, 0), b.parallel);
        let coef = -(&edge_sign(a_state, ab) * &edge_sign(a_state, ac));
        for (c, v) in saddle_edge(pre, &s_a, &s_c, ac, &a_gen) {
            let w = &(&v * &coef) * &deletion_sign(c.state, n, &removed);
            out.add_term(to_post(&c), &w);
        }
    }
    out
}

/// Reidemeister II creation: arc `over.arc` is pushed over `under.arc`
/// across the face on the left of both given sides.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FingerSite {
    pub over: Side,
    pub under: Side,
}

// compass sides, counterclockwise
const S: usize = 0;
const E: usize = 1;
const N: usize = 2;
const W: usize = 3;

pub fn r2inv_post(d: &Diagram, site: FingerSite) -> Result<(Diagram, Bigon)> {
    let (p, q) = (site.over.arc, site.under.arc);
    if p == q || !d.has_arc(p) || !d.has_arc(q) {
        return Err(invalid(format!("bad Reidemeister II arcs {p}, {q}")));
    }
    if !d.is_free_loop(p) && !d.is_free_loop(q) {
        let ep = d.ends(p).unwrap();
        let eq = d.ends(q).unwrap();
        let same_piece = d
            .graph_components()
            .iter()
            .any(|c| c.contains(&ep.head.crossing) && c.contains(&eq.head.crossing));
        if same_piece {
            let faces = d.face_map();
            if faces[&site.over] != faces[&site.under] {
                return Err(invalid(format!("arcs {p} and {q} do not share that face")));
            }
        }
    }
    let mut next = d.max_arc() + 1;
    let mut fresh = || {
        next += 1;
        ArcId(next - 1)
    };
    let mut crossings = d.crossings().to_vec();
    let mut loops = d.free_loops().to_vec();
    // segments in traversal order (face on the left): before, middle, after
    let mut split = |a: ArcId, forward: bool| -> [ArcId; 3] {
        let mid = fresh();
        if d.is_free_loop(a) {
            loops.retain(|l| *l != a);
            return [a, mid, a];
        }
        let last = fresh();
        let e = d.ends(a).unwrap();
        crossings[e.head.crossing].slots[e.head.slot] = last;
        if forward {
            [a, mid, last]
        } else {
            [last, mid, a]
        }
    };
    let ps = split(p, site.over.forward);
    let qs = split(q, site.under.forward);
    // traversal: P runs west->east through `top`, then east->west through `bot`;
    // Q runs south->north through `bot`, then `top`
    let mut top = [ArcId(0); 4];
    top[W] = ps[0];
    top[E] = ps[1];
    top[S] = qs[1];
    top[N] = qs[2];
    let mut bot = [ArcId(0); 4];
    bot[E] = ps[1];
    bot[W] = ps[2];
    bot[S] = qs[0];
    bot[N] = qs[1];
    let p_in_top = if site.over.forward { W } else { E };
    let p_in_bot = if site.over.forward { E } else { W };
    let q_in = if site.under.forward { S } else { N };
    let build = |sides: [ArcId; 4], over_in: usize, under_in: usize| -> Crossing {
        let slots = [0, 1, 2, 3].map(|k| sides[(under_in + k) % 4]);
        let sign = if over_in == (under_in + 3) % 4 {
            Sign::Positive
        } else {
            Sign::Negative
        };
        Crossing { sign, slots }
    };
    let n = crossings.len();
    crossings.push(build(top, p_in_top, q_in));
    crossings.push(build(bot, p_in_bot, q_in));
    let out = Diagram::new(crossings, loops)?;
    if !out.is_planar() {
        return Err(invalid("Reidemeister II creation is not planar".into()));
    }
    let b = find_bigon(&out, n, n + 1)?;
    Ok((out, b))
}

pub fn r2inv_map(pre: &Diagram, post: &Diagram, b: &Bigon, g: &Gen) -> Chain {
    let n = post.num_crossings();
    let removed = [b.c1, b.c2];
    let c_state = with_local(g.state, b, b.parallel);
    let s0 = Smoothing::new(pre, g.state);
    let s_c = Smoothing::new(post, c_state);
    let c_gen = Transfer {
        pre,
        pre_sm: &s0,
        post,
        post_sm: &s_c,
        arc_map: &|a| Some(a),
    }
    .gen(g, &[], &[]);
    let iota = deletion_sign(c_state, n, &removed);
    let mut out = Chain::zero();
    out.add_term(c_gen, &iota);
    let d_local = (1, 1);
    let d_state = with_local(g.state, b, d_local);
    let b_state = with_local(g.state, b, b.circle);
    let s_d = Smoothing::new(post, d_state);
    let s_b = Smoothing::new(post, b_state);
    let cd = changed(b, b.parallel, d_local);
    let bd = changed(b, b.circle, d_local);
    let coef = -(&edge_sign(c_state, cd) * &edge_sign(b_state, bd));
    let circle = s_b.loop_of(post, b.m1);
    for (dg, v) in saddle_edge(post, &s_c, &s_d, cd, &c_gen) {
        let bg = Transfer {
            pre: post,
            pre_sm: &s_d,
            post,
            post_sm: &s_b,
            arc_map: &|a| Some(a),
        }
        .gen(&dg, &[], &[(circle, false)]);
        out.add_term(bg, &(&(&v * &coef) * &iota));
    }
    out
}

/// Resolving a crossing into its oriented smoothing: a saddle that turns
/// the crossing into a kink, then removal of the kink.
pub fn resolve_site(d: &Diagram, c: usize) -> Result<SaddleSite> {
    if c >= d.num_crossings() {
        return Err(invalid(format!("no crossing c{}", c + 1)));
    }
    let x = d.crossing(c);
    let other = match x.sign {
        Sign::Positive => 1,
        Sign::Negative => 3,
    };
    let (p, q) = (x.slots[0], x.slots[other]);
    // on a kink the saddle splits the small loop off as a separate circle
    let new = (p == q).then(|| ArcId(d.max_arc() + 1));
    Ok(SaddleSite { p, q, new })
}

pub fn resolve_post(d: &Diagram, c: usize) -> Result<(Diagram, Diagram, Kink)> {
    let site = resolve_site(d, c)?;
    let mid = saddle_post(d, site)?;
    let kink = find_kink(&mid, c, d.crossing(c).sign)?;
    let post = r1_post(&mid, &kink)?;
    Ok((mid, post, kink))
}

pub fn resolve_map(pre: &Diagram, mid: &Diagram, post: &Diagram, c: usize, kink: &Kink, g: &Gen) -> Chain {
    let site = resolve_site(pre, c).expect("valid resolution");
    let mut out = Chain::zero();
    for (h, v) in saddle_map(pre, mid, site, g).terms() {
        out.add_scaled(&r1_map(mid, post, kink, h), v);
    }
    out
}
