//! Reidemeister III. Both sides are reduced by Gaussian elimination in the
//! cone of one crossing; the reduced complexes are matched generator by
//! generator.

use std::collections::VecDeque;

use crate::cobordism::local::Transfer;
use crate::complex::{differential, Chain, Gen, Smoothing};
use crate::diagram::{ArcId, Crossing, Diagram};
use crate::error::{Error, Result};
use crate::int::Int;

/// Which strand moves: the one over both others, or the one under both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Slide {
    Over,
    Under,
}

fn invalid(msg: String) -> Error {
    Error::InvalidDiagram(msg)
}

#[derive(Clone, Copy, Debug)]
struct Edge {
    arc: ArcId,
    tail: (usize, usize),
    head: (usize, usize),
}

/// The triangle of a Reidemeister III move seen in one diagram.
#[derive(Clone, Debug)]
pub struct Triangle {
    cone: usize,
    pair: [usize; 2],
    /// Bit at `cone` joining the two triangle edges there.
    r: u64,
    circle: (u64, u64),
    parallel: (u64, u64),
    slider: ArcId,
    edges: [ArcId; 3],
}

fn pairing_bit(s1: usize, s2: usize) -> Option<u64> {
    for bit in 0..2u8 {
        for (i, j) in Crossing::pairs(bit) {
            if (i, j) == (s1, s2) || (j, i) == (s1, s2) {
                return Some(bit as u64);
            }
        }
    }
    None
}

fn triangle_edges(d: &Diagram, cs: [usize; 3]) -> Result<[Edge; 3]> {
    let n = d.num_crossings();
    if cs.iter().any(|&c| c >= n) || cs[0] == cs[1] || cs[1] == cs[2] || cs[0] == cs[2] {
        return Err(invalid("Reidemeister III needs three distinct crossings".into()));
    }
    'faces: for face in d.faces() {
        if face.len() != 3 {
            continue;
        }
        let mut edges = vec![];
        for side in &face {
            let e = match d.ends(side.arc) {
                Some(e) => e,
                None => continue 'faces,
            };
            let (t, h) = (e.tail.crossing, e.head.crossing);
            if t == h || !cs.contains(&t) || !cs.contains(&h) {
                continue 'faces;
            }
            edges.push(Edge {
                arc: side.arc,
                tail: (t, e.tail.slot),
                head: (h, e.head.slot),
            });
        }
        let mut pairs: Vec<(usize, usize)> = edges
            .iter()
            .map(|e| (e.tail.0.min(e.head.0), e.tail.0.max(e.head.0)))
            .collect();
        pairs.sort();
        pairs.dedup();
        if pairs.len() == 3 {
            return Ok([edges[0], edges[1], edges[2]]);
        }
    }
    Err(invalid(format!(
        "crossings c{}, c{}, c{} do not bound a triangle",
        cs[0] + 1,
        cs[1] + 1,
        cs[2] + 1
    )))
}

fn is_over(slot: usize) -> bool {
    slot % 2 == 1
}

fn find_triangle(d: &Diagram, cs: [usize; 3], slide: Slide) -> Result<(Triangle, [Edge; 3])> {
    let edges = triangle_edges(d, cs)?;
    let level = |e: &Edge| is_over(e.tail.1) as u8 + is_over(e.head.1) as u8;
    let want = match slide {
        Slide::Over => 2,
        Slide::Under => 0,
    };
    let levels: Vec<u8> = edges.iter().map(level).collect();
    let mut sorted = levels.clone();
    sorted.sort();
    if sorted != [0, 1, 2] {
        return Err(invalid("the triangle has no strand over both others".into()));
    }
    let s = edges[levels.iter().position(|&l| l == want).unwrap()];
    let cone = *cs.iter().find(|&&c| c != s.tail.0 && c != s.head.0).unwrap();
    let mut pair = [s.tail.0, s.head.0];
    pair.sort();
    let slot_at = |c: usize, e: &Edge| if e.tail.0 == c { e.tail.1 } else { e.head.1 };
    let at = |c: usize| -> Vec<usize> {
        edges
            .iter()
            .filter(|e| e.tail.0 == c || e.head.0 == c)
            .map(|e| slot_at(c, e))
            .collect()
    };
    let cone_slots = at(cone);
    let r = pairing_bit(cone_slots[0], cone_slots[1])
        .ok_or_else(|| invalid("triangle edges are not adjacent".into()))?;
    let bit_at = |c: usize| -> Result<u64> {
        let other = edges
            .iter()
            .find(|e| e.arc != s.arc && (e.tail.0 == c || e.head.0 == c))
            .unwrap();
        pairing_bit(slot_at(c, &s), slot_at(c, other))
            .ok_or_else(|| invalid("triangle edges are not adjacent".into()))
    };
    let circle = (bit_at(pair[0])?, bit_at(pair[1])?);
    if circle.0 == circle.1 {
        return Err(invalid("not a Reidemeister III configuration".into()));
    }
    let t = Triangle {
        cone,
        pair,
        r,
        circle,
        parallel: (1 - circle.0, 1 - circle.1),
        slider: s.arc,
        edges: [edges[0].arc, edges[1].arc, edges[2].arc],
    };
    Ok((t, edges))
}

/// Moves each strand of the triangle across the opposite crossing. Every
/// crossing keeps its index, sign and rotation; triangle arc ids are reused.
fn slide_post(d: &Diagram, edges: &[Edge; 3]) -> Result<Diagram> {
    let mut crossings = d.crossings().to_vec();
    for e in edges {
        let (x1, t1) = e.tail;
        let (x2, h2) = e.head;
        let s_in = d.crossing(x1).slots[(t1 + 2) % 4];
        let s_out = d.crossing(x2).slots[(h2 + 2) % 4];
        crossings[x1].slots[(t1 + 2) % 4] = e.arc;
        crossings[x1].slots[t1] = s_out;
        crossings[x2].slots[h2] = s_in;
        crossings[x2].slots[(h2 + 2) % 4] = e.arc;
    }
    let out = Diagram::new(crossings, d.free_loops().to_vec())?;
    if !out.is_planar() {
        return Err(invalid("Reidemeister III result is not planar".into()));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Part {
    Kill1,
    Target1,
    Kill2,
    Target2,
    Keep,
}

/// Gaussian elimination of one side, in the cone of `t.cone`.
struct Reduction<'a> {
    d: &'a Diagram,
    t: Triangle,
}

impl<'a> Reduction<'a> {
    fn local(&self, state: u64) -> (u64, u64) {
        ((state >> self.t.pair[0]) & 1, (state >> self.t.pair[1]) & 1)
    }

    fn with_local(&self, state: u64, l: (u64, u64)) -> u64 {
        let [a, b] = self.t.pair;
        (state & !(1 << a) & !(1 << b)) | l.0 << a | l.1 << b
    }

    fn cone_bit(&self, state: u64) -> u64 {
        (state >> self.t.cone) & 1
    }

    fn circle_loop(&self, s: &Smoothing) -> usize {
        s.loop_of(self.d, self.t.slider)
    }

    fn part(&self, g: &Gen) -> Part {
        if self.cone_bit(g.state) != self.t.r {
            return Part::Keep;
        }
        let l = self.local(g.state);
        if l == (0, 0) {
            Part::Kill1
        } else if l == (1, 1) {
            Part::Target2
        } else if l == self.t.circle {
            let s = Smoothing::new(self.d, g.state);
            if g.label(self.circle_loop(&s)) {
                Part::Target1
            } else {
                Part::Kill2
            }
        } else {
            Part::Keep
        }
    }

    /// Class of a kept generator: local bits when the cone bit is `1 - r`,
    /// otherwise 4.
    fn class(&self, g: &Gen) -> usize {
        if self.cone_bit(g.state) == self.t.r {
            4
        } else {
            let l = self.local(g.state);
            (2 * l.0 + l.1) as usize
        }
    }

    fn diff(&self, c: &Chain) -> Chain {
        differential(self.d, c)
    }

    fn project(&self, c: &Chain, keep: &[Part]) -> Chain {
        let mut out = Chain::zero();
        for (g, v) in c.terms() {
            if keep.contains(&self.part(g)) {
                out.add_term(*g, v);
            }
        }
        out
    }

    fn phi1_inv(&self, e: &Gen) -> Chain {
        let s_e = Smoothing::new(self.d, e.state);
        let a_state = self.with_local(e.state, (0, 0));
        let s_a = Smoothing::new(self.d, a_state);
        let circle = self.circle_loop(&s_e);
        let a = Transfer {
            pre: self.d,
            pre_sm: &s_e,
            post: self.d,
            post_sm: &s_a,
            arc_map: &|x| Some(x),
        }
        .gen(e, &[circle], &[]);
        let c = self.diff(&Chain::from_gen(a)).coefficient(e);
        debug_assert!(c.is_unit());
        let mut out = Chain::zero();
        out.add_term(a, &c);
        out
    }

    fn phi2_inv(&self, e: &Gen) -> Chain {
        let s_e = Smoothing::new(self.d, e.state);
        let b_state = self.with_local(e.state, self.t.circle);
        let s_b = Smoothing::new(self.d, b_state);
        let circle = self.circle_loop(&s_b);
        let b = Transfer {
            pre: self.d,
            pre_sm: &s_e,
            post: self.d,
            post_sm: &s_b,
            arc_map: &|x| Some(x),
        }
        .gen(e, &[], &[(circle, false)]);
        let c = self.diff(&Chain::from_gen(b)).coefficient(e);
        debug_assert!(c.is_unit());
        let mut out = Chain::zero();
        out.add_term(b, &c);
        out
    }

    const R1: [Part; 3] = [Part::Kill2, Part::Target2, Part::Keep];

    fn p1(&self, y: &Chain) -> Chain {
        let mut out = self.project(y, &Self::R1);
        for (g, v) in y.terms() {
            if self.part(g) == Part::Target1 {
                let back = self.project(&self.diff(&self.phi1_inv(g)), &Self::R1);
                out.add_scaled(&back, &-v.clone());
            }
        }
        out
    }

    fn d1(&self, y: &Chain) -> Chain {
        self.p1(&self.diff(y))
    }

    fn p2(&self, y: &Chain) -> Chain {
        let mut out = self.project(y, &[Part::Keep]);
        for (g, v) in y.terms() {
            if self.part(g) == Part::Target2 {
                let back = self.project(&self.d1(&self.phi2_inv(g)), &[Part::Keep]);
                out.add_scaled(&back, &-v.clone());
            }
        }
        out
    }

    fn i1(&self, r: &Chain) -> Chain {
        let mut out = r.clone();
        for (g, v) in self.diff(r).terms() {
            if self.part(g) == Part::Target1 {
                out.add_scaled(&self.phi1_inv(g), &-v.clone());
            }
        }
        out
    }

    fn i2(&self, r: &Chain) -> Chain {
        let mut out = r.clone();
        for (g, v) in self.d1(r).terms() {
            if self.part(g) == Part::Target2 {
                out.add_scaled(&self.phi2_inv(g), &-v.clone());
            }
        }
        out
    }

    fn project_all(&self, y: &Chain) -> Chain {
        self.p2(&self.p1(y))
    }

    fn include(&self, r: &Chain) -> Chain {
        self.i1(&self.i2(r))
    }

    fn reduced_diff(&self, r: &Chain) -> Chain {
        self.project_all(&self.diff(&self.include(r)))
    }

    /// Sign of moving the 1-bits at the triangle crossings to the front.
    fn koszul(&self, state: u64) -> bool {
        let local = [self.t.cone, self.t.pair[0], self.t.pair[1]];
        let mut flips = 0;
        for &c in &local {
            if (state >> c) & 1 == 1 {
                flips += (0..c)
                    .filter(|j| !local.contains(j) && (state >> j) & 1 == 1)
                    .count();
            }
        }
        flips % 2 == 1
    }
}

/// Data for evaluating a Reidemeister III map.
#[derive(Clone, Debug)]
pub struct R3Data {
    pre: Triangle,
    post: Triangle,
    kappa: [Int; 5],
}

fn natural(pre: &Reduction, post: &Reduction, y: &Gen) -> (Gen, bool) {
    // away from the bigon, the arc crossing the slider at one end of the
    // slider's edge crosses it at the other end after the move
    let state = if pre.class(y) == 4 {
        post.with_local(y.state, post.t.parallel)
    } else {
        let (u, v) = pre.local(y.state);
        post.with_local(y.state, (v, u))
    };
    let s = Smoothing::new(pre.d, y.state);
    let t = Smoothing::new(post.d, state);
    let edges = pre.t.edges;
    let z = Transfer {
        pre: pre.d,
        pre_sm: &s,
        post: post.d,
        post_sm: &t,
        arc_map: &|a| if edges.contains(&a) { None } else { Some(a) },
    }
    .gen(y, &[], &[]);
    (z, pre.koszul(y.state) ^ post.koszul(state))
}

fn signed(flip: bool) -> Int {
    if flip {
        Int::from(-1)
    } else {
        Int::ONE
    }
}

/// The diagram after the move, without the chain map data.
pub fn r3_diagram(d: &Diagram, cs: [usize; 3], slide: Slide) -> Result<Diagram> {
    let (_, edges) = find_triangle(d, cs, slide)?;
    slide_post(d, &edges)
}

/// Builds the post diagram and solves for the class signs of the matching
/// between the two reduced complexes.
pub fn r3_post(d: &Diagram, cs: [usize; 3], slide: Slide) -> Result<(Diagram, R3Data)> {
    let (pre_t, edges) = find_triangle(d, cs, slide)?;
    let post_d = slide_post(d, &edges)?;
    let (post_t, _) = find_triangle(&post_d, cs, slide)?;
    if post_t.cone != pre_t.cone || post_t.r != pre_t.r {
        return Err(invalid("Reidemeister III sides disagree".into()));
    }
    let pre = Reduction { d, t: pre_t };
    let post = Reduction {
        d: &post_d,
        t: post_t,
    };
    let kappa = calibrate(&pre, &post)?;
    let data = R3Data {
        pre: pre.t,
        post: post.t,
        kappa,
    };
    Ok((post_d, data))
}

/// Generators of a class with all other crossings 0-smoothed, with a few
/// label choices.
fn representatives(red: &Reduction, class: usize) -> Vec<Gen> {
    let t = &red.t;
    let state = if class == 4 {
        red.with_local(t.r << t.cone, t.parallel)
    } else {
        red.with_local((1 - t.r) << t.cone, ((class >> 1) as u64, (class & 1) as u64))
    };
    let k = Smoothing::new(red.d, state).num_loops();
    let count = 1u64 << k.min(4);
    (0..count).map(|labels| Gen::new(state, labels, k)).collect()
}

/// Solves for one sign per class so that the matching commutes with the
/// reduced differentials.
fn calibrate(pre: &Reduction, post: &Reduction) -> Result<[Int; 5]> {
    let local = [pre.t.cone, pre.t.pair[0], pre.t.pair[1]];
    let outer_zero = |g: &Gen| (0..64).all(|j| local.contains(&j) || (g.state >> j) & 1 == 0);
    // (class, class, same sign?)
    let mut links: Vec<(usize, usize, bool)> = vec![];
    for k in 0..5 {
        for y in representatives(pre, k) {
            let (ny, wy) = natural(pre, post, &y);
            let dl = pre.reduced_diff(&Chain::from_gen(y));
            let dr = post.reduced_diff(&Chain::from_gen(ny));
            let mut mapped = Chain::zero();
            for (z, v) in dl.terms() {
                let (nz, wz) = natural(pre, post, z);
                mapped.add_term(nz, &v.abs());
                if !outer_zero(z) {
                    continue;
                }
                let w = dr.coefficient(&nz);
                links.push((k, pre.class(z), (w == *v) ^ wy ^ wz));
            }
            let mut target = Chain::zero();
            for (z, w) in dr.terms() {
                target.add_term(*z, &w.abs());
            }
            if mapped != target {
                return Err(invalid("Reidemeister III reduced complexes do not match".into()));
            }
        }
    }
    let mut kappa: [Option<bool>; 5] = [Some(true), None, None, None, None];
    let mut queue: VecDeque<usize> = VecDeque::from([0]);
    while let Some(k) = queue.pop_front() {
        let kk = kappa[k].unwrap();
        for &(a, b, same) in &links {
            let other = if a == k {
                b
            } else if b == k {
                a
            } else {
                continue;
            };
            let val = kk == same;
            match kappa[other] {
                None => {
                    kappa[other] = Some(val);
                    queue.push_back(other);
                }
                Some(old) if old != val => {
                    return Err(invalid("Reidemeister III signs are inconsistent".into()));
                }
                _ => {}
            }
        }
    }
    let mut out: [Int; 5] = [Int::ONE, Int::ONE, Int::ONE, Int::ONE, Int::ONE];
    for (i, k) in kappa.iter().enumerate() {
        match k {
            None => return Err(invalid("Reidemeister III classes are not connected".into())),
            Some(false) => out[i] = Int::from(-1),
            Some(true) => {}
        }
    }
    Ok(out)
}

pub fn r3_map(pre: &Diagram, post: &Diagram, data: &R3Data, g: &Gen) -> Chain {
    let l = Reduction {
        d: pre,
        t: data.pre.clone(),
    };
    let r = Reduction {
        d: post,
        t: data.post.clone(),
    };
    let mut mid = Chain::zero();
    for (y, v) in l.project_all(&Chain::from_gen(*g)).terms() {
        let (ny, w) = natural(&l, &r, y);
        let coef = &(v * &data.kappa[l.class(y)]) * &signed(w);
        mid.add_term(ny, &coef);
    }
    r.include(&mid)
}

/// The crossing between the two strands that do not slide.
pub fn cone_crossing(d: &Diagram, cs: [usize; 3], slide: Slide) -> Result<usize> {
    Ok(find_triangle(d, cs, slide)?.0.cone)
}
