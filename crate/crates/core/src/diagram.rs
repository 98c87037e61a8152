//! Oriented link diagrams in planar-diagram form.
//!
//! A crossing `± a b c d` lists its four arcs counterclockwise starting from
//! the incoming under-strand, so the under-strand runs `a -> c`. At a positive
//! crossing the over-strand runs `d -> b`, at a negative one `b -> d`.
//! The 0-smoothing joins `(a,b)` and `(c,d)`; the 1-smoothing joins `(a,d)`
//! and `(b,c)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::error::{parse_err, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcId(pub u32);

impl fmt::Display for ArcId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }
}

pub const MAX_CROSSINGS: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub sign: Sign,
    pub slots: [ArcId; 4],
}

impl Crossing {
    pub fn new(sign: Sign, slots: [u32; 4]) -> Self {
        Crossing {
            sign,
            slots: slots.map(ArcId),
        }
    }

    /// Whether the arc at `slot` ends (arrives) at this crossing.
    pub fn is_incoming(&self, slot: usize) -> bool {
        match slot {
            0 => true,
            2 => false,
            1 => self.sign == Sign::Negative,
            3 => self.sign == Sign::Positive,
            _ => unreachable!(),
        }
    }

    /// Slot pairs joined by the given smoothing.
    pub fn pairs(res: u8) -> [(usize, usize); 2] {
        if res == 0 {
            [(0, 1), (2, 3)]
        } else {
            [(0, 3), (1, 2)]
        }
    }

    /// Smoothing that respects the orientation.
    pub fn oriented_resolution(&self) -> u8 {
        match self.sign {
            Sign::Positive => 0,
            Sign::Negative => 1,
        }
    }

    /// The same crossing with over and under exchanged.
    pub fn mirrored(&self) -> Crossing {
        let [a, b, c, d] = self.slots;
        match self.sign {
            Sign::Positive => Crossing {
                sign: Sign::Negative,
                slots: [d, a, b, c],
            },
            Sign::Negative => Crossing {
                sign: Sign::Positive,
                slots: [b, c, d, a],
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Endpoint {
    pub crossing: usize,
    pub slot: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ArcEnds {
    /// Where the arc starts (it leaves this crossing).
    pub tail: Endpoint,
    /// Where the arc ends (it enters this crossing).
    pub head: Endpoint,
}

#[derive(Clone, Debug)]
pub struct Diagram {
    crossings: Vec<Crossing>,
    free_loops: Vec<ArcId>,
    arcs: Vec<ArcId>,
    index: HashMap<ArcId, usize>,
    ends: Vec<Option<ArcEnds>>,
}

impl PartialEq for Diagram {
    fn eq(&self, other: &Self) -> bool {
        self.crossings == other.crossings && self.free_loops == other.free_loops
    }
}

impl Eq for Diagram {}

/// One side of an arc: traversed forwards or backwards, with the face on the left.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Side {
    pub arc: ArcId,
    pub forward: bool,
}

impl Diagram {
    pub fn empty() -> Self {
        Diagram::new(vec![], vec![]).unwrap()
    }

    pub fn new(crossings: Vec<Crossing>, mut free_loops: Vec<ArcId>) -> Result<Self> {
        if crossings.len() > MAX_CROSSINGS {
            return Err(Error::InvalidDiagram(format!(
                "{} crossings exceed the limit of {MAX_CROSSINGS}",
                crossings.len()
            )));
        }
        free_loops.sort();
        let mut tails: BTreeMap<ArcId, Vec<Endpoint>> = BTreeMap::new();
        let mut heads: BTreeMap<ArcId, Vec<Endpoint>> = BTreeMap::new();
        for (i, c) in crossings.iter().enumerate() {
            for s in 0..4 {
                let e = Endpoint { crossing: i, slot: s };
                if c.is_incoming(s) {
                    heads.entry(c.slots[s]).or_default().push(e);
                } else {
                    tails.entry(c.slots[s]).or_default().push(e);
                }
            }
        }
        let mut arcs: Vec<ArcId> = tails.keys().chain(heads.keys()).copied().collect();
        arcs.sort();
        arcs.dedup();
        for a in &arcs {
            let t = tails.get(a).map_or(0, |v| v.len());
            let h = heads.get(a).map_or(0, |v| v.len());
            if t != 1 || h != 1 {
                return Err(Error::InvalidDiagram(format!(
                    "arc {a} has {t} outgoing and {h} incoming ends"
                )));
            }
        }
        for w in free_loops.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidDiagram(format!("loop {} repeated", w[0])));
            }
        }
        let mut ends: Vec<Option<ArcEnds>> = arcs
            .iter()
            .map(|a| {
                Some(ArcEnds {
                    tail: tails[a][0],
                    head: heads[a][0],
                })
            })
            .collect();
        for l in &free_loops {
            if arcs.binary_search(l).is_ok() {
                return Err(Error::InvalidDiagram(format!(
                    "loop {l} is also a crossing arc"
                )));
            }
        }
        let mut all: Vec<(ArcId, Option<ArcEnds>)> = arcs.into_iter().zip(ends.drain(..)).collect();
        all.extend(free_loops.iter().map(|l| (*l, None)));
        all.sort_by_key(|x| x.0);
        let arcs: Vec<ArcId> = all.iter().map(|x| x.0).collect();
        let ends: Vec<Option<ArcEnds>> = all.iter().map(|x| x.1).collect();
        let index = arcs.iter().enumerate().map(|(i, a)| (*a, i)).collect();
        Ok(Diagram {
            crossings,
            free_loops,
            arcs,
            index,
            ends,
        })
    }

    pub fn from_pd(codes: &[(Sign, [u32; 4])], loops: &[u32]) -> Result<Self> {
        Diagram::new(
            codes.iter().map(|(s, a)| Crossing::new(*s, *a)).collect(),
            loops.iter().map(|l| ArcId(*l)).collect(),
        )
    }

    pub fn crossings(&self) -> &[Crossing] {
        &self.crossings
    }

    pub fn crossing(&self, i: usize) -> &Crossing {
        &self.crossings[i]
    }

    pub fn num_crossings(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> &[ArcId] {
        &self.free_loops
    }

    /// All arc ids, sorted.
    pub fn arcs(&self) -> &[ArcId] {
        &self.arcs
    }

    pub fn num_arcs(&self) -> usize {
        self.arcs.len()
    }

    pub fn arc_index(&self, a: ArcId) -> Option<usize> {
        self.index.get(&a).copied()
    }

    pub fn has_arc(&self, a: ArcId) -> bool {
        self.index.contains_key(&a)
    }

    pub fn is_free_loop(&self, a: ArcId) -> bool {
        self.free_loops.binary_search(&a).is_ok()
    }

    /// Endpoints of a crossing arc; `None` for a crossingless loop.
    pub fn ends(&self, a: ArcId) -> Option<ArcEnds> {
        self.arc_index(a).and_then(|i| self.ends[i])
    }

    pub fn max_arc(&self) -> u32 {
        self.arcs.last().map_or(0, |a| a.0)
    }

    pub fn is_empty(&self) -> bool {
        self.crossings.is_empty() && self.free_loops.is_empty()
    }

    /// `(n_plus, n_minus)`.
    pub fn crossing_counts(&self) -> (usize, usize) {
        let p = self
            .crossings
            .iter()
            .filter(|c| c.sign == Sign::Positive)
            .count();
        (p, self.crossings.len() - p)
    }

    pub fn writhe(&self) -> i64 {
        let (p, n) = self.crossing_counts();
        p as i64 - n as i64
    }

    /// Bit `i` set iff crossing `i` is 1-smoothed in the oriented resolution.
    pub fn oriented_smoothing(&self) -> u64 {
        self.crossings
            .iter()
            .enumerate()
            .filter(|(_, c)| c.sign == Sign::Negative)
            .fold(0, |acc, (i, _)| acc | (1 << i))
    }

    /// The arc that continues the strand after leaving arc `a` at its head.
    pub fn next_arc(&self, a: ArcId) -> ArcId {
        match self.ends(a) {
            None => a,
            Some(e) => self.crossings[e.head.crossing].slots[(e.head.slot + 2) % 4],
        }
    }

    /// Link components as arc sequences in traversal order, each starting at
    /// its smallest arc. Crossingless loops are single-arc components.
    pub fn components(&self) -> Vec<Vec<ArcId>> {
        let mut seen = vec![false; self.arcs.len()];
        let mut out = vec![];
        for (i, &a) in self.arcs.iter().enumerate() {
            if seen[i] {
                continue;
            }
            let mut comp = vec![];
            let mut cur = a;
            loop {
                let j = self.index[&cur];
                if seen[j] {
                    break;
                }
                seen[j] = true;
                comp.push(cur);
                cur = self.next_arc(cur);
            }
            out.push(comp);
        }
        out
    }

    /// Faces of the crossing graph, each a cyclic list of arc sides.
    pub fn faces(&self) -> Vec<Vec<Side>> {
        let mut seen: HashMap<Side, ()> = HashMap::new();
        let mut faces = vec![];
        for (i, &a) in self.arcs.iter().enumerate() {
            if self.ends[i].is_none() {
                continue;
            }
            for forward in [true, false] {
                let start = Side { arc: a, forward };
                if seen.contains_key(&start) {
                    continue;
                }
                let mut face = vec![];
                let mut cur = start;
                loop {
                    seen.insert(cur, ());
                    face.push(cur);
                    let e = self.ends(cur.arc).unwrap();
                    let at = if cur.forward { e.head } else { e.tail };
                    let c = &self.crossings[at.crossing];
                    let slot = (at.slot + 3) % 4;
                    let next = c.slots[slot];
                    let forward = !c.is_incoming(slot);
                    cur = Side { arc: next, forward };
                    if cur == start {
                        break;
                    }
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Face index of every arc side.
    pub fn face_map(&self) -> HashMap<Side, usize> {
        let mut m = HashMap::new();
        for (i, f) in self.faces().into_iter().enumerate() {
            for s in f {
                m.insert(s, i);
            }
        }
        m
    }

    /// Connected components of the crossing graph (as crossing sets).
    pub fn graph_components(&self) -> Vec<Vec<usize>> {
        let n = self.crossings.len();
        let mut uf = UnionFind::new(n);
        for i in 0..self.arcs.len() {
            if let Some(e) = self.ends[i] {
                uf.union(e.head.crossing, e.tail.crossing);
            }
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for c in 0..n {
            groups.entry(uf.find(c)).or_default().push(c);
        }
        groups.into_values().collect()
    }

    /// Checks that every connected piece of the crossing graph is planar
    /// with the given rotations (Euler characteristic 2).
    pub fn is_planar(&self) -> bool {
        let comps = self.graph_components();
        let faces = self.faces();
        let mut comp_of = vec![0; self.crossings.len()];
        for (k, cs) in comps.iter().enumerate() {
            for &c in cs {
                comp_of[c] = k;
            }
        }
        let mut fcount = vec![0usize; comps.len()];
        for f in &faces {
            let e = self.ends(f[0].arc).unwrap();
            fcount[comp_of[e.head.crossing]] += 1;
        }
        comps
            .iter()
            .zip(fcount)
            .all(|(cs, f)| cs.len() as i64 - 2 * cs.len() as i64 + f as i64 == 2)
    }

    /// Same projection with every crossing changed.
    pub fn mirror(&self) -> Diagram {
        Diagram::new(
            self.crossings.iter().map(|c| c.mirrored()).collect(),
            self.free_loops.clone(),
        )
        .unwrap()
    }

    /// Relabels arcs through `f` and reorders crossings so that new crossing
    /// `k` is old crossing `order[k]`.
    pub fn relabeled(&self, f: &dyn Fn(ArcId) -> ArcId, order: &[usize]) -> Result<Diagram> {
        let crossings = order
            .iter()
            .map(|&i| {
                let c = self.crossings[i];
                Crossing {
                    sign: c.sign,
                    slots: c.slots.map(f),
                }
            })
            .collect();
        Diagram::new(crossings, self.free_loops.iter().map(|&a| f(a)).collect())
    }

    /// Renumbers arcs to `1..=m` following the components.
    pub fn normalized(&self) -> Diagram {
        let mut map = HashMap::new();
        let mut next = 1;
        for comp in self.components() {
            for a in comp {
                map.insert(a, ArcId(next));
                next += 1;
            }
        }
        let order: Vec<usize> = (0..self.crossings.len()).collect();
        self.relabeled(&|a| map[&a], &order).unwrap()
    }

    pub fn emit(&self) -> String {
        let mut s = format!("crossings {}\n", self.crossings.len());
        for c in &self.crossings {
            let sign = match c.sign {
                Sign::Positive => '+',
                Sign::Negative => '-',
            };
            s.push_str(&format!(
                "{sign} {} {} {} {}\n",
                c.slots[0], c.slots[1], c.slots[2], c.slots[3]
            ));
        }
        for comp in self.components() {
            if comp.len() == 1 && self.is_free_loop(comp[0]) {
                continue;
            }
            let v: Vec<String> = comp.iter().map(|a| a.to_string()).collect();
            s.push_str(&format!("component {}\n", v.join(" ")));
        }
        for l in &self.free_loops {
            s.push_str(&format!("loop {l}\n"));
        }
        s
    }

    pub fn parse(text: &str) -> Result<Diagram> {
        parse_lines(&mut text.lines().enumerate().map(|(i, l)| (i + 1, l)).peekable())
    }
}

type Lines<'a, I> = std::iter::Peekable<I>;

/// Parses a diagram block from numbered lines, stopping before the first line
/// that is not part of it.
pub(crate) fn parse_lines<'a, I>(lines: &mut Lines<'a, I>) -> Result<Diagram>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let mut header = None;
    while let Some((n, raw)) = lines.peek().copied() {
        let l = strip(raw);
        lines.next();
        if l.is_empty() {
            continue;
        }
        let mut it = l.split_whitespace();
        if it.next() != Some("crossings") {
            return parse_err(n, format!("expected `crossings N`, found `{l}`"));
        }
        let count: usize = match it.next().and_then(|t| t.parse().ok()) {
            Some(c) => c,
            None => return parse_err(n, "bad crossing count"),
        };
        header = Some((n, count));
        break;
    }
    let (hline, count) = match header {
        Some(h) => h,
        None => return parse_err(0, "missing `crossings` header"),
    };
    let mut crossings = vec![];
    while crossings.len() < count {
        let (n, raw) = match lines.next() {
            Some(x) => x,
            None => return parse_err(hline, "too few crossing lines"),
        };
        let l = strip(raw);
        if l.is_empty() {
            continue;
        }
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 5 {
            return parse_err(n, format!("expected `± a b c d`, found `{l}`"));
        }
        let sign = match toks[0] {
            "+" => Sign::Positive,
            "-" => Sign::Negative,
            t => return parse_err(n, format!("bad sign `{t}`")),
        };
        let mut slots = [ArcId(0); 4];
        for k in 0..4 {
            slots[k] = match toks[k + 1].parse() {
                Ok(v) => ArcId(v),
                Err(_) => return parse_err(n, format!("bad arc `{}`", toks[k + 1])),
            };
        }
        crossings.push(Crossing { sign, slots });
    }
    let mut comps: Vec<(usize, Vec<ArcId>)> = vec![];
    let mut loops = vec![];
    while let Some((n, raw)) = lines.peek().copied() {
        let l = strip(raw);
        let mut it = l.split_whitespace();
        match it.next() {
            None => {
                lines.next();
            }
            Some("component") => {
                let mut v = vec![];
                for t in it {
                    match t.parse() {
                        Ok(x) => v.push(ArcId(x)),
                        Err(_) => return parse_err(n, format!("bad arc `{t}`")),
                    }
                }
                comps.push((n, v));
                lines.next();
            }
            Some("loop") => {
                let v: Vec<&str> = it.collect();
                match v.as_slice() {
                    [t] => match t.parse() {
                        Ok(x) => loops.push(ArcId(x)),
                        Err(_) => return parse_err(n, format!("bad loop id `{t}`")),
                    },
                    _ => return parse_err(n, "expected `loop k`"),
                }
                lines.next();
            }
            Some(_) => break,
        }
    }
    let d = Diagram::new(crossings, loops).map_err(|e| Error::Parse {
        line: hline,
        msg: e.to_string(),
    })?;
    check_orientation(&d, &comps)?;
    Ok(d)
}

fn check_orientation(d: &Diagram, comps: &[(usize, Vec<ArcId>)]) -> Result<()> {
    if comps.is_empty() {
        return Ok(());
    }
    let actual: Vec<Vec<ArcId>> = d
        .components()
        .into_iter()
        .filter(|c| !(c.len() == 1 && d.is_free_loop(c[0])))
        .collect();
    let mut matched = vec![false; actual.len()];
    for (n, c) in comps {
        if c.is_empty() {
            return parse_err(*n, "empty component");
        }
        let min = *c.iter().min().unwrap();
        let pos = c.iter().position(|a| *a == min).unwrap();
        let rotated: Vec<ArcId> = c[pos..].iter().chain(&c[..pos]).copied().collect();
        match actual.iter().position(|a| *a == rotated) {
            Some(k) if !matched[k] => matched[k] = true,
            _ => {
                return parse_err(
                    *n,
                    "component does not match the orientation implied by the crossing signs",
                )
            }
        }
    }
    if matched.iter().any(|m| !m) {
        return parse_err(comps[0].0, "orientation block does not list every component");
    }
    Ok(())
}

pub(crate) fn strip(l: &str) -> &str {
    match l.find('#') {
        Some(i) => l[..i].trim(),
        None => l.trim(),
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.emit())
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn trefoil() -> Diagram {
        // closure of σ1³
        Diagram::from_pd(
            &[
                (Sign::Positive, [2, 4, 3, 1]),
                (Sign::Positive, [4, 6, 5, 3]),
                (Sign::Positive, [6, 2, 1, 5]),
            ],
            &[],
        )
        .unwrap()
    }

    #[test]
    fn round_trip() {
        let d = trefoil();
        let text = d.emit();
        let e = Diagram::parse(&text).unwrap();
        assert_eq!(d, e);
        assert_eq!(e.emit(), text);
        assert_eq!(d.components().len(), 1);
    }

    #[test]
    fn faces_and_planarity() {
        let d = trefoil();
        assert_eq!(d.faces().len(), 5);
        assert!(d.is_planar());
        let kink = Diagram::from_pd(&[(Sign::Positive, [1, 1, 2, 2])], &[]).unwrap();
        assert_eq!(kink.faces().len(), 3);
        assert!(kink.is_planar());
    }

    #[test]
    fn orientation_block_checked() {
        let bad = "crossings 1\n+ 1 1 2 2\ncomponent 1 2\ncomponent 3\n";
        assert!(Diagram::parse(bad).is_err());
        let good = "crossings 1\n+ 1 1 2 2\ncomponent 1 2\nloop 5\n";
        let d = Diagram::parse(good).unwrap();
        assert_eq!(d.free_loops(), &[ArcId(5)]);
    }

    #[test]
    fn rejects_bad_arcs() {
        assert!(Diagram::from_pd(&[(Sign::Positive, [1, 2, 3, 4])], &[]).is_err());
    }

    #[test]
    fn mirror_flips_signs() {
        let d = trefoil().mirror();
        assert_eq!(d.crossing_counts(), (0, 3));
        assert!(d.is_planar());
        assert_eq!(d.components().len(), 1);
    }
}
