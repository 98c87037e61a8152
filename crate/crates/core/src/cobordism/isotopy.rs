//! Planar isotopies: arc renaming and crossing reordering.

use std::collections::HashMap;

use crate::cobordism::local::Transfer;
use crate::complex::{Chain, Gen, Smoothing};
use crate::diagram::{ArcId, Diagram};
use crate::error::{Error, Result};
use crate::int::Int;

/// New crossing `k` is old crossing `order[k]`; arcs are renamed by `arcs`
/// (arcs not listed keep their names).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Isotopy {
    pub order: Vec<usize>,
    pub arcs: Vec<(ArcId, ArcId)>,
}

impl Isotopy {
    fn rename(&self) -> HashMap<ArcId, ArcId> {
        self.arcs.iter().copied().collect()
    }

    pub fn post(&self, d: &Diagram) -> Result<Diagram> {
        let n = d.num_crossings();
        let mut seen = vec![false; n];
        if self.order.len() != n {
            return Err(Error::InvalidDiagram(format!(
                "isotopy orders {} crossings, diagram has {n}",
                self.order.len()
            )));
        }
        for &i in &self.order {
            if i >= n || seen[i] {
                return Err(Error::InvalidDiagram("isotopy order is not a permutation".into()));
            }
            seen[i] = true;
        }
        let m = self.rename();
        let mut images: Vec<ArcId> = d.arcs().iter().map(|a| *m.get(a).unwrap_or(a)).collect();
        images.sort();
        images.dedup();
        if images.len() != d.num_arcs() {
            return Err(Error::InvalidDiagram("isotopy arc renaming is not injective".into()));
        }
        d.relabeled(&|a| *m.get(&a).unwrap_or(&a), &self.order)
    }

    pub fn map(&self, pre: &Diagram, post: &Diagram, g: &Gen) -> Chain {
        let ones: Vec<usize> = self
            .order
            .iter()
            .copied()
            .filter(|&i| (g.state >> i) & 1 == 1)
            .collect();
        let mut inversions = 0;
        for i in 0..ones.len() {
            for j in i + 1..ones.len() {
                if ones[i] > ones[j] {
                    inversions += 1;
                }
            }
        }
        let mut state = 0u64;
        for (k, &i) in self.order.iter().enumerate() {
            if (g.state >> i) & 1 == 1 {
                state |= 1 << k;
            }
        }
        let m = self.rename();
        let s = Smoothing::new(pre, g.state);
        let t = Smoothing::new(post, state);
        let tr = Transfer {
            pre,
            pre_sm: &s,
            post,
            post_sm: &t,
            arc_map: &|a| Some(*m.get(&a).unwrap_or(&a)),
        };
        let sign = if inversions % 2 == 0 { Int::ONE } else { Int::from(-1) };
        let mut out = Chain::zero();
        out.add_term(tr.gen(g, &[], &[]), &sign);
        out
    }

    pub fn emit(&self) -> String {
        let order: Vec<String> = self.order.iter().map(|i| format!("c{}", i + 1)).collect();
        let mut s = format!("isotopy\n  order {}\n", order.join(" "));
        for (a, b) in &self.arcs {
            s.push_str(&format!("  arc {a} {b}\n"));
        }
        s.push_str("end");
        s
    }
}

/// Finds an isotopy taking `from` to `to` that sends crossing `i` to
/// crossing `crossings[i]`, if the crossing tuples agree up to arc names.
pub fn match_diagrams(from: &Diagram, to: &Diagram, crossings: &[usize]) -> Option<Isotopy> {
    if from.num_crossings() != to.num_crossings()
        || from.free_loops().len() != to.free_loops().len()
        || crossings.len() != from.num_crossings()
    {
        return None;
    }
    let mut m: HashMap<ArcId, ArcId> = HashMap::new();
    let mut used: HashMap<ArcId, ArcId> = HashMap::new();
    for (i, &j) in crossings.iter().enumerate() {
        let (a, b) = (from.crossing(i), to.crossing(j));
        if a.sign != b.sign {
            return None;
        }
        for k in 0..4 {
            let (x, y) = (a.slots[k], b.slots[k]);
            if *m.entry(x).or_insert(y) != y || *used.entry(y).or_insert(x) != x {
                return None;
            }
        }
    }
    for (x, y) in from.free_loops().iter().zip(to.free_loops()) {
        m.insert(*x, *y);
    }
    let mut order = vec![0; crossings.len()];
    for (i, &j) in crossings.iter().enumerate() {
        order[j] = i;
    }
    let mut arcs: Vec<(ArcId, ArcId)> = m.into_iter().filter(|(a, b)| a != b).collect();
    arcs.sort();
    let iso = Isotopy { order, arcs };
    (iso.post(from).ok()? == *to).then_some(iso)
}

/// Searches for any isotopy taking `from` to `to`.
pub fn find_isotopy(from: &Diagram, to: &Diagram) -> Option<Isotopy> {
    let n = from.num_crossings();
    if n != to.num_crossings() || from.free_loops().len() != to.free_loops().len() {
        return None;
    }
    let mut image: Vec<Option<usize>> = vec![None; n];
    let pieces = from.graph_components();
    if !extend(from, to, &pieces, 0, &mut image) {
        return None;
    }
    let crossings: Vec<usize> = image.into_iter().map(|x| x.unwrap()).collect();
    match_diagrams(from, to, &crossings)
}

fn extend(
    from: &Diagram,
    to: &Diagram,
    pieces: &[Vec<usize>],
    k: usize,
    image: &mut Vec<Option<usize>>,
) -> bool {
    let Some(piece) = pieces.get(k) else { return true };
    let used: Vec<usize> = image.iter().flatten().copied().collect();
    for j in 0..to.num_crossings() {
        if used.contains(&j) {
            continue;
        }
        let saved = image.clone();
        if propagate(from, to, piece[0], j, image) && extend(from, to, pieces, k + 1, image) {
            return true;
        }
        *image = saved;
    }
    false
}

/// Maps crossing `i` to `j` and follows arcs to fix the rest of the piece.
fn propagate(from: &Diagram, to: &Diagram, i: usize, j: usize, image: &mut [Option<usize>]) -> bool {
    let mut stack = vec![(i, j)];
    while let Some((i, j)) = stack.pop() {
        match image[i] {
            Some(x) if x == j => continue,
            Some(_) => return false,
            None => {}
        }
        if image.contains(&Some(j)) {
            return false;
        }
        let (a, b) = (from.crossing(i), to.crossing(j));
        if a.sign != b.sign {
            return false;
        }
        image[i] = Some(j);
        for s in 0..4 {
            let (ea, eb) = (from.ends(a.slots[s]).unwrap(), to.ends(b.slots[s]).unwrap());
            let (pa, pb) = if a.is_incoming(s) {
                (ea.tail, eb.tail)
            } else {
                (ea.head, eb.head)
            };
            if pa.slot != pb.slot {
                return false;
            }
            stack.push((pa.crossing, pb.crossing));
        }
    }
    true
}
