//! Helpers shared by the local moves.

use std::collections::HashMap;

use crate::complex::{Gen, Smoothing};
use crate::diagram::{ArcId, Crossing, Diagram};
use crate::error::{Error, Result};
use crate::int::Int;

/// Builds the labels of a post-move generator. Labels are carried along
/// `arc_map` (pre arc -> post arc); loops listed in `fixed` get the given
/// label instead, and pre loops in `skip` are ignored.
pub(crate) struct Transfer<'a> {
    pub pre: &'a Diagram,
    pub pre_sm: &'a Smoothing,
    pub post: &'a Diagram,
    pub post_sm: &'a Smoothing,
    pub arc_map: &'a dyn Fn(ArcId) -> Option<ArcId>,
}

impl<'a> Transfer<'a> {
    pub fn labels(&self, g: &Gen, skip: &[usize], fixed: &[(usize, bool)]) -> u64 {
        let n = self.post_sm.num_loops();
        let mut set = vec![false; n];
        let mut mask = 0u64;
        for &(k, v) in fixed {
            set[k] = true;
            if v {
                mask |= 1 << k;
            }
        }
        for (i, &a) in self.pre.arcs().iter().enumerate() {
            let l = self.pre_sm.loop_of_index(i);
            if skip.contains(&l) {
                continue;
            }
            if let Some(b) = (self.arc_map)(a) {
                let k = self.post_sm.loop_of(self.post, b);
                if set[k] {
                    continue;
                }
                set[k] = true;
                if g.label(l) {
                    mask |= 1 << k;
                }
            }
        }
        debug_assert!(set.iter().all(|x| *x), "unlabelled loop after transfer");
        mask
    }

    pub fn gen(&self, g: &Gen, skip: &[usize], fixed: &[(usize, bool)]) -> Gen {
        Gen::new(
            self.post_sm.state,
            self.labels(g, skip, fixed),
            self.post_sm.num_loops(),
        )
    }
}

/// Removes the given crossings and joins the strands through them. Returns
/// the new diagram and the map sending each old arc to the new arc that
/// contains it. Closed strands become crossingless loops named by their
/// smallest arc.
pub(crate) fn splice(d: &Diagram, removed: &[usize]) -> Result<(Diagram, HashMap<ArcId, ArcId>)> {
    let is_removed = |c: usize| removed.contains(&c);
    let mut map: HashMap<ArcId, ArcId> = HashMap::new();
    for &a in d.arcs() {
        let e = match d.ends(a) {
            None => {
                map.insert(a, a);
                continue;
            }
            Some(e) => e,
        };
        if is_removed(e.tail.crossing) {
            continue;
        }
        let mut cur = a;
        loop {
            map.insert(cur, a);
            let h = d.ends(cur).unwrap().head;
            if !is_removed(h.crossing) {
                break;
            }
            cur = d.next_arc(cur);
        }
    }
    let mut loops: Vec<ArcId> = d.free_loops().to_vec();
    for &a in d.arcs() {
        if map.contains_key(&a) {
            continue;
        }
        let mut cycle = vec![a];
        let mut cur = d.next_arc(a);
        while cur != a {
            cycle.push(cur);
            cur = d.next_arc(cur);
        }
        let name = *cycle.iter().min().unwrap();
        for c in cycle {
            map.insert(c, name);
        }
        loops.push(name);
    }
    let crossings: Vec<Crossing> = d
        .crossings()
        .iter()
        .enumerate()
        .filter(|(i, _)| !is_removed(*i))
        .map(|(_, c)| Crossing {
            sign: c.sign,
            slots: c.slots.map(|a| map[&a]),
        })
        .collect();
    let post = Diagram::new(crossings, loops)?;
    Ok((post, map))
}

/// Deletes bits `removed` from a state.
pub(crate) fn drop_bits(state: u64, n: usize, removed: &[usize]) -> u64 {
    let mut out = 0u64;
    let mut k = 0;
    for i in 0..n {
        if removed.contains(&i) {
            continue;
        }
        if (state >> i) & 1 == 1 {
            out |= 1 << k;
        }
        k += 1;
    }
    out
}

/// Sign for deleting 1-smoothed crossings: each deleted crossing `c` with
/// bit 1 contributes `(-1)^(number of 1-bits after c)`, counted among the
/// crossings that remain.
pub(crate) fn deletion_sign(state: u64, n: usize, removed: &[usize]) -> Int {
    let mut flips = 0;
    for &c in removed {
        if (state >> c) & 1 == 0 {
            continue;
        }
        flips += (c + 1..n)
            .filter(|j| !removed.contains(j) && (state >> j) & 1 == 1)
            .count();
    }
    if flips % 2 == 0 {
        Int::ONE
    } else {
        Int::from(-1)
    }
}

pub(crate) fn bad(step: usize, event: &str, msg: impl Into<String>) -> Error {
    Error::BadEvent {
        step,
        event: event.to_string(),
        msg: msg.into(),
    }
}

/// Smallest arc id not yet used, at least `floor`.
pub(crate) fn fresh_arcs(d: &Diagram, count: usize) -> Vec<ArcId> {
    let base = d.max_arc() + 1;
    (0..count as u32).map(|i| ArcId(base + i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Sign;

    #[test]
    fn splice_kink() {
        let d = Diagram::from_pd(&[(Sign::Positive, [1, 1, 2, 2])], &[]).unwrap();
        let (e, map) = splice(&d, &[0]).unwrap();
        assert_eq!(e.num_crossings(), 0);
        assert_eq!(e.free_loops(), &[ArcId(1)]);
        assert_eq!(map[&ArcId(2)], ArcId(1));
    }

    #[test]
    fn bits() {
        assert_eq!(drop_bits(0b1011, 4, &[1]), 0b101);
        assert_eq!(deletion_sign(0b1011, 4, &[1]), Int::from(-1));
        assert_eq!(deletion_sign(0b1011, 4, &[2]), Int::ONE);
    }
}
