//! The Khovanov chain complex of a diagram.

pub mod chain;
pub mod homology;
pub mod poly;
pub mod snf;
pub mod state;

use std::collections::HashMap;
use std::sync::Arc;

pub use chain::{Bidegree, Chain, Gen};
pub use homology::{classes_agree_up_to_sign, homology, GradedGroups, Group};
pub use poly::LaurentPoly;
pub use state::Smoothing;

use crate::diagram::Diagram;
use crate::int::Int;

/// Memoized smoothings of one diagram.
pub struct Smoothings<'a> {
    d: &'a Diagram,
    cache: HashMap<u64, Arc<Smoothing>>,
}

impl<'a> Smoothings<'a> {
    pub fn new(d: &'a Diagram) -> Self {
        Smoothings {
            d,
            cache: HashMap::new(),
        }
    }

    pub fn diagram(&self) -> &'a Diagram {
        self.d
    }

    pub fn get(&mut self, state: u64) -> Arc<Smoothing> {
        let d = self.d;
        self.cache
            .entry(state)
            .or_insert_with(|| Arc::new(Smoothing::new(d, state)))
            .clone()
    }
}

/// For each loop of `to`, the loop of `from` containing its first arc.
/// Both smoothings belong to `d`.
pub(crate) fn loop_map(d: &Diagram, from: &Smoothing, to: &Smoothing) -> Vec<usize> {
    to.names()
        .iter()
        .map(|name| from.loop_of(d, *name))
        .collect()
}

/// Unsigned edge map of the cube: changes crossing `i` of `g` from 0 to 1 and
/// applies merge or split. Both smoothings belong to `d`.
pub fn saddle_edge(
    d: &Diagram,
    from: &Smoothing,
    to: &Smoothing,
    i: usize,
    g: &Gen,
) -> Vec<(Gen, Int)> {
    let c = d.crossing(i);
    let ia = d.arc_index(c.slots[0]).unwrap();
    let ib = d.arc_index(c.slots[1]).unwrap();
    let ic = d.arc_index(c.slots[2]).unwrap();
    let map = loop_map(d, from, to);
    let mut base = 0u64;
    for (k, &src) in map.iter().enumerate() {
        if g.label(src) {
            base |= 1 << k;
        }
    }
    let la = from.loop_of_index(ia);
    let lc = from.loop_of_index(ic);
    let n = to.num_loops();
    if la != lc {
        let t = to.loop_of_index(ia);
        base &= !(1 << t);
        match (g.label(la), g.label(lc)) {
            (true, true) => vec![],
            (false, false) => vec![(Gen::new(to.state, base, n), Int::ONE)],
            _ => vec![(Gen::new(to.state, base | 1 << t, n), Int::ONE)],
        }
    } else {
        let t1 = to.loop_of_index(ia);
        let t2 = to.loop_of_index(ib);
        base &= !(1 << t1) & !(1 << t2);
        if g.label(la) {
            vec![(Gen::new(to.state, base | 1 << t1 | 1 << t2, n), Int::ONE)]
        } else {
            vec![
                (Gen::new(to.state, base | 1 << t1, n), Int::ONE),
                (Gen::new(to.state, base | 1 << t2, n), Int::ONE),
            ]
        }
    }
}

/// Sign of the cube edge changing crossing `i` in `state`.
pub fn edge_sign(state: u64, i: usize) -> Int {
    let below = state & ((1u64 << i) - 1);
    if below.count_ones().is_multiple_of(2) {
        Int::ONE
    } else {
        Int::from(-1)
    }
}

pub fn differential_gen(sm: &mut Smoothings, g: &Gen) -> Chain {
    let d = sm.diagram();
    let from = sm.get(g.state);
    let mut out = Chain::zero();
    for i in 0..d.num_crossings() {
        if (g.state >> i) & 1 == 1 {
            continue;
        }
        let to = sm.get(g.state | 1 << i);
        let s = edge_sign(g.state, i);
        for (h, v) in saddle_edge(d, &from, &to, i, g) {
            out.add_term(h, &(&v * &s));
        }
    }
    out
}

pub fn differential_with(sm: &mut Smoothings, c: &Chain) -> Chain {
    let mut out = Chain::zero();
    for (g, v) in c.terms() {
        out.add_scaled(&differential_gen(sm, g), v);
    }
    out
}

pub fn differential(d: &Diagram, c: &Chain) -> Chain {
    differential_with(&mut Smoothings::new(d), c)
}

pub fn is_cycle(d: &Diagram, c: &Chain) -> bool {
    differential(d, c).is_zero()
}

/// Every generator of the complex at bigrading `(h, q)`, sorted.
pub fn generators_at(sm: &mut Smoothings, deg: Bidegree) -> Vec<Gen> {
    let d = sm.diagram();
    let n = d.num_crossings();
    let (np, nm) = d.crossing_counts();
    let ones = deg.h + nm as i64;
    if ones < 0 || ones > n as i64 {
        return vec![];
    }
    let mut out = vec![];
    for state in states_with_ones(n, ones as u32) {
        let s = sm.get(state);
        let k = s.num_loops() as i64;
        let twice_vm = k + deg.h + np as i64 - nm as i64 - deg.q;
        if twice_vm < 0 || twice_vm % 2 != 0 || twice_vm / 2 > k {
            continue;
        }
        for labels in masks_with_ones(k as usize, (twice_vm / 2) as u32) {
            out.push(Gen::new(state, labels, k as usize));
        }
    }
    out.sort();
    out
}

/// Every generator of the complex, in all bidegrees.
pub fn all_generators(d: &Diagram) -> Vec<Gen> {
    let mut out = vec![];
    for state in 0..(1u64 << d.num_crossings()) {
        let k = Smoothing::new(d, state).num_loops();
        for labels in 0..(1u64 << k) {
            out.push(Gen::new(state, labels, k));
        }
    }
    out
}

pub(crate) fn states_with_ones(n: usize, ones: u32) -> impl Iterator<Item = u64> {
    masks_with_ones(n, ones)
}

/// All `n`-bit masks with exactly `k` ones, ascending.
pub(crate) fn masks_with_ones(n: usize, k: u32) -> impl Iterator<Item = u64> {
    let limit: u128 = 1u128 << n;
    let mut cur: Option<u64> = if k as usize > n {
        None
    } else if k == 0 {
        Some(0)
    } else {
        Some(((1u128 << k) - 1) as u64)
    };
    std::iter::from_fn(move || {
        let v = cur?;
        cur = if v == 0 {
            None
        } else {
            // Gosper's hack
            let c = v & v.wrapping_neg();
            let r = (v as u128) + (c as u128);
            if r >= limit {
                None
            } else {
                let r = r as u64;
                let next = (((r ^ v) >> 2) / c) | r;
                Some(next)
            }
        };
        Some(v)
    })
}

/// Graded Euler characteristic `sum (-1)^h q^j rank C^{h,j}`.
pub fn euler_characteristic(d: &Diagram) -> LaurentPoly {
    let n = d.num_crossings();
    let (np, nm) = d.crossing_counts();
    let mut counts: HashMap<(u32, usize), i64> = HashMap::new();
    for state in 0..(1u64 << n) {
        let k = Smoothing::new(d, state).num_loops();
        *counts.entry((state.count_ones(), k)).or_default() += 1;
    }
    let mut total = LaurentPoly::zero();
    for ((ones, k), m) in counts {
        let h = ones as i64 - nm as i64;
        let sign = if h.rem_euclid(2) == 0 { m } else { -m };
        let shift = h + np as i64 - nm as i64;
        let p = LaurentPoly::monomial(Int::from(sign), shift)
            .mul(&LaurentPoly::q_plus_q_inv().pow(k as u32));
        total = total.add(&p);
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Sign;

    fn trefoil() -> Diagram {
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
    fn masks() {
        let v: Vec<u64> = masks_with_ones(4, 2).collect();
        assert_eq!(v, vec![3, 5, 6, 9, 10, 12]);
        assert_eq!(masks_with_ones(3, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(masks_with_ones(2, 3).count(), 0);
        assert_eq!(masks_with_ones(64, 64).count(), 1);
    }

    #[test]
    fn d_squared_trefoil() {
        let d = trefoil();
        let mut sm = Smoothings::new(&d);
        for state in 0..8u64 {
            let k = sm.get(state).num_loops();
            for labels in 0..(1u64 << k) {
                let g = Gen::new(state, labels, k);
                let dg = differential_gen(&mut sm, &g);
                let dd = differential_with(&mut sm, &dg);
                assert!(dd.is_zero());
            }
        }
    }

    #[test]
    fn trefoil_euler() {
        // right-handed trefoil: q + q^3 + q^5 - q^9
        let e = euler_characteristic(&trefoil());
        assert_eq!(e.to_string(), "1 q^1 + 1 q^3 + 1 q^5 - 1 q^9");
    }
}
