//! Kauffman bracket state sum, kept separate from the chain complex so the
//! graded Euler characteristic can be checked against it.

use std::collections::BTreeMap;

use crate::complex::LaurentPoly;
use crate::diagram::Diagram;
use crate::int::Int;

type Poly = BTreeMap<i64, i64>;

fn mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (i, x) in a {
        for (j, y) in b {
            *out.entry(i + j).or_default() += x * y;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn loops(d: &Diagram, state: u64) -> usize {
    let arcs = d.arcs();
    let mut parent: Vec<usize> = (0..arcs.len()).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let idx = |a| d.arc_index(a).expect("arc of diagram");
    for (i, c) in d.crossings().iter().enumerate() {
        let s = c.slots;
        let joined = if state >> i & 1 == 0 {
            [(s[0], s[1]), (s[2], s[3])]
        } else {
            [(s[0], s[3]), (s[1], s[2])]
        };
        for (a, b) in joined {
            let (x, y) = (root(&mut parent, idx(a)), root(&mut parent, idx(b)));
            parent[x] = y;
        }
    }
    (0..arcs.len()).filter(|&i| root(&mut parent, i) == i).count()
}

/// Unnormalized bracket in `A`: every loop of a state, including the last,
/// contributes `-A^2 - A^-2`.
pub fn bracket(d: &Diagram) -> BTreeMap<i64, i64> {
    let n = d.num_crossings();
    let delta: Poly = [(2, -1), (-2, -1)].into();
    let mut total = Poly::new();
    for state in 0..(1u64 << n) {
        let b = state.count_ones() as i64;
        let mut term: Poly = [(n as i64 - 2 * b, 1)].into();
        for _ in 0..loops(d, state) {
            term = mul(&term, &delta);
        }
        for (k, c) in term {
            *total.entry(k).or_default() += c;
        }
    }
    total.retain(|_, c| *c != 0);
    total
}

/// Unnormalized Jones polynomial in `q`, from the bracket by writhe
/// normalization and `A^2 = -q^-1`.
pub fn jones(d: &Diagram) -> LaurentPoly {
    let w = d.writhe();
    let sign = if w.rem_euclid(2) == 0 { 1 } else { -1 };
    let mut out = LaurentPoly::zero();
    for (k, c) in bracket(d) {
        let e = k - 3 * w;
        assert!(e % 2 == 0, "odd power of A");
        let half = e / 2;
        let s = if half.rem_euclid(2) == 0 { sign } else { -sign };
        out.add_term(-half, &Int::from(c * s));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::BraidWord;
    use crate::complex::euler_characteristic;

    fn poly(terms: &[(i64, i64)]) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for &(k, c) in terms {
            p.add_term(k, &Int::from(c));
        }
        p
    }

    #[test]
    fn unknot_and_empty() {
        assert_eq!(jones(&Diagram::empty()), poly(&[(0, 1)]));
        let d = Diagram::parse("crossings 0\nloop 1\n").unwrap();
        assert_eq!(jones(&d), poly(&[(-1, 1), (1, 1)]));
    }

    #[test]
    fn trefoils() {
        // t + t^3 - t^4 times q + q^-1, with t^(1/2) = -q
        let right = poly(&[(1, 1), (3, 1), (5, 1), (9, -1)]);
        let d = BraidWord::new(2, vec![1, 1, 1]).unwrap().closure();
        assert_eq!(jones(&d), right);
        let m = BraidWord::new(2, vec![-1, -1, -1]).unwrap().closure();
        assert_eq!(jones(&m), poly(&[(-1, 1), (-3, 1), (-5, 1), (-9, -1)]));
    }

    #[test]
    fn figure_eight() {
        // t^-2 - t^-1 + 1 - t + t^2
        let d = BraidWord::new(3, vec![1, -2, 1, -2]).unwrap().closure();
        let j = poly(&[(-4, 1), (-2, -1), (0, 1), (2, -1), (4, 1)]);
        assert_eq!(jones(&d), j.mul(&LaurentPoly::q_plus_q_inv()));
    }

    #[test]
    fn agrees_with_complex() {
        for w in [vec![1, 2, -1, 2, 2], vec![-1, -1, 2, 1, 1, 1, 2, -1, 2, 2], vec![1, 1, -2, 3, -2, 3]] {
            let d = BraidWord::new(4, w).unwrap().closure();
            assert_eq!(jones(&d), euler_characteristic(&d));
        }
    }
}
