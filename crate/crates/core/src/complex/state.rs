use crate::diagram::{ArcId, Crossing, Diagram, UnionFind};

/// Loops of one smoothing. Loops are ordered by their smallest arc id, which
/// is also their public name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Smoothing {
    pub state: u64,
    /// Dense arc index -> loop position.
    loop_of: Vec<usize>,
    /// Loop position -> smallest arc id.
    names: Vec<ArcId>,
}

impl Smoothing {
    pub fn new(d: &Diagram, state: u64) -> Self {
        let n = d.num_arcs();
        let mut uf = UnionFind::new(n);
        for (i, c) in d.crossings().iter().enumerate() {
            let bit = ((state >> i) & 1) as u8;
            for (p, q) in Crossing::pairs(bit) {
                let a = d.arc_index(c.slots[p]).unwrap();
                let b = d.arc_index(c.slots[q]).unwrap();
                uf.union(a, b);
            }
        }
        // union-find keeps the minimal index as root, and arcs are sorted,
        // so the root is the loop's smallest arc
        let mut root_pos = vec![usize::MAX; n];
        let mut names = vec![];
        let mut loop_of = vec![0; n];
        for i in 0..n {
            let r = uf.find(i);
            if root_pos[r] == usize::MAX {
                root_pos[r] = names.len();
                names.push(d.arcs()[r]);
            }
            loop_of[i] = root_pos[r];
        }
        Smoothing {
            state,
            loop_of,
            names,
        }
    }

    pub fn num_loops(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[ArcId] {
        &self.names
    }

    pub fn loop_of_index(&self, arc_index: usize) -> usize {
        self.loop_of[arc_index]
    }

    pub fn loop_of(&self, d: &Diagram, a: ArcId) -> usize {
        self.loop_of[d.arc_index(a).expect("unknown arc")]
    }

    pub fn position(&self, name: ArcId) -> Option<usize> {
        self.names.binary_search(&name).ok()
    }

    pub fn bit(&self, i: usize) -> u8 {
        ((self.state >> i) & 1) as u8
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Sign;

    #[test]
    fn trefoil_smoothings() {
        let d = Diagram::from_pd(
            &[
                (Sign::Positive, [2, 4, 3, 1]),
                (Sign::Positive, [4, 6, 5, 3]),
                (Sign::Positive, [6, 2, 1, 5]),
            ],
            &[],
        )
        .unwrap();
        // oriented resolution of a 2-braid closure: two Seifert circles
        assert_eq!(Smoothing::new(&d, 0).num_loops(), 2);
        assert_eq!(Smoothing::new(&d, 0b111).num_loops(), 3);
        assert_eq!(Smoothing::new(&d, 0b001).num_loops(), 1);
    }
}
