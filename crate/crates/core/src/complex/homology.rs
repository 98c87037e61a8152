use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;

use super::snf::{smith, SmithForm, SparseMatrix};
use super::{differential_gen, generators_at, Bidegree, Chain, Gen, Smoothings};
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::int::Int;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    pub rank: usize,
    pub torsion: Vec<Int>,
}

impl Group {
    pub fn is_trivial(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GradedGroups(pub BTreeMap<Bidegree, Group>);

impl GradedGroups {
    pub fn get(&self, b: Bidegree) -> Option<&Group> {
        self.0.get(&b)
    }

    pub fn emit(&self) -> String {
        let mut s = String::new();
        for (b, g) in &self.0 {
            s.push_str(&format!("({},{}) {}", b.h, b.q, g.rank));
            for t in &g.torsion {
                s.push_str(&format!(" {t}"));
            }
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for GradedGroups {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.emit())
    }
}

/// Matrix of the differential `C^{h,q} -> C^{h+1,q}` with rows indexed by
/// `target` and columns by `source`.
pub(crate) fn differential_matrix(sm: &mut Smoothings, source: &[Gen], target: &[Gen]) -> SparseMatrix {
    let index: HashMap<Gen, usize> = target.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let mut m = SparseMatrix::new(target.len(), source.len());
    for (j, g) in source.iter().enumerate() {
        for (h, v) in differential_gen(sm, g).terms() {
            let i = *index.get(h).expect("differential leaves the grading");
            m.push(i, j, v.clone());
        }
    }
    m
}

fn check_budget(d: &Diagram, budget: Option<usize>) -> Result<()> {
    if let Some(b) = budget {
        if d.num_crossings() > b {
            return Err(Error::Budget(format!(
                "{} crossings exceed the budget of {b}",
                d.num_crossings()
            )));
        }
    }
    Ok(())
}

/// Integral Khovanov homology, one quantum grading per task.
pub fn homology(d: &Diagram, budget: Option<usize>) -> Result<GradedGroups> {
    check_budget(d, budget)?;
    let n = d.num_crossings();
    let (np, nm) = d.crossing_counts();
    let mut degrees: BTreeSet<(i64, i64)> = BTreeSet::new();
    {
        let mut sm = Smoothings::new(d);
        for state in 0..(1u64 << n) {
            let k = sm.get(state).num_loops() as i64;
            let h = state.count_ones() as i64 - nm as i64;
            let shift = h + np as i64 - nm as i64;
            let mut q = shift - k;
            while q <= shift + k {
                degrees.insert((q, h));
                q += 2;
            }
        }
    }
    let mut by_q: BTreeMap<i64, Vec<i64>> = BTreeMap::new();
    for (q, h) in degrees {
        by_q.entry(q).or_default().push(h);
    }
    let parts: Vec<Vec<(Bidegree, Group)>> = by_q
        .into_par_iter()
        .map(|(q, hs)| {
            let mut sm = Smoothings::new(d);
            let lo = *hs.iter().min().unwrap();
            let hi = *hs.iter().max().unwrap();
            let gens: Vec<Vec<Gen>> = (lo - 1..=hi + 1)
                .map(|h| generators_at(&mut sm, Bidegree::new(h, q)))
                .collect();
            // forms[k] describes d: C^{lo-1+k} -> C^{lo+k}
            let mut forms: Vec<SmithForm> = vec![];
            for k in 0..gens.len() - 1 {
                let m = differential_matrix(&mut sm, &gens[k], &gens[k + 1]);
                forms.push(smith(&m, None));
            }
            let mut out = vec![];
            for h in lo..=hi {
                let k = (h - lo + 1) as usize;
                let into = &forms[k - 1];
                let out_of = &forms[k];
                let g = Group {
                    rank: gens[k].len() - into.rank - out_of.rank,
                    torsion: into.torsion.clone(),
                };
                if !g.is_trivial() {
                    out.push((Bidegree::new(h, q), g));
                }
            }
            out
        })
        .collect();
    Ok(GradedGroups(parts.into_iter().flatten().collect()))
}

/// Whether `c` is a boundary.
pub fn is_boundary(d: &Diagram, c: &Chain) -> bool {
    if c.is_zero() {
        return true;
    }
    let deg = match c.grading(d) {
        Some(b) => b,
        None => return false,
    };
    let mut sm = Smoothings::new(d);
    let source = generators_at(&mut sm, Bidegree::new(deg.h - 1, deg.q));
    let target = generators_at(&mut sm, deg);
    let index: HashMap<Gen, usize> = target.iter().enumerate().map(|(i, g)| (*g, i)).collect();
    let mut rhs = vec![Int::ZERO; target.len()];
    for (g, v) in c.terms() {
        rhs[index[g]] = v.clone();
    }
    let m = differential_matrix(&mut sm, &source, &target);
    smith(&m, Some(&rhs)).solvable.unwrap()
}

/// Whether the homology classes of two cycles agree up to sign.
pub fn classes_agree_up_to_sign(d: &Diagram, a: &Chain, b: &Chain) -> bool {
    is_boundary(d, &a.sub(b)) || is_boundary(d, &a.add(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Sign;

    #[test]
    fn right_trefoil() {
        let d = Diagram::from_pd(
            &[
                (Sign::Positive, [2, 4, 3, 1]),
                (Sign::Positive, [4, 6, 5, 3]),
                (Sign::Positive, [6, 2, 1, 5]),
            ],
            &[],
        )
        .unwrap();
        let h = homology(&d, None).unwrap();
        let want = "(0,1) 1\n(0,3) 1\n(2,5) 1\n(3,7) 0 2\n(3,9) 1\n";
        assert_eq!(h.emit(), want);
        let m = homology(&d.mirror(), None).unwrap();
        let want = "(-3,-9) 1\n(-2,-7) 0 2\n(-2,-5) 1\n(0,-3) 1\n(0,-1) 1\n";
        assert_eq!(m.emit(), want);
    }
}
