//! Smith normal form over the integers for sparse matrices.
//!
//! Unit pivots are eliminated sparsely first; whatever survives is reduced
//! densely. An optional right-hand side is carried through the row
//! operations so that `M x = b` can be tested for integer solvability.

use std::collections::{BTreeSet, HashMap};

use crate::int::Int;

#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<(usize, usize, Int)>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            entries: vec![],
        }
    }

    pub fn push(&mut self, r: usize, c: usize, v: Int) {
        if !v.is_zero() {
            self.entries.push((r, c, v));
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rank: usize,
    /// Invariant factors greater than one, in divisibility order.
    pub torsion: Vec<Int>,
    /// Whether `M x = b` has an integer solution, when `b` was supplied.
    pub solvable: Option<bool>,
}

pub fn smith(m: &SparseMatrix, rhs: Option<&[Int]>) -> SmithForm {
    let mut rows: Vec<HashMap<usize, Int>> = vec![HashMap::new(); m.rows];
    for (r, c, v) in &m.entries {
        let e = rows[*r].entry(*c).or_insert(Int::ZERO);
        *e += v;
    }
    for r in rows.iter_mut() {
        r.retain(|_, v| !v.is_zero());
    }
    let mut b: Vec<Int> = match rhs {
        Some(v) => v.to_vec(),
        None => vec![Int::ZERO; m.rows],
    };
    let mut cols: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (i, r) in rows.iter().enumerate() {
        for c in r.keys() {
            cols[*c].insert(i);
        }
    }
    let mut alive = vec![true; m.rows];
    let mut rank = 0;
    let mut order: Vec<usize> = (0..m.rows).collect();
    loop {
        let mut progress = false;
        order.sort_by_key(|&r| rows[r].len());
        for &p in &order {
            if !alive[p] || rows[p].is_empty() {
                continue;
            }
            let pivot = rows[p]
                .iter()
                .filter(|(_, v)| v.is_unit())
                .min_by_key(|(c, _)| (cols[**c].len(), **c))
                .map(|(c, v)| (*c, v.clone()));
            let (pc, pv) = match pivot {
                Some(x) => x,
                None => continue,
            };
            let prow: Vec<(usize, Int)> = rows[p].iter().map(|(c, v)| (*c, v.clone())).collect();
            let pb = b[p].clone();
            let others: Vec<usize> = cols[pc].iter().copied().filter(|&r| r != p).collect();
            for r in others {
                let f = &rows[r][&pc] * &pv;
                for (c, v) in &prow {
                    let e = rows[r].entry(*c).or_insert(Int::ZERO);
                    *e -= &(&f * v);
                    if e.is_zero() {
                        rows[r].remove(c);
                        cols[*c].remove(&r);
                    } else {
                        cols[*c].insert(r);
                    }
                }
                let nb = &b[r] - &(&f * &pb);
                b[r] = nb;
            }
            for (c, _) in &prow {
                cols[*c].remove(&p);
            }
            rows[p].clear();
            alive[p] = false;
            rank += 1;
            progress = true;
        }
        if !progress {
            break;
        }
    }
    let mut solvable = true;
    let rest_rows: Vec<usize> = (0..m.rows)
        .filter(|&r| {
            if !alive[r] {
                return false;
            }
            if rows[r].is_empty() {
                if !b[r].is_zero() {
                    solvable = false;
                }
                return false;
            }
            true
        })
        .collect();
    let mut rest_cols: Vec<usize> = rest_rows
        .iter()
        .flat_map(|&r| rows[r].keys().copied())
        .collect();
    rest_cols.sort();
    rest_cols.dedup();
    let cidx: HashMap<usize, usize> = rest_cols.iter().enumerate().map(|(i, c)| (*c, i)).collect();
    let mut dense = vec![vec![Int::ZERO; rest_cols.len()]; rest_rows.len()];
    let mut db = vec![];
    for (i, &r) in rest_rows.iter().enumerate() {
        for (c, v) in &rows[r] {
            dense[i][cidx[c]] = v.clone();
        }
        db.push(b[r].clone());
    }
    let (diag, ok) = dense_smith(dense, db);
    solvable &= ok;
    rank += diag.len();
    SmithForm {
        rank,
        torsion: invariant_factors(diag),
        solvable: rhs.map(|_| solvable),
    }
}

/// Diagonalizes `a` by unimodular operations. Returns the nonzero diagonal and
/// whether the transformed right-hand side is compatible with it.
fn dense_smith(mut a: Vec<Vec<Int>>, mut b: Vec<Int>) -> (Vec<Int>, bool) {
    let nr = a.len();
    let nc = if nr == 0 { 0 } else { a[0].len() };
    let mut diag = vec![];
    let mut t = 0;
    while t < nr.min(nc) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..nr {
            for j in t..nc {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let (bi, bj) = match best {
            Some(x) => x,
            None => break,
        };
        a.swap(t, bi);
        b.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        loop {
            let mut done = true;
            for i in t + 1..nr {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..nc {
                    let v = &a[i][j] - &(&q * &a[t][j]);
                    a[i][j] = v;
                }
                let v = &b[i] - &(&q * &b[t]);
                b[i] = v;
                if !a[i][t].is_zero() {
                    done = false;
                }
            }
            for j in t + 1..nc {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for i in t..nr {
                    let v = &a[i][j] - &(&q * &a[i][t]);
                    a[i][j] = v;
                }
                if !a[t][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
            // move the smallest remaining entry of row/column t to the pivot
            let mut best = (t, t);
            for i in t..nr {
                if !a[i][t].is_zero() && a[i][t].abs() < a[best.0][best.1].abs() {
                    best = (i, t);
                }
            }
            for j in t..nc {
                if !a[t][j].is_zero() && a[t][j].abs() < a[best.0][best.1].abs() {
                    best = (t, j);
                }
            }
            if best.0 != t {
                a.swap(t, best.0);
                b.swap(t, best.0);
            } else if best.1 != t {
                for row in a.iter_mut() {
                    row.swap(t, best.1);
                }
            }
        }
        diag.push(a[t][t].clone());
        t += 1;
    }
    let mut ok = true;
    for i in 0..nr {
        if i < diag.len() {
            if !b[i].is_multiple_of(&diag[i]) {
                ok = false;
            }
        } else if !b[i].is_zero() {
            ok = false;
        }
    }
    (diag, ok)
}

/// Normalizes a diagonal into invariant factors, dropping units.
fn invariant_factors(diag: Vec<Int>) -> Vec<Int> {
    let mut d: Vec<Int> = diag.into_iter().map(|x| x.abs()).collect();
    let n = d.len();
    for i in 0..n {
        for j in i + 1..n {
            let g = d[i].gcd(&d[j]);
            if g != d[i] {
                let l = (&d[i] * &d[j]).div_exact(&g);
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d.into_iter().filter(|x| !x.is_unit()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> SparseMatrix {
        let mut m = SparseMatrix::new(rows.len(), rows[0].len());
        for (i, r) in rows.iter().enumerate() {
            for (j, v) in r.iter().enumerate() {
                m.push(i, j, Int::from(*v));
            }
        }
        m
    }

    #[test]
    fn torsion_and_rank() {
        let s = smith(&mat(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]), None);
        assert_eq!(s.rank, 3);
        assert_eq!(s.torsion, vec![Int::from(2), Int::from(6), Int::from(12)]);
        let s = smith(&mat(&[&[1, 1], &[1, -1]]), None);
        assert_eq!((s.rank, s.torsion), (2, vec![Int::from(2)]));
    }

    #[test]
    fn solvability() {
        let m = mat(&[&[2, 0], &[0, 3], &[0, 0]]);
        let ok = |b: &[i64]| {
            let b: Vec<Int> = b.iter().map(|x| Int::from(*x)).collect();
            smith(&m, Some(&b)).solvable.unwrap()
        };
        assert!(ok(&[4, 9, 0]));
        assert!(!ok(&[1, 0, 0]));
        assert!(!ok(&[0, 0, 1]));
        let m2 = mat(&[&[1, 1], &[1, -1]]);
        let b: Vec<Int> = [1, 0].iter().map(|x| Int::from(*x)).collect();
        assert_eq!(smith(&m2, Some(&b)).solvable, Some(false));
        let b: Vec<Int> = [3, 1].iter().map(|x| Int::from(*x)).collect();
        assert_eq!(smith(&m2, Some(&b)).solvable, Some(true));
    }
}
