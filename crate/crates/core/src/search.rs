//! Candidate distinguishing cycles and certificates.

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::cobordism::Movie;
use crate::complex::{differential_gen, generators_at, is_cycle, Bidegree, Chain, Gen, Smoothing, Smoothings};
use crate::diagram::Diagram;
use crate::error::{Error, Result};
use crate::int::Int;

/// For each loop of the smoothing, whether it meets a 0-smoothed crossing.
fn zero_tracing(d: &Diagram, s: &Smoothing) -> Vec<bool> {
    let mut out = vec![false; s.num_loops()];
    for (i, c) in d.crossings().iter().enumerate() {
        if s.state >> i & 1 == 0 {
            for a in c.slots {
                out[s.loop_of(d, a)] = true;
            }
        }
    }
    out
}

fn induced_labels(d: &Diagram, s: &Smoothing) -> u64 {
    zero_tracing(d, s)
        .iter()
        .enumerate()
        .filter(|(_, t)| **t)
        .fold(0, |acc, (k, _)| acc | 1 << k)
}

/// The oriented smoothing with 0-tracing loops labelled `x` and the rest `1`.
pub fn orientation_induced_generator(d: &Diagram) -> Gen {
    let s = Smoothing::new(d, d.oriented_smoothing());
    Gen::new(s.state, induced_labels(d, &s), s.num_loops())
}

/// Changed smoothings plus loops labelled against the 0-tracing rule.
fn distance(d: &Diagram, sm: &mut Smoothings, g: &Gen) -> u32 {
    let s = sm.get(g.state);
    (g.state ^ d.oriented_smoothing()).count_ones() + (g.labels ^ induced_labels(d, &s)).count_ones()
}

fn hash_text(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

fn to_rational(x: &Int) -> BigRational {
    BigRational::from_integer(x.to_big())
}

type Vector = BTreeMap<Gen, BigRational>;

/// Column echelon form of a set of integer vectors, remembering how every
/// basis vector combines the inputs.
struct Echelon {
    basis: Vec<(Gen, Vector, BTreeMap<usize, BigRational>)>,
    pivots: HashMap<Gen, usize>,
}

impl Echelon {
    fn new() -> Self {
        Echelon {
            basis: vec![],
            pivots: HashMap::new(),
        }
    }

    fn reduce(&self, v: &mut Vector, combo: &mut BTreeMap<usize, BigRational>) {
        loop {
            let Some((g, c)) = v.iter().find(|(g, _)| self.pivots.contains_key(g)).map(|(g, c)| (*g, c.clone()))
            else {
                return;
            };
            let (_, bv, bc) = &self.basis[self.pivots[&g]];
            for (h, x) in bv {
                let e = v.entry(*h).or_insert_with(BigRational::zero);
                *e -= &c * x;
                if e.is_zero() {
                    v.remove(h);
                }
            }
            for (k, x) in bc {
                let e = combo.entry(*k).or_insert_with(BigRational::zero);
                *e -= &c * x;
                if e.is_zero() {
                    combo.remove(k);
                }
            }
        }
    }

    fn insert(&mut self, col: usize, mut v: Vector) {
        let mut combo = BTreeMap::from([(col, BigRational::one())]);
        self.reduce(&mut v, &mut combo);
        let Some((g, lead)) = v.iter().next().map(|(g, c)| (*g, c.clone())) else {
            return;
        };
        for x in v.values_mut() {
            *x /= &lead;
        }
        for x in combo.values_mut() {
            *x /= &lead;
        }
        self.pivots.insert(g, self.basis.len());
        self.basis.push((g, v, combo));
    }

    /// Coefficients expressing `target` in the inputs, if it lies in their
    /// rational span.
    fn solve(&self, target: &Vector) -> Option<BTreeMap<usize, BigRational>> {
        let mut v = target.clone();
        let mut combo = BTreeMap::new();
        self.reduce(&mut v, &mut combo);
        if !v.is_empty() {
            return None;
        }
        Some(combo.into_iter().map(|(k, x)| (k, -x)).collect())
    }
}

fn as_vector(c: &Chain) -> Vector {
    c.terms().map(|(g, v)| (*g, to_rational(v))).collect()
}

/// Lazily produced candidate cycles at one bigrading. Single-generator
/// cycles come first, nearest the orientation-induced generator first.
/// Then every other generator `g` is corrected by a combination `a` of
/// allowed generators with `d(a) = d(g)`, and `g - a` is produced when the
/// combination is integral. Every generator examined and every correction
/// attempted costs one unit of budget.
pub struct CandidateStream<'a> {
    d: &'a Diagram,
    sm: Smoothings<'a>,
    order: Vec<Gen>,
    allowed: Box<dyn Fn(&Gen) -> bool + Sync + 'a>,
    columns: Vec<Gen>,
    echelon: Option<Echelon>,
    phase: u8,
    pos: usize,
    budget: usize,
    exhausted: bool,
}

impl<'a> CandidateStream<'a> {
    /// Whether the stream stopped early because the budget ran out.
    pub fn budget_exhausted(&self) -> bool {
        self.exhausted
    }

    fn spend(&mut self) -> bool {
        if self.budget == 0 {
            self.exhausted = true;
            return false;
        }
        self.budget -= 1;
        true
    }

    fn echelon(&mut self) -> Option<&Echelon> {
        if self.echelon.is_none() {
            let columns: Vec<Gen> = self.order.iter().copied().filter(|g| (self.allowed)(g)).collect();
            if columns.len() > self.budget {
                self.exhausted = true;
                self.budget = 0;
                return None;
            }
            self.budget -= columns.len();
            let mut e = Echelon::new();
            for (k, g) in columns.iter().enumerate() {
                e.insert(k, as_vector(&differential_gen(&mut self.sm, g)));
            }
            self.columns = columns;
            self.echelon = Some(e);
        }
        self.echelon.as_ref()
    }

    fn correct(&mut self, g: Gen) -> Option<Chain> {
        let dg = as_vector(&differential_gen(&mut self.sm, &g));
        let combo = self.echelon()?.solve(&dg)?;
        let mut out = Chain::from_gen(g);
        for (k, x) in combo {
            if !x.is_integer() {
                return None;
            }
            out.add_term(self.columns[k], &-Int::from(x.to_integer()));
        }
        debug_assert!(is_cycle(self.d, &out));
        Some(out)
    }
}

impl Iterator for CandidateStream<'_> {
    type Item = Chain;

    fn next(&mut self) -> Option<Chain> {
        while self.phase < 2 {
            if self.pos >= self.order.len() {
                self.phase += 1;
                self.pos = 0;
                continue;
            }
            if !self.spend() {
                return None;
            }
            let g = self.order[self.pos];
            self.pos += 1;
            let cycle = differential_gen(&mut self.sm, &g).is_zero();
            if self.phase == 0 {
                if cycle {
                    return Some(Chain::from_gen(g));
                }
            } else if !cycle && !(self.allowed)(&g) {
                if let Some(c) = self.correct(g) {
                    return Some(c);
                }
                if self.exhausted {
                    return None;
                }
            }
        }
        None
    }
}

/// Candidate cycles of `d` at `target`; corrections draw on the generators
/// accepted by `allowed`.
pub fn enumerate_candidate_cycles<'a>(
    d: &'a Diagram,
    target: Bidegree,
    budget: usize,
    allowed: impl Fn(&Gen) -> bool + Sync + 'a,
) -> CandidateStream<'a> {
    let mut sm = Smoothings::new(d);
    let mut order = generators_at(&mut sm, target);
    let mut keyed: Vec<(u32, Gen)> = order.iter().map(|g| (distance(d, &mut sm, g), *g)).collect();
    keyed.sort();
    order = keyed.into_iter().map(|(_, g)| g).collect();
    CandidateStream {
        d,
        sm,
        order,
        allowed: Box::new(allowed),
        columns: vec![],
        echelon: None,
        phase: 0,
        pos: 0,
        budget,
        exhausted: false,
    }
}

/// Two movies from the same diagram sending one cycle to values that differ
/// in absolute value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub diagram_hash: String,
    pub representative: String,
    pub movie_a_hash: String,
    pub movie_b_hash: String,
    pub value_a: Int,
    pub value_b: Int,
    pub transcript: Vec<String>,
}

impl Certificate {
    /// Recomputes everything from scratch.
    pub fn verify(&self, d: &Diagram, a: &Movie, b: &Movie) -> Result<bool> {
        let c = Chain::parse(d, &self.representative)?;
        Ok(self.diagram_hash == hash_text(&d.emit())
            && self.movie_a_hash == a.hash()
            && self.movie_b_hash == b.hash()
            && is_cycle(d, &c)
            && value(a, &c)? == self.value_a
            && value(b, &c)? == self.value_b
            && self.value_a.abs() != self.value_b.abs())
    }

    pub fn emit(&self) -> String {
        let mut s = String::from("certificate\n");
        s.push_str(&format!("diagram {}\n", self.diagram_hash));
        s.push_str(&format!("chain {}\n", self.representative));
        s.push_str(&format!("movie-a {} value {}\n", self.movie_a_hash, self.value_a));
        s.push_str(&format!("movie-b {} value {}\n", self.movie_b_hash, self.value_b));
        for t in &self.transcript {
            s.push_str(&format!("check {t}\n"));
        }
        s
    }
}

/// Image of `c` in the complex of the empty diagram, as an integer.
pub fn value(m: &Movie, c: &Chain) -> Result<Int> {
    if !m.end().is_empty() {
        return Err(Error::Other("movie does not end at the empty diagram".into()));
    }
    Ok(m.evaluate(c)?.scalar().unwrap_or(Int::ZERO))
}

const BATCH: usize = 32;

/// First candidate whose images under `a` and `b` differ in absolute value.
/// Candidates outside the gradings `(0, -χ)` of the two movies are skipped,
/// since both movies send them to zero.
pub fn distinguish(
    d: &Diagram,
    a: &Movie,
    b: &Movie,
    candidates: impl IntoIterator<Item = Chain>,
) -> Result<Option<Certificate>> {
    for m in [a, b] {
        if m.start() != d {
            return Err(Error::Other("movie does not start at the diagram".into()));
        }
        if !m.end().is_empty() {
            return Err(Error::Other("movie does not end at the empty diagram".into()));
        }
    }
    let gates = [
        Bidegree::new(0, -a.euler_characteristic()),
        Bidegree::new(0, -b.euler_characteristic()),
    ];
    let mut stream = candidates
        .into_iter()
        .filter(|c| c.grading(d).is_some_and(|g| gates.contains(&g)));
    loop {
        let batch: Vec<Chain> = stream.by_ref().take(BATCH).collect();
        if batch.is_empty() {
            return Ok(None);
        }
        let results: Vec<Result<(Int, Int)>> = batch.par_iter().map(|c| Ok((value(a, c)?, value(b, c)?))).collect();
        for (c, r) in batch.iter().zip(results) {
            let (va, vb) = r?;
            if va.abs() == vb.abs() || !is_cycle(d, c) {
                continue;
            }
            let transcript = vec![
                "representative is a cycle".to_string(),
                format!("grading {}", c.grading(d).expect("homogeneous")),
                format!("euler characteristics {} {}", a.euler_characteristic(), b.euler_characteristic()),
            ];
            return Ok(Some(Certificate {
                diagram_hash: hash_text(&d.emit()),
                representative: c.emit(d),
                movie_a_hash: a.hash(),
                movie_b_hash: b.hash(),
                value_a: va,
                value_b: vb,
                transcript,
            }));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::braid::{psi, BraidWord};
    use crate::cobordism::Event;

    #[test]
    fn induced_generator_is_a_cycle() {
        for w in [vec![1, 1, 1], vec![1, -2, 1, -2], vec![-1, -1, 2, 1, 1, 1, 2, -1, 2, 2], vec![2, -1, -1, 3, 2]] {
            let d = BraidWord::new(4, w).unwrap().closure();
            let g = orientation_induced_generator(&d);
            assert!(is_cycle(&d, &Chain::from_gen(g)));
            assert_eq!(g.grading(&d).h, 0);
        }
    }

    #[test]
    fn unknot_loop_is_labelled_one() {
        let d = Diagram::parse("crossings 0\nloop 1\n").unwrap();
        assert_eq!(orientation_induced_generator(&d), Gen::new(0, 0, 1));
    }

    #[test]
    fn positive_braid_gives_psi() {
        let b = BraidWord::new(3, vec![1, 2, 1, 2]).unwrap();
        let g = orientation_induced_generator(&b.closure());
        assert_eq!(Chain::from_gen(g), psi(&b));
    }

    #[test]
    fn stream_starts_with_psi() {
        let b = BraidWord::new(3, vec![1, 2, 2, 1, -2]).unwrap();
        let d = b.closure();
        let p = psi(&b);
        let target = p.grading(&d).unwrap();
        let mut s = enumerate_candidate_cycles(&d, target, 1000, |_| true);
        assert!(s.any(|c| c == p));
    }

    #[test]
    fn corrections_are_cycles() {
        let d = BraidWord::new(3, vec![1, -2, 1, -2]).unwrap().closure();
        let oriented = d.oriented_smoothing();
        let mut found = 0;
        for q in [-1, 1] {
            let s = enumerate_candidate_cycles(&d, Bidegree::new(0, q), 10_000, move |g| g.state != oriented);
            for c in s {
                assert!(is_cycle(&d, &c));
                assert_eq!(c.grading(&d), Some(Bidegree::new(0, q)));
                if c.len() > 1 {
                    found += 1;
                }
            }
        }
        assert!(found > 0);
    }

    #[test]
    fn budget_is_flagged() {
        let d = BraidWord::new(3, vec![1, -2, 1, -2]).unwrap().closure();
        let mut s = enumerate_candidate_cycles(&d, Bidegree::new(0, 1), 2, |_| true);
        while s.next().is_some() {}
        assert!(s.budget_exhausted());
    }

    #[test]
    fn identical_movies_give_nothing() {
        let d = Diagram::parse("crossings 0\nloop 1\n").unwrap();
        let m = Movie::new(d.clone(), vec![Event::Death(crate::diagram::ArcId(1))]).unwrap();
        let s = enumerate_candidate_cycles(&d, Bidegree::new(0, -1), 100, |_| true);
        assert_eq!(distinguish(&d, &m, &m, s).unwrap(), None);
    }
}
