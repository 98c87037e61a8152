use std::collections::BTreeMap;
use std::fmt;

use crate::complex::state::Smoothing;
use crate::diagram::{ArcId, Diagram};
use crate::error::{Error, Result};
use crate::int::Int;

/// A labelled smoothing. Bit `i` of `state` is the smoothing of crossing `i`;
/// bit `k` of `labels` is set when loop `k` (in name order) carries `x`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gen {
    pub state: u64,
    pub labels: u64,
    pub loops: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bidegree {
    pub h: i64,
    pub q: i64,
}

impl Bidegree {
    pub fn new(h: i64, q: i64) -> Self {
        Bidegree { h, q }
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.h, self.q)
    }
}

impl Gen {
    pub fn new(state: u64, labels: u64, loops: usize) -> Self {
        debug_assert!(loops <= 64 && (loops == 64 || labels >> loops == 0));
        Gen {
            state,
            labels,
            loops: loops as u8,
        }
    }

    pub fn label(&self, k: usize) -> bool {
        (self.labels >> k) & 1 == 1
    }

    pub fn grading(&self, d: &Diagram) -> Bidegree {
        let (np, nm) = d.crossing_counts();
        let h = self.state.count_ones() as i64 - nm as i64;
        let vm = self.labels.count_ones() as i64;
        let vp = self.loops as i64 - vm;
        Bidegree {
            h,
            q: vp - vm + h + np as i64 - nm as i64,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Chain {
    terms: BTreeMap<Gen, Int>,
}

impl Chain {
    pub fn zero() -> Self {
        Chain::default()
    }

    pub fn from_gen(g: Gen) -> Self {
        let mut c = Chain::zero();
        c.add_term(g, &Int::ONE);
        c
    }

    /// The generator `1` of the complex of the empty diagram.
    pub fn unit() -> Self {
        Chain::from_gen(Gen::new(0, 0, 0))
    }

    pub fn add_term(&mut self, g: Gen, c: &Int) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(g).or_insert(Int::ZERO);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&g);
        }
    }

    pub fn add_scaled(&mut self, other: &Chain, c: &Int) {
        for (g, v) in &other.terms {
            self.add_term(*g, &(v * c));
        }
    }

    pub fn scaled(&self, c: &Int) -> Chain {
        let mut out = Chain::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Gen, &Int)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, g: &Gen) -> Int {
        self.terms.get(g).cloned().unwrap_or(Int::ZERO)
    }

    /// Value of a chain on the empty diagram.
    pub fn scalar(&self) -> Option<Int> {
        match self.terms.len() {
            0 => Some(Int::ZERO),
            1 => {
                let (g, v) = self.terms.iter().next().unwrap();
                (g.state == 0 && g.loops == 0).then(|| v.clone())
            }
            _ => None,
        }
    }

    /// The common bidegree of all terms, if any.
    pub fn grading(&self, d: &Diagram) -> Option<Bidegree> {
        let mut it = self.terms.keys().map(|g| g.grading(d));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    /// Divides every coefficient by `k`, or `None` if some coefficient is
    /// not a multiple of it.
    pub fn divided(&self, k: &Int) -> Option<Chain> {
        let mut out = Chain::zero();
        for (g, v) in self.terms() {
            if !v.is_multiple_of(k) {
                return None;
            }
            out.add_term(*g, &v.div_exact(k));
        }
        Some(out)
    }

    pub fn neg(&self) -> Chain {
        self.scaled(&Int::from(-1))
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        out.add_scaled(other, &Int::from(-1));
        out
    }

    pub fn add(&self, other: &Chain) -> Chain {
        let mut out = self.clone();
        out.add_scaled(other, &Int::ONE);
        out
    }

    pub fn emit(&self, d: &Diagram) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let n = d.num_crossings();
        let mut parts = vec![];
        for (g, c) in &self.terms {
            let bits: String = (0..n)
                .map(|i| if (g.state >> i) & 1 == 1 { '1' } else { '0' })
                .collect();
            let s = Smoothing::new(d, g.state);
            let labels: Vec<String> = s
                .names()
                .iter()
                .enumerate()
                .map(|(k, name)| format!("{name}:{}", if g.label(k) { "x" } else { "1" }))
                .collect();
            let coef = if c.is_negative() {
                c.to_string()
            } else {
                format!("+{c}")
            };
            parts.push(format!("{coef} * [{bits} | {}]", labels.join(", ")));
        }
        parts.join(" ")
    }

    pub fn parse(d: &Diagram, text: &str) -> Result<Chain> {
        let bad = |m: String| Error::InvalidChain(m);
        let t = text.trim();
        let mut out = Chain::zero();
        if t == "0" || t.is_empty() {
            return Ok(out);
        }
        let mut rest = t;
        while !rest.is_empty() {
            let star = rest
                .find('*')
                .ok_or_else(|| bad(format!("expected `coef * [..]` near `{rest}`")))?;
            let coef: Int = rest[..star]
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad coefficient `{}`", rest[..star].trim())))?;
            let after = rest[star + 1..].trim_start();
            if !after.starts_with('[') {
                return Err(bad("expected `[` after `*`".into()));
            }
            let close = after
                .find(']')
                .ok_or_else(|| bad("unterminated generator".into()))?;
            let g = parse_gen(d, &after[1..close])?;
            out.add_term(g, &coef);
            rest = after[close + 1..].trim_start();
        }
        Ok(out)
    }
}

pub fn parse_gen(d: &Diagram, body: &str) -> Result<Gen> {
    let bad = |m: String| Error::InvalidChain(m);
    let (bits, labels) = body
        .split_once('|')
        .ok_or_else(|| bad(format!("missing `|` in `{body}`")))?;
    let bits = bits.trim();
    if bits.len() != d.num_crossings() {
        return Err(bad(format!(
            "bitstring `{bits}` has length {}, diagram has {} crossings",
            bits.len(),
            d.num_crossings()
        )));
    }
    let mut state = 0u64;
    for (i, ch) in bits.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => state |= 1 << i,
            _ => return Err(bad(format!("bad bit `{ch}`"))),
        }
    }
    let s = Smoothing::new(d, state);
    let mut seen = vec![false; s.num_loops()];
    let mut mask = 0u64;
    for item in labels.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (id, lab) = item
            .split_once(':')
            .ok_or_else(|| bad(format!("bad label `{item}`")))?;
        let id: u32 = id
            .trim()
            .parse()
            .map_err(|_| bad(format!("bad loop id `{id}`")))?;
        let k = s
            .position(ArcId(id))
            .ok_or_else(|| bad(format!("{id} does not name a loop of smoothing {bits}")))?;
        if seen[k] {
            return Err(bad(format!("loop {id} labelled twice")));
        }
        seen[k] = true;
        match lab.trim() {
            "x" => mask |= 1 << k,
            "1" => {}
            l => return Err(bad(format!("bad label `{l}`"))),
        }
    }
    if let Some(k) = seen.iter().position(|x| !x) {
        return Err(bad(format!("loop {} is unlabelled", s.names()[k])));
    }
    Ok(Gen::new(state, mask, s.num_loops()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::Sign;

    #[test]
    fn literal_round_trip() {
        let d = Diagram::from_pd(&[(Sign::Positive, [1, 1, 2, 2])], &[7]).unwrap();
        let c = Chain::parse(&d, "+1 * [0 | 1:x, 2:1, 7:x] -3 * [1 | 1:1, 7:1]").unwrap();
        assert_eq!(c.len(), 2);
        let text = c.emit(&d);
        assert_eq!(Chain::parse(&d, &text).unwrap(), c);
        assert!(Chain::parse(&d, "+1 * [0 | 1:x]").is_err());
        assert!(Chain::parse(&d, "+1 * [0 | 1:x, 2:1, 7:x, 3:1]").is_err());
    }

    #[test]
    fn gradings() {
        // positive kink: q of the oriented resolution with labels 1,1,x
        let d = Diagram::from_pd(&[(Sign::Positive, [1, 1, 2, 2])], &[]).unwrap();
        let g = Gen::new(0, 0b01, 2);
        assert_eq!(g.grading(&d), Bidegree::new(0, 1));
        assert_eq!(Chain::unit().scalar(), Some(Int::ONE));
    }
}
