//! Braid words, band factorizations and their closures.

use std::collections::HashMap;
use std::fmt;

use crate::complex::{Chain, Gen, Smoothing};
use crate::diagram::{ArcId, Crossing, Diagram, Sign};
use crate::error::{parse_err, Error, Result};

mod surface;

pub use surface::{compile_braided_surface, rewrite_movie, stabilization_movie};

/// Braid generator `σ_i^{±1}` stored as `±i`.
pub type Letter = i32;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    strands: usize,
    letters: Vec<Letter>,
}

impl BraidWord {
    pub fn new(strands: usize, letters: Vec<Letter>) -> Result<Self> {
        if strands == 0 {
            return Err(Error::InvalidBraid("no strands".into()));
        }
        for &l in &letters {
            if l == 0 || l.unsigned_abs() as usize >= strands {
                return Err(Error::InvalidBraid(format!(
                    "letter {l} out of range for {strands} strands"
                )));
            }
        }
        Ok(BraidWord { strands, letters })
    }

    pub fn strands(&self) -> usize {
        self.strands
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord {
            strands: self.strands,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// `βσ_n` on `n + 1` strands.
    pub fn positive_stabilization(&self) -> BraidWord {
        let mut letters = self.letters.clone();
        letters.push(self.strands as Letter);
        BraidWord {
            strands: self.strands + 1,
            letters,
        }
    }

    /// Closure diagram; crossing `k` is letter `k`. Arcs are numbered
    /// `1..=m` in order of creation, strands' initial arcs first.
    pub fn closure(&self) -> Diagram {
        self.closure_with_arcs().0
    }

    /// Closure together with the arc at each strand position between
    /// letters: entry `t` lists the arcs just before letter `t`.
    pub fn closure_with_arcs(&self) -> (Diagram, Vec<Vec<ArcId>>) {
        let n = self.strands;
        let mut pos: Vec<u32> = (1..=n as u32).collect();
        let mut times = vec![pos.clone()];
        let mut next = n as u32 + 1;
        let mut raw: Vec<(Sign, [u32; 4])> = vec![];
        for &l in &self.letters {
            let i = l.unsigned_abs() as usize - 1;
            let (lin, rin) = (pos[i], pos[i + 1]);
            let (lout, rout) = (next, next + 1);
            next += 2;
            if l > 0 {
                raw.push((Sign::Positive, [rin, rout, lout, lin]));
            } else {
                raw.push((Sign::Negative, [lin, rin, rout, lout]));
            }
            // the strand entering on the left leaves on the right
            pos[i] = lout;
            pos[i + 1] = rout;
            times.push(pos.clone());
        }
        let mut rename: HashMap<u32, u32> = HashMap::new();
        for (k, &p) in pos.iter().enumerate() {
            rename.insert(p, k as u32 + 1);
        }
        let mut used: Vec<u32> = raw
            .iter()
            .flat_map(|(_, s)| s.iter().map(|a| *rename.get(a).unwrap_or(a)))
            .collect();
        let loops: Vec<u32> = (1..=n as u32).filter(|a| pos[*a as usize - 1] == *a).collect();
        used.extend(&loops);
        used.sort();
        used.dedup();
        let dense: HashMap<u32, u32> = used.iter().enumerate().map(|(k, a)| (*a, k as u32 + 1)).collect();
        let f = |a: &u32| dense[rename.get(a).unwrap_or(a)];
        let crossings = raw
            .iter()
            .map(|(s, slots)| Crossing::new(*s, [f(&slots[0]), f(&slots[1]), f(&slots[2]), f(&slots[3])]))
            .collect();
        let d = Diagram::new(crossings, loops.iter().map(|a| ArcId(dense[a])).collect())
            .expect("braid closure is a valid diagram");
        let arcs = times
            .iter()
            .map(|t| t.iter().map(|a| ArcId(f(a))).collect())
            .collect();
        (d, arcs)
    }

    pub fn emit(&self) -> String {
        let v: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        format!("strands {}\n{}\n", self.strands, v.join(" "))
    }

    pub fn parse(text: &str) -> Result<BraidWord> {
        let mut strands = None;
        let mut letters = vec![];
        for (n, raw) in text.lines().enumerate() {
            let l = crate::diagram::strip(raw);
            if l.is_empty() {
                continue;
            }
            if let Some(rest) = l.strip_prefix("strands") {
                match rest.trim().parse() {
                    Ok(s) => strands = Some(s),
                    Err(_) => return parse_err(n + 1, "bad strand count"),
                }
                continue;
            }
            if strands.is_none() {
                return parse_err(n + 1, "expected `strands n` first");
            }
            for t in l.split_whitespace() {
                match t.parse::<Letter>() {
                    Ok(v) => letters.push(v),
                    Err(_) => return parse_err(n + 1, format!("bad letter `{t}`")),
                }
            }
        }
        let strands = match strands {
            Some(s) => s,
            None => return parse_err(0, "missing `strands n`"),
        };
        BraidWord::new(strands, letters).map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        })
    }
}

impl fmt::Display for BraidWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.emit())
    }
}

/// The orientation-respecting generator with every loop labelled `x`.
pub fn psi(b: &BraidWord) -> Chain {
    let d = b.closure();
    let state = d.oriented_smoothing();
    let k = Smoothing::new(&d, state).num_loops();
    let labels = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    Chain::from_gen(Gen::new(state, labels, k))
}

/// A band `w σ_i^{±1} w⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Band {
    pub conjugator: Vec<Letter>,
    pub core: Letter,
}

impl Band {
    pub fn is_positive(&self) -> bool {
        self.core > 0
    }

    pub fn letters(&self) -> Vec<Letter> {
        let mut v = self.conjugator.clone();
        v.push(self.core);
        v.extend(self.conjugator.iter().rev().map(|l| -l));
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// Letter `k` of the conjugator of band `band`.
    Conjugator { band: usize, k: usize },
    Core { band: usize },
    /// Inverse of conjugator letter `k` of band `band`.
    Inverse { band: usize, k: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BandFactorization {
    pub strands: usize,
    pub bands: Vec<Band>,
}

impl BandFactorization {
    pub fn new(strands: usize, bands: Vec<Band>) -> Result<Self> {
        let f = BandFactorization { strands, bands };
        f.word()?;
        Ok(f)
    }

    pub fn word(&self) -> Result<BraidWord> {
        BraidWord::new(
            self.strands,
            self.bands.iter().flat_map(|b| b.letters()).collect(),
        )
    }

    /// Role of every letter of the expanded word.
    pub fn roles(&self) -> Vec<Role> {
        let mut out = vec![];
        for (bi, b) in self.bands.iter().enumerate() {
            let m = b.conjugator.len();
            out.extend((0..m).map(|k| Role::Conjugator { band: bi, k }));
            out.push(Role::Core { band: bi });
            out.extend((0..m).rev().map(|k| Role::Inverse { band: bi, k }));
        }
        out
    }

    /// Position of the core letter of each band in the expanded word.
    pub fn core_positions(&self) -> Vec<usize> {
        self.roles()
            .iter()
            .enumerate()
            .filter(|(_, r)| matches!(r, Role::Core { .. }))
            .map(|(i, _)| i)
            .collect()
    }

    /// Positions `(conjugator letter, its inverse)` for every band.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let roles = self.roles();
        let mut out = vec![];
        for (i, r) in roles.iter().enumerate() {
            if let Role::Conjugator { band, k } = *r {
                let j = roles
                    .iter()
                    .position(|s| *s == Role::Inverse { band, k })
                    .unwrap();
                out.push((i, j));
            }
        }
        out
    }

    pub fn num_positive(&self) -> usize {
        self.bands.iter().filter(|b| b.is_positive()).count()
    }

    /// Euler characteristic of the braided surface.
    pub fn euler_characteristic(&self) -> i64 {
        self.strands as i64 - self.bands.len() as i64
    }

    pub fn emit(&self) -> String {
        let mut s = format!("strands {}\n", self.strands);
        for b in &self.bands {
            let w: Vec<String> = b.conjugator.iter().map(|l| l.to_string()).collect();
            let sign = if b.core > 0 { '+' } else { '-' };
            let conj = if w.is_empty() {
                String::new()
            } else {
                format!("{} ", w.join(" "))
            };
            s.push_str(&format!("[ {conj}; {} ; {sign} ]\n", b.core.abs()));
        }
        s
    }

    pub fn parse(text: &str) -> Result<BandFactorization> {
        let mut strands = None;
        let mut bands = vec![];
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let l = crate::diagram::strip(raw);
            if l.is_empty() {
                continue;
            }
            if let Some(rest) = l.strip_prefix("strands") {
                match rest.trim().parse() {
                    Ok(s) => strands = Some(s),
                    Err(_) => return parse_err(line, "bad strand count"),
                }
                continue;
            }
            let mut rest = l;
            while !rest.is_empty() {
                let open = match rest.find('[') {
                    Some(0) => 0,
                    _ => return parse_err(line, format!("expected `[` in `{rest}`")),
                };
                let close = match rest.find(']') {
                    Some(c) => c,
                    None => return parse_err(line, "unterminated band"),
                };
                let parts: Vec<&str> = rest[open + 1..close].split(';').map(str::trim).collect();
                if parts.len() != 3 {
                    return parse_err(line, "band must be `[ word ; index ; ± ]`");
                }
                let mut conjugator = vec![];
                for t in parts[0].split_whitespace() {
                    match t.parse::<Letter>() {
                        Ok(v) => conjugator.push(v),
                        Err(_) => return parse_err(line, format!("bad letter `{t}`")),
                    }
                }
                let idx: Letter = match parts[1].parse() {
                    Ok(v) if v > 0 => v,
                    _ => return parse_err(line, format!("bad core index `{}`", parts[1])),
                };
                let core = match parts[2] {
                    "+" => idx,
                    "-" => -idx,
                    s => return parse_err(line, format!("bad band sign `{s}`")),
                };
                bands.push(Band { conjugator, core });
                rest = rest[close + 1..].trim_start();
            }
        }
        let strands = match strands {
            Some(s) => s,
            None => return parse_err(0, "missing `strands n`"),
        };
        BandFactorization::new(strands, bands).map_err(|e| Error::Parse {
            line: 0,
            msg: e.to_string(),
        })
    }
}

/// Whether a generator of the closure of `f` is compatible with the band
/// factorization: cores are oriented, and each conjugator letter and its
/// inverse are both oriented or both disoriented.
pub fn is_compatible(g: &Gen, f: &BandFactorization) -> bool {
    let word = match f.word() {
        Ok(w) => w,
        Err(_) => return false,
    };
    let oriented = |i: usize| {
        let bit = (g.state >> i) & 1;
        let want = if word.letters()[i] > 0 { 0 } else { 1 };
        bit == want
    };
    f.core_positions().iter().all(|&i| oriented(i))
        && f.pairs().iter().all(|&(i, j)| oriented(i) == oriented(j))
}

/// One braid-word rewriting step. Positions are 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RewriteStep {
    /// Exchange far-commuting letters at `p`, `p+1`.
    Swap(usize),
    /// Rewrite `a^e b^d a^f -> b^f a^d b^e` at `p..p+3`, `|a-b| = 1`.
    Relation(usize),
    /// Delete the inverse pair at `p`, `p+1`.
    Cancel(usize),
    /// Insert `σ^{l} σ^{-l}` before position `p`.
    Insert(usize, Letter),
}

impl RewriteStep {
    pub fn parse_line(line: usize, l: &str) -> Result<RewriteStep> {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let num = |t: &str| -> Result<usize> {
            match t.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => parse_err(line, format!("bad position `{t}`")),
            }
        };
        match toks.as_slice() {
            ["swap", p] => Ok(RewriteStep::Swap(num(p)?)),
            ["relation", p] => Ok(RewriteStep::Relation(num(p)?)),
            ["cancel", p] => Ok(RewriteStep::Cancel(num(p)?)),
            ["insert", p, l] => match l.parse::<Letter>() {
                Ok(v) if v != 0 => Ok(RewriteStep::Insert(num(p)?, v)),
                _ => parse_err(line, format!("bad letter `{l}`")),
            },
            _ => parse_err(line, format!("unknown rewrite step `{l}`")),
        }
    }

    pub fn emit(&self) -> String {
        match self {
            RewriteStep::Swap(p) => format!("swap {}", p + 1),
            RewriteStep::Relation(p) => format!("relation {}", p + 1),
            RewriteStep::Cancel(p) => format!("cancel {}", p + 1),
            RewriteStep::Insert(p, l) => format!("insert {} {l}", p + 1),
        }
    }
}

pub fn parse_steps(text: &str) -> Result<Vec<RewriteStep>> {
    let mut out = vec![];
    for (n, raw) in text.lines().enumerate() {
        let l = crate::diagram::strip(raw);
        if !l.is_empty() {
            out.push(RewriteStep::parse_line(n + 1, l)?);
        }
    }
    Ok(out)
}

/// Whether `a^e b^d a^f = b^f a^d b^e` is a braid relation (adjacent
/// generators and a consistent layering of the three strands).
pub fn relation_applies(x: Letter, y: Letter, z: Letter) -> bool {
    let (a, b) = (x.abs(), y.abs());
    if z.abs() != a || (a - b).abs() != 1 {
        return false;
    }
    let (e, d, f) = (x.signum(), y.signum(), z.signum());
    !(e == f && d == -e)
}

/// Applies one step, returning the new word and where each old position went.
pub fn apply_step(w: &BraidWord, step: RewriteStep) -> Result<(BraidWord, Vec<Option<usize>>)> {
    let l = &w.letters;
    let n = l.len();
    let bad = |m: String| Error::InvalidBraid(format!("{}: {m}", step.emit()));
    let mut letters = l.clone();
    let mut map: Vec<Option<usize>> = (0..n).map(Some).collect();
    match step {
        RewriteStep::Swap(p) => {
            if p + 1 >= n {
                return Err(bad("position out of range".into()));
            }
            if (l[p].abs() - l[p + 1].abs()).abs() < 2 {
                return Err(bad(format!("{} and {} do not commute", l[p], l[p + 1])));
            }
            letters.swap(p, p + 1);
            map[p] = Some(p + 1);
            map[p + 1] = Some(p);
        }
        RewriteStep::Relation(p) => {
            if p + 2 >= n {
                return Err(bad("position out of range".into()));
            }
            let (x, y, z) = (l[p], l[p + 1], l[p + 2]);
            if !relation_applies(x, y, z) {
                return Err(bad(format!("no braid relation for {x} {y} {z}")));
            }
            let (a, b) = (x.abs(), y.abs());
            letters[p] = b * z.signum();
            letters[p + 1] = a * y.signum();
            letters[p + 2] = b * x.signum();
            map[p] = Some(p + 2);
            map[p + 2] = Some(p);
        }
        RewriteStep::Cancel(p) => {
            if p + 1 >= n || l[p] != -l[p + 1] {
                return Err(bad("letters do not cancel".into()));
            }
            letters.drain(p..p + 2);
            map[p] = None;
            map[p + 1] = None;
            for m in map.iter_mut().skip(p + 2) {
                *m = m.map(|v| v - 2);
            }
        }
        RewriteStep::Insert(p, x) => {
            if p > n {
                return Err(bad("position out of range".into()));
            }
            letters.splice(p..p, [x, -x]);
            for m in map.iter_mut().skip(p) {
                *m = m.map(|v| v + 2);
            }
        }
    }
    Ok((BraidWord::new(w.strands, letters)?, map))
}

/// Applies the steps in order, tracking each original letter.
pub fn rewrite_tracked(
    w: &BraidWord,
    steps: &[RewriteStep],
) -> Result<(BraidWord, Vec<Option<usize>>)> {
    let mut cur = w.clone();
    let mut track: Vec<Option<usize>> = (0..w.len()).map(Some).collect();
    for s in steps {
        let (next, map) = apply_step(&cur, *s)?;
        for t in track.iter_mut() {
            *t = t.and_then(|v| map[v]);
        }
        cur = next;
    }
    Ok((cur, track))
}

/// Steps undoing `steps`, to be applied to the word they produce (returned
/// alongside).
pub fn invert_steps(w: &BraidWord, steps: &[RewriteStep]) -> Result<(BraidWord, Vec<RewriteStep>)> {
    let mut cur = w.clone();
    let mut back = vec![];
    for &s in steps {
        let undo = match s {
            RewriteStep::Swap(p) => RewriteStep::Swap(p),
            RewriteStep::Relation(p) => RewriteStep::Relation(p),
            RewriteStep::Cancel(p) => match cur.letters.get(p) {
                Some(&l) => RewriteStep::Insert(p, l),
                None => return Err(Error::InvalidBraid(format!("{}: position out of range", s.emit()))),
            },
            RewriteStep::Insert(p, _) => RewriteStep::Cancel(p),
        };
        cur = apply_step(&cur, s)?.0;
        back.push(undo);
    }
    back.reverse();
    Ok((cur, back))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{euler_characteristic, is_cycle};

    #[test]
    fn closure_matches_trefoil() {
        let b = BraidWord::new(2, vec![1, 1, 1]).unwrap();
        let d = b.closure();
        assert_eq!(d.num_crossings(), 3);
        assert!(d.is_planar());
        assert_eq!(d.components().len(), 1);
        assert_eq!(
            euler_characteristic(&d).to_string(),
            "1 q^1 + 1 q^3 + 1 q^5 - 1 q^9"
        );
    }

    #[test]
    fn closure_loops() {
        let d = BraidWord::new(3, vec![1, -1]).unwrap().closure();
        assert_eq!(d.free_loops().len(), 1);
        assert_eq!(d.components().len(), 3);
        let e = BraidWord::new(2, vec![]).unwrap().closure();
        assert_eq!(e.free_loops().len(), 2);
    }

    #[test]
    fn psi_is_cycle() {
        let b = BraidWord::new(3, vec![1, -2, 1, -2]).unwrap();
        assert!(is_cycle(&b.closure(), &psi(&b)));
    }

    #[test]
    fn band_text() {
        let text = "strands 3\n[ -1 -1 ; 2 ; + ] [ 1 ; 2 ; + ]\n[ ; 2 ; + ]\n";
        let f = BandFactorization::parse(text).unwrap();
        assert_eq!(f.bands.len(), 3);
        assert_eq!(f.word().unwrap().letters(), &[-1, -1, 2, 1, 1, 1, 2, -1, 2]);
        assert_eq!(BandFactorization::parse(&f.emit()).unwrap(), f);
        assert_eq!(f.pairs(), vec![(0, 4), (1, 3), (5, 7)]);
    }

    #[test]
    fn relations() {
        assert!(relation_applies(1, 2, 1));
        assert!(relation_applies(1, 2, -1));
        assert!(!relation_applies(1, -2, 1));
        assert!(!relation_applies(-1, 2, -1));
        let w = BraidWord::new(3, vec![-1, 2, 1]).unwrap();
        let (v, map) = apply_step(&w, RewriteStep::Relation(0)).unwrap();
        assert_eq!(v.letters(), &[2, 1, -2]);
        assert_eq!(map, vec![Some(2), Some(1), Some(0)]);
    }
}
