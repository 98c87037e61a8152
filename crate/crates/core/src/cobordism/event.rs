//! Movie events: their text form, post-diagrams and chain maps.

use std::fmt;

use crate::cobordism::isotopy::Isotopy;
use crate::cobordism::morse::*;
use crate::cobordism::r3::{r3_map, r3_post, R3Data, Slide};
use crate::cobordism::reidemeister::*;
use crate::complex::{Chain, Gen};
use crate::diagram::{ArcId, Diagram, Side, Sign};
use crate::error::{parse_err, Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Event {
    Birth(ArcId),
    Death(ArcId),
    Saddle(SaddleSite),
    Dot(ArcId),
    /// Removes the kink at a crossing of the given sign.
    R1 { crossing: usize, sign: Sign },
    R1Inv(KinkSite),
    R2 { crossings: [usize; 2] },
    R2Inv(FingerSite),
    R3 { crossings: [usize; 3], slide: Slide },
    Resolve(usize),
    Isotopy(Isotopy),
}

/// Names of the four Reidemeister III variants, by the sign of the crossing
/// between the two strands that stay put and by which strand slides.
pub fn r3_variant(d: &Diagram, crossings: [usize; 3], slide: Slide) -> Result<&'static str> {
    let cone = crate::cobordism::r3::cone_crossing(d, crossings, slide)?;
    Ok(match (d.crossing(cone).sign, slide) {
        (Sign::Positive, Slide::Over) => "positive-over",
        (Sign::Negative, Slide::Over) => "negative-over",
        (Sign::Positive, Slide::Under) => "positive-under",
        (Sign::Negative, Slide::Under) => "negative-under",
    })
}

impl Event {
    /// Euler characteristic of the cobordism piece.
    pub fn euler(&self) -> i64 {
        match self {
            Event::Birth(_) | Event::Death(_) => 1,
            Event::Saddle(_) | Event::Resolve(_) => -1,
            _ => 0,
        }
    }

    /// Quantum degree of the induced map.
    pub fn q_shift(&self) -> i64 {
        match self {
            Event::Dot(_) => -2,
            e => e.euler(),
        }
    }

    pub fn parse_line(line: usize, l: &str) -> Result<Event> {
        let toks: Vec<&str> = l.split_whitespace().collect();
        let want = |k: usize| -> Result<()> {
            if toks.len() == k {
                Ok(())
            } else {
                parse_err(line, format!("`{}` takes {} arguments", toks[0], k - 1))
            }
        };
        let Some(&head) = toks.first() else {
            return parse_err(line, "empty event");
        };
        let ev = match head {
            "birth" | "death" | "dot" => {
                want(2)?;
                let a = arc(line, toks[1])?;
                match head {
                    "birth" => Event::Birth(a),
                    "death" => Event::Death(a),
                    _ => Event::Dot(a),
                }
            }
            "saddle" => {
                if toks.len() != 3 && toks.len() != 4 {
                    return parse_err(line, "`saddle` takes two arcs and an optional new loop");
                }
                let new = match toks.get(3) {
                    Some(t) => Some(arc(line, t)?),
                    None => None,
                };
                Event::Saddle(SaddleSite {
                    p: arc(line, toks[1])?,
                    q: arc(line, toks[2])?,
                    new,
                })
            }
            "r1+" | "r1-" => {
                want(2)?;
                Event::R1 {
                    crossing: crossing(line, toks[1])?,
                    sign: if head == "r1+" { Sign::Positive } else { Sign::Negative },
                }
            }
            "r1+inv" | "r1-inv" => {
                want(3)?;
                let rotation = match toks[2] {
                    "cw" => Rotation::Clockwise,
                    "ccw" => Rotation::Counterclockwise,
                    t => return parse_err(line, format!("expected cw or ccw, found `{t}`")),
                };
                Event::R1Inv(KinkSite {
                    arc: arc(line, toks[1])?,
                    sign: if head == "r1+inv" { Sign::Positive } else { Sign::Negative },
                    rotation,
                })
            }
            "r2" | "r2-" => {
                want(3)?;
                Event::R2 {
                    crossings: [crossing(line, toks[1])?, crossing(line, toks[2])?],
                }
            }
            "r2inv" => {
                want(3)?;
                Event::R2Inv(FingerSite {
                    over: side(line, toks[1])?,
                    under: side(line, toks[2])?,
                })
            }
            "r3" => {
                want(5)?;
                let slide = match toks[4] {
                    "over" => Slide::Over,
                    "under" => Slide::Under,
                    t => return parse_err(line, format!("expected over or under, found `{t}`")),
                };
                Event::R3 {
                    crossings: [
                        crossing(line, toks[1])?,
                        crossing(line, toks[2])?,
                        crossing(line, toks[3])?,
                    ],
                    slide,
                }
            }
            "resolve" => {
                want(2)?;
                Event::Resolve(crossing(line, toks[1])?)
            }
            _ => return parse_err(line, format!("unknown event `{head}`")),
        };
        Ok(ev)
    }

    /// Parses the body of an `isotopy` block (the lines between `isotopy`
    /// and `end`).
    pub fn parse_isotopy(lines: &[(usize, &str)]) -> Result<Event> {
        let mut order = None;
        let mut arcs = vec![];
        for &(n, l) in lines {
            let toks: Vec<&str> = l.split_whitespace().collect();
            match toks.first() {
                Some(&"order") => {
                    let v: Result<Vec<usize>> = toks[1..].iter().map(|t| crossing(n, t)).collect();
                    order = Some(v?);
                }
                Some(&"arc") if toks.len() == 3 => arcs.push((arc(n, toks[1])?, arc(n, toks[2])?)),
                _ => return parse_err(n, format!("bad isotopy line `{l}`")),
            }
        }
        let line = lines.first().map(|x| x.0).unwrap_or(0);
        let order = match order {
            Some(o) => o,
            None => return parse_err(line, "isotopy needs an `order` line"),
        };
        Ok(Event::Isotopy(Isotopy { order, arcs }))
    }
}

fn number(line: usize, t: &str, prefixes: &[char]) -> Result<u32> {
    let body = t.strip_prefix(prefixes).unwrap_or(t);
    body.parse()
        .or_else(|_| parse_err(line, format!("bad number `{t}`")))
}

fn arc(line: usize, t: &str) -> Result<ArcId> {
    Ok(ArcId(number(line, t, &['a', 'L'])?))
}

fn crossing(line: usize, t: &str) -> Result<usize> {
    match number(line, t, &['c'])? {
        0 => parse_err(line, "crossings are numbered from 1"),
        k => Ok(k as usize - 1),
    }
}

fn side(line: usize, t: &str) -> Result<Side> {
    let (body, forward) = match t.chars().last() {
        Some('+') => (&t[..t.len() - 1], true),
        Some('-') => (&t[..t.len() - 1], false),
        _ => return parse_err(line, format!("side `{t}` needs a trailing + or -")),
    };
    Ok(Side {
        arc: arc(line, body)?,
        forward,
    })
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: &Side| format!("a{}{}", s.arc, if s.forward { '+' } else { '-' });
        match self {
            Event::Birth(a) => write!(f, "birth L{a}"),
            Event::Death(a) => write!(f, "death L{a}"),
            Event::Dot(a) => write!(f, "dot a{a}"),
            Event::Saddle(s) => match s.new {
                Some(k) => write!(f, "saddle a{} a{} L{k}", s.p, s.q),
                None => write!(f, "saddle a{} a{}", s.p, s.q),
            },
            Event::R1 { crossing, sign } => {
                let s = if *sign == Sign::Positive { '+' } else { '-' };
                write!(f, "r1{s} c{}", crossing + 1)
            }
            Event::R1Inv(k) => {
                let s = if k.sign == Sign::Positive { '+' } else { '-' };
                let r = match k.rotation {
                    Rotation::Clockwise => "cw",
                    Rotation::Counterclockwise => "ccw",
                };
                write!(f, "r1{s}inv a{} {r}", k.arc)
            }
            Event::R2 { crossings } => write!(f, "r2 c{} c{}", crossings[0] + 1, crossings[1] + 1),
            Event::R2Inv(s) => write!(f, "r2inv {} {}", side(&s.over), side(&s.under)),
            Event::R3 { crossings, slide } => write!(
                f,
                "r3 c{} c{} c{} {}",
                crossings[0] + 1,
                crossings[1] + 1,
                crossings[2] + 1,
                if *slide == Slide::Over { "over" } else { "under" }
            ),
            Event::Resolve(c) => write!(f, "resolve c{}", c + 1),
            Event::Isotopy(iso) => f.write_str(&iso.emit()),
        }
    }
}

#[derive(Clone, Debug)]
enum Aux {
    None,
    Kink(Kink),
    Loop(ArcId),
    Bigon(Bigon),
    Resolve { mid: Diagram, kink: Kink },
    R3(Box<R3Data>),
}

/// One event together with the diagrams on either side.
#[derive(Clone, Debug)]
pub struct Step {
    event: Event,
    pre: Diagram,
    post: Diagram,
    aux: Aux,
}

impl Step {
    /// Checks the event against `pre` and builds the post-diagram.
    pub fn new(pre: Diagram, event: Event) -> Result<Step> {
        let (post, aux) = match &event {
            Event::Birth(k) => (birth_post(&pre, *k)?, Aux::None),
            Event::Death(k) => (death_post(&pre, *k)?, Aux::None),
            Event::Saddle(s) => (saddle_post(&pre, *s)?, Aux::None),
            Event::Dot(a) => {
                if !pre.has_arc(*a) {
                    return Err(Error::InvalidDiagram(format!("no arc {a}")));
                }
                (pre.clone(), Aux::None)
            }
            Event::R1 { crossing, sign } => {
                let k = find_kink(&pre, *crossing, *sign)?;
                (r1_post(&pre, &k)?, Aux::Kink(k))
            }
            Event::R1Inv(site) => {
                let (post, k) = r1inv_post(&pre, *site)?;
                (post, Aux::Loop(k))
            }
            Event::R2 { crossings } => {
                let b = find_bigon(&pre, crossings[0], crossings[1])?;
                (r2_post(&pre, &b)?, Aux::Bigon(b))
            }
            Event::R2Inv(site) => {
                let (post, b) = r2inv_post(&pre, *site)?;
                (post, Aux::Bigon(b))
            }
            Event::R3 { crossings, slide } => {
                let (post, data) = r3_post(&pre, *crossings, *slide)?;
                (post, Aux::R3(Box::new(data)))
            }
            Event::Resolve(c) => {
                let (mid, post, kink) = resolve_post(&pre, *c)?;
                (post, Aux::Resolve { mid, kink })
            }
            Event::Isotopy(iso) => (iso.post(&pre)?, Aux::None),
        };
        Ok(Step {
            event,
            pre,
            post,
            aux,
        })
    }

    /// Name of the move: merges and splits, kink signs and rotations,
    /// creation and removal, and the Reidemeister III variant are told apart.
    pub fn kind(&self) -> String {
        let sign = |s: Sign| if s == Sign::Positive { "positive" } else { "negative" };
        match &self.event {
            Event::Birth(_) => "birth".into(),
            Event::Death(_) => "death".into(),
            Event::Dot(_) => "dot".into(),
            Event::Saddle(_) => {
                let (a, b) = (self.pre.components().len(), self.post.components().len());
                if b < a { "merge" } else { "split" }.into()
            }
            Event::R1 { sign: s, .. } => format!("r1 {} removal", sign(*s)),
            Event::R1Inv(k) => {
                let r = match k.rotation {
                    Rotation::Clockwise => "cw",
                    Rotation::Counterclockwise => "ccw",
                };
                format!("r1 {} creation {r}", sign(k.sign))
            }
            Event::R2 { .. } => "r2 removal".into(),
            Event::R2Inv(_) => "r2 creation".into(),
            Event::R3 { crossings, slide } => {
                format!("r3 {}", r3_variant(&self.pre, *crossings, *slide).unwrap_or("unknown"))
            }
            Event::Resolve(c) => format!("resolve {}", sign(self.pre.crossing(*c).sign)),
            Event::Isotopy(_) => "isotopy".into(),
        }
    }

    pub fn event(&self) -> &Event {
        &self.event
    }

    pub fn pre(&self) -> &Diagram {
        &self.pre
    }

    pub fn post(&self) -> &Diagram {
        &self.post
    }

    pub fn map_gen(&self, g: &Gen) -> Chain {
        let (pre, post) = (&self.pre, &self.post);
        match (&self.event, &self.aux) {
            (Event::Birth(k), _) => birth_map(pre, post, *k, g),
            (Event::Death(k), _) => death_map(pre, post, *k, g),
            (Event::Saddle(s), _) => saddle_map(pre, post, *s, g),
            (Event::Dot(a), _) => dot_map(pre, *a, g),
            (Event::R1 { .. }, Aux::Kink(k)) => r1_map(pre, post, k, g),
            (Event::R1Inv(site), Aux::Loop(k)) => r1inv_map(pre, post, *site, *k, g),
            (Event::R2 { .. }, Aux::Bigon(b)) => r2_map(pre, post, b, g),
            (Event::R2Inv(_), Aux::Bigon(b)) => r2inv_map(pre, post, b, g),
            (Event::R3 { .. }, Aux::R3(data)) => r3_map(pre, post, data, g),
            (Event::Resolve(c), Aux::Resolve { mid, kink }) => resolve_map(pre, mid, post, *c, kink, g),
            (Event::Isotopy(iso), _) => iso.map(pre, post, g),
            _ => unreachable!("step data matches its event"),
        }
    }

    pub fn map(&self, c: &Chain) -> Chain {
        let mut out = Chain::zero();
        for (g, v) in c.terms() {
            out.add_scaled(&self.map_gen(g), v);
        }
        out
    }
}

/// Every event that applies to `d`: births and deaths, dots and saddles on
/// every arc, kinks of both signs and rotations, fingers between sides of a
/// face, and every removal, Reidemeister III move and resolution available.
pub fn applicable_events(d: &Diagram) -> Vec<Event> {
    let fresh = ArcId(d.max_arc() + 1);
    let mut out = vec![Event::Birth(fresh)];
    out.extend(d.free_loops().iter().map(|&k| Event::Death(k)));
    let arcs = d.arcs().to_vec();
    for (i, &p) in arcs.iter().enumerate() {
        out.push(Event::Dot(p));
        for &q in &arcs[i..] {
            let new = (p == q).then_some(fresh);
            out.push(Event::Saddle(SaddleSite { p, q, new }));
        }
        for sign in [Sign::Positive, Sign::Negative] {
            for rotation in [Rotation::Clockwise, Rotation::Counterclockwise] {
                out.push(Event::R1Inv(KinkSite { arc: p, sign, rotation }));
            }
        }
    }
    for face in d.faces() {
        for &over in &face {
            for &under in &face {
                if over != under {
                    out.push(Event::R2Inv(FingerSite { over, under }));
                }
            }
        }
    }
    let n = d.num_crossings();
    for c in 0..n {
        out.push(Event::R1 {
            crossing: c,
            sign: d.crossing(c).sign,
        });
        out.push(Event::Resolve(c));
        for e in c + 1..n {
            out.push(Event::R2 { crossings: [c, e] });
        }
    }
    for cs in crate::cobordism::simplify::triangles(d) {
        for slide in [Slide::Over, Slide::Under] {
            out.push(Event::R3 { crossings: cs, slide });
        }
    }
    out.retain(|e| Step::new(d.clone(), e.clone()).is_ok());
    out
}

