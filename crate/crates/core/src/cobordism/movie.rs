//! Movies: a start diagram and a list of events, with evaluation.

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::braid::BraidWord;
use crate::cobordism::event::{Event, Step};
use crate::cobordism::local::bad;
use crate::complex::{Bidegree, Chain, Gen};
use crate::diagram::{parse_lines, strip, Diagram};
use crate::error::{parse_err, Error, Result};

#[derive(Clone, Debug)]
pub struct Movie {
    start: Diagram,
    steps: Vec<Step>,
}

impl Movie {
    pub fn identity(start: Diagram) -> Movie {
        Movie { start, steps: vec![] }
    }

    /// Builds every intermediate diagram, failing at the first event that
    /// does not fit.
    pub fn new(start: Diagram, events: Vec<Event>) -> Result<Movie> {
        let mut m = Movie::identity(start);
        for e in events {
            m.push(e)?;
        }
        Ok(m)
    }

    pub fn push(&mut self, event: Event) -> Result<()> {
        let pre = self.end().clone();
        let text = event.to_string();
        let step = Step::new(pre, event).map_err(|e| bad(self.steps.len() + 1, &text, e.to_string()))?;
        self.steps.push(step);
        Ok(())
    }

    /// Appends `other`, which must start where this movie ends.
    pub fn then(mut self, other: Movie) -> Result<Movie> {
        if other.start != *self.end() {
            return Err(bad(self.steps.len() + 1, "concatenate", "diagrams do not match"));
        }
        self.steps.extend(other.steps);
        Ok(self)
    }

    pub fn start(&self) -> &Diagram {
        &self.start
    }

    pub fn end(&self) -> &Diagram {
        self.steps.last().map(|s| s.post()).unwrap_or(&self.start)
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn events(&self) -> impl Iterator<Item = &Event> {
        self.steps.iter().map(|s| s.event())
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Euler characteristic of the surface: births + deaths - saddles.
    pub fn euler_characteristic(&self) -> i64 {
        self.events().map(|e| e.euler()).sum()
    }

    /// Quantum degree of the induced map (dots count -2 each).
    pub fn q_shift(&self) -> i64 {
        self.events().map(|e| e.q_shift()).sum()
    }

    pub fn evaluate(&self, c: &Chain) -> Result<Chain> {
        self.evaluate_traced(c, &mut |_, _| {})
    }

    /// Evaluates step by step, calling `trace` with the step index (from 1)
    /// and the chain after that step. Every term is checked to move by the
    /// event's bidegree.
    pub fn evaluate_traced(&self, c: &Chain, trace: &mut dyn FnMut(usize, &Chain)) -> Result<Chain> {
        let mut cur = c.clone();
        for (i, step) in self.steps.iter().enumerate() {
            let shift = step.event().q_shift();
            let terms: Vec<(Gen, crate::int::Int)> = cur.terms().map(|(g, v)| (*g, v.clone())).collect();
            let images: Vec<Result<Chain>> = terms
                .par_iter()
                .map(|(g, v)| {
                    let img = step.map_gen(g);
                    let from = g.grading(step.pre());
                    let want = Bidegree::new(from.h, from.q + shift);
                    for (h, _) in img.terms() {
                        let got = h.grading(step.post());
                        if got != want {
                            return Err(Error::Grading {
                                step: i + 1,
                                expected: (want.h, want.q),
                                found: (got.h, got.q),
                            });
                        }
                    }
                    Ok(img.scaled(v))
                })
                .collect();
            let mut next = Chain::zero();
            for img in images {
                next.add_scaled(&img?, &crate::int::Int::ONE);
            }
            cur = next;
            trace(i + 1, &cur);
        }
        Ok(cur)
    }

    pub fn emit(&self) -> String {
        let mut s = String::from("start\n");
        s.push_str(&self.start.emit());
        s.push_str("events\n");
        for e in self.events() {
            s.push_str(&e.to_string());
            s.push('\n');
        }
        s
    }

    /// SHA-256 of the emitted text, in hex.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.emit().as_bytes()))
    }

    pub fn parse(text: &str) -> Result<Movie> {
        let numbered: Vec<(usize, &str)> = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, strip(l)))
            .filter(|(_, l)| !l.is_empty())
            .collect();
        let mut pos;
        let (n, first) = match numbered.first() {
            Some(x) => *x,
            None => return parse_err(0, "empty movie"),
        };
        let start = match first.split_whitespace().collect::<Vec<_>>().as_slice() {
            ["start"] => {
                let mut lines = numbered[1..].iter().copied().peekable();
                let d = parse_lines(&mut lines)?;
                pos = numbered.len() - lines.count();
                d
            }
            ["start", "braid"] => {
                let end = numbered
                    .iter()
                    .position(|(_, l)| *l == "events")
                    .unwrap_or(numbered.len());
                let body: Vec<&str> = numbered[1..end].iter().map(|x| x.1).collect();
                pos = end;
                BraidWord::parse(&body.join("\n"))
                    .map_err(|e| match e {
                        Error::Parse { line, msg } => Error::Parse {
                            line: line + n,
                            msg,
                        },
                        e => e,
                    })?
                    .closure()
            }
            _ => return parse_err(n, "a movie begins with `start` or `start braid`"),
        };
        let mut movie = Movie::identity(start);
        match numbered.get(pos) {
            Some((_, "events")) => pos += 1,
            Some((n, l)) => return parse_err(*n, format!("expected `events`, found `{l}`")),
            None => return Ok(movie),
        }
        while pos < numbered.len() {
            let (n, l) = numbered[pos];
            pos += 1;
            let event = if l == "isotopy" {
                let close = numbered[pos..]
                    .iter()
                    .position(|(_, l)| *l == "end")
                    .map(|k| pos + k);
                let Some(close) = close else {
                    return parse_err(n, "isotopy block without `end`");
                };
                let ev = Event::parse_isotopy(&numbered[pos..close])?;
                pos = close + 1;
                ev
            } else {
                Event::parse_line(n, l)?
            };
            movie.push(event)?;
        }
        Ok(movie)
    }
}
