//! Corpus entries: a manifest naming a diagram, chains, band factorizations
//! and movies, plus the expectations checked by `corpus verify`.
//!
//! Manifest lines (paths are relative to the manifest, `#` starts a comment):
//!
//! ```text
//! name <entry>
//! diagram <file>                      diagram or braid word file
//! chain <name> <file> | chain <name> psi
//! bands <name> <file>
//! rewrite <name> <file>
//! movie <name> file <file>
//! movie <name> compile <bands>
//! movie <name> rewrite <script> <bands>
//! expect cycle <chain>
//! expect value <movie> <chain> <int> | expect value <movie> <chain> abs <int>
//! expect compatible <chain> <bands> | expect incompatible <chain> <bands>
//! expect disoriented-first-core <chain> <bands> <script>
//! expect distinct <movie> <movie>
//! expect euler
//! ```
//!
//! `movie m rewrite r f` runs the inverse of script `r` from the word of `f`
//! back to the entry's braid, then the compiled surface of `f`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use khmovie::braid::{
    compile_braided_surface, invert_steps, is_compatible, parse_steps, psi, rewrite_movie, rewrite_tracked,
    BandFactorization, BraidWord, RewriteStep,
};
use khmovie::cobordism::Movie;
use khmovie::complex::{euler_characteristic, is_cycle};
use khmovie::oracle::jones;
use khmovie::search::{distinguish, enumerate_candidate_cycles, value};
use khmovie::{Bidegree, Chain, Diagram, Error, Int, Result};

/// Candidate budget used by `expect distinct`.
pub const SEARCH_BUDGET: usize = 200_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expected {
    Exact(Int),
    Abs(Int),
}

impl Expected {
    pub fn matches(&self, v: &Int) -> bool {
        match self {
            Expected::Exact(x) => x == v,
            Expected::Abs(x) => x == &v.abs(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expect {
    Cycle(String),
    Value {
        movie: String,
        chain: String,
        want: Expected,
    },
    Compatible {
        chain: String,
        bands: String,
        want: bool,
    },
    DisorientedFirstCore {
        chain: String,
        bands: String,
        script: String,
    },
    Distinct(String, String),
    Euler,
}

impl std::fmt::Display for Expect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Expect::Cycle(c) => write!(f, "cycle {c}"),
            Expect::Value { movie, chain, want } => match want {
                Expected::Exact(v) => write!(f, "value {movie} {chain} {v}"),
                Expected::Abs(v) => write!(f, "value {movie} {chain} abs {v}"),
            },
            Expect::Compatible { chain, bands, want } => {
                let w = if *want { "compatible" } else { "incompatible" };
                write!(f, "{w} {chain} {bands}")
            }
            Expect::DisorientedFirstCore { chain, bands, script } => {
                write!(f, "disoriented-first-core {chain} {bands} {script}")
            }
            Expect::Distinct(a, b) => write!(f, "distinct {a} {b}"),
            Expect::Euler => write!(f, "euler"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub name: String,
    pub path: PathBuf,
    pub diagram: Diagram,
    pub braid: Option<BraidWord>,
    pub chains: BTreeMap<String, Chain>,
    pub bands: BTreeMap<String, BandFactorization>,
    pub scripts: BTreeMap<String, Vec<RewriteStep>>,
    pub movies: BTreeMap<String, Movie>,
    pub expects: Vec<Expect>,
}

/// Outcome of one expectation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub entry: String,
    pub what: String,
    pub ok: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let verdict = if self.ok { "ok" } else { "MISMATCH" };
        write!(f, "{} {}: {verdict}", self.entry, self.what)?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

/// Reads a diagram file; a file starting with `strands` is a braid word and
/// stands for its closure.
pub fn load_diagram(text: &str) -> Result<(Diagram, Option<BraidWord>)> {
    let first = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .unwrap_or("");
    if first.starts_with("strands") {
        let b = BraidWord::parse(text)?;
        Ok((b.closure(), Some(b)))
    } else {
        Ok((Diagram::parse(text)?, None))
    }
}

/// Chain text with comments and blank lines removed.
pub fn load_chain(d: &Diagram, text: &str) -> Result<Chain> {
    let body: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    Chain::parse(d, &body.join(" "))
}

fn read(base: &Path, file: &str) -> Result<String> {
    let p = base.join(file);
    fs::read_to_string(&p).map_err(|e| Error::Other(format!("{}: {e}", p.display())))
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, kind: &str, name: &str, line: usize) -> Result<&'a T> {
    map.get(name).ok_or_else(|| Error::Parse {
        line,
        msg: format!("unknown {kind} `{name}`"),
    })
}

fn int(line: usize, t: &str) -> Result<Int> {
    t.parse().map_err(|_| Error::Parse {
        line,
        msg: format!("bad integer `{t}`"),
    })
}

/// The movie from the closure of the braid reached by undoing `steps` on the
/// word of `f`, through the rewriting, then down the surface of `f`.
pub fn rewritten_surface(f: &BandFactorization, steps: &[RewriteStep]) -> Result<(BraidWord, Movie)> {
    let (from, back) = invert_steps(&f.word()?, steps)?;
    let m = rewrite_movie(&from, &back)?.then(compile_braided_surface(f)?)?;
    Ok((from, m))
}

pub fn load_entry(path: &Path) -> Result<Entry> {
    let base = path.parent().unwrap_or(Path::new("."));
    let text = read(Path::new("."), &path.to_string_lossy())?;
    let mut e = Entry {
        name: String::new(),
        path: path.to_path_buf(),
        diagram: Diagram::empty(),
        braid: None,
        chains: BTreeMap::new(),
        bands: BTreeMap::new(),
        scripts: BTreeMap::new(),
        movies: BTreeMap::new(),
        expects: vec![],
    };
    let mut have_diagram = false;
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let t: Vec<&str> = l.split_whitespace().collect();
        let bad = |msg: &str| Error::Parse {
            line,
            msg: msg.to_string(),
        };
        if t[0] != "name" && t[0] != "diagram" && !have_diagram {
            return Err(bad("`diagram` must come before other lines"));
        }
        match t.as_slice() {
            ["name", name] => e.name = name.to_string(),
            ["diagram", file] => {
                (e.diagram, e.braid) = load_diagram(&read(base, file)?)?;
                have_diagram = true;
            }
            ["chain", name, "psi"] => {
                let b = e.braid.as_ref().ok_or_else(|| bad("psi needs a braid diagram"))?;
                e.chains.insert(name.to_string(), psi(b));
            }
            ["chain", name, file] => {
                let c = load_chain(&e.diagram, &read(base, file)?)?;
                e.chains.insert(name.to_string(), c);
            }
            ["bands", name, file] => {
                e.bands.insert(name.to_string(), BandFactorization::parse(&read(base, file)?)?);
            }
            ["rewrite", name, file] => {
                e.scripts.insert(name.to_string(), parse_steps(&read(base, file)?)?);
            }
            ["movie", name, "file", file] => {
                e.movies.insert(name.to_string(), Movie::parse(&read(base, file)?)?);
            }
            ["movie", name, "compile", bands] => {
                let f = lookup(&e.bands, "bands", bands, line)?;
                e.movies.insert(name.to_string(), compile_braided_surface(f)?);
            }
            ["movie", name, "rewrite", script, bands] => {
                let f = lookup(&e.bands, "bands", bands, line)?;
                let steps = lookup(&e.scripts, "rewrite", script, line)?;
                let (_, m) = rewritten_surface(f, steps)?;
                e.movies.insert(name.to_string(), m);
            }
            ["expect", "cycle", c] => e.expects.push(Expect::Cycle(c.to_string())),
            ["expect", "value", m, c, v] => e.expects.push(Expect::Value {
                movie: m.to_string(),
                chain: c.to_string(),
                want: Expected::Exact(int(line, v)?),
            }),
            ["expect", "value", m, c, "abs", v] => e.expects.push(Expect::Value {
                movie: m.to_string(),
                chain: c.to_string(),
                want: Expected::Abs(int(line, v)?),
            }),
            ["expect", w @ ("compatible" | "incompatible"), c, f] => e.expects.push(Expect::Compatible {
                chain: c.to_string(),
                bands: f.to_string(),
                want: *w == "compatible",
            }),
            ["expect", "disoriented-first-core", c, f, s] => e.expects.push(Expect::DisorientedFirstCore {
                chain: c.to_string(),
                bands: f.to_string(),
                script: s.to_string(),
            }),
            ["expect", "distinct", a, b] => e.expects.push(Expect::Distinct(a.to_string(), b.to_string())),
            ["expect", "euler"] => e.expects.push(Expect::Euler),
            _ => return Err(bad(&format!("unrecognized line `{l}`"))),
        }
    }
    if !have_diagram {
        return Err(Error::Parse {
            line: 0,
            msg: "entry has no diagram".into(),
        });
    }
    if e.name.is_empty() {
        e.name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
    }
    for (name, m) in &e.movies {
        if m.start() != &e.diagram {
            return Err(Error::Other(format!("{}: movie {name} does not start at the diagram", e.name)));
        }
    }
    Ok(e)
}

/// Every `*.entry` file in `dir`, sorted by file name.
pub fn entry_paths(dir: &Path) -> Result<Vec<PathBuf>> {
    let rd = fs::read_dir(dir).map_err(|e| Error::Other(format!("{}: {e}", dir.display())))?;
    let mut out: Vec<PathBuf> = rd
        .filter_map(|x| x.ok().map(|x| x.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "entry"))
        .collect();
    out.sort();
    Ok(out)
}

impl Entry {
    pub fn chain(&self, name: &str) -> Result<&Chain> {
        lookup(&self.chains, "chain", name, 0)
    }

    pub fn movie(&self, name: &str) -> Result<&Movie> {
        lookup(&self.movies, "movie", name, 0)
    }

    fn run(&self, x: &Expect) -> Result<(bool, String)> {
        let d = &self.diagram;
        Ok(match x {
            Expect::Cycle(c) => (is_cycle(d, self.chain(c)?), String::new()),
            Expect::Value { movie, chain, want } => {
                let m = self.movie(movie)?;
                let c = self.chain(chain)?;
                let v = value(m, c)?;
                let grading = c.grading(d);
                let gate = Bidegree::new(0, -m.euler_characteristic());
                // a nonzero value is only possible from the gated grading
                let graded = v.is_zero() || grading == Some(gate);
                (want.matches(&v) && graded, format!("got {v}, chi {}", m.euler_characteristic()))
            }
            Expect::Compatible { chain, bands, want } => {
                let f = lookup(&self.bands, "bands", bands, 0)?;
                let c = self.chain(chain)?;
                let got = c.terms().all(|(g, _)| is_compatible(g, f));
                (got == *want, String::new())
            }
            Expect::DisorientedFirstCore { chain, bands, script } => {
                let f = lookup(&self.bands, "bands", bands, 0)?;
                let steps = lookup(&self.scripts, "rewrite", script, 0)?;
                let (from, track) = rewrite_tracked(&f.word()?, steps)?;
                let first = f.core_positions()[0];
                let Some(k) = track[first] else {
                    return Ok((false, "first core does not survive the rewriting".into()));
                };
                let closure = from.closure();
                if closure != *d {
                    return Ok((false, "rewriting does not reach the diagram".into()));
                }
                let oriented = d.oriented_smoothing() >> k & 1;
                let c = self.chain(chain)?;
                let ok = c.terms().all(|(g, _)| g.state >> k & 1 != oriented);
                (ok, format!("crossing {}", k + 1))
            }
            Expect::Distinct(a, b) => {
                let (ma, mb) = (self.movie(a)?, self.movie(b)?);
                let target = Bidegree::new(0, -ma.euler_characteristic());
                let oriented = d.oriented_smoothing();
                let s = enumerate_candidate_cycles(d, target, SEARCH_BUDGET, move |g| g.state != oriented);
                match distinguish(d, ma, mb, s)? {
                    Some(cert) => (
                        cert.verify(d, ma, mb)?,
                        format!("{} vs {} on {}", cert.value_a, cert.value_b, cert.representative),
                    ),
                    None => (false, "none found within budget".into()),
                }
            }
            Expect::Euler => {
                let a = euler_characteristic(d);
                let b = jones(d);
                (a == b, format!("{a}"))
            }
        })
    }

    pub fn verify(&self) -> Vec<Check> {
        self.expects
            .iter()
            .map(|x| {
                let (ok, detail) = self.run(x).unwrap_or_else(|e| (false, e.to_string()));
                Check {
                    entry: self.name.clone(),
                    what: x.to_string(),
                    ok,
                    detail,
                }
            })
            .collect()
    }
}
