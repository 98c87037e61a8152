//! The subcommands. Each writes line-oriented output and returns whether its
//! checks matched.

use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use khmovie::braid::{compile_braided_surface, is_compatible, parse_steps, psi, BandFactorization};
use khmovie::cobordism::Movie;
use khmovie::complex::{euler_characteristic, homology};
use khmovie::oracle::jones;
use khmovie::search::{distinguish, enumerate_candidate_cycles};
use khmovie::{Bidegree, Chain, Diagram, Error, Result};

use crate::corpus::{entry_paths, load_chain, load_diagram, load_entry, rewritten_surface, Check};

fn read(p: &Path) -> Result<String> {
    std::fs::read_to_string(p).map_err(|e| Error::Other(format!("{}: {e}", p.display())))
}

fn w(out: &mut dyn Write, s: impl AsRef<str>) -> Result<()> {
    writeln!(out, "{}", s.as_ref()).map_err(|e| Error::Other(e.to_string()))
}

pub fn parse_grading(s: &str) -> Result<Bidegree> {
    let bad = || Error::Parse {
        line: 0,
        msg: format!("grading `{s}` is not `h,q`"),
    };
    let (h, q) = s.split_once(',').ok_or_else(bad)?;
    Ok(Bidegree::new(
        h.trim().parse().map_err(|_| bad())?,
        q.trim().parse().map_err(|_| bad())?,
    ))
}

pub fn load_diagram_file(p: &Path) -> Result<Diagram> {
    Ok(load_diagram(&read(p)?)?.0)
}

pub struct KhArgs {
    pub diagram: PathBuf,
    pub budget: usize,
    pub euler: bool,
    pub grading: Option<Bidegree>,
}

pub fn kh(a: &KhArgs, out: &mut dyn Write) -> Result<bool> {
    let d = load_diagram_file(&a.diagram)?;
    if d.num_crossings() > a.budget {
        return Err(Error::Budget(format!(
            "{} crossings ({} states) exceed the budget of {} crossings",
            d.num_crossings(),
            1u128 << d.num_crossings(),
            a.budget
        )));
    }
    let mut ok = true;
    if a.euler {
        let chi = euler_characteristic(&d);
        let oracle = jones(&d);
        w(out, format!("euler {chi}"))?;
        w(out, format!("bracket {oracle}"))?;
        ok = chi == oracle;
        w(out, if ok { "MATCH" } else { "MISMATCH" })?;
        return Ok(ok);
    }
    let groups = homology(&d, Some(a.budget))?;
    for line in groups.emit().lines() {
        let keep = match a.grading {
            Some(g) => line.starts_with(&format!("{g} ")),
            None => true,
        };
        if keep {
            w(out, line)?;
        }
    }
    Ok(ok)
}

pub struct ApplyArgs {
    pub movie: PathBuf,
    pub chain: PathBuf,
    pub trace: bool,
}

pub fn apply(a: &ApplyArgs, out: &mut dyn Write) -> Result<bool> {
    let m = Movie::parse(&read(&a.movie)?)?;
    let c = load_chain(m.start(), &read(&a.chain)?)?;
    evaluate(&m, &c, a.trace, out)?;
    Ok(true)
}

fn evaluate(m: &Movie, c: &Chain, trace: bool, out: &mut dyn Write) -> Result<Chain> {
    let mut lines = vec![];
    let steps = m.steps();
    let v = m.evaluate_traced(c, &mut |i, c| {
        if trace {
            let step = &steps[i - 1];
            let event = step.event().to_string();
            let head = event.lines().next().unwrap_or("").to_string();
            lines.push(format!("step {i} {head}: {}", c.emit(step.post())));
        }
    })?;
    for l in lines {
        w(out, l)?;
    }
    w(out, v.emit(m.end()))?;
    Ok(v)
}

pub struct BandArgs {
    pub bands: PathBuf,
    pub rewrite: Option<PathBuf>,
    pub eval: Option<String>,
    pub compat: Option<PathBuf>,
    pub trace: bool,
}

pub fn band(a: &BandArgs, out: &mut dyn Write) -> Result<bool> {
    let f = BandFactorization::parse(&read(&a.bands)?)?;
    let (word, m) = match &a.rewrite {
        Some(p) => rewritten_surface(&f, &parse_steps(&read(p)?)?)?,
        None => (f.word()?, compile_braided_surface(&f)?),
    };
    let d = m.start().clone();
    let mut done = false;
    if let Some(p) = &a.compat {
        // compatibility is a property of smoothings of the factorization's own closure
        let c = load_chain(&f.word()?.closure(), &read(p)?)?;
        let verdict = if c.terms().all(|(g, _)| is_compatible(g, &f)) {
            "compatible"
        } else {
            "incompatible"
        };
        w(out, verdict)?;
        done = true;
    }
    if let Some(e) = &a.eval {
        let c = if e == "psi" {
            psi(&word)
        } else {
            load_chain(&d, &read(Path::new(e))?)?
        };
        evaluate(&m, &c, a.trace, out)?;
        done = true;
    }
    if !done {
        out.write_all(m.emit().as_bytes()).map_err(|e| Error::Other(e.to_string()))?;
    }
    Ok(true)
}

pub struct DistinguishArgs {
    pub diagram: PathBuf,
    pub movie_a: PathBuf,
    pub movie_b: PathBuf,
    pub budget: usize,
    pub grading: Option<Bidegree>,
    pub chain: Option<PathBuf>,
}

pub fn cmd_distinguish(a: &DistinguishArgs, out: &mut dyn Write) -> Result<bool> {
    let d = load_diagram_file(&a.diagram)?;
    let ma = Movie::parse(&read(&a.movie_a)?)?;
    let mb = Movie::parse(&read(&a.movie_b)?)?;
    let target = a.grading.unwrap_or(Bidegree::new(0, -ma.euler_characteristic()));
    let given: Vec<Chain> = match &a.chain {
        Some(p) => vec![load_chain(&d, &read(p)?)?],
        None => vec![],
    };
    let oriented = d.oriented_smoothing();
    let mut stream = enumerate_candidate_cycles(&d, target, a.budget, move |g| g.state != oriented);
    let found = distinguish(&d, &ma, &mb, given.into_iter().chain(stream.by_ref()))?;
    match found {
        Some(cert) => {
            out.write_all(cert.emit().as_bytes()).map_err(|e| Error::Other(e.to_string()))?;
            Ok(true)
        }
        None if stream.budget_exhausted() => Err(Error::Budget("none found within budget".into())),
        None => {
            w(out, "none found within budget")?;
            Ok(true)
        }
    }
}

pub struct CorpusArgs {
    pub dir: PathBuf,
    pub jobs: usize,
}

pub fn corpus_verify(a: &CorpusArgs, out: &mut dyn Write) -> Result<bool> {
    let paths = entry_paths(&a.dir)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs)
        .build()
        .map_err(|e| Error::Other(e.to_string()))?;
    let results: Vec<Vec<Check>> = pool.install(|| {
        paths
            .par_iter()
            .map(|p| match load_entry(p) {
                Ok(e) => e.verify(),
                Err(err) => vec![Check {
                    entry: p.display().to_string(),
                    what: "load".into(),
                    ok: false,
                    detail: err.to_string(),
                }],
            })
            .collect()
    });
    let mut ok = true;
    for c in results.iter().flatten() {
        ok &= c.ok;
        w(out, c.to_string())?;
    }
    let total: usize = results.iter().map(|r| r.len()).sum();
    let failed = results.iter().flatten().filter(|c| !c.ok).count();
    w(out, format!("{} checks, {failed} mismatched", total))?;
    Ok(ok)
}

pub fn corpus_list(a: &CorpusArgs, out: &mut dyn Write) -> Result<bool> {
    for p in entry_paths(&a.dir)? {
        let e = load_entry(&p)?;
        let movies: Vec<&str> = e.movies.keys().map(|s| s.as_str()).collect();
        let chains: Vec<&str> = e.chains.keys().map(|s| s.as_str()).collect();
        w(
            out,
            format!(
                "{}: {} crossings, movies [{}], chains [{}]",
                e.name,
                e.diagram.num_crossings(),
                movies.join(" "),
                chains.join(" ")
            ),
        )?;
    }
    Ok(true)
}
