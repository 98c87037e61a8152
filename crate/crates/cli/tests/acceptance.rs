//! One line per acceptance criterion; exits nonzero if any fails.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use khmovie::braid::{
    compile_braided_surface, is_compatible, psi, relation_applies, rewrite_movie, rewrite_tracked,
    stabilization_movie, Band, BandFactorization, BraidWord, RewriteStep,
};
use khmovie::cobordism::{applicable_events, Event, Movie, Step};
use khmovie::complex::{
    all_generators, classes_agree_up_to_sign, differential, differential_with, euler_characteristic, is_cycle,
    Smoothings,
};
use khmovie::oracle::jones;
use khmovie::search::value;
use khmovie::{Chain, Diagram, Int};
use khmovie_cli::corpus::{entry_paths, load_entry, Entry};

type Outcome = Result<String, String>;
type Criterion = (usize, u64, Box<dyn FnOnce(&mut ChaCha8Rng) -> Outcome>);

fn corpus_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

fn entry(name: &str) -> Result<Entry, String> {
    let p = corpus_dir().join(format!("{name}.entry"));
    if !p.exists() {
        return Err(format!("corpus entry {name} is missing"));
    }
    load_entry(&p).map_err(|e| format!("{name}: {e}"))
}

fn check(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn val(e: &Entry, movie: &str, chain: &str) -> Result<Int, String> {
    let m = e.movie(movie).map_err(|x| x.to_string())?;
    let c = e.chain(chain).map_err(|x| x.to_string())?;
    value(m, c).map_err(|x| x.to_string())
}

/// A cycle sent to a unit by one movie and to zero by the other.
fn unit_and_zero(e: &Entry, a: &str, b: &str, chain: &str) -> Result<String, String> {
    let c = e.chain(chain).map_err(|x| x.to_string())?;
    check(is_cycle(&e.diagram, c), format!("{}: {chain} is not a cycle", e.name))?;
    let (va, vb) = (val(e, a, chain)?, val(e, b, chain)?);
    check(va.abs() == Int::ONE && vb.is_zero(), format!("{}: got ({va}, {vb})", e.name))?;
    Ok(format!("{} ({va}, {vb})", e.name))
}

fn random_word(rng: &mut ChaCha8Rng, strands: std::ops::RangeInclusive<usize>, max_len: usize) -> BraidWord {
    let n = rng.gen_range(strands);
    let len = if n == 1 { 0 } else { rng.gen_range(0..=max_len) };
    let letters = (0..len)
        .map(|_| {
            let l = rng.gen_range(1..n as i32);
            if rng.gen_bool(0.5) {
                l
            } else {
                -l
            }
        })
        .collect();
    BraidWord::new(n, letters).unwrap()
}

/// A braid closure roughed up by random Reidemeister moves, at most
/// `max_crossings` crossings.
fn random_diagram(rng: &mut ChaCha8Rng, max_crossings: usize) -> Diagram {
    let mut d = random_word(rng, 1..=4, max_crossings.min(7)).closure();
    for _ in 0..rng.gen_range(0..=3) {
        let moves: Vec<Event> = applicable_events(&d)
            .into_iter()
            .filter(|e| {
                let grow = match e {
                    Event::R1Inv(_) => 1,
                    Event::R2Inv(_) => 2,
                    Event::R3 { .. } | Event::R1 { .. } | Event::R2 { .. } => 0,
                    _ => return false,
                };
                d.num_crossings() + grow <= max_crossings
            })
            .collect();
        if moves.is_empty() {
            break;
        }
        let e = moves[rng.gen_range(0..moves.len())].clone();
        d = Step::new(d, e).unwrap().post().clone();
    }
    if rng.gen_bool(0.5) {
        d.mirror()
    } else {
        d
    }
}

fn random_factorization(rng: &mut ChaCha8Rng, max_crossings: usize) -> BandFactorization {
    loop {
        let n = rng.gen_range(2..=4usize);
        let signed = |rng: &mut ChaCha8Rng| {
            let l = rng.gen_range(1..n as i32);
            if rng.gen_bool(0.5) {
                l
            } else {
                -l
            }
        };
        let bands: Vec<Band> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let conjugator = (0..rng.gen_range(0..=2)).map(|_| signed(rng)).collect();
                let core = if rng.gen_bool(0.7) {
                    rng.gen_range(1..n as i32)
                } else {
                    signed(rng)
                };
                Band { conjugator, core }
            })
            .collect();
        let f = BandFactorization::new(n, bands).unwrap();
        if f.word().unwrap().len() <= max_crossings {
            return f;
        }
    }
}

/// Checks every term of the image of every generator in `gens` against
/// the census bidegree; returns how many generators were checked.
fn homogeneous(m: &Movie, gens: impl IntoIterator<Item = khmovie::Gen>) -> Result<usize, String> {
    let chi = m.q_shift();
    let mut n = 0;
    for g in gens {
        let from = g.grading(m.start());
        let img = m.evaluate(&Chain::from_gen(g)).map_err(|e| e.to_string())?;
        for (h, _) in img.terms() {
            let to = h.grading(m.end());
            if to.h != from.h || to.q != from.q + chi {
                return Err(format!("({},{}) -> ({},{}) with chi {chi}", from.h, from.q, to.h, to.q));
            }
        }
        n += 1;
    }
    Ok(n)
}

fn chain_map_sign(step: &Step) -> Option<i32> {
    let (pre, post) = (step.pre(), step.post());
    let mut sign = 0;
    for g in all_generators(pre) {
        let lhs = differential(post, &step.map_gen(&g));
        let rhs = step.map(&differential(pre, &Chain::from_gen(g)));
        if lhs.is_zero() && rhs.is_zero() {
            continue;
        }
        let s = if lhs == rhs {
            1
        } else if lhs == rhs.neg() {
            -1
        } else {
            return None;
        };
        if sign != 0 && s != sign {
            return None;
        }
        sign = s;
    }
    Some(sign)
}

fn criterion_1() -> Outcome {
    let e = entry("17nh_74")?;
    unit_and_zero(&e, "d", "d-prime", "phi")
}

fn criterion_2() -> Outcome {
    let mut done = vec![];
    let mut missing = vec![];
    for name in ["m9_46", "15n103488"] {
        let e = entry(name)?;
        if e.movies.len() < 2 || !e.chains.contains_key("phi") {
            missing.push(format!("{name} has no band movies or cycle"));
            continue;
        }
        done.push(unit_and_zero(&e, "a", "b", "phi")?);
    }
    check(missing.is_empty(), format!("{}; {}", done.join(", "), missing.join(", ")))?;
    Ok(done.join(", "))
}

fn criterion_3() -> Outcome {
    let e = entry("10_148")?;
    let phi = e.chain("phi").map_err(|x| x.to_string())?;
    check(is_cycle(&e.diagram, phi), "phi is not a cycle")?;
    let v = val(&e, "sigma", "phi")?;
    check(v.abs() == Int::ONE, format!("sigma sends phi to {v}"))?;
    let w = val(&e, "sigma-second", "phi")?;
    check(w.is_zero(), format!("sigma-second sends phi to {w}"))?;
    let f = &e.bands["sigma-prime"];
    let (from, track) = rewrite_tracked(&f.word().unwrap(), &e.scripts["script"]).map_err(|x| x.to_string())?;
    check(from.closure() == e.diagram, "rewriting misses the diagram")?;
    let k = track[f.core_positions()[0]].ok_or("first core lost in rewriting")?;
    let oriented = e.diagram.oriented_smoothing() >> k & 1;
    check(
        phi.terms().all(|(g, _)| g.state >> k & 1 != oriented),
        "phi is oriented at the translated first core",
    )?;
    Ok(format!("phi -> {v} (|{}|), then 0; first core is crossing {}", v.abs(), k + 1))
}

fn criterion_4() -> Outcome {
    let e = entry("17nh_74")?;
    let phi = e.chain("phi").map_err(|x| x.to_string())?;
    let alpha = e.chain("alpha").map_err(|x| x.to_string())?;
    let c = phi.sub(alpha);
    check(is_cycle(&e.diagram, &c), "phi - alpha is not a cycle")?;
    let ma = e.movie("d").map_err(|x| x.to_string())?;
    let mb = e.movie("d-prime").map_err(|x| x.to_string())?;
    let va = value(ma, &c).map_err(|x| x.to_string())?;
    let vb = value(mb, &c).map_err(|x| x.to_string())?;
    check(!va.is_zero() && vb.is_zero(), format!("got ({va}, {vb})"))?;
    Ok(format!("({va}, {vb})"))
}

fn criterion_5(rng: &mut ChaCha8Rng) -> Outcome {
    let mut gens = 0;
    for i in 0..200 {
        let d = random_diagram(rng, 10);
        let mut sm = Smoothings::new(&d);
        for g in all_generators(&d) {
            let once = differential_with(&mut sm, &Chain::from_gen(g));
            let dd = differential_with(&mut sm, &once);
            check(dd.is_zero(), format!("diagram {i}:\n{}", d.emit()))?;
            gens += 1;
        }
    }
    Ok(format!("200 diagrams, {gens} generators"))
}

fn criterion_6(rng: &mut ChaCha8Rng) -> Outcome {
    let mut n = 0;
    for p in entry_paths(&corpus_dir()).map_err(|e| e.to_string())? {
        let e = load_entry(&p).map_err(|e| e.to_string())?;
        check(euler_characteristic(&e.diagram) == jones(&e.diagram), e.name.clone())?;
        n += 1;
    }
    for i in 0..100 {
        let d = random_diagram(rng, 10);
        check(euler_characteristic(&d) == jones(&d), format!("random diagram {i}:\n{}", d.emit()))?;
    }
    Ok(format!("{n} corpus diagrams, 100 random"))
}

fn criterion_7(rng: &mut ChaCha8Rng) -> Outcome {
    let closure = |n: usize, l: &[i32]| BraidWord::new(n, l.to_vec()).unwrap().closure();
    let mut ds = vec![
        Diagram::empty(),
        Diagram::parse("crossings 0\nloop 1\nloop 2\n").unwrap(),
        closure(2, &[1, 1, 1]),
        closure(2, &[-1, -1, -1]),
        closure(3, &[1, -2, 1, -2]),
        closure(3, &[1, 2, 1]),
        closure(3, &[-1, -2, -1]),
        closure(3, &[1, 2, -1]),
        closure(3, &[-1, 2, 1]),
    ];
    for _ in 0..6 {
        ds.push(random_diagram(rng, 5));
    }
    let mut kinds = BTreeSet::new();
    let mut instances = 0;
    for d in &ds {
        check(d.num_crossings() <= 8, "diagram too large")?;
        for e in applicable_events(d) {
            let step = Step::new(d.clone(), e.clone()).unwrap();
            check(chain_map_sign(&step).is_some(), format!("{e} on\n{}", d.emit()))?;
            kinds.insert(step.kind());
            instances += 1;
        }
    }
    let want = [
        "birth",
        "death",
        "dot",
        "merge",
        "split",
        "r1 positive removal",
        "r1 negative removal",
        "r1 positive creation cw",
        "r1 positive creation ccw",
        "r1 negative creation cw",
        "r1 negative creation ccw",
        "r2 removal",
        "r2 creation",
        "r3 positive-over",
        "r3 positive-under",
        "r3 negative-over",
        "r3 negative-under",
    ];
    let absent: Vec<&str> = want.iter().copied().filter(|k| !kinds.contains(*k)).collect();
    check(absent.is_empty(), format!("not covered: {absent:?}"))?;
    Ok(format!("{instances} move instances, {} kinds", kinds.len()))
}

fn criterion_8(rng: &mut ChaCha8Rng) -> Outcome {
    let mut positive = 0;
    for i in 0..20 {
        let f = random_factorization(rng, 8);
        let m = compile_braided_surface(&f).map_err(|e| format!("{i}: {e}"))?;
        for g in all_generators(m.start()) {
            if !is_compatible(&g, &f) {
                let img = m.evaluate(&Chain::from_gen(g)).map_err(|e| e.to_string())?;
                check(img.is_zero(), format!("factorization {i}:\n{}", f.emit()))?;
            }
        }
        if f.bands.iter().all(|b| b.is_positive()) {
            let v = m.evaluate(&psi(&f.word().unwrap())).map_err(|e| e.to_string())?;
            check(v.scalar().map(|x| x.abs()) == Some(Int::ONE), format!("psi on\n{}", f.emit()))?;
            positive += 1;
        }
    }
    Ok(format!("20 factorizations, {positive} quasipositive"))
}

/// A random word on 3 or 4 strands, at most 8 letters, containing a spot
/// where a braid relation applies; returns it with that position.
fn word_with_relation(rng: &mut ChaCha8Rng) -> (BraidWord, usize) {
    loop {
        let w = random_word(rng, 3..=4, 5);
        let n = w.strands() as i32;
        let a = rng.gen_range(1..n);
        let b = if a == 1 || (a < n - 1 && rng.gen_bool(0.5)) { a + 1 } else { a - 1 };
        let sign = |rng: &mut ChaCha8Rng| if rng.gen_bool(0.5) { 1 } else { -1 };
        let (x, y, z) = (a * sign(rng), b * sign(rng), a * sign(rng));
        if !relation_applies(x, y, z) {
            continue;
        }
        let p = rng.gen_range(0..=w.len());
        let mut letters = w.letters().to_vec();
        letters.splice(p..p, [x, y, z]);
        return (BraidWord::new(w.strands(), letters).unwrap(), p);
    }
}

fn criterion_9(rng: &mut ChaCha8Rng) -> Outcome {
    for i in 0..50 {
        let (w, p) = word_with_relation(rng);
        let m = stabilization_movie(&w).map_err(|e| format!("{i}: {e}"))?;
        let s = w.positive_stabilization();
        let image = m.evaluate(&psi(&w)).map_err(|e| e.to_string())?;
        check(
            classes_agree_up_to_sign(&s.closure(), &image, &psi(&s)),
            format!("stabilization of {}", w.emit().trim()),
        )?;
        let m = rewrite_movie(&w, &[RewriteStep::Relation(p)]).map_err(|e| format!("{i}: {e}"))?;
        let (v, _) = rewrite_tracked(&w, &[RewriteStep::Relation(p)]).map_err(|e| e.to_string())?;
        let image = m.evaluate(&psi(&w)).map_err(|e| e.to_string())?;
        check(
            classes_agree_up_to_sign(&v.closure(), &image, &psi(&v)),
            format!("relation {} on {}", p + 1, w.emit().trim()),
        )?;
    }
    Ok("50 braids".into())
}

fn criterion_10(rng: &mut ChaCha8Rng) -> Outcome {
    let mut movies = 0;
    let mut gens = 0;
    for p in entry_paths(&corpus_dir()).map_err(|e| e.to_string())? {
        let e = load_entry(&p).map_err(|e| e.to_string())?;
        for (name, m) in &e.movies {
            let all = all_generators(m.start());
            let mut sample: Vec<khmovie::Gen> = (0..200).map(|_| all[rng.gen_range(0..all.len())]).collect();
            sample.extend(e.chains.values().flat_map(|c| c.terms().map(|(g, _)| *g)));
            gens += homogeneous(m, sample).map_err(|x| format!("{} {name}: {x}", e.name))?;
            movies += 1;
        }
    }
    for i in 0..20 {
        let f = random_factorization(rng, 8);
        let m = compile_braided_surface(&f).map_err(|e| e.to_string())?;
        check(m.euler_characteristic() == f.euler_characteristic(), format!("census of {i}"))?;
        gens += homogeneous(&m, all_generators(m.start())).map_err(|x| format!("factorization {i}: {x}"))?;
        let (w, p) = word_with_relation(rng);
        for m in [
            stabilization_movie(&w).map_err(|e| e.to_string())?,
            rewrite_movie(&w, &[RewriteStep::Relation(p)]).map_err(|e| e.to_string())?,
        ] {
            gens += homogeneous(&m, all_generators(m.start())).map_err(|x| format!("braid {i}: {x}"))?;
        }
        movies += 3;
    }
    Ok(format!("{movies} movies, {gens} generators"))
}

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let criteria: Vec<Criterion> = vec![
        (1, 1, Box::new(|_| criterion_1())),
        (2, 10, Box::new(|_| criterion_2())),
        (3, 5, Box::new(|_| criterion_3())),
        (4, 5, Box::new(|_| criterion_4())),
        (5, 30, Box::new(criterion_5)),
        (6, 60, Box::new(criterion_6)),
        (7, 120, Box::new(criterion_7)),
        (8, 60, Box::new(criterion_8)),
        (9, 120, Box::new(criterion_9)),
        (10, 120, Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (n, limit, run) in criteria {
        let t = Instant::now();
        let out = run(&mut rng);
        let took = t.elapsed();
        let out = match out {
            Ok(s) if took > Duration::from_secs(limit) => Err(format!("{s}; over the {limit} s limit")),
            o => o,
        };
        match out {
            Ok(s) => println!("criterion {n} PASS: {s} ({:.2} s)", took.as_secs_f64()),
            Err(s) => {
                failed += 1;
                println!("criterion {n} FAIL: {s} ({:.2} s)", took.as_secs_f64());
            }
        }
    }
    println!("{} of 10 criteria pass", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
