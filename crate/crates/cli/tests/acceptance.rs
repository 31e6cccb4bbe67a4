//! Acceptance suite: nine exact checks, one pass/fail line each.
//! Runs without the test harness so the report is always printed.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use tracecone_core::corpus::{self, CorpusEntry};
use tracecone_core::document::{self, Document, Kind};
use tracecone_core::elliott::{compose_e_morphisms, small_rational, validate_e_morphism};
use tracecone_core::functors::{
    apply_f, apply_g, roundtrip_e_morphism, roundtrip_e_object, roundtrip_s_morphism, roundtrip_s_object,
    transport_e_to_s, transport_s_to_e, zeta_from_xi,
};
use tracecone_core::generate::{block_object, generate, random_s_morphism, GenOptions};
use tracecone_core::stevens::{compose_s_morphisms, validate_s_morphism};
use tracecone_core::trace_cones::{riesz_decompose, ConeFunctional};
use tracecone_core::{
    DeltaFamily, EMorphism, EObject, Error, ExtRat, Rational, SMorphism, SObject, Support, TraceConeX, XElement,
};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: u64) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= Duration::from_secs(limit), || format!("took {t:.1?}, limit {limit} s"))
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every valid corpus object, as an Elliott-side object.
fn corpus_cones(entries: &[CorpusEntry]) -> Vec<(&'static str, EObject)> {
    entries
        .iter()
        .filter(|e| !e.is_mutant())
        .filter_map(|e| match &e.document {
            Document::EObject(x) => Some((e.name, x.clone())),
            Document::SObject(s) => Some((e.name, apply_f(s).expect("valid corpus object"))),
            _ => None,
        })
        .collect()
}

fn corpus_families(entries: &[CorpusEntry]) -> Vec<(&'static str, DeltaFamily)> {
    corpus_cones(entries).into_iter().map(|(n, e)| (n, e.x.family)).collect()
}

fn one_hot(n: usize, i: usize) -> Vec<i64> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

// 1. G(F(s)) = s and F(G(e)) = e
fn object_roundtrips() -> Outcome {
    let start = Instant::now();
    let entries = corpus::corpus();
    let mut count = 0;
    for e in entries.iter().filter(|e| !e.is_mutant()) {
        let r = match &e.document {
            Document::SObject(s) => roundtrip_s_object(s),
            Document::EObject(x) if x.x.phantom_dim == 0 => roundtrip_e_object(x),
            _ => continue,
        }
        .map_err(|err| format!("{}: {err}", e.name))?;
        ensure(r.is_identity(), || format!("{}: {r}", e.name))?;
        count += 1;
    }
    for seed in 0..200u64 {
        let opts = GenOptions { blocks: (seed % 6) as usize, cone_dim: 1 + (seed / 6 % 4) as usize, phantom: 0 };
        let Document::SObject(s) = generate(Kind::SObject, seed, opts).map_err(|e| e.to_string())?.document else {
            unreachable!()
        };
        let r = roundtrip_s_object(&s).map_err(|e| e.to_string())?;
        ensure(r.is_identity(), || format!("s-object seed {seed}: {r}"))?;
        let Document::EObject(x) = generate(Kind::EObject, seed + 10_000, opts).map_err(|e| e.to_string())?.document
        else {
            unreachable!()
        };
        let r = roundtrip_e_object(&x).map_err(|e| e.to_string())?;
        ensure(r.is_identity(), || format!("e-object seed {}: {r}", seed + 10_000))?;
    }
    within(start, 30)?;
    Ok(format!("{count} corpus objects, 200 + 200 random objects"))
}

// 2. the phantom cone is lost, and the Stevens side sees nothing
fn razak_counterexample() -> Outcome {
    let entries = corpus::corpus();
    let entry = corpus::find(&entries, "razak").ok_or("no razak entry")?;
    let Document::EObject(razak) = &entry.document else { return Err("razak is not an e-object".into()) };
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join(entry.file_name());
    std::fs::write(&path, document::emit(&entry.document)).map_err(|e| e.to_string())?;
    let out = Command::new(env!("CARGO_BIN_EXE_tracecone"))
        .args(["roundtrip", path.to_str().unwrap(), "--assert-identity"])
        .env("NO_COLOR", "1")
        .output()
        .map_err(|e| e.to_string())?;
    let text = String::from_utf8_lossy(&out.stdout);
    ensure(out.status.code() == Some(1), || format!("exit code {:?}", out.status.code()))?;
    ensure(text.contains("mismatch") && text.contains("lost component: phantom cone"), || text.to_string())?;
    let s = apply_g(razak).map_err(|e| e.to_string())?;
    for p in s.deltas.supports() {
        ensure(s.deltas.dim(p) == 0, || format!("cone on {p} has dimension {}", s.deltas.dim(p)))?;
    }
    ensure(s == apply_g(&EObject::coordinate(0)).unwrap(), || "Stevens side is not the trivial one".into())?;
    Ok("exit 1, phantom cone reported, every cone a point".into())
}

// 3. linear-programming meet equals the coordinatewise minimum
fn meet_oracle() -> Outcome {
    let start = Instant::now();
    let entries = corpus::corpus();
    let mut pairs = 0;
    for (name, e) in corpus_cones(&entries) {
        let x = &e.x;
        let fam = &x.family;
        let mut r = rng(3 ^ name.len() as u64);
        for k in 0..1000 {
            let (a, b) = (x.random_element(&mut r), x.random_element(&mut r));
            let lp = x.meet(&a, &b).map_err(|err| format!("{name} pair {k}: {err}"))?;
            // closed form, computed here on the ray embedding
            let (ea, eb) = (x.embed(&a).unwrap(), x.embed(&b).unwrap());
            let min: Vec<ExtRat> = ea.iter().zip(&eb).map(|(p, q)| ExtRat::min(p, q)).collect();
            ensure(x.embed(&lp).unwrap() == min, || format!("{name} pair {k}: meet differs from the minimum"))?;
            // well-definedness under pullback
            let u = a.support.union(b.support);
            let ps: Vec<Support> = u.subsets().collect();
            let p = ps[r.gen_range(0..ps.len())];
            let qs: Vec<Support> = p.subsets().collect();
            let q = qs[r.gen_range(0..qs.len())];
            let g: Vec<Rational> = (0..fam.dim(q)).map(|_| small_rational(&mut r)).collect();
            let pulled = fam.lambda(p, q).unwrap().pullback(&g).unwrap();
            let lhs = x.wa_hat(&a, &b, p, &pulled).map_err(|e| e.to_string())?;
            let rhs = x.wa_hat(&a, &b, q, &g).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("{name} pair {k}: infimum moves under pullback {q} -> {p}"))?;
            pairs += 1;
        }
    }
    within(start, 60)?;
    Ok(format!("{pairs} pairs agree"))
}

// 4. Riesz decomposition and splitting over sums
fn riesz_property() -> Outcome {
    let mut r = rng(4);
    for k in 0..1000 {
        let dim = r.gen_range(1..7);
        let g: Vec<Rational> = (0..dim).map(|_| small_rational(&mut r)).collect();
        let h: Vec<Rational> = (0..dim).map(|_| small_rational(&mut r)).collect();
        let f: Vec<Rational> = g
            .iter()
            .zip(&h)
            .map(|(a, b)| (a + b) * Rational::new(r.gen_range(0..=4i64).into(), 4.into()))
            .collect();
        let cf = |v: &Vec<Rational>| ConeFunctional::new(v.clone()).unwrap();
        let (gh, hh) = riesz_decompose(&cf(&f), &cf(&g), &cf(&h)).map_err(|e| format!("triple {k}: {e}"))?;
        for i in 0..dim {
            let (a, b) = (&gh.coeffs()[i], &hh.coeffs()[i]);
            ensure(
                *a >= Rational::zero() && *b >= Rational::zero() && *a <= g[i] && *b <= h[i] && a + b == f[i],
                || format!("triple {k} coordinate {}", i + 1),
            )?;
        }
    }
    let entries = corpus::corpus();
    let mut checked = 0;
    for (name, fam) in corpus_families(&entries) {
        for u in fam.supports() {
            for p in u.subsets() {
                for q in u.subsets().filter(|&q| q.union(p) == u) {
                    for ray in 0..fam.dim(u) {
                        let mut e = vec![Rational::zero(); fam.dim(u)];
                        e[ray] = Rational::one();
                        let f = ConeFunctional::new(e.clone()).unwrap();
                        let (f1, f2) = fam
                            .decompose_over_sum(&f, p, q)
                            .map_err(|err| format!("{name}: ray {} of {u} over {p}, {q}: {err}", ray + 1))?;
                        let a = fam.lambda(u, p).unwrap().pullback(f1.coeffs()).unwrap();
                        let b = fam.lambda(u, q).unwrap().pullback(f2.coeffs()).unwrap();
                        let sum: Vec<Rational> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                        ensure(sum == e, || format!("{name}: pullbacks miss ray {} of {u}", ray + 1))?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("1000 triples, {checked} splittings"))
}

fn gen_opts(seed: u64) -> GenOptions {
    GenOptions { blocks: 1 + (seed % 4) as usize, cone_dim: 1 + (seed / 4 % 3) as usize, phantom: 0 }
}

/// `zeta(tau)` pairs with generators as `tau` pairs with their images, and
/// is infinite exactly off the preimage of the support `tau` is finite on.
fn compatibility_samples(m: &EMorphism, src: &EObject, dst: &EObject, r: &mut ChaCha8Rng) -> Result<(), String> {
    let (g, h) = (&src.x, &dst.x);
    for k in 0..100 {
        let tau = h.random_element(r);
        let img = m.apply(h, &tau).map_err(|e| e.to_string())?;
        let finite_on = if tau.has_phantom() { Support::EMPTY } else { tau.support };
        for i in 0..g.rank() {
            let image = m.theta0.matrix.column(i);
            let lhs = g.eval_sg(&one_hot(g.rank(), i), &img).unwrap();
            let rhs = h.eval_sg(&image, &tau).unwrap();
            ensure(lhs == rhs, || format!("sample {k}, block {}: {lhs} vs {rhs}", i + 1))?;
            let inside = image.iter().enumerate().all(|(j, &c)| c == 0 || finite_on.contains(j));
            ensure(lhs.is_infinite() != inside, || format!("sample {k}, block {}: wrong support", i + 1))?;
        }
    }
    Ok(())
}

// 5. transport in both directions, compatibility sampled independently
fn morphism_transport() -> Outcome {
    let mut r = rng(5);
    let mut count = 0;
    for seed in 0..30u64 {
        let gen = generate(Kind::SMorphism, seed, gen_opts(seed)).map_err(|e| e.to_string())?;
        let (Document::SMorphism(m), Some((Document::SObject(a), Document::SObject(b)))) = (&gen.document, &gen.context)
        else {
            unreachable!()
        };
        let e = transport_s_to_e(m, a, b).map_err(|err| format!("seed {seed}: {err}"))?;
        let (ea, eb) = (apply_f(a).unwrap(), apply_f(b).unwrap());
        let rep = validate_e_morphism(&e, &ea, &eb);
        ensure(rep.is_ok(), || format!("s->e seed {seed}:\n{rep}"))?;
        compatibility_samples(&e, &ea, &eb, &mut r).map_err(|err| format!("s->e seed {seed}: {err}"))?;
        count += 1;
    }
    for seed in 0..30u64 {
        let phantom = (seed % 3) as usize;
        let opts = GenOptions { phantom, ..gen_opts(seed) };
        let gen = generate(Kind::EMorphism, seed, opts).map_err(|e| e.to_string())?;
        let (Document::EMorphism(m), Some((Document::EObject(a), Document::EObject(b)))) = (&gen.document, &gen.context)
        else {
            unreachable!()
        };
        let rep = validate_e_morphism(m, a, b);
        ensure(rep.is_ok(), || format!("generated e-morphism seed {seed}:\n{rep}"))?;
        compatibility_samples(m, a, b, &mut r).map_err(|err| format!("e seed {seed}: {err}"))?;
        if phantom == 0 {
            let s = transport_e_to_s(m, a, b).map_err(|err| format!("seed {seed}: {err}"))?;
            let (sa, sb) = (apply_g(a).unwrap(), apply_g(b).unwrap());
            let rep = validate_s_morphism(&s, &sa, &sb);
            ensure(rep.is_ok(), || format!("e->s seed {seed}:\n{rep}"))?;
        } else {
            ensure(matches!(transport_e_to_s(m, a, b), Err(Error::Transport(_))), || {
                format!("seed {seed}: transport across phantom rays was not refused")
            })?;
        }
        count += 1;
    }
    Ok(format!("{count} morphisms, 100 samples each"))
}

fn chain(seed: u64) -> Result<(Vec<SObject>, SMorphism, SMorphism), String> {
    let objs: Vec<_> = (0..3)
        .map(|k| block_object(seed * 3 + k, gen_opts(seed * 3 + k)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mut r = rng(seed ^ 0xc0ffee);
    let m1 = random_s_morphism(&mut r, &objs[0], &objs[1], false);
    let m2 = random_s_morphism(&mut r, &objs[1], &objs[2], false);
    Ok((objs.into_iter().map(|o| o.object).collect(), m1, m2))
}

// 6. transport commutes with composition; round trips are identities
fn functoriality() -> Outcome {
    for seed in 0..100u64 {
        let (o, m1, m2) = chain(seed)?;
        let c = &o[2].k1;
        let t1 = transport_s_to_e(&m1, &o[0], &o[1]).map_err(|e| format!("seed {seed}: {e}"))?;
        let t2 = transport_s_to_e(&m2, &o[1], &o[2]).map_err(|e| format!("seed {seed}: {e}"))?;
        let composed = compose_s_morphisms(&m2, &m1).map_err(|e| e.to_string())?.normalized(c);
        let lhs = transport_s_to_e(&composed, &o[0], &o[2]).map_err(|e| format!("seed {seed}: {e}"))?;
        let rhs = compose_e_morphisms(&t2, &t1).map_err(|e| e.to_string())?.normalized(c);
        ensure(lhs == rhs, || format!("s->e seed {seed}: transport of the composite differs"))?;
        let rt = roundtrip_s_morphism(&m1, &o[0], &o[1]).map_err(|e| e.to_string())?;
        ensure(rt.is_identity(), || format!("s seed {seed}: {rt}"))?;
    }
    for seed in 100..200u64 {
        let (o, m1, m2) = chain(seed)?;
        let e: Vec<EObject> = o.iter().map(|s| apply_f(s).unwrap()).collect();
        let c = &o[2].k1;
        // Elliott-side morphisms built directly from the block maps
        let lift = |m: &SMorphism, a: &EObject, b: &SObject| -> Result<EMorphism, String> {
            Ok(EMorphism {
                theta0: m.theta0.clone(),
                theta1: m.theta1.clone(),
                zeta: zeta_from_xi(m, &a.x, &b.deltas).map_err(|e| e.to_string())?,
                phantom: tracecone_core::Matrix::zeros(0, 0),
            })
        };
        let (z1, z2) = (lift(&m1, &e[0], &o[1])?, lift(&m2, &e[1], &o[2])?);
        let composed = compose_e_morphisms(&z2, &z1).map_err(|e| e.to_string())?.normalized(c);
        let rep = validate_e_morphism(&composed, &e[0], &e[2]);
        ensure(rep.is_ok(), || format!("e seed {seed}: composite invalid:\n{rep}"))?;
        let lhs = transport_e_to_s(&composed, &e[0], &e[2]).map_err(|err| format!("seed {seed}: {err}"))?;
        let s1 = transport_e_to_s(&z1, &e[0], &e[1]).map_err(|err| format!("seed {seed}: {err}"))?;
        let s2 = transport_e_to_s(&z2, &e[1], &e[2]).map_err(|err| format!("seed {seed}: {err}"))?;
        let rhs = compose_s_morphisms(&s2, &s1).map_err(|e| e.to_string())?.normalized(c);
        ensure(lhs == rhs, || format!("e->s seed {seed}: transport of the composite differs"))?;
        let rt = roundtrip_e_morphism(&z1, &e[0], &e[1]).map_err(|e| e.to_string())?;
        ensure(rt.is_identity(), || format!("e seed {seed}: {rt}"))?;
    }
    Ok("100 + 100 composable pairs".into())
}

fn random_parts(x: &TraceConeX, r: &mut ChaCha8Rng) -> Vec<(Support, Vec<Rational>)> {
    let fam = &x.family;
    let whole = XElement::new(
        fam.full(),
        (0..fam.dim(fam.full())).map(|_| small_rational(r)).collect(),
        vec![Rational::zero(); x.phantom_dim],
    );
    let k = r.gen_range(1..5);
    (0..k)
        .map(|_| {
            let s = Support(r.gen_range(0..1u32 << x.rank()));
            (s, fam.restrict(&whole.finite, fam.full(), s).unwrap())
        })
        .collect()
}

// 7. gluing consistent parts, rejecting inconsistent ones
fn gluing() -> Outcome {
    let mut rejected = 0;
    for seed in 0..200u64 {
        let obj = block_object(seed, gen_opts(seed)).map_err(|e| e.to_string())?;
        let x = TraceConeX::new(obj.object.deltas.clone(), 0);
        let fam = &x.family;
        let mut r = rng(seed ^ 0x91be);
        let parts = random_parts(&x, &mut r);
        let glued = x.glue(&parts).map_err(|e| format!("seed {seed}: {e}"))?;
        let union = parts.iter().fold(Support::EMPTY, |a, (s, _)| a.union(*s));
        ensure(glued.support == union, || format!("seed {seed}: glued onto {} not {union}", glued.support))?;
        for (s, v) in &parts {
            let back = fam.restrict(&glued.finite, union, *s).unwrap();
            ensure(&back == v, || format!("seed {seed}: does not restrict back to {s}"))?;
        }

        // break one part on a ray another part also sees
        let mut bad = parts.clone();
        let mut target = None;
        'find: for j in 0..bad.len() {
            for i in 0..bad.len() {
                let o = bad[i].0.intersection(bad[j].0);
                if i == j || fam.dim(o) == 0 {
                    continue;
                }
                let lam = fam.lambda(bad[j].0, o).unwrap();
                if let Some(ray) = (0..lam.cols()).find(|&c| lam.column(c).iter().any(|v| !v.is_zero())) {
                    target = Some((j, ray));
                    break 'find;
                }
            }
        }
        let Some((j, ray)) = target else { continue };
        bad[j].1[ray] += Rational::one();
        match x.glue(&bad) {
            Err(Error::Conflict { first, second, overlap, ray, left, right }) => {
                ensure(first < second && second <= bad.len(), || format!("seed {seed}: bad part indices"))?;
                let ((sa, va), (sb, vb)) = (&bad[first - 1], &bad[second - 1]);
                ensure(overlap == sa.intersection(*sb), || format!("seed {seed}: wrong overlap"))?;
                let a = fam.restrict(va, *sa, overlap).unwrap();
                let b = fam.restrict(vb, *sb, overlap).unwrap();
                ensure(
                    a[ray - 1] != b[ray - 1] && a[ray - 1].to_string() == left && b[ray - 1].to_string() == right,
                    || format!("seed {seed}: witness does not show a disagreement"),
                )?;
                ensure(first - 1 == j || second - 1 == j, || format!("seed {seed}: blamed an untouched pair"))?;
            }
            other => return Err(format!("seed {seed}: inconsistent parts gave {other:?}")),
        }
        rejected += 1;
    }
    Ok(format!("200 glued, {rejected} inconsistent families rejected"))
}

// 8. every mutant fails exactly its designated check
fn mutation_suite() -> Outcome {
    let entries = corpus::corpus();
    let mut designated = BTreeSet::new();
    for e in entries.iter().filter(|e| e.is_mutant()) {
        let actual = corpus::run_checks(&entries, e).map_err(|err| format!("{}: {err}", e.name))?;
        let failed: Vec<&str> =
            actual.iter().filter(|(_, v)| **v == corpus::Verdict::Violation).map(|(k, _)| k.as_str()).collect();
        let want = e.expected_failures();
        ensure(want.len() == 1 && failed == want, || format!("{}: expected {want:?}, failed {failed:?}", e.name))?;
        designated.insert(want[0].to_string());
    }
    let needed = ["condition-1", "condition-2", "condition-3", "condition-4", "compatibility", "scale"];
    for n in needed {
        ensure(designated.contains(n), || format!("no mutant for {n}"))?;
    }
    Ok(format!("{} mutants isolated", designated.len()))
}

fn grid(n: usize) -> Vec<Vec<ExtRat>> {
    let values = [ExtRat::from_int(0), ExtRat::from_int(1), ExtRat::from_int(2), ExtRat::Infinity];
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|v| {
                values.iter().map(move |x| {
                    let mut w = v.clone();
                    w.push(x.clone());
                    w
                })
            })
            .collect();
    }
    out
}

fn pointwise_le(a: &[ExtRat], b: &[ExtRat]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

// 9. X-operations against pointwise operations, and glb/lub by brute force
fn lattice_laws() -> Outcome {
    let start = Instant::now();
    for n in 0..=3 {
        let x = TraceConeX::new(DeltaFamily::coordinate(n), 0);
        let g = grid(n);
        let elems: Vec<XElement> = g.iter().map(|v| x.from_embedding(v).unwrap()).collect();
        for (a, ea) in g.iter().zip(&elems) {
            for (b, eb) in g.iter().zip(&elems) {
                let min: Vec<ExtRat> = a.iter().zip(b).map(|(p, q)| ExtRat::min(p, q)).collect();
                let max: Vec<ExtRat> = a.iter().zip(b).map(|(p, q)| ExtRat::max(p, q)).collect();
                let sum: Vec<ExtRat> = a.iter().zip(b).map(|(p, q)| p + q).collect();
                let meet = x.embed(&x.meet(ea, eb).unwrap()).unwrap();
                let join = x.embed(&x.join(ea, eb).unwrap()).unwrap();
                let add = x.embed(&x.add(ea, eb).unwrap()).unwrap();
                ensure(meet == min && join == max && add == sum, || format!("n={n}: {a:?}, {b:?}"))?;
                ensure(x.leq(ea, eb).unwrap() == pointwise_le(a, b), || format!("n={n}: order at {a:?}, {b:?}"))?;
                // greatest lower and least upper bound over the whole grid
                for c in &g {
                    let (below, above) = (pointwise_le(c, a) && pointwise_le(c, b), pointwise_le(a, c) && pointwise_le(b, c));
                    ensure(!below || pointwise_le(c, &meet), || format!("n={n}: meet of {a:?}, {b:?} not greatest"))?;
                    ensure(!above || pointwise_le(&join, c), || format!("n={n}: join of {a:?}, {b:?} not least"))?;
                }
                ensure(pointwise_le(&meet, a) && pointwise_le(&meet, b), || format!("n={n}: meet not below"))?;
                ensure(pointwise_le(a, &join) && pointwise_le(b, &join), || format!("n={n}: join not above"))?;
            }
        }
    }
    within(start, 10)?;
    Ok("grids up to {0,1,2,inf}^3".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("object round trips", object_roundtrips),
        ("phantom counterexample", razak_counterexample),
        ("meet oracle", meet_oracle),
        ("Riesz decomposition", riesz_property),
        ("morphism transport", morphism_transport),
        ("functoriality", functoriality),
        ("gluing", gluing),
        ("mutation suite", mutation_suite),
        ("lattice laws", lattice_laws),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        if !filter.is_empty() && !filter.iter().any(|f| name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or(p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {} ({name}): pass [{t:.1?}] {detail}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {} ({name}): FAIL [{t:.1?}] {msg}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
