//! The named corpus: small reference objects and morphisms, each with the
//! verdict every check is expected to return on it.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::blocks::{BlockMap, BlockModel};
use crate::document::{Document, Kind};
use crate::elliott::{validate_e_morphism, validate_e_object, EMorphism, EObject};
use crate::error::{Error, Result};
use crate::functors::{
    has_ideal_property, roundtrip_e_morphism, roundtrip_e_object, roundtrip_s_morphism, roundtrip_s_object,
    transport_s_to_e, RoundTripReport, RoundTripVerdict,
};
use crate::matrix::Matrix;
use crate::ordered_groups::{FinAbGroup, IntMatrix, K1Hom, PositiveHom, Scale, ScaledOrderedGroup, Support};
use crate::rational::{int, rvec, Rational};
use crate::report::{Check, Report};
use crate::stevens::{validate_s_morphism, validate_s_object, DeltaFamily, SMorphism, SObject};

/// Expectation key for the out-and-back functor comparison.
pub const ROUNDTRIP: &str = "roundtrip";
/// Expectation key for `has_ideal_property` on Elliott objects.
pub const IDEAL_PROPERTY: &str = "ideal-property";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Ok,
    Violation,
    Identity,
    Mismatch,
    Yes,
    No,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Ok => "ok",
            Verdict::Violation => "violation",
            Verdict::Identity => "identity",
            Verdict::Mismatch => "mismatch",
            Verdict::Yes => "yes",
            Verdict::No => "no",
        })
    }
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub document: Document,
    /// Source and target entry names, for morphisms.
    pub context: Option<(&'static str, &'static str)>,
    pub expected: BTreeMap<String, Verdict>,
}

impl CorpusEntry {
    pub fn file_name(&self) -> String {
        format!("{}.{}", self.name, extension(self.document.kind()))
    }

    pub fn is_mutant(&self) -> bool {
        self.name.starts_with("mutant-")
    }

    /// The checks this entry is expected to fail.
    pub fn expected_failures(&self) -> Vec<&str> {
        self.expected.iter().filter(|(_, v)| **v == Verdict::Violation).map(|(k, _)| k.as_str()).collect()
    }
}

pub fn extension(kind: Kind) -> &'static str {
    match kind {
        Kind::SObject => "sj",
        Kind::EObject => "ej",
        Kind::SMorphism => "smj",
        Kind::EMorphism => "emj",
    }
}

fn expect(checks: &[Check], failing: &[Check], extra: &[(&str, Verdict)]) -> BTreeMap<String, Verdict> {
    let mut m: BTreeMap<String, Verdict> = checks
        .iter()
        .map(|c| (c.name().to_string(), if failing.contains(c) { Verdict::Violation } else { Verdict::Ok }))
        .collect();
    for (k, v) in extra {
        m.insert(k.to_string(), *v);
    }
    m
}

fn s_object_entry(name: &'static str, s: SObject, failing: &[Check]) -> CorpusEntry {
    let extra: &[(&str, Verdict)] = if failing.is_empty() { &[(ROUNDTRIP, Verdict::Identity)] } else { &[] };
    CorpusEntry { name, document: Document::SObject(s), context: None, expected: expect(&Check::OBJECT_S, failing, extra) }
}

fn e_object_entry(name: &'static str, e: EObject, roundtrip: Verdict, ideal: Verdict) -> CorpusEntry {
    CorpusEntry {
        name,
        document: Document::EObject(e),
        context: None,
        expected: expect(&Check::OBJECT_E, &[], &[(ROUNDTRIP, roundtrip), (IDEAL_PROPERTY, ideal)]),
    }
}

fn morphism_entry(
    name: &'static str,
    document: Document,
    context: (&'static str, &'static str),
    failing: &[Check],
) -> CorpusEntry {
    let checks: &[Check] = match document {
        Document::SMorphism(_) => &Check::MORPHISM_S,
        _ => &Check::MORPHISM_E,
    };
    let extra: &[(&str, Verdict)] = if failing.is_empty() { &[(ROUNDTRIP, Verdict::Identity)] } else { &[] };
    CorpusEntry { name, document, context: Some(context), expected: expect(checks, failing, extra) }
}

/// Rank-2 family from explicit restrictions of the full cone onto the two
/// singleton cones, with pairings pulled back from the singleton weights.
fn two_block_family(full_dim: usize, lam1: Matrix, lam2: Matrix, w1: Vec<Rational>, w2: Vec<Rational>) -> DeltaFamily {
    let (s0, s1, s2, s12) = (Support(0), Support(1), Support(2), Support(3));
    let dims = vec![0, lam1.rows(), lam2.rows(), full_dim];
    let mut restrictions = BTreeMap::new();
    for s in [s0, s1, s2, s12] {
        let d = dims[s.0 as usize];
        restrictions.insert((s, s), Matrix::identity(d));
        if s != s0 {
            restrictions.insert((s, s0), Matrix::zeros(0, d));
        }
    }
    let mut pairings = BTreeMap::new();
    pairings.insert((s12, 0), lam1.pullback(&w1).expect("shapes"));
    pairings.insert((s12, 1), lam2.pullback(&w2).expect("shapes"));
    pairings.insert((s1, 0), w1);
    pairings.insert((s2, 1), w2);
    restrictions.insert((s12, s1), lam1);
    restrictions.insert((s12, s2), lam2);
    DeltaFamily { rank: 2, dims, restrictions, pairings }
}

fn unscaled_s(deltas: DeltaFamily) -> SObject {
    SObject { group: ScaledOrderedGroup::unscaled(deltas.rank), k1: FinAbGroup::trivial(), deltas }
}

/// A restriction onto block 1 that swaps its two rays instead of projecting.
fn mutant_composition() -> SObject {
    let mut deltas = BlockModel::with_rays(vec![2, 1, 1]).family();
    let lam = Matrix::from_ints(&[&[0, 1, 0, 0], &[1, 0, 0, 0]], 4);
    deltas.restrictions.insert((Support(7), Support(1)), lam);
    unscaled_s(deltas)
}

/// Block 1 pairs twice as large on the full cone as on its own cone.
fn mutant_pairing() -> SObject {
    let mut deltas = DeltaFamily::coordinate(2);
    deltas.pairings.insert((Support(3), 0), rvec(&[2, 0]));
    unscaled_s(deltas)
}

/// Both rays of the full cone restrict onto the single ray of block 1, so
/// one ray functional is dominated by a pullback without being one.
fn mutant_hereditary() -> SObject {
    unscaled_s(two_block_family(
        2,
        Matrix::from_ints(&[&[1, 1]], 2),
        Matrix::identity(2),
        rvec(&[1]),
        rvec(&[1, 1]),
    ))
}

/// Both restrictions are the same invertible mixing map: each is
/// hereditary on its own, but no ray functional is a sum of pullbacks.
fn mutant_decomposition() -> SObject {
    let mix = || Matrix::from_ints(&[&[1, 1, 0], &[0, 1, 1], &[1, 0, 1]], 3);
    unscaled_s(two_block_family(3, mix(), mix(), rvec(&[1, 1, 1]), rvec(&[1, 1, 1])))
}

fn unit_one() -> SObject {
    SObject {
        group: ScaledOrderedGroup::new(1, Scale::Unit(vec![1])).expect("nonnegative"),
        k1: FinAbGroup::trivial(),
        deltas: DeltaFamily::coordinate(1),
    }
}

fn af_two_ideal() -> SObject {
    let mut model = BlockModel::with_rays(vec![1, 2]);
    model.weights[1] = vec![int(1), int(2)];
    SObject {
        group: ScaledOrderedGroup::new(2, Scale::Unit(vec![1, 1])).expect("nonnegative"),
        k1: FinAbGroup::trivial(),
        deltas: model.family(),
    }
}

fn swap_two() -> SMorphism {
    let model = BlockModel::uniform(2, 1);
    let mut blocks = BTreeMap::new();
    blocks.insert((0, 1), Matrix::identity(1));
    blocks.insert((1, 0), Matrix::identity(1));
    let map = BlockMap { theta0: PositiveHom::permutation(&[1, 0]), blocks };
    SMorphism {
        theta0: map.theta0.clone(),
        theta1: K1Hom::identity(&FinAbGroup::trivial()),
        xi: map.xi_family(&model, &model),
    }
}

/// All corpus entries; morphisms name their source and target entries.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for (n, name) in ["coord-0", "coord-1", "coord-2", "coord-3"].into_iter().enumerate() {
        out.push(e_object_entry(name, EObject::coordinate(n), Verdict::Identity, Verdict::Yes));
    }
    out.push(s_object_entry("coord-2-stevens", SObject::coordinate(2), &[]));
    out.push(s_object_entry("unit-1", unit_one(), &[]));
    out.push(s_object_entry("af-two-ideal", af_two_ideal(), &[]));
    let mut razak = EObject::coordinate(0);
    razak.x.phantom_dim = 1;
    out.push(e_object_entry("razak", razak, Verdict::Mismatch, Verdict::No));

    out.push(s_object_entry("mutant-cond1", mutant_composition(), &[Check::Composition]));
    out.push(s_object_entry("mutant-cond2", mutant_pairing(), &[Check::PairingCompatibility]));
    out.push(s_object_entry("mutant-cond3", mutant_hereditary(), &[Check::Hereditary]));
    out.push(s_object_entry("mutant-cond4", mutant_decomposition(), &[Check::Decomposition]));

    let swap = swap_two();
    let coord2 = SObject::coordinate(2);
    let swap_e = transport_s_to_e(&swap, &coord2, &coord2).expect("swap transports");
    out.push(morphism_entry("swap-2", Document::SMorphism(swap), ("coord-2-stevens", "coord-2-stevens"), &[]));
    out.push(morphism_entry("swap-2-elliott", Document::EMorphism(swap_e), ("coord-2", "coord-2"), &[]));
    let af = af_two_ideal();
    out.push(morphism_entry(
        "af-two-ideal-identity",
        Document::SMorphism(SMorphism::identity(&af)),
        ("af-two-ideal", "af-two-ideal"),
        &[],
    ));

    let mut doubled = EMorphism::identity(&EObject::coordinate(2));
    for z in doubled.zeta.values_mut() {
        *z = z.scaled(&int(2));
    }
    out.push(morphism_entry("mutant-zeta", Document::EMorphism(doubled), ("coord-2", "coord-2"), &[Check::Compatibility]));

    let unit = unit_one();
    let mut over = SMorphism::identity(&unit);
    over.theta0 = PositiveHom::new(IntMatrix::from_rows(&[vec![2]], 1).expect("shape"));
    for x in over.xi.values_mut() {
        *x = x.scaled(&int(2));
    }
    out.push(morphism_entry("mutant-scale", Document::SMorphism(over), ("unit-1", "unit-1"), &[Check::Scale]));
    out
}

pub fn find<'a>(corpus: &'a [CorpusEntry], name: &str) -> Option<&'a CorpusEntry> {
    corpus.iter().find(|e| e.name == name)
}

fn verdicts(checks: &[Check], report: &Report) -> BTreeMap<String, Verdict> {
    checks
        .iter()
        .map(|c| (c.name().to_string(), if report.fails(*c) { Verdict::Violation } else { Verdict::Ok }))
        .collect()
}

fn roundtrip_verdict(r: &RoundTripReport) -> Verdict {
    match r.verdict {
        RoundTripVerdict::Identity => Verdict::Identity,
        _ => Verdict::Mismatch,
    }
}

fn context_docs<'a>(corpus: &'a [CorpusEntry], entry: &CorpusEntry) -> Result<(&'a Document, &'a Document)> {
    let (src, dst) = entry.context.ok_or_else(|| Error::Context(format!("{} has no context", entry.name)))?;
    let look = |n: &str| {
        find(corpus, n).map(|e| &e.document).ok_or_else(|| Error::Context(format!("no corpus entry `{n}`")))
    };
    Ok((look(src)?, look(dst)?))
}

/// Runs every check named in the entry's expectation table. The round trip
/// is only attempted on inputs that validate.
pub fn run_checks(corpus: &[CorpusEntry], entry: &CorpusEntry) -> Result<BTreeMap<String, Verdict>> {
    let mut out;
    match &entry.document {
        Document::SObject(s) => {
            let r = validate_s_object(s);
            out = verdicts(&Check::OBJECT_S, &r);
            if r.is_ok() {
                out.insert(ROUNDTRIP.into(), roundtrip_verdict(&roundtrip_s_object(s)?));
            }
        }
        Document::EObject(e) => {
            let r = validate_e_object(e);
            out = verdicts(&Check::OBJECT_E, &r);
            if r.is_ok() {
                out.insert(ROUNDTRIP.into(), roundtrip_verdict(&roundtrip_e_object(e)?));
            }
            let ideal = if has_ideal_property(e) { Verdict::Yes } else { Verdict::No };
            out.insert(IDEAL_PROPERTY.into(), ideal);
        }
        Document::SMorphism(m) => {
            let (Document::SObject(src), Document::SObject(dst)) = context_docs(corpus, entry)? else {
                return Err(Error::Context(format!("{} needs Stevens-side objects", entry.name)));
            };
            let r = validate_s_morphism(m, src, dst);
            out = verdicts(&Check::MORPHISM_S, &r);
            if r.is_ok() {
                out.insert(ROUNDTRIP.into(), roundtrip_verdict(&roundtrip_s_morphism(m, src, dst)?));
            }
        }
        Document::EMorphism(m) => {
            let (Document::EObject(src), Document::EObject(dst)) = context_docs(corpus, entry)? else {
                return Err(Error::Context(format!("{} needs Elliott-side objects", entry.name)));
            };
            let r = validate_e_morphism(m, src, dst);
            out = verdicts(&Check::MORPHISM_E, &r);
            if r.is_ok() {
                out.insert(ROUNDTRIP.into(), roundtrip_verdict(&roundtrip_e_morphism(m, src, dst)?));
            }
        }
    }
    Ok(out)
}
