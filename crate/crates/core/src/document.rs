//! Versioned JSON documents for objects and morphisms.
//!
//! Rationals are strings `"num/den"` in lowest terms, supports are sorted
//! arrays of 1-based block indices, matrices are row-major arrays. Matrices
//! whose shape cannot be read off their context carry an explicit `shape`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::elliott::{EMorphism, EObject, TraceConeX};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ordered_groups::{FinAbGroup, IntMatrix, K1Hom, PositiveHom, Scale, ScaledOrderedGroup, Support, MAX_RANK};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::stevens::{DeltaFamily, SMorphism, SObject};

pub const VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Document {
    SObject(SObject),
    EObject(EObject),
    SMorphism(SMorphism),
    EMorphism(EMorphism),
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::SObject(_) => Kind::SObject,
            Document::EObject(_) => Kind::EObject,
            Document::SMorphism(_) => Kind::SMorphism,
            Document::EMorphism(_) => Kind::EMorphism,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    SObject,
    EObject,
    SMorphism,
    EMorphism,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::SObject => "s-object",
            Kind::EObject => "e-object",
            Kind::SMorphism => "s-morphism",
            Kind::EMorphism => "e-morphism",
        }
    }

    pub fn parse(s: &str) -> Option<Kind> {
        [Kind::SObject, Kind::EObject, Kind::SMorphism, Kind::EMorphism].into_iter().find(|k| k.name() == s)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope {
    kind: Kind,
    version: String,
    payload: Value,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GroupDto {
    rank: usize,
    scale: ScaleDto,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ScaleDto {
    Named(String),
    Unit { unit: Vec<i64> },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct K1Dto {
    free_rank: usize,
    torsion: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeDto {
    support: Vec<usize>,
    dim: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RestrictionDto {
    from: Vec<usize>,
    to: Vec<usize>,
    matrix: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairingDto {
    support: Vec<usize>,
    index: usize,
    coeffs: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FamilyDto {
    cones: Vec<ConeDto>,
    restrictions: Vec<RestrictionDto>,
    pairings: Vec<PairingDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SObjectDto {
    group: GroupDto,
    k1: K1Dto,
    deltas: FamilyDto,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct XDto {
    family: FamilyDto,
    phantom_dim: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EObjectDto {
    group: GroupDto,
    k1: K1Dto,
    x: XDto,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IntMatrixDto {
    shape: [usize; 2],
    entries: Vec<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDto {
    shape: [usize; 2],
    entries: Vec<Vec<String>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ComponentDto {
    support: Vec<usize>,
    matrix: MatrixDto,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SMorphismDto {
    theta0: IntMatrixDto,
    theta1: IntMatrixDto,
    xi: Vec<ComponentDto>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EMorphismDto {
    theta0: IntMatrixDto,
    theta1: IntMatrixDto,
    zeta: Vec<ComponentDto>,
    phantom: MatrixDto,
}

fn doc_err(field: impl Into<String>, message: impl Into<String>) -> Error {
    Error::Document { field: field.into(), message: message.into() }
}

fn support_to_dto(s: Support) -> Vec<usize> {
    s.one_based()
}

fn support_from_dto(ix: &[usize], rank: usize, field: &str) -> Result<Support> {
    if ix.iter().any(|&i| i == 0 || i > rank) {
        return Err(doc_err(field, format!("block index outside 1..={rank}")));
    }
    if ix.windows(2).any(|w| w[0] >= w[1]) {
        return Err(doc_err(field, "support must be a strictly increasing list"));
    }
    Ok(Support::from_one_based(ix))
}

fn rational_from_dto(s: &str, field: &str) -> Result<Rational> {
    let q = parse_rational(s).map_err(|m| doc_err(field, m))?;
    if q < Rational::from_integer(0.into()) {
        return Err(doc_err(field, format!("negative value {s}")));
    }
    Ok(q)
}

fn vec_to_dto(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn vec_from_dto(v: &[String], field: &str) -> Result<Vec<Rational>> {
    v.iter().enumerate().map(|(i, s)| rational_from_dto(s, &format!("{field}[{i}]"))).collect()
}

fn rows_from_dto(rows: &[Vec<String>], cols: usize, field: &str) -> Result<Matrix> {
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| vec_from_dto(r, &format!("{field}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows, cols).map_err(|e| doc_err(field, e.to_string()))
}

fn matrix_to_dto(m: &Matrix) -> MatrixDto {
    MatrixDto { shape: [m.rows(), m.cols()], entries: m.row_vecs().iter().map(|r| vec_to_dto(r)).collect() }
}

fn matrix_from_dto(m: &MatrixDto, field: &str) -> Result<Matrix> {
    if m.entries.len() != m.shape[0] {
        return Err(doc_err(field, format!("{} rows listed, shape says {}", m.entries.len(), m.shape[0])));
    }
    rows_from_dto(&m.entries, m.shape[1], &format!("{field}.entries"))
}

fn int_matrix_to_dto(m: &IntMatrix) -> IntMatrixDto {
    IntMatrixDto { shape: [m.rows, m.cols], entries: m.row_vecs() }
}

fn int_matrix_from_dto(m: &IntMatrixDto, field: &str) -> Result<IntMatrix> {
    if m.entries.len() != m.shape[0] {
        return Err(doc_err(field, format!("{} rows listed, shape says {}", m.entries.len(), m.shape[0])));
    }
    IntMatrix::from_rows(&m.entries, m.shape[1]).map_err(|e| doc_err(field, e.to_string()))
}

fn group_to_dto(g: &ScaledOrderedGroup) -> GroupDto {
    let scale = match &g.scale {
        Scale::All => ScaleDto::Named("all".into()),
        Scale::Unit(u) => ScaleDto::Unit { unit: u.clone() },
    };
    GroupDto { rank: g.rank, scale }
}

fn group_from_dto(g: &GroupDto) -> Result<ScaledOrderedGroup> {
    if g.rank > MAX_RANK {
        return Err(doc_err("group.rank", format!("rank above the supported maximum {MAX_RANK}")));
    }
    let scale = match &g.scale {
        ScaleDto::Named(s) if s == "all" => Scale::All,
        ScaleDto::Named(s) => return Err(doc_err("group.scale", format!("unknown scale `{s}`"))),
        ScaleDto::Unit { unit } => Scale::Unit(unit.clone()),
    };
    ScaledOrderedGroup::new(g.rank, scale).map_err(|e| doc_err("group.scale", e.to_string()))
}

fn k1_to_dto(k: &FinAbGroup) -> K1Dto {
    K1Dto { free_rank: k.free_rank, torsion: k.torsion.clone() }
}

fn k1_from_dto(k: &K1Dto) -> Result<FinAbGroup> {
    FinAbGroup::new(k.free_rank, k.torsion.clone()).map_err(|e| doc_err("k1.torsion", e.to_string()))
}

fn family_to_dto(d: &DeltaFamily) -> FamilyDto {
    FamilyDto {
        cones: d.supports().map(|s| ConeDto { support: support_to_dto(s), dim: d.dim(s) }).collect(),
        restrictions: d
            .restrictions
            .iter()
            .map(|((from, to), m)| RestrictionDto {
                from: support_to_dto(*from),
                to: support_to_dto(*to),
                matrix: m.row_vecs().iter().map(|r| vec_to_dto(r)).collect(),
            })
            .collect(),
        pairings: d
            .pairings
            .iter()
            .map(|((s, i), p)| PairingDto { support: support_to_dto(*s), index: i + 1, coeffs: vec_to_dto(p) })
            .collect(),
    }
}

fn family_from_dto(f: &FamilyDto, rank: usize, at: &str) -> Result<DeltaFamily> {
    let mut dims: Vec<Option<usize>> = vec![None; 1 << rank];
    for (k, c) in f.cones.iter().enumerate() {
        let field = format!("{at}.cones[{k}]");
        let s = support_from_dto(&c.support, rank, &format!("{field}.support"))?;
        if dims[s.0 as usize].replace(c.dim).is_some() {
            return Err(doc_err(field, format!("cone on {s} listed twice")));
        }
    }
    let dims = dims
        .into_iter()
        .enumerate()
        .map(|(mask, d)| d.ok_or_else(|| doc_err(format!("{at}.cones"), format!("no cone for {}", Support(mask as u32)))))
        .collect::<Result<Vec<_>>>()?;
    let mut restrictions = BTreeMap::new();
    for (k, r) in f.restrictions.iter().enumerate() {
        let field = format!("{at}.restrictions[{k}]");
        let from = support_from_dto(&r.from, rank, &format!("{field}.from"))?;
        let to = support_from_dto(&r.to, rank, &format!("{field}.to"))?;
        let cols = r.matrix.first().map_or(dims[from.0 as usize], Vec::len);
        let m = rows_from_dto(&r.matrix, cols, &format!("{field}.matrix"))?;
        if restrictions.insert((from, to), m).is_some() {
            return Err(doc_err(field, format!("restriction {from} -> {to} listed twice")));
        }
    }
    let mut pairings = BTreeMap::new();
    for (k, p) in f.pairings.iter().enumerate() {
        let field = format!("{at}.pairings[{k}]");
        let s = support_from_dto(&p.support, rank, &format!("{field}.support"))?;
        if p.index == 0 || p.index > rank {
            return Err(doc_err(format!("{field}.index"), format!("block index outside 1..={rank}")));
        }
        let v = vec_from_dto(&p.coeffs, &format!("{field}.coeffs"))?;
        if pairings.insert((s, p.index - 1), v).is_some() {
            return Err(doc_err(field, format!("pairing of block {} on {s} listed twice", p.index)));
        }
    }
    Ok(DeltaFamily { rank, dims, restrictions, pairings })
}

fn components_to_dto(c: &BTreeMap<Support, Matrix>) -> Vec<ComponentDto> {
    c.iter().map(|(s, m)| ComponentDto { support: support_to_dto(*s), matrix: matrix_to_dto(m) }).collect()
}

fn components_from_dto(c: &[ComponentDto], rank: usize, at: &str) -> Result<BTreeMap<Support, Matrix>> {
    let mut out = BTreeMap::new();
    for (k, comp) in c.iter().enumerate() {
        let field = format!("{at}[{k}]");
        let s = support_from_dto(&comp.support, rank, &format!("{field}.support"))?;
        let m = matrix_from_dto(&comp.matrix, &format!("{field}.matrix"))?;
        if out.insert(s, m).is_some() {
            return Err(doc_err(field, format!("component at {s} listed twice")));
        }
    }
    Ok(out)
}

fn payload<T: serde::de::DeserializeOwned>(v: Value) -> Result<T> {
    serde_json::from_value(v).map_err(|e| doc_err("payload", e.to_string()))
}

pub fn parse(text: &str) -> Result<Document> {
    let env: Envelope = serde_json::from_str(text)
        .map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
    if env.version != VERSION {
        return Err(doc_err("version", format!("unsupported version `{}`", env.version)));
    }
    match env.kind {
        Kind::SObject => {
            let d: SObjectDto = payload(env.payload)?;
            let group = group_from_dto(&d.group)?;
            let deltas = family_from_dto(&d.deltas, group.rank, "deltas")?;
            Ok(Document::SObject(SObject { k1: k1_from_dto(&d.k1)?, group, deltas }))
        }
        Kind::EObject => {
            let d: EObjectDto = payload(env.payload)?;
            let group = group_from_dto(&d.group)?;
            let family = family_from_dto(&d.x.family, group.rank, "x.family")?;
            Ok(Document::EObject(EObject { k1: k1_from_dto(&d.k1)?, group, x: TraceConeX::new(family, d.x.phantom_dim) }))
        }
        Kind::SMorphism => {
            let d: SMorphismDto = payload(env.payload)?;
            let theta0 = PositiveHom::new(int_matrix_from_dto(&d.theta0, "theta0")?);
            let theta1 = K1Hom { matrix: int_matrix_from_dto(&d.theta1, "theta1")? };
            let xi = components_from_dto(&d.xi, theta0.source_rank(), "xi")?;
            Ok(Document::SMorphism(SMorphism { theta0, theta1, xi }))
        }
        Kind::EMorphism => {
            let d: EMorphismDto = payload(env.payload)?;
            let theta0 = PositiveHom::new(int_matrix_from_dto(&d.theta0, "theta0")?);
            let theta1 = K1Hom { matrix: int_matrix_from_dto(&d.theta1, "theta1")? };
            let zeta = components_from_dto(&d.zeta, theta0.target_rank(), "zeta")?;
            let phantom = matrix_from_dto(&d.phantom, "phantom")?;
            Ok(Document::EMorphism(EMorphism { theta0, theta1, zeta, phantom }))
        }
    }
}

pub fn emit(doc: &Document) -> String {
    let payload = match doc {
        Document::SObject(s) => serde_json::to_value(SObjectDto {
            group: group_to_dto(&s.group),
            k1: k1_to_dto(&s.k1),
            deltas: family_to_dto(&s.deltas),
        }),
        Document::EObject(e) => serde_json::to_value(EObjectDto {
            group: group_to_dto(&e.group),
            k1: k1_to_dto(&e.k1),
            x: XDto { family: family_to_dto(&e.x.family), phantom_dim: e.x.phantom_dim },
        }),
        Document::SMorphism(m) => serde_json::to_value(SMorphismDto {
            theta0: int_matrix_to_dto(&m.theta0.matrix),
            theta1: int_matrix_to_dto(&m.theta1.matrix),
            xi: components_to_dto(&m.xi),
        }),
        Document::EMorphism(m) => serde_json::to_value(EMorphismDto {
            theta0: int_matrix_to_dto(&m.theta0.matrix),
            theta1: int_matrix_to_dto(&m.theta1.matrix),
            zeta: components_to_dto(&m.zeta),
            phantom: matrix_to_dto(&m.phantom),
        }),
    }
    .expect("documents serialize");
    let env = Envelope { kind: doc.kind(), version: VERSION.into(), payload };
    let mut out = serde_json::to_string_pretty(&env).expect("documents serialize");
    out.push('\n');
    out
}
