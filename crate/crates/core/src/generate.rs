//! Seeded random objects and morphisms. Families are block presentations
//! with random ray counts, weights and ray scales; morphisms are built from
//! random block maps rescaled to respect the units, with `theta0` repaired
//! until it preserves the scale.

use std::collections::BTreeMap;

use num_integer::Integer;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::blocks::{BlockMap, BlockModel};
use crate::document::{Document, Kind};
use crate::elliott::{EMorphism, EObject, TraceConeX};
use crate::error::{Error, Result};
use crate::functors::{apply_f, zeta_from_xi};
use crate::matrix::Matrix;
use crate::ordered_groups::{FinAbGroup, IntMatrix, K1Hom, PositiveHom, Scale, ScaledOrderedGroup};
use crate::rational::Rational;
use crate::report::Report;
use crate::stevens::{validate_s_morphism, validate_s_object, SMorphism, SObject};

pub const MAX_BLOCKS: usize = 6;
pub const MAX_CONE_DIM: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenOptions {
    pub blocks: usize,
    /// Upper bound on the ray count of each block.
    pub cone_dim: usize,
    /// Phantom rays added to generated Elliott-side objects.
    pub phantom: usize,
}

impl GenOptions {
    pub fn new(blocks: usize) -> Self {
        GenOptions { blocks, cone_dim: 2, phantom: 0 }
    }

    fn check(&self, seed: u64) -> Result<()> {
        if self.blocks > MAX_BLOCKS || self.cone_dim == 0 || self.cone_dim > MAX_CONE_DIM {
            return Err(Error::Generation {
                seed,
                reason: format!(
                    "need blocks <= {MAX_BLOCKS} and 1 <= cone dim <= {MAX_CONE_DIM}, got {} and {}",
                    self.blocks, self.cone_dim
                ),
            });
        }
        Ok(())
    }
}

fn positive<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(1..5i64).into(), rng.gen_range(1..3i64).into())
}

/// A block model, a third of the time the plain coordinate one.
pub fn random_block_model<R: Rng>(rng: &mut R, blocks: usize, cone_dim: usize) -> BlockModel {
    if rng.gen_ratio(1, 3) {
        return BlockModel::uniform(blocks, 1);
    }
    let rays = (0..blocks).map(|_| rng.gen_range(1..=cone_dim)).collect();
    let mut m = BlockModel::with_rays(rays);
    for w in m.weights.iter_mut().flatten() {
        *w = positive(rng);
    }
    for x in m.scales.iter_mut().flatten() {
        *x = positive(rng);
    }
    m
}

pub fn random_group<R: Rng>(rng: &mut R, rank: usize) -> ScaledOrderedGroup {
    if rng.gen_bool(0.5) {
        ScaledOrderedGroup::unscaled(rank)
    } else {
        ScaledOrderedGroup { rank, scale: Scale::Unit((0..rank).map(|_| rng.gen_range(0..4)).collect()) }
    }
}

pub fn random_k1<R: Rng>(rng: &mut R) -> FinAbGroup {
    let torsion = match rng.gen_range(0..4) {
        0 | 1 => vec![],
        2 => vec![rng.gen_range(2..5)],
        _ => vec![2, 4],
    };
    FinAbGroup { free_rank: rng.gen_range(0..2), torsion }
}

/// A block-presented Stevens-side object.
#[derive(Clone, Debug)]
pub struct BlockObject {
    pub model: BlockModel,
    pub object: SObject,
}

pub fn random_block_object<R: Rng>(rng: &mut R, blocks: usize, cone_dim: usize) -> BlockObject {
    let model = random_block_model(rng, blocks, cone_dim);
    let object = SObject { group: random_group(rng, blocks), k1: random_k1(rng), deltas: model.family() };
    BlockObject { model, object }
}

/// Lowers entries of `theta0` until it maps the source scale into the target one.
fn repair_scale(theta0: &mut IntMatrix, src: &ScaledOrderedGroup, dst: &ScaledOrderedGroup, keep_diagonal: bool) {
    match (&src.scale, &dst.scale) {
        (_, Scale::All) => {}
        (Scale::All, Scale::Unit(_)) => *theta0 = IntMatrix::zeros(theta0.rows, theta0.cols),
        (Scale::Unit(u), Scale::Unit(v)) => {
            for j in 0..theta0.rows {
                loop {
                    let load: i64 = (0..theta0.cols).map(|i| theta0.get(j, i) * u[i]).sum();
                    if load <= v[j] {
                        break;
                    }
                    let i = (0..theta0.cols)
                        .filter(|&i| u[i] > 0 && theta0.get(j, i) > 0 && !(keep_diagonal && i == j && theta0.get(j, i) == 1))
                        .max_by_key(|&i| theta0.get(j, i) * u[i])
                        .expect("the diagonal alone fits the scale");
                    theta0.set(j, i, theta0.get(j, i) - 1);
                }
            }
        }
    }
}

pub fn random_theta1<R: Rng>(rng: &mut R, src: &FinAbGroup, dst: &FinAbGroup) -> K1Hom {
    let mut m = IntMatrix::zeros(dst.generators(), src.generators());
    for j in 0..src.generators() {
        let d = src.order(j) as i64;
        for i in 0..dst.generators() {
            let t = dst.order(i) as i64;
            let x = match (d, t) {
                (0, 0) => rng.gen_range(-2..3),
                (0, t) => rng.gen_range(0..t),
                (_, 0) => 0,
                (d, t) => {
                    let g = d.gcd(&t);
                    (t / g) * rng.gen_range(0..g)
                }
            };
            m.set(i, j, x);
        }
    }
    K1Hom { matrix: m }
}

/// A random block map for `theta0`: nonnegative blocks with columns rescaled
/// so that the source units pull back to the right multiples.
pub fn random_block_map<R: Rng>(rng: &mut R, theta0: PositiveHom, g: &BlockModel, h: &BlockModel) -> BlockMap {
    let mut blocks = BTreeMap::new();
    for i in 0..g.rank() {
        for j in 0..h.rank() {
            let mult = theta0.matrix.get(j, i);
            if mult == 0 {
                continue;
            }
            let mut m = Matrix::zeros(g.rays[i], h.rays[j]);
            for b in 0..h.rays[j] {
                let a0 = rng.gen_range(0..g.rays[i]);
                for a in 0..g.rays[i] {
                    let v = if a == a0 { rng.gen_range(1..4i64) } else { rng.gen_range(0..3i64) };
                    m.set(a, b, Rational::from_integer(v.into()));
                }
                let col = m.column(b);
                let unit: Rational = col.iter().zip(&g.weights[i]).map(|(x, w)| x * w).sum();
                let factor = Rational::from_integer(mult.into()) * &h.weights[j][b] / unit;
                for (a, x) in col.into_iter().enumerate() {
                    m.set(a, b, x * &factor);
                }
            }
            blocks.insert((i, j), m);
        }
    }
    BlockMap { theta0, blocks }
}

/// A random morphism `src -> dst`. With `no_killed_blocks` every block keeps
/// a nonzero image (needed when phantom rays are present).
pub fn random_s_morphism<R: Rng>(rng: &mut R, src: &BlockObject, dst: &BlockObject, no_killed_blocks: bool) -> SMorphism {
    let (n, m) = (src.model.rank(), dst.model.rank());
    let mut theta0 = IntMatrix::zeros(m, n);
    for i in 0..n {
        if !no_killed_blocks && rng.gen_ratio(1, 5) {
            continue;
        }
        for j in 0..m {
            if rng.gen_ratio(1, 3) {
                theta0.set(j, i, rng.gen_range(1..3));
            }
        }
    }
    let keep_diagonal = no_killed_blocks && n == m;
    if keep_diagonal {
        for i in 0..n {
            theta0.set(i, i, theta0.get(i, i).max(1));
        }
    }
    repair_scale(&mut theta0, &src.object.group, &dst.object.group, keep_diagonal);
    let map = random_block_map(rng, PositiveHom::new(theta0), &src.model, &dst.model);
    SMorphism {
        theta0: map.theta0.clone(),
        theta1: random_theta1(rng, &src.object.k1, &dst.object.k1),
        xi: map.xi_family(&src.model, &dst.model),
    }
}

fn require(report: Report, seed: u64, what: &str) -> Result<()> {
    if report.is_ok() {
        Ok(())
    } else {
        Err(Error::Generation { seed, reason: format!("generated {what} is invalid:\n{report}") })
    }
}

pub fn block_object(seed: u64, opts: GenOptions) -> Result<BlockObject> {
    opts.check(seed)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = random_block_object(&mut rng, opts.blocks, opts.cone_dim);
    require(validate_s_object(&b.object), seed, "object")?;
    Ok(b)
}

fn e_object(s: &SObject, phantom: usize) -> Result<EObject> {
    let mut e = apply_f(s)?;
    e.x = TraceConeX::new(e.x.family, phantom);
    Ok(e)
}

/// A generated document together with the objects a morphism lives between.
#[derive(Clone, Debug)]
pub struct Generated {
    pub document: Document,
    pub context: Option<(Document, Document)>,
}

/// Morphisms are endomorphisms of the object generated from the same seed
/// and options.
pub fn generate(kind: Kind, seed: u64, opts: GenOptions) -> Result<Generated> {
    let obj = block_object(seed, opts)?;
    let s = obj.object.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6d6f_7270_6869_736d);
    match kind {
        Kind::SObject => Ok(Generated { document: Document::SObject(s), context: None }),
        Kind::EObject => Ok(Generated { document: Document::EObject(e_object(&s, opts.phantom)?), context: None }),
        Kind::SMorphism => {
            let m = random_s_morphism(&mut rng, &obj, &obj, false);
            require(validate_s_morphism(&m, &s, &s), seed, "morphism")?;
            let ctx = Document::SObject(s);
            Ok(Generated { document: Document::SMorphism(m), context: Some((ctx.clone(), ctx)) })
        }
        Kind::EMorphism => {
            let m = random_s_morphism(&mut rng, &obj, &obj, opts.phantom > 0);
            require(validate_s_morphism(&m, &s, &s), seed, "morphism")?;
            let e = e_object(&s, opts.phantom)?;
            let t = opts.phantom;
            let mut phantom = Matrix::zeros(t, t);
            for i in 0..t {
                for j in 0..t {
                    phantom.set(i, j, Rational::from_integer(rng.gen_range(0..3i64).into()));
                }
            }
            let zeta = zeta_from_xi(&m, &e.x, &s.deltas)?;
            let em = EMorphism { theta0: m.theta0, theta1: m.theta1, zeta, phantom };
            let ctx = Document::EObject(e);
            Ok(Generated { document: Document::EMorphism(em), context: Some((ctx.clone(), ctx)) })
        }
    }
}

pub fn gen_random(kind: Kind, seed: u64, opts: GenOptions) -> Result<Document> {
    generate(kind, seed, opts).map(|g| g.document)
}
