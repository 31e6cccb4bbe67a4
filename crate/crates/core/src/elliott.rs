//! The extended trace cone `X` built from a delta-family, its lattice
//! operations and pairing with `K0`, and the morphisms between such cones.
//!
//! An element is an ideal support `S`, a finite trace on `C_S`, and a
//! phantom part: trace directions that no projection sees. Outside `S` the
//! trace is infinite.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lp::{self, LpOutcome};
use crate::matrix::{dot, unit_vector, vec_add, vec_le, vec_max, vec_min, vec_scale, Matrix};
use crate::ordered_groups::{FinAbGroup, K1Hom, PositiveHom, ScaledOrderedGroup, Support};
use crate::rational::{ExtRat, Rational};
use crate::report::{Check, Report};
use crate::stevens::{validate_thetas, DeltaFamily};
use crate::trace_cones::{check_cone_element, ExtVector};

/// Sample size used by the validators.
pub const SAMPLES: usize = 200;
const SAMPLE_SEED: u64 = 0x7ace_c0de;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XElement {
    pub support: Support,
    pub finite: Vec<Rational>,
    pub phantom: Vec<Rational>,
}

impl XElement {
    pub fn new(support: Support, finite: Vec<Rational>, phantom: Vec<Rational>) -> Self {
        XElement { support, finite, phantom }
    }

    pub fn has_phantom(&self) -> bool {
        self.phantom.iter().any(|x| !x.is_zero())
    }

    pub fn scaled(&self, t: &Rational) -> XElement {
        XElement {
            support: self.support,
            finite: vec_scale(&self.finite, t),
            phantom: vec_scale(&self.phantom, t),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceConeX {
    pub family: DeltaFamily,
    pub phantom_dim: usize,
}

impl TraceConeX {
    pub fn new(family: DeltaFamily, phantom_dim: usize) -> Self {
        TraceConeX { family, phantom_dim }
    }

    pub fn rank(&self) -> usize {
        self.family.rank
    }

    pub fn check(&self, x: &XElement) -> Result<()> {
        if !x.support.fits(self.rank()) {
            return Err(Error::Context(format!("support {} is outside rank {}", x.support, self.rank())));
        }
        if x.phantom.len() != self.phantom_dim {
            return Err(Error::Context(format!(
                "element has {} phantom coordinates, the cone has {}",
                x.phantom.len(),
                self.phantom_dim
            )));
        }
        check_cone_element(&x.finite, self.family.dim(x.support), "finite part")?;
        check_cone_element(&x.phantom, self.phantom_dim, "phantom part")
    }

    /// The zero trace: finite everywhere.
    pub fn zero(&self) -> XElement {
        let full = self.family.full();
        XElement::new(
            full,
            vec![Rational::zero(); self.family.dim(full)],
            vec![Rational::zero(); self.phantom_dim],
        )
    }

    /// `s^G(q)(x)`: finite exactly when `q` lives in the support of `x` and
    /// `x` has no phantom part (or `q = 0`).
    pub fn eval_sg(&self, q: &[i64], x: &XElement) -> Result<ExtRat> {
        self.check(x)?;
        let sq = crate::ordered_groups::support(q, self.rank())?;
        if sq.is_empty() {
            return Ok(ExtRat::zero());
        }
        if x.has_phantom() || !sq.is_subset(x.support) {
            return Ok(ExtRat::Infinity);
        }
        let v = self.family.lambda(x.support, sq)?.apply(&x.finite)?;
        Ok(ExtRat::Finite(dot(&self.family.s_functional(sq, q)?, &v)))
    }

    /// Finite part of `x` restricted to `s ∩ supp(x)`.
    pub fn restrict_x(&self, x: &XElement, s: Support) -> Result<(Support, Vec<Rational>)> {
        let t = s.intersection(x.support);
        Ok((t, self.family.restrict(&x.finite, x.support, t)?))
    }

    pub fn add(&self, x: &XElement, y: &XElement) -> Result<XElement> {
        self.check(x)?;
        self.check(y)?;
        let s = x.support.intersection(y.support);
        let a = self.family.restrict(&x.finite, x.support, s)?;
        let b = self.family.restrict(&y.finite, y.support, s)?;
        Ok(XElement::new(s, vec_add(&a, &b), vec_add(&x.phantom, &y.phantom)))
    }

    pub fn leq(&self, x: &XElement, y: &XElement) -> Result<bool> {
        self.check(x)?;
        self.check(y)?;
        if !y.support.is_subset(x.support) {
            return Ok(false);
        }
        let a = self.family.restrict(&x.finite, x.support, y.support)?;
        Ok(vec_le(&a, &y.finite) && vec_le(&x.phantom, &y.phantom))
    }

    pub fn join(&self, x: &XElement, y: &XElement) -> Result<XElement> {
        self.check(x)?;
        self.check(y)?;
        let s = x.support.intersection(y.support);
        let a = self.family.restrict(&x.finite, x.support, s)?;
        let b = self.family.restrict(&y.finite, y.support, s)?;
        Ok(XElement::new(s, vec_max(&a, &b), vec_max(&x.phantom, &y.phantom)))
    }

    /// The infimum of `f1(x) + f2(y) + f3(x ∧ y)` over all ways of writing
    /// `g` (a functional on `C_P`, `P` inside the union of the supports) as
    /// pullbacks from the parts of `P` seen by `x`, by `y`, and by both.
    pub fn wa_hat(&self, x: &XElement, y: &XElement, p: Support, g: &[Rational]) -> Result<Rational> {
        let d = &self.family;
        let u = x.support.union(y.support);
        if !p.is_subset(u) {
            return Err(Error::SupportMismatch(format!("{p} is not inside {u}")));
        }
        if g.len() != d.dim(p) {
            return Err(Error::Dimension { what: format!("functional on {p}"), expected: d.dim(p), found: g.len() });
        }
        let (a, b) = (p.intersection(x.support), p.intersection(y.support));
        let c = a.intersection(b);
        let tau = d.restrict(&x.finite, x.support, a)?;
        let phi = d.restrict(&y.finite, y.support, b)?;
        let both = vec_min(&d.restrict(&x.finite, x.support, c)?, &d.restrict(&y.finite, y.support, c)?);
        let parts = [(a, tau), (b, phi), (c, both)];
        let width: usize = parts.iter().map(|(s, _)| d.dim(*s)).sum();
        let mut lhs = Matrix::zeros(d.dim(p), width);
        let mut cost = Vec::with_capacity(width);
        let mut col = 0;
        for (s, value) in &parts {
            let lam = d.lambda(p, *s)?;
            for k in 0..d.dim(*s) {
                for r in 0..d.dim(p) {
                    lhs.set(r, col, lam.get(k, r).clone());
                }
                cost.push(value[k].clone());
                col += 1;
            }
        }
        match lp::minimize(&lhs, g, &cost) {
            LpOutcome::Optimal { value, .. } => Ok(value),
            LpOutcome::Infeasible => Err(Error::Precondition(format!(
                "functional on {p} does not split over {a} and {b}"
            ))),
            LpOutcome::Unbounded => unreachable!("nonnegative costs are bounded below"),
        }
    }

    /// Greatest lower bound, one linear program per ray of the union support.
    pub fn meet(&self, x: &XElement, y: &XElement) -> Result<XElement> {
        self.check(x)?;
        self.check(y)?;
        let u = x.support.union(y.support);
        let dim = self.family.dim(u);
        let finite = (0..dim)
            .map(|r| self.wa_hat(x, y, u, &unit_vector(dim, r)))
            .collect::<Result<Vec<_>>>()?;
        Ok(XElement::new(u, finite, vec_min(&x.phantom, &y.phantom)))
    }

    /// `x` as a vector over the rays of the full cone followed by the
    /// phantom rays, with unseen rays infinite. Needs a projection-like family.
    pub fn embed(&self, x: &XElement) -> Result<ExtVector> {
        self.check(x)?;
        let d = &self.family;
        if !d.is_projection_like() {
            return Err(Error::Precondition("embedding needs a projection-like family".into()));
        }
        let lam = d.lambda(d.full(), x.support)?;
        let mut out = Vec::with_capacity(lam.cols() + self.phantom_dim);
        for ray in 0..lam.cols() {
            let col = lam.column(ray);
            out.push(match col.iter().position(|c| !c.is_zero()) {
                Some(j) => ExtRat::Finite(&x.finite[j] / &col[j]),
                None => ExtRat::Infinity,
            });
        }
        out.extend(x.phantom.iter().cloned().map(ExtRat::Finite));
        Ok(out)
    }

    /// Inverse of [`TraceConeX::embed`]: the rays finite in `v` must be
    /// exactly those seen by some support.
    pub fn from_embedding(&self, v: &[ExtRat]) -> Result<XElement> {
        let d = &self.family;
        let full = d.full();
        let k = d.dim(full);
        if v.len() != k + self.phantom_dim {
            return Err(Error::Dimension { what: "embedded vector".into(), expected: k + self.phantom_dim, found: v.len() });
        }
        let finite_rays: Vec<bool> = v[..k].iter().map(ExtRat::is_finite).collect();
        let support = d
            .supports()
            .filter(|&s| {
                let lam = &d.restrictions[&(full, s)];
                (0..k).all(|r| finite_rays[r] == lam.column(r).iter().any(|c| !c.is_zero()))
            })
            .last()
            .ok_or_else(|| Error::Domain("finite rays do not form an ideal support".into()))?;
        let lam = &d.restrictions[&(full, support)];
        let mut finite = vec![Rational::zero(); d.dim(support)];
        for (r, val) in v[..k].iter().enumerate() {
            if let ExtRat::Finite(q) = val {
                for (j, f) in finite.iter_mut().enumerate() {
                    *f += lam.get(j, r) * q;
                }
            }
        }
        let phantom = v[k..]
            .iter()
            .map(|e| e.as_finite().cloned().ok_or_else(|| Error::Domain("infinite phantom coordinate".into())))
            .collect::<Result<_>>()?;
        Ok(XElement::new(support, finite, phantom))
    }

    /// Coordinatewise minimum in the embedding, mapped back. `None` when the
    /// family is not projection-like.
    pub fn meet_closed_form(&self, x: &XElement, y: &XElement) -> Result<Option<XElement>> {
        if !self.family.is_projection_like() {
            return Ok(None);
        }
        let (a, b) = (self.embed(x)?, self.embed(y)?);
        let m: ExtVector = a.iter().zip(&b).map(|(p, q)| ExtRat::min(p, q)).collect();
        self.from_embedding(&m).map(Some)
    }

    pub fn extend_by_infinity(&self, v: &[Rational], s: Support) -> Result<XElement> {
        if !s.fits(self.rank()) {
            return Err(Error::SupportMismatch(format!("unknown support {s}")));
        }
        check_cone_element(v, self.family.dim(s), "finite trace")?;
        Ok(XElement::new(s, v.to_vec(), vec![Rational::zero(); self.phantom_dim]))
    }

    /// The least trace on `C_{to}` restricting to `v` on `C_{from}`.
    pub fn extend_min(&self, v: &[Rational], from: Support, to: Support) -> Result<Vec<Rational>> {
        let d = &self.family;
        check_cone_element(v, d.dim(from), "finite trace")?;
        let lam = d.lambda(to, from)?;
        let cost = vec![Rational::one(); d.dim(to)];
        match lp::minimize(lam, v, &cost) {
            LpOutcome::Optimal { x, .. } => Ok(x),
            _ => Err(Error::Extension { from, to, reason: "no trace on the larger cone restricts to it".into() }),
        }
    }

    /// Glues finite traces on several supports into one element on their
    /// union. Parts must agree on overlaps; the result is the least common
    /// extension, built by folding over the parts in support order.
    pub fn glue(&self, parts: &[(Support, Vec<Rational>)]) -> Result<XElement> {
        let d = &self.family;
        for (s, v) in parts {
            if !s.fits(self.rank()) {
                return Err(Error::SupportMismatch(format!("unknown support {s}")));
            }
            check_cone_element(v, d.dim(*s), "partial trace")?;
        }
        for i in 0..parts.len() {
            for j in i + 1..parts.len() {
                let (si, vi) = &parts[i];
                let (sj, vj) = &parts[j];
                let o = si.intersection(*sj);
                let a = d.restrict(vi, *si, o)?;
                let b = d.restrict(vj, *sj, o)?;
                if let Some(r) = (0..a.len()).find(|&r| a[r] != b[r]) {
                    return Err(Error::Conflict {
                        first: i + 1,
                        second: j + 1,
                        overlap: o,
                        ray: r + 1,
                        left: a[r].to_string(),
                        right: b[r].to_string(),
                    });
                }
            }
        }
        let mut order: Vec<usize> = (0..parts.len()).collect();
        order.sort_by_key(|&i| parts[i].0);
        let (mut acc_s, mut acc_v) = (Support::EMPTY, Vec::new());
        for i in order {
            let (s, v) = &parts[i];
            let u = acc_s.union(*s);
            let (la, ls) = (d.lambda(u, acc_s)?, d.lambda(u, *s)?);
            let mut lhs = Matrix::zeros(la.rows() + ls.rows(), d.dim(u));
            for r in 0..la.rows() {
                for c in 0..d.dim(u) {
                    lhs.set(r, c, la.get(r, c).clone());
                }
            }
            for r in 0..ls.rows() {
                for c in 0..d.dim(u) {
                    lhs.set(la.rows() + r, c, ls.get(r, c).clone());
                }
            }
            let rhs: Vec<Rational> = acc_v.iter().chain(v.iter()).cloned().collect();
            let cost = vec![Rational::one(); d.dim(u)];
            acc_v = lp::minimize(&lhs, &rhs, &cost).optimal().ok_or(Error::Gluing(u))?.0;
            acc_s = u;
        }
        for (s, v) in parts {
            if d.restrict(&acc_v, acc_s, *s)? != *v {
                return Err(Error::Gluing(acc_s));
            }
        }
        Ok(XElement::new(acc_s, acc_v, vec![Rational::zero(); self.phantom_dim]))
    }

    /// A random element: uniform support, small rational coordinates, and a
    /// phantom part about a third of the time.
    pub fn random_element<R: Rng>(&self, rng: &mut R) -> XElement {
        let s = Support(rng.gen_range(0..1u32 << self.rank()));
        let finite = (0..self.family.dim(s)).map(|_| small_rational(rng)).collect();
        let phantom = if self.phantom_dim > 0 && rng.gen_range(0..3) == 0 {
            (0..self.phantom_dim).map(|_| small_rational(rng)).collect()
        } else {
            vec![Rational::zero(); self.phantom_dim]
        };
        XElement::new(s, finite, phantom)
    }
}

pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(0..7i64).into(), rng.gen_range(1..4i64).into())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EObject {
    pub group: ScaledOrderedGroup,
    pub k1: FinAbGroup,
    pub x: TraceConeX,
}

impl EObject {
    pub fn coordinate(n: usize) -> Self {
        EObject {
            group: ScaledOrderedGroup::unscaled(n),
            k1: FinAbGroup::trivial(),
            x: TraceConeX::new(DeltaFamily::coordinate(n), 0),
        }
    }
}

/// Family validation plus sampled lattice, additivity and well-definedness checks.
pub fn validate_e_object(e: &EObject) -> Report {
    validate_e_object_with(e, SAMPLES, |x, a, b| x.meet(a, b))
}

/// As [`validate_e_object`] with a chosen sample count and meet operation.
pub fn validate_e_object_with<M>(e: &EObject, samples: usize, meet: M) -> Report
where
    M: Fn(&TraceConeX, &XElement, &XElement) -> Result<XElement>,
{
    let mut r = Report::new();
    if e.group.rank != e.x.family.rank {
        r.push(
            Check::Structure,
            format!("group rank {} but the family has rank {}", e.group.rank, e.x.family.rank),
        );
        return r;
    }
    r.extend(e.x.family.validate());
    if !r.is_ok() {
        return r;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED);
    let first = |r: &mut Report, check: Check, detail: String| {
        if !r.fails(check) {
            r.push(check, detail);
        }
    };
    for k in 0..samples {
        let x = e.x.random_element(&mut rng);
        let y = e.x.random_element(&mut rng);
        if let Err(msg) = lattice_laws(&e.x, &x, &y, &meet) {
            first(&mut r, Check::Lattice, format!("sample {}: {msg}", k + 1));
        }
        if let Err(msg) = additivity(&e.x, &x, &y, &mut rng) {
            first(&mut r, Check::Additivity, format!("sample {}: {msg}", k + 1));
        }
        if let Err(msg) = well_definedness(&e.x, &x, &y, &mut rng) {
            first(&mut r, Check::WellDefinedness, format!("sample {}: {msg}", k + 1));
        }
    }
    r
}

fn lattice_laws<M>(cone: &TraceConeX, x: &XElement, y: &XElement, meet: &M) -> std::result::Result<(), String>
where
    M: Fn(&TraceConeX, &XElement, &XElement) -> Result<XElement>,
{
    let d = &cone.family;
    let m = meet(cone, x, y).map_err(|e| e.to_string())?;
    cone.check(&m).map_err(|e| e.to_string())?;
    let below = |a: &XElement, b: &XElement| cone.leq(a, b).unwrap_or(false);
    if !below(&m, x) || !below(&m, y) {
        return Err("meet is not a lower bound".into());
    }
    match cone.meet_closed_form(x, y).map_err(|e| e.to_string())? {
        Some(oracle) if oracle != m => return Err("meet differs from the coordinatewise minimum".into()),
        Some(_) => {}
        None => {
            let best = greatest_below(cone, x, y).map_err(|e| e.to_string())?;
            if best != m.finite {
                return Err("meet is not the greatest lower bound".into());
            }
        }
    }
    let j = cone.join(x, y).map_err(|e| e.to_string())?;
    if !below(x, &j) || !below(y, &j) {
        return Err("join is not an upper bound".into());
    }
    // the least upper bound on every smaller support must sit above the join
    for s in j.support.subsets() {
        let a = d.restrict(&x.finite, x.support, s).map_err(|e| e.to_string())?;
        let b = d.restrict(&y.finite, y.support, s).map_err(|e| e.to_string())?;
        let z = XElement::new(s, vec_max(&a, &b), vec_max(&x.phantom, &y.phantom));
        if !below(&j, &z) {
            return Err(format!("join is not below the least upper bound on {s}"));
        }
    }
    Ok(())
}

/// Coordinatewise maxima of `{w on C_U : w restricts below x and below y}`.
fn greatest_below(cone: &TraceConeX, x: &XElement, y: &XElement) -> Result<Vec<Rational>> {
    let d = &cone.family;
    let u = x.support.union(y.support);
    let (lx, ly) = (d.lambda(u, x.support)?, d.lambda(u, y.support)?);
    let (k, mx, my) = (d.dim(u), lx.rows(), ly.rows());
    // w, then slacks for the x rows and the y rows
    let mut lhs = Matrix::zeros(mx + my, k + mx + my);
    for (off, lam) in [(0, lx), (mx, ly)] {
        for r in 0..lam.rows() {
            for c in 0..k {
                lhs.set(off + r, c, lam.get(r, c).clone());
            }
            lhs.set(off + r, k + off + r, Rational::one());
        }
    }
    let rhs: Vec<Rational> = x.finite.iter().chain(&y.finite).cloned().collect();
    (0..k)
        .map(|ray| {
            let mut cost = vec![Rational::zero(); k + mx + my];
            cost[ray] = -Rational::one();
            match lp::minimize(&lhs, &rhs, &cost) {
                LpOutcome::Optimal { value, .. } => Ok(-value),
                _ => Err(Error::Precondition(format!("ray {} of {u} is unbounded below x and y", ray + 1))),
            }
        })
        .collect()
}

fn random_q<R: Rng>(n: usize, rng: &mut R) -> Vec<i64> {
    (0..n).map(|_| if rng.gen_bool(0.5) { rng.gen_range(0..3) } else { 0 }).collect()
}

fn additivity<R: Rng>(cone: &TraceConeX, x: &XElement, y: &XElement, rng: &mut R) -> std::result::Result<(), String> {
    let n = cone.rank();
    let (q1, q2) = (random_q(n, rng), random_q(n, rng));
    let q: Vec<i64> = q1.iter().zip(&q2).map(|(a, b)| a + b).collect();
    let ev = |q: &[i64], x: &XElement| cone.eval_sg(q, x).map_err(|e| e.to_string());
    let sum = cone.add(x, y).map_err(|e| e.to_string())?;
    if ev(&q1, &sum)? != ev(&q1, x)? + ev(&q1, y)? {
        return Err(format!("pairing with {q1:?} is not additive in the trace"));
    }
    if ev(&q, x)? != ev(&q1, x)? + ev(&q2, x)? {
        return Err(format!("pairing is not additive in K0 at {q1:?} + {q2:?}"));
    }
    Ok(())
}

fn well_definedness<R: Rng>(
    cone: &TraceConeX,
    x: &XElement,
    y: &XElement,
    rng: &mut R,
) -> std::result::Result<(), String> {
    let d = &cone.family;
    let u = x.support.union(y.support);
    let ps: Vec<Support> = u.subsets().collect();
    let p = ps[rng.gen_range(0..ps.len())];
    let qs: Vec<Support> = p.subsets().collect();
    let q = qs[rng.gen_range(0..qs.len())];
    let g: Vec<Rational> = (0..d.dim(q)).map(|_| small_rational(rng)).collect();
    let pulled = d.lambda(p, q).and_then(|l| l.pullback(&g)).map_err(|e| e.to_string())?;
    let lhs = cone.wa_hat(x, y, p, &pulled).map_err(|e| e.to_string())?;
    let rhs = cone.wa_hat(x, y, q, &g).map_err(|e| e.to_string())?;
    if lhs != rhs {
        return Err(format!("infimum changes under pullback from {q} to {p}: {rhs} vs {lhs}"));
    }
    Ok(())
}

/// `(theta0, theta1, zeta)`. `zeta[T]` maps the finite part of a target
/// element with support `T` to the source cone on the preimage support of
/// `T`; `phantom` maps phantom parts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EMorphism {
    pub theta0: PositiveHom,
    pub theta1: K1Hom,
    pub zeta: BTreeMap<Support, Matrix>,
    pub phantom: Matrix,
}

impl EMorphism {
    pub fn identity(e: &EObject) -> Self {
        let d = &e.x.family;
        EMorphism {
            theta0: PositiveHom::identity(e.group.rank),
            theta1: K1Hom::identity(&e.k1),
            zeta: d.supports().map(|s| (s, Matrix::identity(d.dim(s)))).collect(),
            phantom: Matrix::identity(e.x.phantom_dim),
        }
    }

    pub fn normalized(mut self, dst: &FinAbGroup) -> Self {
        self.theta1 = crate::ordered_groups::compose_k1(&K1Hom::identity(dst), &self.theta1, dst)
            .unwrap_or(self.theta1);
        self
    }

    /// The support an image element is finite on: a phantom part makes the
    /// target element infinite on every nonzero class.
    pub fn effective_support(tau: &XElement) -> Support {
        if tau.has_phantom() {
            Support::EMPTY
        } else {
            tau.support
        }
    }

    /// `zeta(tau)` for an element `tau` of the target cone `dst`.
    pub fn apply(&self, dst: &TraceConeX, tau: &XElement) -> Result<XElement> {
        dst.check(tau)?;
        let t = EMorphism::effective_support(tau);
        let z = self
            .zeta
            .get(&t)
            .ok_or_else(|| Error::SupportMismatch(format!("morphism has no component at {t}")))?;
        let v = dst.family.restrict(&tau.finite, tau.support, t)?;
        Ok(XElement::new(self.theta0.preimage_support(t), z.apply(&v)?, self.phantom.apply(&tau.phantom)?))
    }
}

fn sample_targets(dst: &TraceConeX) -> Vec<XElement> {
    let d = &dst.family;
    let mut rng = ChaCha8Rng::seed_from_u64(SAMPLE_SEED ^ 0x5a5a);
    let zeros = vec![Rational::zero(); dst.phantom_dim];
    let mut out: Vec<XElement> = (0..SAMPLES).map(|_| dst.random_element(&mut rng)).collect();
    for s in d.supports() {
        out.push(XElement::new(s, vec![Rational::zero(); d.dim(s)], zeros.clone()));
        for r in 0..d.dim(s) {
            out.push(XElement::new(s, unit_vector(d.dim(s), r), zeros.clone()));
        }
    }
    for r in 0..dst.phantom_dim {
        out.push(XElement::new(d.full(), vec![Rational::zero(); d.dim(d.full())], unit_vector(dst.phantom_dim, r)));
    }
    out
}

pub fn validate_e_morphism(m: &EMorphism, src: &EObject, dst: &EObject) -> Report {
    let mut r = validate_thetas(&m.theta0, &m.theta1, (&src.group, &src.k1), (&dst.group, &dst.k1));
    if r.fails(Check::Structure) {
        return r;
    }
    let (g, h) = (&src.x, &dst.x);
    if g.rank() != src.group.rank || h.rank() != dst.group.rank {
        r.push(Check::Structure, "trace cone rank differs from the group rank");
        return r;
    }
    let mut complete = true;
    for t in h.family.supports() {
        let s = m.theta0.preimage_support(t);
        let want = (g.family.dim(s), h.family.dim(t));
        match m.zeta.get(&t) {
            None => {
                complete = false;
                r.push(Check::Completeness, format!("no component zeta at {t}"));
            }
            Some(z) if z.shape() != want => {
                complete = false;
                r.push(
                    Check::Completeness,
                    format!("zeta at {t} is {}x{}, expected {}x{}", z.rows(), z.cols(), want.0, want.1),
                );
            }
            Some(z) if !z.is_nonnegative() => {
                complete = false;
                r.push(Check::Completeness, format!("zeta at {t} does not map the cone into the cone"));
            }
            _ => {}
        }
    }
    if let Some(t) = m.zeta.keys().find(|t| !t.fits(h.rank())) {
        complete = false;
        r.push(Check::Completeness, format!("zeta has a stray component at {t}"));
    }
    if m.phantom.shape() != (g.phantom_dim, h.phantom_dim) || !m.phantom.is_nonnegative() {
        complete = false;
        r.push(Check::Completeness, "phantom map has the wrong shape or sign");
    }
    if !complete {
        return r;
    }
    let taus = sample_targets(h);
    let images: Vec<XElement> = taus.iter().map(|t| m.apply(h, t).expect("shapes checked")).collect();
    'outer: for (tau, img) in taus.iter().zip(&images) {
        for i in 0..g.rank() {
            let mut e = vec![0i64; g.rank()];
            e[i] = 1;
            let lhs = g.eval_sg(&e, img).expect("valid element");
            let rhs = h.eval_sg(&m.theta0.matrix.column(i), tau).expect("valid element");
            if lhs != rhs {
                r.push(
                    Check::Compatibility,
                    format!(
                        "block {} paired with zeta of an element on {}: {lhs}, expected {rhs}",
                        i + 1,
                        tau.support
                    ),
                );
                break 'outer;
            }
        }
    }
    let halves = [Rational::new(1.into(), 2.into()), Rational::new(1.into(), 3.into())];
    'aff: for (k, pair) in taus.windows(2).enumerate() {
        for t in &halves {
            let s = Rational::one() - t;
            let mixed = h.add(&pair[0].scaled(t), &pair[1].scaled(&s)).expect("valid elements");
            let lhs = m.apply(h, &mixed).expect("valid element");
            let rhs = g.add(&images[k].scaled(t), &images[k + 1].scaled(&s)).expect("valid elements");
            if lhs != rhs {
                r.push(Check::Affinity, format!("zeta is not affine on sample {} at t = {t}", k + 1));
                break 'aff;
            }
        }
    }
    r
}

/// `m2 o m1` for `m1: A -> B`, `m2: B -> C`; zeta composes contravariantly.
pub fn compose_e_morphisms(m2: &EMorphism, m1: &EMorphism) -> Result<EMorphism> {
    let theta0 = crate::ordered_groups::compose_homs(&m2.theta0, &m1.theta0)?;
    let theta1 = K1Hom { matrix: m2.theta1.matrix.mul(&m1.theta1.matrix)? };
    let mut zeta = BTreeMap::new();
    for (&t, z2) in &m2.zeta {
        let mid = m2.theta0.preimage_support(t);
        let z1 = m1
            .zeta
            .get(&mid)
            .ok_or_else(|| Error::SupportMismatch(format!("first morphism has no component at {mid}")))?;
        zeta.insert(t, z1.mul(z2)?);
    }
    Ok(EMorphism { theta0, theta1, zeta, phantom: m1.phantom.mul(&m2.phantom)? })
}
