//! The functors between the two descriptions, morphism transport in both
//! directions, round-trip checks, and isomorphism witnesses.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::elliott::{compose_e_morphisms, validate_e_morphism, EMorphism, EObject, TraceConeX};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ordered_groups::{PositiveHom, Support};
use crate::rational::Rational;
use crate::report::{Check, Report};
use crate::stevens::{compose_s_morphisms, validate_s_morphism, validate_s_object, DeltaFamily, SMorphism, SObject};

/// The Stevens-side description: same groups, the family, phantom rays dropped.
pub fn apply_g(e: &EObject) -> Result<SObject> {
    let s = SObject { group: e.group.clone(), k1: e.k1.clone(), deltas: e.x.family.clone() };
    validate_s_object(&s).into_result()?;
    Ok(s)
}

pub fn apply_f(s: &SObject) -> Result<EObject> {
    validate_s_object(s).into_result()?;
    Ok(EObject { group: s.group.clone(), k1: s.k1.clone(), x: TraceConeX::new(s.deltas.clone(), 0) })
}

/// Presentation-level ideal property: no trace direction is invisible to `K0`.
pub fn has_ideal_property(e: &EObject) -> bool {
    e.x.phantom_dim == 0
}

/// `zeta_T = xi^{S(T)} o lambda^H_{T, Q(S(T))}`, where `S(T)` is the ideal
/// generated by the preimage of `T`. Each column is cross-checked by gluing
/// the generator-level pieces.
pub fn zeta_from_xi(m: &SMorphism, g: &TraceConeX, h: &DeltaFamily) -> Result<BTreeMap<Support, Matrix>> {
    let mut zeta = BTreeMap::new();
    for t in h.supports() {
        let s = m.theta0.preimage_support(t);
        let top = m.xi_at(s)?.mul(h.lambda(t, m.theta0.image_support(s))?)?;
        let pieces = s
            .iter()
            .map(|i| {
                let one = Support::from_indices([i]);
                Ok((one, m.xi_at(one)?.mul(h.lambda(t, m.theta0.image_support(one))?)?))
            })
            .collect::<Result<Vec<_>>>()?;
        for c in 0..top.cols() {
            let mut parts = vec![(s, top.column(c))];
            parts.extend(pieces.iter().map(|(one, x)| (*one, x.column(c))));
            let glued = g.glue(&parts).map_err(|e| Error::Transport(format!("at {t}: {e}")))?;
            if glued.support != s || glued.finite != parts[0].1 {
                return Err(Error::Transport(format!("generator pieces at {t} do not glue to xi")));
            }
        }
        zeta.insert(t, top);
    }
    Ok(zeta)
}

pub fn transport_s_to_e(m: &SMorphism, src: &SObject, dst: &SObject) -> Result<EMorphism> {
    validate_s_object(src).into_result()?;
    validate_s_object(dst).into_result()?;
    validate_s_morphism(m, src, dst).into_result()?;
    let g = TraceConeX::new(src.deltas.clone(), 0);
    Ok(EMorphism {
        theta0: m.theta0.clone(),
        theta1: m.theta1.clone(),
        zeta: zeta_from_xi(m, &g, &dst.deltas)?,
        phantom: Matrix::zeros(0, 0),
    })
}

/// `xi^S = lambda^G_{S(Q), S} o zeta_Q` with `Q` the image support of `S`:
/// extend a trace on `Q` by infinity, apply `zeta`, restrict to `S`.
pub fn transport_e_to_s(m: &EMorphism, src: &EObject, dst: &EObject) -> Result<SMorphism> {
    if !has_ideal_property(src) || !has_ideal_property(dst) {
        return Err(Error::Transport("objects with phantom rays have no Stevens-side morphisms".into()));
    }
    validate_e_morphism(m, src, dst).into_result()?;
    let g = &src.x.family;
    let mut xi = BTreeMap::new();
    for s in g.supports() {
        let q = m.theta0.image_support(s);
        let z = m.zeta.get(&q).ok_or_else(|| Error::Transport(format!("no zeta at {q}")))?;
        let big = m.theta0.preimage_support(q);
        xi.insert(s, g.lambda(big, s)?.mul(z)?);
    }
    Ok(SMorphism { theta0: m.theta0.clone(), theta1: m.theta1.clone(), xi })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// Stevens side, out and back.
    GF,
    /// Elliott side, out and back.
    FG,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundTripVerdict {
    Identity,
    IsomorphicViaWitness,
    Mismatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MismatchWitness {
    pub component: String,
    pub location: String,
    pub expected: String,
    pub actual: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundTripReport {
    pub direction: Direction,
    pub verdict: RoundTripVerdict,
    pub witness: Option<MismatchWitness>,
}

impl RoundTripReport {
    fn from_difference(direction: Direction, diff: Option<MismatchWitness>) -> Self {
        let verdict = if diff.is_some() { RoundTripVerdict::Mismatch } else { RoundTripVerdict::Identity };
        RoundTripReport { direction, verdict, witness: diff }
    }

    pub fn is_identity(&self) -> bool {
        self.verdict == RoundTripVerdict::Identity
    }
}

impl fmt::Display for RoundTripReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dir = match self.direction {
            Direction::GF => "GF",
            Direction::FG => "FG",
        };
        let verdict = match self.verdict {
            RoundTripVerdict::Identity => "identity",
            RoundTripVerdict::IsomorphicViaWitness => "isomorphic-via-witness",
            RoundTripVerdict::Mismatch => "mismatch",
        };
        write!(f, "roundtrip {dir}: {verdict}")?;
        if let Some(w) = &self.witness {
            write!(f, "\n  lost component: {} at {}\n  expected: {}\n  actual: {}", w.component, w.location, w.expected, w.actual)?;
        }
        Ok(())
    }
}

fn witness(component: &str, location: impl Into<String>, expected: impl fmt::Debug, actual: impl fmt::Debug) -> Option<MismatchWitness> {
    Some(MismatchWitness {
        component: component.into(),
        location: location.into(),
        expected: format!("{expected:?}"),
        actual: format!("{actual:?}"),
    })
}

pub fn family_difference(a: &DeltaFamily, b: &DeltaFamily) -> Option<MismatchWitness> {
    if a.rank != b.rank {
        return witness("rank", "family", a.rank, b.rank);
    }
    if let Some(s) = a.supports().find(|&s| a.dims.get(s.0 as usize) != b.dims.get(s.0 as usize)) {
        return witness("cone", s.to_string(), a.dims.get(s.0 as usize), b.dims.get(s.0 as usize));
    }
    for (key, m) in &a.restrictions {
        if b.restrictions.get(key) != Some(m) {
            return witness("restriction", format!("{} -> {}", key.0, key.1), m, b.restrictions.get(key));
        }
    }
    if let Some(key) = b.restrictions.keys().find(|k| !a.restrictions.contains_key(k)) {
        return witness("restriction", format!("{} -> {}", key.0, key.1), None::<Matrix>, b.restrictions.get(key));
    }
    for (key, p) in &a.pairings {
        if b.pairings.get(key) != Some(p) {
            return witness("pairing", format!("block {} on {}", key.1 + 1, key.0), p, b.pairings.get(key));
        }
    }
    if let Some(key) = b.pairings.keys().find(|k| !a.pairings.contains_key(k)) {
        return witness("pairing", format!("block {} on {}", key.1 + 1, key.0), None::<Vec<Rational>>, b.pairings.get(key));
    }
    None
}

pub fn s_object_difference(a: &SObject, b: &SObject) -> Option<MismatchWitness> {
    if a.group != b.group {
        return witness("scaled group", "K0", &a.group, &b.group);
    }
    if a.k1 != b.k1 {
        return witness("K1", "K1", &a.k1, &b.k1);
    }
    family_difference(&a.deltas, &b.deltas)
}

pub fn e_object_difference(a: &EObject, b: &EObject) -> Option<MismatchWitness> {
    if a.x.phantom_dim != b.x.phantom_dim {
        return witness(
            "phantom cone",
            format!("phantom rays 1..={}", a.x.phantom_dim.max(b.x.phantom_dim)),
            format!("{} phantom rays", a.x.phantom_dim),
            format!("{} phantom rays", b.x.phantom_dim),
        );
    }
    s_object_difference(
        &SObject { group: a.group.clone(), k1: a.k1.clone(), deltas: a.x.family.clone() },
        &SObject { group: b.group.clone(), k1: b.k1.clone(), deltas: b.x.family.clone() },
    )
}

fn thetas_difference(a: (&PositiveHom, &crate::ordered_groups::K1Hom), b: (&PositiveHom, &crate::ordered_groups::K1Hom)) -> Option<MismatchWitness> {
    if a.0 != b.0 {
        return witness("theta0", "K0", a.0, b.0);
    }
    if a.1 != b.1 {
        return witness("theta1", "K1", a.1, b.1);
    }
    None
}

pub fn s_morphism_difference(a: &SMorphism, b: &SMorphism) -> Option<MismatchWitness> {
    thetas_difference((&a.theta0, &a.theta1), (&b.theta0, &b.theta1)).or_else(|| {
        let keys: std::collections::BTreeSet<_> = a.xi.keys().chain(b.xi.keys()).collect();
        keys.into_iter()
            .find(|k| a.xi.get(k) != b.xi.get(k))
            .and_then(|k| witness("xi", k.to_string(), a.xi.get(k), b.xi.get(k)))
    })
}

pub fn e_morphism_difference(a: &EMorphism, b: &EMorphism) -> Option<MismatchWitness> {
    thetas_difference((&a.theta0, &a.theta1), (&b.theta0, &b.theta1)).or_else(|| {
        if a.phantom != b.phantom {
            return witness("phantom map", "phantom rays", &a.phantom, &b.phantom);
        }
        let keys: std::collections::BTreeSet<_> = a.zeta.keys().chain(b.zeta.keys()).collect();
        keys.into_iter()
            .find(|k| a.zeta.get(k) != b.zeta.get(k))
            .and_then(|k| witness("zeta", k.to_string(), a.zeta.get(k), b.zeta.get(k)))
    })
}

/// `G(F(s))` against `s`.
pub fn roundtrip_s_object(s: &SObject) -> Result<RoundTripReport> {
    let back = apply_g(&apply_f(s)?)?;
    Ok(RoundTripReport::from_difference(Direction::GF, s_object_difference(s, &back)))
}

/// `F(G(e))` against `e`; phantom rays are the part that cannot come back.
pub fn roundtrip_e_object(e: &EObject) -> Result<RoundTripReport> {
    let back = apply_f(&apply_g(e)?)?;
    Ok(RoundTripReport::from_difference(Direction::FG, e_object_difference(e, &back)))
}

pub fn roundtrip_s_morphism(m: &SMorphism, src: &SObject, dst: &SObject) -> Result<RoundTripReport> {
    let e = transport_s_to_e(m, src, dst)?;
    let back = transport_e_to_s(&e, &apply_f(src)?, &apply_f(dst)?)?;
    let diff = s_morphism_difference(&m.clone().normalized(&dst.k1), &back.normalized(&dst.k1));
    Ok(RoundTripReport::from_difference(Direction::GF, diff))
}

pub fn roundtrip_e_morphism(m: &EMorphism, src: &EObject, dst: &EObject) -> Result<RoundTripReport> {
    if !has_ideal_property(src) || !has_ideal_property(dst) {
        let lost = if has_ideal_property(src) { dst } else { src };
        return Ok(RoundTripReport {
            direction: Direction::FG,
            verdict: RoundTripVerdict::Mismatch,
            witness: witness(
                "phantom cone",
                format!("phantom rays 1..={}", lost.x.phantom_dim),
                format!("{} phantom rays", lost.x.phantom_dim),
                "0 phantom rays",
            ),
        });
    }
    let s = transport_e_to_s(m, src, dst)?;
    let back = transport_s_to_e(&s, &apply_g(src)?, &apply_g(dst)?)?;
    let diff = e_morphism_difference(&m.clone().normalized(&dst.k1), &back.normalized(&dst.k1));
    Ok(RoundTripReport::from_difference(Direction::FG, diff))
}

pub fn verify_iso_s(a: &SObject, b: &SObject, fwd: &SMorphism, bwd: &SMorphism) -> Report {
    let mut r = Report::new();
    for v in validate_s_morphism(fwd, a, b).violations {
        r.push(v.check, format!("forward: {}", v.detail));
    }
    for v in validate_s_morphism(bwd, b, a).violations {
        r.push(v.check, format!("backward: {}", v.detail));
    }
    if !r.is_ok() {
        return r;
    }
    for (obj, first, second, label) in [(a, fwd, bwd, "backward o forward"), (b, bwd, fwd, "forward o backward")] {
        match compose_s_morphisms(second, first) {
            Ok(c) => {
                if let Some(w) = s_morphism_difference(&c.normalized(&obj.k1), &SMorphism::identity(obj)) {
                    r.push(Check::Inverse, format!("{label} differs from the identity in {} at {}", w.component, w.location));
                }
            }
            Err(e) => r.push(Check::Inverse, format!("{label}: {e}")),
        }
    }
    r
}

pub fn verify_iso_e(a: &EObject, b: &EObject, fwd: &EMorphism, bwd: &EMorphism) -> Report {
    let mut r = Report::new();
    for v in validate_e_morphism(fwd, a, b).violations {
        r.push(v.check, format!("forward: {}", v.detail));
    }
    for v in validate_e_morphism(bwd, b, a).violations {
        r.push(v.check, format!("backward: {}", v.detail));
    }
    if !r.is_ok() {
        return r;
    }
    for (obj, first, second, label) in [(a, fwd, bwd, "backward o forward"), (b, bwd, fwd, "forward o backward")] {
        match compose_e_morphisms(second, first) {
            Ok(c) => {
                if let Some(w) = e_morphism_difference(&c.normalized(&obj.k1), &EMorphism::identity(obj)) {
                    r.push(Check::Inverse, format!("{label} differs from the identity in {} at {}", w.component, w.location));
                }
            }
            Err(e) => r.push(Check::Inverse, format!("{label}: {e}")),
        }
    }
    r
}

/// Largest block count the isomorphism search will try.
pub const SEARCH_MAX_RANK: usize = 6;
const SEARCH_CAP: usize = 100_000;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// A right inverse of a projection-like restriction matrix.
fn right_inverse(lam: &Matrix) -> Option<Matrix> {
    let mut r = Matrix::zeros(lam.cols(), lam.rows());
    for j in 0..lam.rows() {
        let c = (0..lam.cols()).find(|&c| !lam.get(j, c).is_zero())?;
        r.set(c, j, lam.get(j, c).recip());
    }
    Some(r)
}

/// The morphism `a -> b` moving block `i` to `perm[i]` whose full component
/// sends ray `c` of `b` to `scale[c]` times ray `sigma[c]` of `a`.
fn monomial_morphism(a: &SObject, b: &SObject, perm: &[usize], sigma: &[usize], scale: &[Rational]) -> Option<SMorphism> {
    let (da, db) = (&a.deltas, &b.deltas);
    let theta0 = PositiveHom::permutation(perm);
    let mut full = Matrix::zeros(da.dim(da.full()), db.dim(db.full()));
    for (c, (&row, d)) in sigma.iter().zip(scale).enumerate() {
        full.set(row, c, d.clone());
    }
    let mut xi = BTreeMap::new();
    for s in da.supports() {
        let q = theta0.image_support(s);
        let r = right_inverse(&db.restrictions[&(db.full(), q)])?;
        xi.insert(s, da.restrictions[&(da.full(), s)].mul(&full).ok()?.mul(&r).ok()?);
    }
    let theta1 = crate::ordered_groups::K1Hom::identity(&a.k1);
    Some(SMorphism { theta0, theta1, xi })
}

/// Searches block permutations and matching ray bijections of the full
/// cones for a pair of mutually inverse morphisms.
pub fn search_iso_s(a: &SObject, b: &SObject) -> Option<(SMorphism, SMorphism)> {
    let n = a.group.rank;
    let (da, db) = (&a.deltas, &b.deltas);
    if b.group.rank != n || n > SEARCH_MAX_RANK || a.k1 != b.k1 || da.dim(da.full()) != db.dim(db.full()) {
        return None;
    }
    if !da.is_projection_like() || !db.is_projection_like() {
        return None;
    }
    let k = da.dim(da.full());
    let mut budget = SEARCH_CAP;
    for perm in permutations(n) {
        // ray profiles: pairing values of each source block on each ray
        let prof_a: Vec<Vec<Rational>> = (0..k).map(|r| (0..n).map(|i| da.pairings[&(da.full(), i)][r].clone()).collect()).collect();
        let prof_b: Vec<Vec<Rational>> = (0..k).map(|c| (0..n).map(|i| db.pairings[&(db.full(), perm[i])][c].clone()).collect()).collect();
        let mut sigma = Vec::with_capacity(k);
        let mut scale = Vec::with_capacity(k);
        let mut used = vec![false; k];
        let mut found = None;
        search_rays(&prof_a, &prof_b, &mut sigma, &mut scale, &mut used, &mut budget, &mut |sigma, scale| {
            let fwd = monomial_morphism(a, b, &perm, sigma, scale)?;
            let mut inv_perm = vec![0; n];
            for (i, &p) in perm.iter().enumerate() {
                inv_perm[p] = i;
            }
            let mut inv_sigma = vec![0; k];
            let mut inv_scale = vec![Rational::zero(); k];
            for (c, &row) in sigma.iter().enumerate() {
                inv_sigma[row] = c;
                inv_scale[row] = scale[c].recip();
            }
            let bwd = monomial_morphism(b, a, &inv_perm, &inv_sigma, &inv_scale)?;
            verify_iso_s(a, b, &fwd, &bwd).is_ok().then_some((fwd, bwd))
        }, &mut found);
        if found.is_some() || budget == 0 {
            return found;
        }
    }
    None
}

type Found = Option<(SMorphism, SMorphism)>;

fn search_rays(
    prof_a: &[Vec<Rational>],
    prof_b: &[Vec<Rational>],
    sigma: &mut Vec<usize>,
    scale: &mut Vec<Rational>,
    used: &mut [bool],
    budget: &mut usize,
    accept: &mut dyn FnMut(&[usize], &[Rational]) -> Found,
    found: &mut Found,
) {
    if found.is_some() || *budget == 0 {
        return;
    }
    let c = sigma.len();
    if c == prof_b.len() {
        *budget -= 1;
        *found = accept(sigma, scale);
        return;
    }
    for row in 0..prof_a.len() {
        if used[row] {
            continue;
        }
        if let Some(d) = proportion(&prof_a[row], &prof_b[c]) {
            used[row] = true;
            sigma.push(row);
            scale.push(d);
            search_rays(prof_a, prof_b, sigma, scale, used, budget, accept, found);
            sigma.pop();
            scale.pop();
            used[row] = false;
            if found.is_some() || *budget == 0 {
                return;
            }
        }
    }
}

/// `d > 0` with `d * a = b`, if any.
fn proportion(a: &[Rational], b: &[Rational]) -> Option<Rational> {
    let i = a.iter().position(|x| !x.is_zero())?;
    let d = &b[i] / &a[i];
    if d.is_zero() {
        return None;
    }
    a.iter().zip(b).all(|(x, y)| &(x * &d) == y).then_some(d)
}

/// As [`search_iso_s`] on the Stevens-side descriptions, with phantom rays
/// matched by the identity.
pub fn search_iso_e(a: &EObject, b: &EObject) -> Option<(EMorphism, EMorphism)> {
    if a.x.phantom_dim != b.x.phantom_dim {
        return None;
    }
    let (sa, sb) = (apply_g(a).ok()?, apply_g(b).ok()?);
    let (f, g) = search_iso_s(&sa, &sb)?;
    let t = a.x.phantom_dim;
    let lift = |m: &SMorphism, src: &EObject, dst: &EObject| -> Option<EMorphism> {
        Some(EMorphism {
            theta0: m.theta0.clone(),
            theta1: m.theta1.clone(),
            zeta: zeta_from_xi(m, &src.x, &dst.x.family).ok()?,
            phantom: Matrix::identity(t),
        })
    };
    let (fwd, bwd) = (lift(&f, a, b)?, lift(&g, b, a)?);
    verify_iso_e(a, b, &fwd, &bwd).is_ok().then_some((fwd, bwd))
}
