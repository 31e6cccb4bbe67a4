//! Delta-families: one simplicial cone of finite traces per ideal support,
//! restriction maps between nested supports, and the K0 pairings; plus the
//! morphisms between such families.
//!
//! Cones are indexed by supports rather than by positive elements: `Delta_p`
//! is read as `C_{supp(p)}`.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{unit_vector, Matrix};
use crate::ordered_groups::{
    validate_k1_hom, validate_scaled_hom, FinAbGroup, K1Hom, PositiveHom,
    ScaledOrderedGroup, Support,
};
use crate::rational::Rational;
use crate::report::{Check, Report};
use crate::trace_cones::{
    check_cone_element, decompose_pullbacks, hereditary_lift, simplex_base_check, ConeFunctional,
    SimplicialCone,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaFamily {
    pub rank: usize,
    /// Cone dimension per support, indexed by the support mask.
    pub dims: Vec<usize>,
    /// `lambda_{S,S'}` for `S' <= S`, shape `dim C_{S'} x dim C_S`.
    pub restrictions: BTreeMap<(Support, Support), Matrix>,
    /// `s_S(e_i)` for `i in S`, as a functional on `C_S`.
    pub pairings: BTreeMap<(Support, usize), Vec<Rational>>,
}

impl DeltaFamily {
    /// `C_S = [0, inf)^|S|`, projections for restrictions, unit pairings.
    pub fn coordinate(n: usize) -> Self {
        crate::blocks::BlockModel::uniform(n, 1).family()
    }

    pub fn full(&self) -> Support {
        Support::full(self.rank)
    }

    pub fn supports(&self) -> impl Iterator<Item = Support> {
        (0..1u32 << self.rank).map(Support)
    }

    pub fn dim(&self, s: Support) -> usize {
        self.dims[s.0 as usize]
    }

    pub fn lambda(&self, s: Support, sub: Support) -> Result<&Matrix> {
        if !sub.is_subset(s) {
            return Err(Error::SupportMismatch(format!("{sub} is not contained in {s}")));
        }
        self.restrictions
            .get(&(s, sub))
            .ok_or_else(|| Error::SupportMismatch(format!("no restriction map {s} -> {sub}")))
    }

    pub fn pairing(&self, s: Support, i: usize) -> Result<&[Rational]> {
        self.pairings
            .get(&(s, i))
            .map(Vec::as_slice)
            .ok_or_else(|| Error::SupportMismatch(format!("no pairing for block {} on {s}", i + 1)))
    }

    /// `s_S(e)` for `e` supported in `S`, extended linearly from the generators.
    pub fn s_functional(&self, s: Support, e: &[i64]) -> Result<Vec<Rational>> {
        let mut out = vec![Rational::zero(); self.dim(s)];
        for (i, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            if !s.contains(i) {
                return Err(Error::SupportMismatch(format!(
                    "element has block {} outside {s}",
                    i + 1
                )));
            }
            let k = Rational::from_integer(k.into());
            for (o, c) in out.iter_mut().zip(self.pairing(s, i)?) {
                *o += &k * c;
            }
        }
        Ok(out)
    }

    /// The cone `C_S` with base functional `s_S(sum_{i in S} e_i)`.
    pub fn cone(&self, s: Support) -> SimplicialCone {
        let mut base = vec![Rational::zero(); self.dim(s)];
        for i in s.iter() {
            if let Ok(p) = self.pairing(s, i) {
                for (b, c) in base.iter_mut().zip(p) {
                    *b += c;
                }
            }
        }
        SimplicialCone { dim: self.dim(s), base }
    }

    pub fn restrict(&self, v: &[Rational], s: Support, sub: Support) -> Result<Vec<Rational>> {
        check_cone_element(v, self.dim(s), "cone element")?;
        self.lambda(s, sub)?.apply(v)
    }

    /// Splits a functional on `C_{P u Q}` into nonnegative pullbacks from
    /// `C_P` and `C_Q`, preferring `P` on shared rays.
    pub fn decompose_over_sum(
        &self,
        f: &ConeFunctional,
        p: Support,
        q: Support,
    ) -> Result<(ConeFunctional, ConeFunctional)> {
        let u = p.union(q);
        if f.dim() != self.dim(u) {
            return Err(Error::Dimension {
                what: format!("functional on {u}"),
                expected: self.dim(u),
                found: f.dim(),
            });
        }
        decompose_pullbacks(f, self.lambda(u, p)?, self.lambda(u, q)?)
    }

    /// Shape checks; everything else assumes these pass.
    fn check_structure(&self) -> Report {
        let mut r = Report::new();
        if self.rank > crate::ordered_groups::MAX_RANK {
            r.push(Check::Structure, format!("rank {} is above the supported maximum", self.rank));
            return r;
        }
        if self.dims.len() != 1 << self.rank {
            r.push(
                Check::Structure,
                format!("{} cones listed, expected {}", self.dims.len(), 1usize << self.rank),
            );
            return r;
        }
        if self.dims[0] != 0 {
            r.push(Check::Structure, "the cone of the zero ideal must be a point");
        }
        for s in self.supports() {
            for sub in s.subsets() {
                match self.restrictions.get(&(s, sub)) {
                    None => r.push(Check::Structure, format!("missing restriction {s} -> {sub}")),
                    Some(m) => {
                        if m.shape() != (self.dim(sub), self.dim(s)) {
                            r.push(
                                Check::Structure,
                                format!(
                                    "restriction {s} -> {sub} is {}x{}, expected {}x{}",
                                    m.rows(),
                                    m.cols(),
                                    self.dim(sub),
                                    self.dim(s)
                                ),
                            );
                        } else if let Some((i, j)) = m.negative_entry() {
                            r.push(
                                Check::Structure,
                                format!("restriction {s} -> {sub} has a negative entry at ({}, {})", i + 1, j + 1),
                            );
                        } else if sub == s && *m != Matrix::identity(self.dim(s)) {
                            r.push(Check::Structure, format!("restriction {s} -> {s} is not the identity"));
                        }
                    }
                }
            }
            for i in s.iter() {
                match self.pairings.get(&(s, i)) {
                    None => r.push(Check::Structure, format!("missing pairing of block {} on {s}", i + 1)),
                    Some(p) if p.len() != self.dim(s) => r.push(
                        Check::Structure,
                        format!("pairing of block {} on {s} has length {}", i + 1, p.len()),
                    ),
                    Some(p) if p.iter().any(Signed::is_negative) => r.push(
                        Check::Structure,
                        format!("pairing of block {} on {s} is not positive", i + 1),
                    ),
                    _ => {}
                }
            }
        }
        let stray_r = self
            .restrictions
            .keys()
            .find(|(s, sub)| !s.fits(self.rank) || !sub.is_subset(*s));
        if let Some((s, sub)) = stray_r {
            r.push(Check::Structure, format!("unexpected restriction {s} -> {sub}"));
        }
        if let Some((s, i)) = self.pairings.keys().find(|(s, i)| !s.fits(self.rank) || !s.contains(*i)) {
            r.push(Check::Structure, format!("unexpected pairing of block {} on {s}", i + 1));
        }
        r
    }

    fn check_composition(&self, r: &mut Report) {
        for s in self.supports() {
            for mid in s.subsets().filter(|&m| m != s) {
                let outer = &self.restrictions[&(s, mid)];
                for sub in mid.subsets().filter(|&x| x != mid) {
                    let composed = self.restrictions[&(mid, sub)].mul(outer).expect("shapes checked");
                    if composed != self.restrictions[&(s, sub)] {
                        r.push(
                            Check::Composition,
                            format!("lambda {s}->{sub} differs from lambda {mid}->{sub} o lambda {s}->{mid}"),
                        );
                    }
                }
            }
        }
    }

    fn check_pairing_compatibility(&self, r: &mut Report) {
        for s in self.supports() {
            for sub in s.subsets().filter(|&x| x != s) {
                let lam = &self.restrictions[&(s, sub)];
                for i in sub.iter() {
                    let pulled = lam.pullback(&self.pairings[&(sub, i)]).expect("shapes checked");
                    if pulled != self.pairings[&(s, i)] {
                        r.push(
                            Check::PairingCompatibility,
                            format!(
                                "pairing of block {} on {s} does not factor through the restriction to {sub}",
                                i + 1
                            ),
                        );
                    }
                }
            }
        }
    }

    fn check_hereditary(&self, r: &mut Report) {
        for s in self.supports() {
            for sub in s.subsets().filter(|&x| x != s && !x.is_empty()) {
                let lam = &self.restrictions[&(s, sub)];
                for ray in 0..self.dim(s) {
                    let colsum = lam.column(ray).into_iter().fold(Rational::zero(), |a, b| a + b);
                    if colsum.is_zero() {
                        continue;
                    }
                    let f = vec![Rational::one() / colsum; self.dim(sub)];
                    let g = unit_vector(self.dim(s), ray);
                    if hereditary_lift(&f, &g, lam).is_err() {
                        r.push(
                            Check::Hereditary,
                            format!(
                                "ray functional {} on {s} is dominated by a pullback from {sub} but is not one",
                                ray + 1
                            ),
                        );
                    }
                }
            }
        }
    }

    fn check_decomposition(&self, r: &mut Report) {
        for u in self.supports() {
            for p in u.subsets().filter(|&x| x != u && !x.is_empty()) {
                for q in u.subsets().filter(|&x| x != u && x > p && x.union(p) == u) {
                    let (lp, lq) = (&self.restrictions[&(u, p)], &self.restrictions[&(u, q)]);
                    for ray in 0..self.dim(u) {
                        if has_scaled_unit_row(lp, ray) || has_scaled_unit_row(lq, ray) {
                            continue;
                        }
                        let f = ConeFunctional::new(unit_vector(self.dim(u), ray)).expect("unit");
                        if decompose_pullbacks(&f, lp, lq).is_err() {
                            r.push(
                                Check::Decomposition,
                                format!(
                                    "ray functional {} on {u} does not split over {p} and {q}",
                                    ray + 1
                                ),
                            );
                        }
                    }
                }
            }
        }
    }

    fn check_bases(&self, r: &mut Report) {
        for s in self.supports().filter(|s| !s.is_empty()) {
            for v in simplex_base_check(&self.cone(s)).violations {
                r.push(Check::SimplexBase, format!("on {s}: {}", v.detail));
            }
        }
    }

    /// Conditions (1)-(4) and the simplex-base check; violations are collected.
    pub fn validate(&self) -> Report {
        let mut r = self.check_structure();
        if !r.is_ok() {
            return r;
        }
        self.check_composition(&mut r);
        self.check_pairing_compatibility(&mut r);
        self.check_hereditary(&mut r);
        self.check_decomposition(&mut r);
        self.check_bases(&mut r);
        r
    }

    /// Whether every restriction from the full cone sends each ray to a
    /// multiple of a ray or to zero, and sees each smaller ray exactly once.
    pub fn is_projection_like(&self) -> bool {
        let full = self.full();
        self.supports().all(|s| match self.restrictions.get(&(full, s)) {
            None => false,
            Some(m) => {
                (0..m.cols()).all(|j| m.column(j).iter().filter(|x| !x.is_zero()).count() <= 1)
                    && (0..m.rows()).all(|i| m.row(i).iter().filter(|x| !x.is_zero()).count() == 1)
            }
        })
    }
}

fn has_scaled_unit_row(m: &Matrix, ray: usize) -> bool {
    (0..m.rows()).any(|i| {
        let row = m.row(i);
        row[ray].is_positive() && row.iter().enumerate().all(|(j, x)| j == ray || x.is_zero())
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SObject {
    pub group: ScaledOrderedGroup,
    pub k1: FinAbGroup,
    pub deltas: DeltaFamily,
}

impl SObject {
    pub fn coordinate(n: usize) -> Self {
        SObject {
            group: ScaledOrderedGroup::unscaled(n),
            k1: FinAbGroup::trivial(),
            deltas: DeltaFamily::coordinate(n),
        }
    }
}

pub fn validate_s_object(s: &SObject) -> Report {
    if s.group.rank != s.deltas.rank {
        let mut r = Report::new();
        r.push(
            Check::Structure,
            format!("group rank {} but the family has rank {}", s.group.rank, s.deltas.rank),
        );
        return r;
    }
    s.deltas.validate()
}

/// `(theta0, theta1, {xi^S})`, with `xi^S: C^H_{theta0(S)} -> C^G_S`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SMorphism {
    pub theta0: PositiveHom,
    pub theta1: K1Hom,
    pub xi: BTreeMap<Support, Matrix>,
}

impl SMorphism {
    pub fn identity(s: &SObject) -> Self {
        SMorphism {
            theta0: PositiveHom::identity(s.group.rank),
            theta1: K1Hom::identity(&s.k1),
            xi: s.deltas.supports().map(|x| (x, Matrix::identity(s.deltas.dim(x)))).collect(),
        }
    }

    /// Reduces `theta1` modulo the target K1 relations.
    pub fn normalized(mut self, dst: &FinAbGroup) -> Self {
        self.theta1 = crate::ordered_groups::compose_k1(&K1Hom::identity(dst), &self.theta1, dst)
            .unwrap_or(self.theta1);
        self
    }

    pub fn xi_at(&self, s: Support) -> Result<&Matrix> {
        self.xi
            .get(&s)
            .ok_or_else(|| Error::SupportMismatch(format!("morphism has no component at {s}")))
    }
}

/// The theta-level checks shared by both morphism validators.
pub(crate) fn validate_thetas(
    theta0: &PositiveHom,
    theta1: &K1Hom,
    src: (&ScaledOrderedGroup, &FinAbGroup),
    dst: (&ScaledOrderedGroup, &FinAbGroup),
) -> Report {
    let mut r = validate_scaled_hom(theta0, src.0, dst.0);
    r.extend(validate_k1_hom(theta1, src.1, dst.1));
    r
}

pub fn validate_s_morphism(m: &SMorphism, src: &SObject, dst: &SObject) -> Report {
    let mut r = validate_thetas(&m.theta0, &m.theta1, (&src.group, &src.k1), (&dst.group, &dst.k1));
    if r.fails(Check::Structure) {
        return r;
    }
    let (g, h) = (&src.deltas, &dst.deltas);
    let mut complete = true;
    for s in g.supports() {
        let q = m.theta0.image_support(s);
        match m.xi.get(&s) {
            None => {
                complete = false;
                r.push(Check::Completeness, format!("no component xi at {s}"));
            }
            Some(x) if x.shape() != (g.dim(s), h.dim(q)) => {
                complete = false;
                r.push(
                    Check::Completeness,
                    format!(
                        "xi at {s} is {}x{}, expected {}x{} (from the cone on {q})",
                        x.rows(),
                        x.cols(),
                        g.dim(s),
                        h.dim(q)
                    ),
                );
            }
            Some(x) if !x.is_nonnegative() => {
                complete = false;
                r.push(Check::Completeness, format!("xi at {s} does not map the cone into the cone"));
            }
            _ => {}
        }
    }
    if let Some(s) = m.xi.keys().find(|s| !s.fits(g.rank)) {
        complete = false;
        r.push(Check::Completeness, format!("xi has a stray component at {s}"));
    }
    if !complete {
        return r;
    }
    for s in g.supports() {
        let q = m.theta0.image_support(s);
        // xi^S must carry s^G_S(e_i) to s^H_Q(theta0 e_i)
        for i in s.iter() {
            let pulled = m.xi[&s].pullback(&g.pairings[&(s, i)]).expect("shapes checked");
            let image = m.theta0.matrix.column(i);
            let expected = h.s_functional(q, &image).expect("image lies in Q");
            if pulled != expected {
                r.push(
                    Check::Compatibility,
                    format!("xi at {s} is not compatible with theta0 on block {}", i + 1),
                );
            }
        }
        for sub in s.subsets().filter(|&x| x != s) {
            let qs = m.theta0.image_support(sub);
            let lhs = g.restrictions[&(s, sub)].mul(&m.xi[&s]).expect("shapes checked");
            let rhs = m.xi[&sub].mul(&h.restrictions[&(q, qs)]).expect("shapes checked");
            if lhs != rhs {
                r.push(
                    Check::Square,
                    format!("square ({s}, {sub}) does not commute: lambda o xi^{s} != xi^{sub} o lambda"),
                );
            }
        }
    }
    r
}

/// `m2 o m1`. `theta1` is the plain matrix product; call
/// [`SMorphism::normalized`] with the final target to reduce it.
pub fn compose_s_morphisms(m2: &SMorphism, m1: &SMorphism) -> Result<SMorphism> {
    let theta0 = crate::ordered_groups::compose_homs(&m2.theta0, &m1.theta0)?;
    let theta1 = K1Hom { matrix: m2.theta1.matrix.mul(&m1.theta1.matrix)? };
    let mut xi = BTreeMap::new();
    for (&s, x1) in &m1.xi {
        let q = m1.theta0.image_support(s);
        let x2 = m2.xi_at(q)?;
        xi.insert(s, x1.mul(x2)?);
    }
    Ok(SMorphism { theta0, theta1, xi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rvec};

    fn sup(ix: &[usize]) -> Support {
        Support::from_one_based(ix)
    }

    #[test]
    fn coordinate_family_validates() {
        for n in 0..=4 {
            let r = DeltaFamily::coordinate(n).validate();
            assert!(r.is_ok(), "n={n}: {r}");
        }
    }

    #[test]
    fn restrict_examples() {
        let d = DeltaFamily::coordinate(2);
        let v = rvec(&[1, 2]);
        assert_eq!(d.restrict(&v, sup(&[1, 2]), sup(&[1, 2])).unwrap(), v);
        assert_eq!(d.restrict(&v, sup(&[1, 2]), sup(&[2])).unwrap(), rvec(&[2]));
        assert!(d.restrict(&v, sup(&[1, 2]), Support::EMPTY).unwrap().is_empty());
        assert!(d.restrict(&rvec(&[2]), sup(&[2]), sup(&[1])).is_err());
    }

    #[test]
    fn decompose_over_sum_examples() {
        let d = DeltaFamily::coordinate(3);
        let f = ConeFunctional::new(rvec(&[1, 2, 3])).unwrap();
        let (f1, f2) = d.decompose_over_sum(&f, sup(&[1, 2]), sup(&[2, 3])).unwrap();
        assert_eq!(f1.coeffs(), rvec(&[1, 2]).as_slice());
        assert_eq!(f2.coeffs(), rvec(&[0, 3]).as_slice());
        let (f1, f2) = d.decompose_over_sum(&f, Support::full(3), Support::EMPTY).unwrap();
        assert_eq!(f1, f);
        assert_eq!(f2.dim(), 0);
        let g = ConeFunctional::new(rvec(&[4, 5])).unwrap();
        let (f1, f2) = d.decompose_over_sum(&g, sup(&[1]), sup(&[3])).unwrap();
        assert_eq!((f1.coeffs().to_vec(), f2.coeffs().to_vec()), (rvec(&[4]), rvec(&[5])));
    }

    #[test]
    fn broken_composition_is_named() {
        let mut d = DeltaFamily::coordinate(3);
        let key = (Support::full(3), sup(&[1]));
        let m = d.restrictions.get_mut(&key).unwrap();
        m.set(0, 0, int(2));
        let r = d.validate();
        assert!(r.fails(Check::Composition));
        assert!(r.to_string().contains("{1,2,3}->{1}"));
    }

    #[test]
    fn zero_base_is_reported() {
        let mut d = DeltaFamily::coordinate(1);
        d.pairings.insert((sup(&[1]), 0), rvec(&[0]));
        let r = d.validate();
        assert_eq!(r.failed_checks().into_iter().collect::<Vec<_>>(), vec![Check::SimplexBase]);
    }

    #[test]
    fn missing_pieces_are_structural() {
        let mut d = DeltaFamily::coordinate(2);
        d.restrictions.remove(&(sup(&[1, 2]), sup(&[2])));
        assert_eq!(d.validate().failed_checks().into_iter().collect::<Vec<_>>(), vec![Check::Structure]);
    }

    #[test]
    fn identity_morphism_validates() {
        let s = SObject::coordinate(3);
        assert!(validate_s_morphism(&SMorphism::identity(&s), &s, &s).is_ok());
    }

    #[test]
    fn perturbed_xi_breaks_a_square() {
        let s = SObject::coordinate(2);
        let mut m = SMorphism::identity(&s);
        m.xi.get_mut(&sup(&[1])).unwrap().set(0, 0, int(2));
        let r = validate_s_morphism(&m, &s, &s);
        assert!(r.fails(Check::Square));
        assert!(r.to_string().contains("({1,2}, {1})"));
    }

    #[test]
    fn missing_xi_is_incomplete() {
        let s = SObject::coordinate(2);
        let mut m = SMorphism::identity(&s);
        m.xi.remove(&Support::EMPTY);
        assert!(validate_s_morphism(&m, &s, &s).fails(Check::Completeness));
    }

    #[test]
    fn compose_with_identity_is_unchanged() {
        let s = SObject::coordinate(2);
        let id = SMorphism::identity(&s);
        assert_eq!(compose_s_morphisms(&id, &id).unwrap(), id);
        let t = SObject::coordinate(3);
        let bad = compose_s_morphisms(&SMorphism::identity(&t), &id);
        assert!(bad.is_err());
    }
}
