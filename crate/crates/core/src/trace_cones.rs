//! Traces with values in `[0, inf]`, simplicial cones in ray coordinates, and
//! the order-theoretic operations on them: pairing with K0, the algebraic
//! order, pointwise lattice operations, Riesz decomposition and hereditary
//! lifting of functionals.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lp;
use crate::matrix::{is_nonnegative, Matrix};
use crate::rational::{ExtRat, Rational};
use crate::report::{Check, Report};

/// Extended trace vector: one value in `[0, inf]` per block.
pub type ExtVector = Vec<ExtRat>;

pub fn ext_add(a: &ExtRat, b: &ExtRat) -> ExtRat {
    a + b
}

pub fn ext_scale(alpha: &Rational, a: &ExtRat) -> Result<ExtRat> {
    a.scale(alpha)
}

fn same_len(what: &str, a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Dimension { what: what.into(), expected: a, found: b });
    }
    Ok(())
}

/// `sum_i p_i tau_i` with `0 * inf = 0`.
pub fn pairing(p: &[i64], tau: &[ExtRat]) -> Result<ExtRat> {
    same_len("pairing", p.len(), tau.len())?;
    if let Some(i) = p.iter().position(|&x| x < 0) {
        return Err(Error::Domain(format!("pairing needs a positive element; coordinate {} is negative", i + 1)));
    }
    Ok(p.iter()
        .zip(tau)
        .fold(ExtRat::zero(), |acc, (&k, t)| &acc + &t.times_count(&BigInt::from(k))))
}

/// `tau1 <= tau2` in the algebraic order: some `tau3` has `tau1 + tau3 = tau2`.
pub fn alg_leq(tau1: &[ExtRat], tau2: &[ExtRat]) -> Result<bool> {
    same_len("algebraic order", tau1.len(), tau2.len())?;
    Ok(tau1.iter().zip(tau2).all(|(a, b)| a <= b))
}

/// A witness `tau3` with `tau1 + tau3 = tau2`, when one exists.
pub fn alg_difference(tau1: &[ExtRat], tau2: &[ExtRat]) -> Result<Option<ExtVector>> {
    same_len("algebraic order", tau1.len(), tau2.len())?;
    let mut out = Vec::with_capacity(tau1.len());
    for (a, b) in tau1.iter().zip(tau2) {
        out.push(match (a, b) {
            (ExtRat::Finite(x), ExtRat::Finite(y)) if x <= y => ExtRat::Finite(y - x),
            (ExtRat::Finite(_), ExtRat::Infinity) => ExtRat::Infinity,
            (ExtRat::Infinity, ExtRat::Infinity) => ExtRat::zero(),
            _ => return Ok(None),
        });
    }
    Ok(Some(out))
}

pub fn meet_pointwise(tau1: &[ExtRat], tau2: &[ExtRat]) -> Result<ExtVector> {
    same_len("meet", tau1.len(), tau2.len())?;
    Ok(tau1.iter().zip(tau2).map(|(a, b)| ExtRat::min(a, b)).collect())
}

pub fn join_pointwise(tau1: &[ExtRat], tau2: &[ExtRat]) -> Result<ExtVector> {
    same_len("join", tau1.len(), tau2.len())?;
    Ok(tau1.iter().zip(tau2).map(|(a, b)| ExtRat::max(a, b)).collect())
}

pub fn ext_vec_add(tau1: &[ExtRat], tau2: &[ExtRat]) -> Result<ExtVector> {
    same_len("addition", tau1.len(), tau2.len())?;
    Ok(tau1.iter().zip(tau2).map(|(a, b)| a + b).collect())
}

/// `[0, inf)^dim` in ray coordinates, with base `{v : base . v = 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialCone {
    pub dim: usize,
    pub base: Vec<Rational>,
}

impl SimplicialCone {
    pub fn standard(dim: usize) -> Self {
        SimplicialCone { dim, base: vec![Rational::from_integer(1.into()); dim] }
    }
}

/// The base meets every ray exactly once iff the base functional is strictly positive.
pub fn simplex_base_check(c: &SimplicialCone) -> Report {
    let mut report = Report::new();
    if c.base.len() != c.dim {
        report.push(
            Check::SimplexBase,
            format!("base functional has {} coordinates for a cone of dimension {}", c.base.len(), c.dim),
        );
        return report;
    }
    for (i, b) in c.base.iter().enumerate() {
        if !b.is_positive() {
            report.push(
                Check::SimplexBase,
                format!("base functional is {b} on ray {}; the ray misses the base", i + 1),
            );
        }
    }
    report
}

/// A nonnegative functional on a simplicial cone, in ray coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeFunctional(Vec<Rational>);

impl ConeFunctional {
    pub fn new(coeffs: Vec<Rational>) -> Result<Self> {
        if let Some(i) = coeffs.iter().position(|x| x.is_negative()) {
            return Err(Error::Domain(format!("functional coefficient {} is negative", i + 1)));
        }
        Ok(ConeFunctional(coeffs))
    }

    pub fn zero(dim: usize) -> Self {
        ConeFunctional(vec![Rational::zero(); dim])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn eval(&self, v: &[Rational]) -> Rational {
        crate::matrix::dot(&self.0, v)
    }
}

/// Splits `f <= g + h` as `f = g' + h'` with `g' <= g`, `h' <= h`.
pub fn riesz_decompose(
    f: &ConeFunctional,
    g: &ConeFunctional,
    h: &ConeFunctional,
) -> Result<(ConeFunctional, ConeFunctional)> {
    same_len("Riesz decomposition", f.dim(), g.dim())?;
    same_len("Riesz decomposition", f.dim(), h.dim())?;
    let mut gh = Vec::with_capacity(f.dim());
    let mut hh = Vec::with_capacity(f.dim());
    for i in 0..f.dim() {
        let (fi, gi, hi) = (&f.0[i], &g.0[i], &h.0[i]);
        if *fi > gi + hi {
            return Err(Error::Decomposition { coordinate: i + 1 });
        }
        let gpart = if fi <= gi { fi.clone() } else { gi.clone() };
        hh.push(fi - &gpart);
        gh.push(gpart);
    }
    Ok((ConeFunctional(gh), ConeFunctional(hh)))
}

/// Writes `f` (on the cone of a union support) as `lam_p^T f1 + lam_q^T f2`
/// with `f1, f2 >= 0`. Among all such splittings the one with the least
/// `f2` mass is chosen, so shared rays go to the first part.
pub fn decompose_pullbacks(
    f: &ConeFunctional,
    lam_p: &Matrix,
    lam_q: &Matrix,
) -> Result<(ConeFunctional, ConeFunctional)> {
    same_len("decomposition", f.dim(), lam_p.cols())?;
    same_len("decomposition", f.dim(), lam_q.cols())?;
    let (kp, kq) = (lam_p.rows(), lam_q.rows());
    let mut a = Matrix::zeros(f.dim(), kp + kq);
    for r in 0..f.dim() {
        for i in 0..kp {
            a.set(r, i, lam_p.get(i, r).clone());
        }
        for j in 0..kq {
            a.set(r, kp + j, lam_q.get(j, r).clone());
        }
    }
    let mut cost = vec![Rational::zero(); kp + kq];
    for c in cost.iter_mut().skip(kp) {
        *c = Rational::from_integer(1.into());
    }
    match lp::minimize(&a, f.coeffs(), &cost) {
        lp::LpOutcome::Optimal { x, .. } => {
            let f2 = x[kp..].to_vec();
            let mut f1 = x;
            f1.truncate(kp);
            Ok((ConeFunctional(f1), ConeFunctional(f2)))
        }
        _ => Err(Error::SupportMismatch(
            "functional is not a sum of nonnegative pullbacks from the two supports".into(),
        )),
    }
}

/// Given `lam: C -> C'` (shape `dim C' x dim C`), `f` on `C'` and `g` on `C`
/// with `lam^T f >= g`, returns `h` on `C'` with `lam^T h = g` and `h <= f`.
pub fn hereditary_lift(f: &[Rational], g: &[Rational], lam: &Matrix) -> Result<Vec<Rational>> {
    same_len("hereditary lift (f)", lam.rows(), f.len())?;
    same_len("hereditary lift (g)", lam.cols(), g.len())?;
    let pulled = lam.pullback(f)?;
    if let Some(i) = (0..g.len()).find(|&i| pulled[i] < g[i]) {
        return Err(Error::Precondition(format!(
            "pulled-back f is {} below g = {} on ray {}",
            pulled[i],
            g[i],
            i + 1
        )));
    }
    // h = f - u with u >= 0 and lam^T u = lam^T f - g
    let rhs: Vec<Rational> = pulled.iter().zip(g).map(|(a, b)| a - b).collect();
    let u = lp::feasible_point(&lam.transpose(), &rhs).ok_or_else(|| {
        Error::Hereditary("no functional below f pulls back to g".into())
    })?;
    Ok(f.iter().zip(&u).map(|(a, b)| a - b).collect())
}

pub fn check_cone_element(v: &[Rational], dim: usize, what: &str) -> Result<()> {
    same_len(what, dim, v.len())?;
    if !is_nonnegative(v) {
        return Err(Error::Domain(format!("{what} has a negative ray coordinate")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat, rvec};

    fn ext(xs: &[Option<i64>]) -> ExtVector {
        xs.iter()
            .map(|x| match x {
                Some(v) => ExtRat::Finite(int(*v)),
                None => ExtRat::Infinity,
            })
            .collect()
    }

    const INF: Option<i64> = None;

    #[test]
    fn ext_arithmetic_examples() {
        assert_eq!(ext_add(&ExtRat::Finite(rat(1, 2)), &ExtRat::Infinity), ExtRat::Infinity);
        assert_eq!(ext_scale(&int(3), &ExtRat::Finite(rat(2, 5))).unwrap(), ExtRat::Finite(rat(6, 5)));
        assert!(matches!(ext_scale(&int(0), &ExtRat::from_int(1)), Err(Error::Domain(_))));
    }

    #[test]
    fn pairing_examples() {
        let tau = vec![ExtRat::from_int(3), ExtRat::Infinity, ExtRat::Finite(rat(1, 2))];
        assert_eq!(pairing(&[1, 0, 2], &tau).unwrap(), ExtRat::from_int(4));
        assert_eq!(pairing(&[0, 1, 0], &tau).unwrap(), ExtRat::Infinity);
        assert_eq!(pairing(&[0, 0, 0], &tau).unwrap(), ExtRat::zero());
        assert!(pairing(&[1, 0], &tau).is_err());
    }

    #[test]
    fn order_examples() {
        let a = ext(&[Some(1), INF]);
        let b = ext(&[Some(2), INF]);
        assert!(alg_leq(&a, &b).unwrap());
        assert_eq!(alg_difference(&a, &b).unwrap().unwrap(), ext(&[Some(1), Some(0)]));
        assert!(!alg_leq(&ext(&[INF, Some(0)]), &ext(&[Some(1), Some(5)])).unwrap());
        assert!(alg_leq(&a, &a).unwrap());
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(
            meet_pointwise(&ext(&[Some(1), INF, Some(2)]), &ext(&[Some(3), Some(1), INF])).unwrap(),
            ext(&[Some(1), Some(1), Some(2)])
        );
        assert_eq!(
            join_pointwise(&ext(&[Some(1), INF]), &ext(&[Some(3), Some(1)])).unwrap(),
            ext(&[Some(3), INF])
        );
        let t = ext(&[Some(2), INF]);
        assert_eq!(meet_pointwise(&t, &t).unwrap(), t);
    }

    fn cf(xs: &[i64]) -> ConeFunctional {
        ConeFunctional::new(rvec(xs)).unwrap()
    }

    #[test]
    fn riesz_examples() {
        let (g, h) = riesz_decompose(&cf(&[2, 1]), &cf(&[1, 1]), &cf(&[3, 0])).unwrap();
        assert_eq!((g, h), (cf(&[1, 1]), cf(&[1, 0])));
        let f = cf(&[3, 4]);
        let (g, h) = riesz_decompose(&f, &f, &cf(&[0, 0])).unwrap();
        assert_eq!((g, h), (f.clone(), cf(&[0, 0])));
        assert!(matches!(
            riesz_decompose(&cf(&[5]), &cf(&[1]), &cf(&[1])),
            Err(Error::Decomposition { coordinate: 1 })
        ));
    }

    #[test]
    fn decomposition_over_overlapping_supports() {
        // union {1,2,3}; p has {1,2}, q has {2,3}; coordinate projections
        let lam_p = Matrix::from_ints(&[&[1, 0, 0], &[0, 1, 0]], 3);
        let lam_q = Matrix::from_ints(&[&[0, 1, 0], &[0, 0, 1]], 3);
        let (f1, f2) = decompose_pullbacks(&cf(&[1, 2, 3]), &lam_p, &lam_q).unwrap();
        assert_eq!(f1, cf(&[1, 2]));
        assert_eq!(f2, cf(&[0, 3]));
    }

    #[test]
    fn hereditary_lift_examples() {
        // a one-ray cone mapped onto the first ray of a two-ray cone
        let lam = Matrix::from_ints(&[&[1], &[0]], 1);
        assert_eq!(hereditary_lift(&rvec(&[4, 7]), &rvec(&[2]), &lam).unwrap(), rvec(&[2, 7]));
        assert_eq!(hereditary_lift(&rvec(&[4, 7]), &rvec(&[4]), &lam).unwrap(), rvec(&[4, 7]));
        assert!(matches!(
            hereditary_lift(&rvec(&[4, 7]), &rvec(&[5]), &lam),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn simplex_base_examples() {
        assert!(simplex_base_check(&SimplicialCone { dim: 2, base: vec![int(1), rat(1, 2)] }).is_ok());
        let r = simplex_base_check(&SimplicialCone { dim: 2, base: vec![int(1), int(0)] });
        assert!(r.violations[0].detail.contains("ray 2"));
        assert!(simplex_base_check(&SimplicialCone::standard(0)).is_ok());
    }
}
