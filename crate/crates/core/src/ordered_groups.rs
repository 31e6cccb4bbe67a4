//! Simplicial scaled ordered groups `(Z^n, N^n, Sigma)`, finitely generated
//! K1-groups, positive homomorphisms, and the ideal lattice of `N^n`.

use std::fmt;

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::report::{Check, Report};

/// Largest rank for which the ideal lattice is enumerated.
pub const MAX_RANK: usize = 16;

/// A subset of the block indices `{0, .., n-1}`; it presents the order ideal
/// `{p in N^n : supp(p) in S}`. Displayed 1-based.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Support(pub u32);

impl Support {
    pub const EMPTY: Support = Support(0);

    pub fn full(n: usize) -> Support {
        if n == 0 {
            Support(0)
        } else {
            Support(u32::MAX >> (32 - n))
        }
    }

    /// From 0-based indices.
    pub fn from_indices(ix: impl IntoIterator<Item = usize>) -> Support {
        Support(ix.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    /// From 1-based indices, the way supports are written in documents.
    pub fn from_one_based(ix: &[usize]) -> Support {
        Support::from_indices(ix.iter().map(|i| i - 1))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn is_subset(self, other: Support) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: Support) -> Support {
        Support(self.0 | other.0)
    }

    pub fn intersection(self, other: Support) -> Support {
        Support(self.0 & other.0)
    }

    pub fn difference(self, other: Support) -> Support {
        Support(self.0 & !other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// 0-based members in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    pub fn one_based(self) -> Vec<usize> {
        self.iter().map(|i| i + 1).collect()
    }

    /// Every subset of `self`, in increasing mask order.
    pub fn subsets(self) -> impl Iterator<Item = Support> {
        let full = self.0;
        let mut next = Some(0u32);
        std::iter::from_fn(move || {
            let cur = next?;
            next = if cur == full { None } else { Some(((cur | !full).wrapping_add(1)) & full) };
            Some(Support(cur))
        })
    }

    pub fn fits(self, n: usize) -> bool {
        self.is_subset(Support::full(n))
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scale {
    All,
    Unit(Vec<i64>),
}

/// `(Z^n, N^n, Sigma)` with `Sigma = [0, u]` or all of `N^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScaledOrderedGroup {
    pub rank: usize,
    pub scale: Scale,
}

impl ScaledOrderedGroup {
    pub fn new(rank: usize, scale: Scale) -> Result<Self> {
        if let Scale::Unit(u) = &scale {
            check_len("scale", rank, u.len())?;
            if let Some(i) = u.iter().position(|&x| x < 0) {
                return Err(Error::Domain(format!("scale coordinate {} is negative", i + 1)));
            }
        }
        Ok(ScaledOrderedGroup { rank, scale })
    }

    pub fn unscaled(rank: usize) -> Self {
        ScaledOrderedGroup { rank, scale: Scale::All }
    }

    pub fn in_scale(&self, g: &[i64]) -> bool {
        g.iter().all(|&x| x >= 0)
            && match &self.scale {
                Scale::All => true,
                Scale::Unit(u) => g.iter().zip(u).all(|(x, ui)| x <= ui),
            }
    }
}

/// `Z^free_rank + Z/d_1 + ... + Z/d_k` with `d_1 | d_2 | ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAbGroup {
    pub free_rank: usize,
    pub torsion: Vec<u64>,
}

impl FinAbGroup {
    pub fn new(free_rank: usize, torsion: Vec<u64>) -> Result<Self> {
        if let Some(d) = torsion.iter().find(|&&d| d < 2) {
            return Err(Error::Domain(format!("torsion order {d} is below 2")));
        }
        if let Some(w) = torsion.windows(2).find(|w| w[1] % w[0] != 0) {
            return Err(Error::Domain(format!("torsion orders {} and {} break divisibility", w[0], w[1])));
        }
        Ok(FinAbGroup { free_rank, torsion })
    }

    pub fn trivial() -> Self {
        FinAbGroup { free_rank: 0, torsion: vec![] }
    }

    pub fn generators(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    /// Order of generator `j`, or 0 for free generators.
    pub fn order(&self, j: usize) -> u64 {
        if j < self.free_rank {
            0
        } else {
            self.torsion[j - self.free_rank]
        }
    }

    /// Canonical representative of a coordinate vector.
    pub fn reduce(&self, v: &mut [i64]) {
        for (j, x) in v.iter_mut().enumerate() {
            let d = self.order(j) as i64;
            if d > 0 {
                *x = x.mod_floor(&d);
            }
        }
    }
}

/// Row-major integer matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<i64>,
}

impl IntMatrix {
    pub fn from_rows(rows: &[Vec<i64>], cols: usize) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, r) in rows.iter().enumerate() {
            check_len(&format!("integer matrix row {i}"), cols, r.len())?;
            data.extend_from_slice(r);
        }
        Ok(IntMatrix { rows: rows.len(), cols, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMatrix { rows: n, cols: n, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row_vecs(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn apply(&self, v: &[i64]) -> Result<Vec<i64>> {
        check_len("integer matrix-vector product", self.cols, v.len())?;
        Ok((0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum()).collect())
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix> {
        check_len("integer matrix product", self.cols, rhs.rows)?;
        let mut out = IntMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }
}

/// `theta_0`: a `target_rank x source_rank` matrix with nonnegative entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveHom {
    pub matrix: IntMatrix,
}

impl PositiveHom {
    pub fn new(matrix: IntMatrix) -> Self {
        PositiveHom { matrix }
    }

    pub fn identity(n: usize) -> Self {
        PositiveHom { matrix: IntMatrix::identity(n) }
    }

    /// The block permutation sending block `i` to block `perm[i]`.
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, &j) in perm.iter().enumerate() {
            m.set(j, i, 1);
        }
        PositiveHom { matrix: m }
    }

    pub fn source_rank(&self) -> usize {
        self.matrix.cols
    }

    pub fn target_rank(&self) -> usize {
        self.matrix.rows
    }

    pub fn column_support(&self, i: usize) -> Support {
        Support::from_indices((0..self.matrix.rows).filter(|&j| self.matrix.get(j, i) != 0))
    }

    /// Support of the ideal generated by the image of the ideal `s`.
    pub fn image_support(&self, s: Support) -> Support {
        s.iter().fold(Support::EMPTY, |acc, i| acc.union(self.column_support(i)))
    }

    /// Largest source support whose image lies inside `t`: the ideal generated
    /// by the preimage of `t`.
    pub fn preimage_support(&self, t: Support) -> Support {
        Support::from_indices((0..self.source_rank()).filter(|&i| self.column_support(i).is_subset(t)))
    }
}

/// `theta_1` between two presented K1-groups (`target gens x source gens`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct K1Hom {
    pub matrix: IntMatrix,
}

impl K1Hom {
    pub fn identity(g: &FinAbGroup) -> Self {
        K1Hom { matrix: IntMatrix::identity(g.generators()) }
    }

    pub fn zero(src: &FinAbGroup, dst: &FinAbGroup) -> Self {
        K1Hom { matrix: IntMatrix::zeros(dst.generators(), src.generators()) }
    }
}

fn check_len(what: &str, expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::Dimension { what: what.into(), expected, found });
    }
    Ok(())
}

pub fn support(p: &[i64], n: usize) -> Result<Support> {
    check_len("support vector", n, p.len())?;
    if n > 32 {
        return Err(Error::Capacity { rank: n, max: 32 });
    }
    if let Some(i) = p.iter().position(|&x| x < 0) {
        return Err(Error::Domain(format!("coordinate {} of a positive element is negative", i + 1)));
    }
    Ok(Support::from_indices((0..n).filter(|&i| p[i] > 0)))
}

/// Whether `e` lies in `G^p`, the subgroup generated by `{0 <= v <= kp}`.
pub fn in_group_p(e: &[i64], p: &[i64]) -> Result<bool> {
    check_len("group element", p.len(), e.len())?;
    let sp = support(p, p.len())?;
    Ok((0..e.len()).all(|i| e[i] == 0 || sp.contains(i)))
}

pub fn validate_scaled_hom(
    m: &PositiveHom,
    g: &ScaledOrderedGroup,
    h: &ScaledOrderedGroup,
) -> Report {
    let mut report = Report::new();
    if m.source_rank() != g.rank || m.target_rank() != h.rank {
        report.push(
            Check::Structure,
            format!(
                "theta0 is {}x{} but the groups have ranks {} -> {}",
                m.target_rank(),
                m.source_rank(),
                g.rank,
                h.rank
            ),
        );
        return report;
    }
    let mut positive = true;
    for i in 0..m.matrix.rows {
        for j in 0..m.matrix.cols {
            if m.matrix.get(i, j) < 0 {
                positive = false;
                report.push(
                    Check::Positivity,
                    format!("theta0 entry ({}, {}) = {} is negative", i + 1, j + 1, m.matrix.get(i, j)),
                );
            }
        }
    }
    if !positive {
        return report;
    }
    match (&g.scale, &h.scale) {
        (_, Scale::All) => {}
        (Scale::All, Scale::Unit(_)) => {
            if m.matrix.data.iter().any(|&x| x != 0) {
                report.push(Check::Scale, "an unbounded scale cannot map into a bounded one unless theta0 = 0");
            }
        }
        (Scale::Unit(ug), Scale::Unit(uh)) => {
            let image = m.matrix.apply(ug).expect("shape checked");
            for (i, (a, b)) in image.iter().zip(uh).enumerate() {
                if a > b {
                    report.push(
                        Check::Scale,
                        format!("theta0(u) = {a} exceeds the target scale {b} at coordinate {}", i + 1),
                    );
                }
            }
        }
    }
    report
}

pub fn generated_ideal(ps: &[Vec<i64>], n: usize) -> Result<Support> {
    ps.iter().try_fold(Support::EMPTY, |acc, p| Ok(acc.union(support(p, n)?)))
}

/// All `2^n` ideals of `N^n` in increasing mask order.
pub fn enumerate_ideals(g: &ScaledOrderedGroup) -> Result<Vec<Support>> {
    if g.rank > MAX_RANK {
        return Err(Error::Capacity { rank: g.rank, max: MAX_RANK });
    }
    Ok((0..1u32 << g.rank).map(Support).collect())
}

pub fn compose_homs(m2: &PositiveHom, m1: &PositiveHom) -> Result<PositiveHom> {
    Ok(PositiveHom { matrix: m2.matrix.mul(&m1.matrix)? })
}

pub fn validate_k1_hom(h: &K1Hom, src: &FinAbGroup, dst: &FinAbGroup) -> Report {
    let mut report = Report::new();
    if h.matrix.cols != src.generators() || h.matrix.rows != dst.generators() {
        report.push(
            Check::Structure,
            format!(
                "theta1 is {}x{} but the K1 presentations have {} -> {} generators",
                h.matrix.rows,
                h.matrix.cols,
                src.generators(),
                dst.generators()
            ),
        );
        return report;
    }
    for j in 0..src.generators() {
        let d = src.order(j) as i64;
        if d == 0 {
            continue;
        }
        for i in 0..dst.generators() {
            let x = d * h.matrix.get(i, j);
            let target = dst.order(i) as i64;
            let vanishes = if target == 0 { x == 0 } else { x % target == 0 };
            if !vanishes {
                report.push(
                    Check::K1,
                    format!(
                        "generator {} has order {d} but {d} * {} is nonzero in target coordinate {}",
                        j + 1,
                        h.matrix.get(i, j),
                        i + 1
                    ),
                );
            }
        }
    }
    report
}

pub fn compose_k1(h2: &K1Hom, h1: &K1Hom, target: &FinAbGroup) -> Result<K1Hom> {
    let mut m = h2.matrix.mul(&h1.matrix)?;
    for j in 0..m.cols {
        let mut col = m.column(j);
        target.reduce(&mut col);
        for (i, x) in col.into_iter().enumerate() {
            m.set(i, j, x);
        }
    }
    Ok(K1Hom { matrix: m })
}
