//! Block presentations: every block `i` carries `k_i` trace rays with
//! positive weights, and every support may rescale its ray coordinates.
//! These produce valid delta-families with nontrivial pairings and
//! restriction maps, and morphisms between them with commuting squares.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ordered_groups::{PositiveHom, Support};
use crate::rational::Rational;
use crate::stevens::DeltaFamily;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockModel {
    /// Ray count per block.
    pub rays: Vec<usize>,
    /// `weights[i][r]`: value of the unit of block `i` on its ray `r`.
    pub weights: Vec<Vec<Rational>>,
    /// Per support mask, one positive factor per ray of `C_S` (block-major).
    /// The cone coordinate of a ray is its trace value times this factor.
    pub scales: Vec<Vec<Rational>>,
}

impl BlockModel {
    /// `k` rays per block, unit weights, no rescaling.
    pub fn uniform(n: usize, k: usize) -> Self {
        BlockModel::with_rays(vec![k; n])
    }

    pub fn with_rays(rays: Vec<usize>) -> Self {
        let weights = rays.iter().map(|&k| vec![Rational::one(); k]).collect();
        let n = rays.len();
        let mut m = BlockModel { rays, weights, scales: Vec::new() };
        m.scales = (0..1u32 << n).map(|s| vec![Rational::one(); m.dim(Support(s))]).collect();
        m
    }

    pub fn rank(&self) -> usize {
        self.rays.len()
    }

    pub fn dim(&self, s: Support) -> usize {
        s.iter().map(|i| self.rays[i]).sum()
    }

    /// Position of ray `r` of block `i` inside `C_S`.
    pub fn offset(&self, s: Support, i: usize, r: usize) -> usize {
        s.iter().take_while(|&j| j < i).map(|j| self.rays[j]).sum::<usize>() + r
    }

    fn scale(&self, s: Support, i: usize, r: usize) -> &Rational {
        &self.scales[s.0 as usize][self.offset(s, i, r)]
    }

    pub fn check(&self) -> Result<()> {
        let n = self.rank();
        if self.weights.len() != n || self.scales.len() != 1 << n {
            return Err(Error::Precondition("block model tables do not match the rank".into()));
        }
        for (i, w) in self.weights.iter().enumerate() {
            if w.len() != self.rays[i] || w.iter().any(|x| !x.is_positive()) {
                return Err(Error::Precondition(format!("weights of block {} are not positive", i + 1)));
            }
        }
        for s in (0..1u32 << n).map(Support) {
            let sc = &self.scales[s.0 as usize];
            if sc.len() != self.dim(s) || sc.iter().any(|x| !x.is_positive()) {
                return Err(Error::Precondition(format!("ray scales on {s} are not positive")));
            }
        }
        Ok(())
    }

    /// Diagonal of trace-value -> cone-coordinate factors on `C_S`.
    pub fn scale_matrix(&self, s: Support) -> Matrix {
        let mut m = Matrix::zeros(self.dim(s), self.dim(s));
        for (j, x) in self.scales[s.0 as usize].iter().enumerate() {
            m.set(j, j, x.clone());
        }
        m
    }

    pub fn inverse_scale_matrix(&self, s: Support) -> Matrix {
        let mut m = Matrix::zeros(self.dim(s), self.dim(s));
        for (j, x) in self.scales[s.0 as usize].iter().enumerate() {
            m.set(j, j, x.recip());
        }
        m
    }

    pub fn family(&self) -> DeltaFamily {
        let n = self.rank();
        let supports: Vec<Support> = (0..1u32 << n).map(Support).collect();
        let dims = supports.iter().map(|&s| self.dim(s)).collect();
        let mut restrictions = BTreeMap::new();
        let mut pairings = BTreeMap::new();
        for &s in &supports {
            for sub in s.subsets() {
                let mut m = Matrix::zeros(self.dim(sub), self.dim(s));
                for i in sub.iter() {
                    for r in 0..self.rays[i] {
                        m.set(
                            self.offset(sub, i, r),
                            self.offset(s, i, r),
                            self.scale(sub, i, r) / self.scale(s, i, r),
                        );
                    }
                }
                restrictions.insert((s, sub), m);
            }
            for i in s.iter() {
                let mut p = vec![Rational::zero(); self.dim(s)];
                for r in 0..self.rays[i] {
                    p[self.offset(s, i, r)] = &self.weights[i][r] / self.scale(s, i, r);
                }
                pairings.insert((s, i), p);
            }
        }
        DeltaFamily { rank: n, dims, restrictions, pairings }
    }
}

/// A trace-level map between block models: `blocks[(i, j)]` (shape
/// `k^G_i x k^H_j`) sends traces on block `j` of `H` to traces on block `i`
/// of `G`, and is present exactly where `theta0` has a nonzero entry `(j, i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMap {
    pub theta0: PositiveHom,
    pub blocks: BTreeMap<(usize, usize), Matrix>,
}

impl BlockMap {
    /// Checks that the unit of block `i` evaluates on the image like
    /// `theta0 e_i` does on the source trace.
    pub fn check(&self, g: &BlockModel, h: &BlockModel) -> Result<()> {
        for i in 0..g.rank() {
            for j in 0..h.rank() {
                let mult = self.theta0.matrix.get(j, i);
                match self.blocks.get(&(i, j)) {
                    None if mult == 0 => {}
                    None => {
                        return Err(Error::Precondition(format!("no block map {} <- {}", i + 1, j + 1)))
                    }
                    Some(_) if mult == 0 => {
                        return Err(Error::Precondition(format!("stray block map {} <- {}", i + 1, j + 1)))
                    }
                    Some(m) => {
                        if m.shape() != (g.rays[i], h.rays[j]) || !m.is_nonnegative() {
                            return Err(Error::Precondition(format!(
                                "block map {} <- {} has the wrong shape or sign",
                                i + 1,
                                j + 1
                            )));
                        }
                        let pulled = m.pullback(&g.weights[i])?;
                        let k = Rational::from_integer(mult.into());
                        if pulled.iter().zip(&h.weights[j]).any(|(a, b)| *a != &k * b) {
                            return Err(Error::Precondition(format!(
                                "block map {} <- {} does not respect the units",
                                i + 1,
                                j + 1
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// `xi^S: C^H_{Q(S)} -> C^G_S` in cone coordinates.
    pub fn xi(&self, g: &BlockModel, h: &BlockModel, s: Support) -> Matrix {
        let q = self.theta0.image_support(s);
        let mut canonical = Matrix::zeros(g.dim(s), h.dim(q));
        for (&(i, j), m) in &self.blocks {
            if !s.contains(i) {
                continue;
            }
            for a in 0..g.rays[i] {
                for b in 0..h.rays[j] {
                    canonical.set(g.offset(s, i, a), h.offset(q, j, b), m.get(a, b).clone());
                }
            }
        }
        g.scale_matrix(s)
            .mul(&canonical)
            .and_then(|x| x.mul(&h.inverse_scale_matrix(q)))
            .expect("block shapes agree")
    }

    pub fn xi_family(&self, g: &BlockModel, h: &BlockModel) -> BTreeMap<Support, Matrix> {
        (0..1u32 << g.rank()).map(Support).map(|s| (s, self.xi(g, h, s))).collect()
    }
}
