//! Brute-force oracles shared by the integration tests. None of these use
//! the crate's own linear-programming code.
#![allow(dead_code)]

use itertools::Itertools;
use num_traits::{One, Zero};
use tracecone_core::{ExtRat, Matrix, Rational};

/// The unique solution of `sum_j z_j cols[j] = b`, if the columns are
/// independent and the system is consistent.
pub fn solve_unique(cols: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let (m, k) = (b.len(), cols.len());
    let mut rows: Vec<Vec<Rational>> =
        (0..m).map(|r| cols.iter().map(|c| c[r].clone()).chain([b[r].clone()]).collect()).collect();
    let mut pivot_row = 0;
    for c in 0..k {
        let p = (pivot_row..m).find(|&r| !rows[r][c].is_zero())?;
        rows.swap(pivot_row, p);
        let inv = Rational::one() / &rows[pivot_row][c];
        for x in rows[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for r in 0..m {
            if r != pivot_row && !rows[r][c].is_zero() {
                let f = rows[r][c].clone();
                for j in 0..=k {
                    let sub = &f * &rows[pivot_row][j];
                    rows[r][j] -= sub;
                }
            }
        }
        pivot_row += 1;
    }
    if rows[pivot_row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|c| rows[c][k].clone()).collect())
}

/// Every basic feasible solution of `a z = b, z >= 0`.
pub fn vertices(a: &Matrix, b: &[Rational]) -> Vec<Vec<Rational>> {
    let n = a.cols();
    let cols: Vec<Vec<Rational>> = (0..n).map(|j| a.column(j)).collect();
    let mut out = Vec::new();
    for size in 0..=a.rows().min(n) {
        for basis in (0..n).combinations(size) {
            let picked: Vec<Vec<Rational>> = basis.iter().map(|&j| cols[j].clone()).collect();
            if let Some(z) = solve_unique(&picked, b) {
                if z.iter().all(|x| *x >= Rational::zero()) {
                    let mut full = vec![Rational::zero(); n];
                    for (&j, x) in basis.iter().zip(z) {
                        full[j] = x;
                    }
                    if !out.contains(&full) {
                        out.push(full);
                    }
                }
            }
        }
    }
    out
}

/// Minimum of `c . z` over `a z = b, z >= 0` for `c >= 0`, by vertex enumeration.
pub fn vertex_min(a: &Matrix, b: &[Rational], c: &[Rational]) -> Option<Rational> {
    vertices(a, b).iter().map(|z| z.iter().zip(c).map(|(x, y)| x * y).sum::<Rational>()).min()
}

/// Columns side by side.
pub fn hstack(parts: &[Matrix]) -> Matrix {
    let rows = parts.first().map_or(0, |m| m.rows());
    let width = parts.iter().map(|m| m.cols()).sum();
    let mut out = Matrix::zeros(rows, width);
    let mut off = 0;
    for m in parts {
        for r in 0..rows {
            for c in 0..m.cols() {
                out.set(r, off + c, m.get(r, c).clone());
            }
        }
        off += m.cols();
    }
    out
}

pub fn grid_values() -> Vec<ExtRat> {
    vec![ExtRat::from_int(0), ExtRat::from_int(1), ExtRat::from_int(2), ExtRat::Infinity]
}

/// All vectors of length `n` over `values`.
pub fn grid(values: &[ExtRat], n: usize) -> Vec<Vec<ExtRat>> {
    if n == 0 {
        return vec![vec![]];
    }
    (0..n).map(|_| values.iter().cloned()).multi_cartesian_product().collect()
}

pub fn le(a: &[ExtRat], b: &[ExtRat]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}
