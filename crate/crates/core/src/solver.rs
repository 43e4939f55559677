//! Dense exact linear algebra over the rationals.
//!
//! Two elimination routes reduce a matrix to row echelon form: fraction-free
//! Bareiss elimination on integer-scaled rows, and plain Gaussian elimination
//! on rationals. They share nothing but back-substitution, so each serves as
//! an oracle for the other.

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactnum::{bit_size, denominator_lcm, format_rational, BigInt, BigRational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolverError {
    #[error("matrix is singular (rank {rank} of {order})")]
    SingularMatrix { rank: usize, order: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },
    #[error("solution fails equation {row}")]
    Residual { row: usize },
}

pub type Result<T> = std::result::Result<T, SolverError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        RationalMatrix { rows: rows.len(), cols, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigRational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix> {
        if self.cols != other.rows {
            return Err(SolverError::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                got: format!("{} rows", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &[BigRational]) -> Result<Vec<BigRational>> {
        if x.len() != self.cols {
            return Err(SolverError::DimensionMismatch {
                expected: format!("vector of length {}", self.cols),
                got: format!("length {}", x.len()),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }
}

impl fmt::Display for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(format_rational).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    #[default]
    Bareiss,
    Gaussian,
}

/// Row echelon form with pivot columns and the determinant factor picked up
/// along the way (only meaningful for square input).
struct Echelon {
    rows: Vec<Vec<BigRational>>,
    pivots: Vec<usize>,
    det: BigRational,
}

fn echelon(rows: Vec<Vec<BigRational>>, strategy: Strategy) -> Echelon {
    match strategy {
        Strategy::Bareiss => bareiss(rows),
        Strategy::Gaussian => gaussian(rows),
    }
}

fn bareiss(rows: Vec<Vec<BigRational>>) -> Echelon {
    // Clear denominators row by row; the determinant is rescaled at the end.
    let mut scale = BigRational::one();
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            let l = denominator_lcm(r);
            scale *= BigRational::from_integer(l.clone());
            r.iter().map(|x| (x * BigRational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    let n = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut sign = 1i32;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        let Some(p) = (r..n).find(|&p| !m[p][c].is_zero()) else { continue };
        if p != r {
            m.swap(p, r);
            sign = -sign;
        }
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in rest.iter_mut() {
            let f = row[c].clone();
            for j in c + 1..cols {
                let v = &pivot_row[c] * &row[j] - &f * &pivot_row[j];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero(), "inexact Bareiss division");
                row[j] = q;
            }
            row[c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    let det = if pivots.len() == n && n == cols {
        let d = if n == 0 { BigInt::one() } else { m[n - 1][n - 1].clone() };
        BigRational::from_integer(d * sign) / scale
    } else {
        BigRational::zero()
    };
    let rows = m
        .into_iter()
        .map(|r| r.into_iter().map(BigRational::from_integer).collect())
        .collect();
    Echelon { rows, pivots, det }
}

fn gaussian(mut m: Vec<Vec<BigRational>>) -> Echelon {
    let n = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut det = BigRational::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == n {
            break;
        }
        // smallest nonzero entry by bit size keeps the intermediate growth down
        let Some(p) = (r..n).filter(|&p| !m[p][c].is_zero()).min_by_key(|&p| bit_size(&m[p][c])) else {
            continue;
        };
        if p != r {
            m.swap(p, r);
            det = -det;
        }
        let (top, rest) = m.split_at_mut(r + 1);
        let pivot_row = &top[r];
        det *= &pivot_row[c];
        for row in rest.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let f = &row[c] / &pivot_row[c];
            for j in c + 1..cols {
                if !pivot_row[j].is_zero() {
                    row[j] -= &f * &pivot_row[j];
                }
            }
            row[c] = BigRational::zero();
        }
        pivots.push(c);
        r += 1;
    }
    if pivots.len() != n || n != cols {
        det = BigRational::zero();
    }
    Echelon { rows: m, pivots, det }
}

pub fn rank_with(q: &RationalMatrix, strategy: Strategy) -> usize {
    echelon(q.to_rows(), strategy).pivots.len()
}

pub fn rank(q: &RationalMatrix) -> usize {
    rank_with(q, Strategy::Bareiss)
}

/// Panics on non-square input.
pub fn determinant_with(q: &RationalMatrix, strategy: Strategy) -> BigRational {
    assert!(q.is_square(), "determinant of a non-square matrix");
    echelon(q.to_rows(), strategy).det
}

pub fn determinant(q: &RationalMatrix) -> BigRational {
    determinant_with(q, Strategy::Bareiss)
}

pub fn det_is_nonzero(q: &RationalMatrix) -> bool {
    q.is_square() && rank(q) == q.rows()
}

/// Back-substitution on an echelon form, with `free` values fixed for the
/// non-pivot columns. `rhs` is the augmented column if present.
fn back_substitute(e: &Echelon, cols: usize, free: &[(usize, BigRational)], rhs: bool) -> Vec<BigRational> {
    let mut x = vec![BigRational::zero(); cols];
    for (c, v) in free {
        x[*c] = v.clone();
    }
    for (r, &c) in e.pivots.iter().enumerate().rev() {
        let row = &e.rows[r];
        let mut acc = if rhs { row[cols].clone() } else { BigRational::zero() };
        for j in c + 1..cols {
            if !row[j].is_zero() && !x[j].is_zero() {
                acc -= &row[j] * &x[j];
            }
        }
        x[c] = acc / &row[c];
    }
    x
}

/// A basis of the right kernel, each vector scaled so its first nonzero
/// coordinate is 1.
pub fn nullspace_with(q: &RationalMatrix, strategy: Strategy) -> Vec<Vec<BigRational>> {
    let e = echelon(q.to_rows(), strategy);
    let free: Vec<usize> = (0..q.cols()).filter(|c| !e.pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = back_substitute(&e, q.cols(), &[(f, BigRational::one())], false);
            if let Some(lead) = v.iter().find(|x| !x.is_zero()).cloned() {
                v.iter_mut().for_each(|x| *x /= &lead);
            }
            v
        })
        .collect()
}

pub fn nullspace(q: &RationalMatrix) -> Vec<Vec<BigRational>> {
    nullspace_with(q, Strategy::Bareiss)
}

/// The unique `x` with `q·x = b`, checked against every equation before it
/// is returned.
pub fn solve_with(q: &RationalMatrix, b: &[BigRational], strategy: Strategy) -> Result<Vec<BigRational>> {
    if !q.is_square() {
        return Err(SolverError::DimensionMismatch {
            expected: "square matrix".into(),
            got: format!("{}x{}", q.rows(), q.cols()),
        });
    }
    if b.len() != q.rows() {
        return Err(SolverError::DimensionMismatch {
            expected: format!("right-hand side of length {}", q.rows()),
            got: format!("length {}", b.len()),
        });
    }
    let augmented: Vec<Vec<BigRational>> = q
        .to_rows()
        .into_iter()
        .zip(b)
        .map(|(mut r, v)| {
            r.push(v.clone());
            r
        })
        .collect();
    let e = echelon(augmented, strategy);
    let rank = e.pivots.iter().filter(|&&c| c < q.cols()).count();
    if rank < q.cols() {
        return Err(SolverError::SingularMatrix { rank, order: q.cols() });
    }
    let x = back_substitute(&e, q.cols(), &[], true);
    let qx = q.mul_vec(&x)?;
    if let Some(row) = qx.iter().zip(b).position(|(l, r)| l != r) {
        return Err(SolverError::Residual { row });
    }
    Ok(x)
}

pub fn solve_exact(q: &RationalMatrix, b: &[BigRational]) -> Result<Vec<BigRational>> {
    solve_with(q, b, Strategy::Bareiss)
}

/// Largest absolute numerator across the entries; handy for reporting.
pub fn max_abs_numerator(q: &RationalMatrix) -> BigInt {
    q.data.iter().map(|x| x.numer().abs()).max().unwrap_or_default()
}
