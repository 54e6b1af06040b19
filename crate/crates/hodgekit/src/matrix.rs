//! Dense matrices over the Gaussian rationals with exact elimination,
//! kernels, inverses and nilpotent exponentials/logarithms.
//!
//! Vectors are column vectors; an operator acts by `A·v`. Subspace bases
//! elsewhere in the crate are stored as matrix *rows*, so the image of a
//! row basis `B` under an operator `A` is `B · Aᵀ`.

use crate::error::{Error, Result};
use crate::scalar::{GaussianRational, Rat};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

type S = GaussianRational;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let nr = rows.len();
        let nc = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == nc), "ragged rows");
        Self {
            rows: nr,
            cols: nc,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Square matrix from integer entries, row major.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| S::from_int(x)).collect())
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

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<S> {
        self.row(r).to_vec()
    }

    pub fn rows_iter(&self) -> impl Iterator<Item = &[S]> {
        (0..self.rows).map(move |r| self.row(r))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    /// True when every entry is fixed by conjugation.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|x| x.is_real())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x.conj()).collect(),
        }
    }

    pub fn conj_transpose(&self) -> Self {
        self.transpose().conj()
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, s: &S) -> Self {
        self.map(|x| x * s)
    }

    pub fn scale_rat(&self, r: &Rat) -> Self {
        self.map(|x| x.scale(r))
    }

    pub fn trace(&self) -> S {
        assert!(self.is_square());
        let mut t = S::zero();
        for i in 0..self.rows {
            t += &self[(i, i)];
        }
        t
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(self.cols, v.len(), "dimension mismatch");
        (0..self.rows)
            .map(|r| {
                let mut acc = S::zero();
                for c in 0..self.cols {
                    if !self[(r, c)].is_zero() && !v[c].is_zero() {
                        acc += &(&self[(r, c)] * &v[c]);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.rows, other.rows);
        Self::from_fn(self.rows, self.cols + other.cols, |r, c| {
            if c < self.cols {
                self[(r, c)].clone()
            } else {
                other[(r, c - self.cols)].clone()
            }
        })
    }

    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols, "dimension mismatch");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Self {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |r, c| {
            self[(rows[r], cols[c])].clone()
        })
    }

    pub fn take_rows(&self, n: usize) -> Self {
        Self {
            rows: n,
            cols: self.cols,
            data: self.data[..n * self.cols].to_vec(),
        }
    }

    pub fn pow(&self, mut k: u32) -> Self {
        assert!(self.is_square());
        let mut acc = Self::identity(self.rows);
        let mut base = self.clone();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn commutator(a: &Self, b: &Self) -> Self {
        &(a * b) - &(b * a)
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0usize;
        for col in 0..self.cols {
            if lead >= self.rows {
                break;
            }
            let Some(piv) = (lead..self.rows).find(|&r| !self[(r, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(piv, lead);
            let inv = self[(lead, col)].inv();
            for c in col..self.cols {
                let v = &self[(lead, c)] * &inv;
                self[(lead, c)] = v;
            }
            for r in 0..self.rows {
                if r != lead && !self[(r, col)].is_zero() {
                    let f = self[(r, col)].clone();
                    for c in col..self.cols {
                        let v = &self[(r, c)] - &(&f * &self[(lead, c)]);
                        self[(r, c)] = v;
                    }
                }
            }
            pivots.push(col);
            lead += 1;
        }
        pivots
    }

    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let p = m.rref_in_place();
        (m, p)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Row basis of the right kernel `{x : A·x = 0}`.
    pub fn kernel(&self) -> Self {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![S::zero(); self.cols];
            v[f] = S::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, f)].clone();
            }
            rows.push(v);
        }
        if rows.is_empty() {
            Self::zeros(0, self.cols)
        } else {
            Self::from_rows(rows)
        }
    }

    /// One solution of `A·x = b`, if the system is consistent.
    pub fn solve(&self, b: &[S]) -> Option<Vec<S>> {
        assert_eq!(self.rows, b.len());
        let rhs = Matrix::from_fn(self.rows, 1, |r, _| b[r].clone());
        let aug = self.hstack(&rhs);
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // pivot in the augmented column: inconsistent
        }
        let mut x = vec![S::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r[(i, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let aug = self.hstack(&Self::identity(n));
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| i != p) {
            return Err(Error::Singular);
        }
        Ok(Self::from_fn(n, n, |i, j| r[(i, n + j)].clone()))
    }

    /// Smallest `k ≥ 0` with `A^k = 0`, or `None` if not nilpotent.
    pub fn nilpotency_index(&self) -> Option<u32> {
        assert!(self.is_square());
        let n = self.rows as u32;
        let mut p = Self::identity(self.rows);
        for k in 0..=n {
            if p.is_zero() {
                return Some(k);
            }
            p = &p * self;
        }
        if p.is_zero() {
            Some(n + 1)
        } else {
            None
        }
    }

    pub fn is_nilpotent(&self) -> bool {
        self.nilpotency_index().is_some()
    }

    /// Exact `exp(A)` for nilpotent `A` (the series terminates).
    pub fn exp_nilpotent(&self) -> Result<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let mut sum = Self::identity(n);
        let mut term = self.clone();
        let mut k: u64 = 1;
        while !term.is_zero() {
            if k > n as u64 + 1 {
                return Err(Error::NotNilpotent);
            }
            sum = &sum + &term;
            k += 1;
            term = &term * self;
            term = term.scale_rat(&Rat::new(1.into(), k.into()));
        }
        Ok(sum)
    }

    /// Exact `log(A)` for unipotent `A` (i.e. `A − I` nilpotent).
    pub fn log_unipotent(&self) -> Result<Self> {
        assert!(self.is_square());
        let n = self.rows;
        let nil = self - &Self::identity(n);
        let mut sum = Self::zeros(n, n);
        let mut pw = nil.clone();
        let mut k: u64 = 1;
        while !pw.is_zero() {
            if k > n as u64 + 1 {
                return Err(Error::NotNilpotent);
            }
            let coeff = Rat::new(
                if k % 2 == 1 { 1.into() } else { (-1).into() },
                k.into(),
            );
            sum = &sum + &pw.scale_rat(&coeff);
            pw = &pw * &nil;
            k += 1;
        }
        Ok(sum)
    }

    /// Round every entry to the nearest `f64` pair and promote back
    /// exactly. Caps coefficient growth in long pipelines; the result is
    /// an exact matrix within 2^{−52} relative of the input.
    pub fn round_f64(&self) -> Self {
        self.map(|x| {
            let (re, im) = x.to_f64();
            S::from_f64(re, im)
        })
    }

    /// Entry-wise rounding to about `bits` significant bits.
    pub fn round_bits(&self, bits: u32) -> Self {
        self.map(|x| x.round_bits(bits))
    }

    /// Frobenius norm in the standard coordinates, in floating point.
    pub fn frobenius_f64(&self) -> f64 {
        self.data
            .iter()
            .map(|x| crate::scalar::rat_to_f64(&x.norm_sqr()))
            .sum::<f64>()
            .sqrt()
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = S;
    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.map(|x| -x)
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if b.is_zero() {
                        continue;
                    }
                    out[(r, c)] += &(a * b);
                }
            }
        }
        out
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{}\t", self[(r, c)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_and_rank() {
        let m = Matrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        let (r, p) = m.rref();
        assert_eq!(p, vec![0, 1]);
        assert_eq!(r[(0, 2)], S::from_int(1));
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn kernel_solves() {
        let m = Matrix::from_int_rows(&[&[1, 2, 3], &[2, 4, 6]]);
        let k = m.kernel();
        assert_eq!(k.rows(), 2);
        for row in k.rows_iter() {
            let img = m.mul_vec(row);
            assert!(img.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_int_rows(&[&[1, 2], &[3, 5]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(2));
        let sing = Matrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn exp_log_nilpotent() {
        let n = Matrix::from_int_rows(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(n.nilpotency_index(), Some(3));
        let e = n.exp_nilpotent().unwrap();
        assert_eq!(e[(0, 2)], S::from_frac(1, 2));
        let back = e.log_unipotent().unwrap();
        assert_eq!(back, n);
        let invertible = Matrix::identity(3);
        assert!((&invertible).is_nilpotent() == false);
    }

    #[test]
    fn exp_additivity_for_commuting() {
        let n = Matrix::from_int_rows(&[&[0, 1], &[0, 0]]);
        let a = n.scale(&S::from_int(2)).exp_nilpotent().unwrap();
        let b = n.scale(&S::from_int(3)).exp_nilpotent().unwrap();
        let c = n.scale(&S::from_int(5)).exp_nilpotent().unwrap();
        assert_eq!(&a * &b, c);
    }
}
