//! Linear subspaces of ℂⁿ over the exact scalar field.
//!
//! A subspace is stored as the reduced row echelon basis of its row span,
//! so equality of subspaces is equality of representations and every
//! lattice identity can be asserted exactly.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::GaussianRational;

type S = GaussianRational;

#[derive(Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    /// RREF basis, one vector per row; no zero rows.
    basis: Matrix,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Matrix::zeros(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Self {
            ambient,
            basis: Matrix::identity(ambient),
        }
    }

    /// Span of the rows of `m` (rows need not be independent).
    pub fn from_span(m: &Matrix) -> Self {
        let (rref, pivots) = m.rref();
        Self {
            ambient: m.cols(),
            basis: rref.take_rows(pivots.len()),
        }
    }

    pub fn from_vectors(ambient: usize, vectors: &[Vec<S>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        assert!(vectors.iter().all(|v| v.len() == ambient));
        Self::from_span(&Matrix::from_rows(vectors.to_vec()))
    }

    pub fn line(v: &[S]) -> Self {
        Self::from_vectors(v.len(), &[v.to_vec()])
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<S>> {
        self.basis.rows_iter().map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if self.ambient != other.ambient {
            return Err(Error::DimensionMismatch(format!(
                "subspaces of ambient dimension {} and {}",
                self.ambient, other.ambient
            )));
        }
        Ok(())
    }

    /// Smallest subspace containing both summands.
    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::from_span(&self.basis.vstack(&other.basis)))
    }

    /// Largest common subspace. Satisfies
    /// `dim a + dim b = dim(a+b) + dim(a∩b)` exactly.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.ambient));
        }
        // Coefficient pairs (x, y) with x·A = y·B span the intersection.
        let stacked = self.basis.vstack(&other.basis.map(|v| -v));
        let relations = stacked.transpose().kernel();
        let mut vectors = Vec::new();
        for rel in relations.rows_iter() {
            let coeffs = &rel[..self.dim()];
            let mut v = vec![S::zero(); self.ambient];
            for (i, c) in coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (vj, bj) in v.iter_mut().zip(self.basis.row(i)) {
                    *vj += &(c * bj);
                }
            }
            vectors.push(v);
        }
        Ok(Self::from_vectors(self.ambient, &vectors))
    }

    pub fn contains_vector(&self, v: &[S]) -> bool {
        assert_eq!(v.len(), self.ambient);
        // Reduce v against the RREF basis and test for a zero remainder.
        let mut w = v.to_vec();
        for row in self.basis.rows_iter() {
            let pivot = row.iter().position(|x| !x.is_zero()).unwrap();
            if !w[pivot].is_zero() {
                let f = w[pivot].clone();
                for (wj, rj) in w.iter_mut().zip(row) {
                    *wj -= &(&f * rj);
                }
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn contains(&self, other: &Self) -> bool {
        other
            .basis
            .rows_iter()
            .all(|row| self.contains_vector(row))
    }

    pub fn conj(&self) -> Self {
        Self::from_span(&self.basis.conj())
    }

    /// Image under an operator acting on column vectors.
    pub fn apply(&self, op: &Matrix) -> Self {
        if self.is_zero() {
            return Self::zero(op.rows());
        }
        Self::from_span(&(&self.basis * &op.transpose()))
    }

    /// Defining equations: a matrix `E` with `self = { v : E·v = 0 }`.
    pub fn equations(&self) -> Matrix {
        self.basis.kernel()
    }

    /// `{ x : op·x ∈ self }`.
    pub fn preimage(&self, op: &Matrix) -> Self {
        assert_eq!(op.rows(), self.ambient);
        let eq = self.equations();
        if eq.rows() == 0 {
            return Self::full(op.cols());
        }
        Self::from_span(&(&eq * op).kernel())
    }

    /// Rows of `larger` completing a basis of `self` to one of `larger`.
    /// The returned rows are independent modulo `self`.
    pub fn complement_in(&self, larger: &Self) -> Result<Matrix> {
        self.check_ambient(larger)?;
        if !larger.contains(self) {
            return Err(Error::DimensionMismatch(
                "complement_in: first subspace is not contained in the second".into(),
            ));
        }
        let mut acc = self.basis.clone();
        let mut lifts: Vec<Vec<S>> = Vec::new();
        for row in larger.basis.rows_iter() {
            let trial = Self::from_span(&acc.vstack(&Matrix::from_rows(vec![row.to_vec()])));
            if trial.dim() > acc.rows() {
                lifts.push(row.to_vec());
                acc = trial.basis;
            }
        }
        Ok(if lifts.is_empty() {
            Matrix::zeros(0, self.ambient)
        } else {
            Matrix::from_rows(lifts)
        })
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subspace(dim {} of {}) {:?}", self.dim(), self.ambient, self.basis)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(); n];
        v[i] = S::one();
        v
    }

    #[test]
    fn sum_of_coordinate_lines() {
        let a = Subspace::line(&e(3, 0));
        let b = Subspace::line(&e(3, 1));
        let s = a.sum(&b).unwrap();
        assert_eq!(s.dim(), 2);
        assert_eq!(a.sum(&a).unwrap(), a);
    }

    #[test]
    fn sum_with_dependent_vector() {
        // span{e1+e2} + span{e2} = span{e1, e2}
        let mut v = e(2, 0);
        v[1] = S::one();
        let a = Subspace::line(&v);
        let b = Subspace::line(&e(2, 1));
        let s = a.sum(&b).unwrap();
        assert_eq!(s, Subspace::full(2));
    }

    #[test]
    fn intersection_examples() {
        let ab = Subspace::from_vectors(3, &[e(3, 0), e(3, 1)]);
        let bc = Subspace::from_vectors(3, &[e(3, 1), e(3, 2)]);
        assert_eq!(ab.intersect(&bc).unwrap(), Subspace::line(&e(3, 1)));
        assert_eq!(
            ab.intersect(&Subspace::zero(3)).unwrap(),
            Subspace::zero(3)
        );
        // span{e1+e2} ∩ span{e1−e2} = 0 in dim 2
        let mut p = e(2, 0);
        p[1] = S::one();
        let mut m = e(2, 0);
        m[1] = -S::one();
        let cap = Subspace::line(&p).intersect(&Subspace::line(&m)).unwrap();
        assert!(cap.is_zero());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = Subspace::full(2);
        let b = Subspace::full(3);
        assert!(a.sum(&b).is_err());
        assert!(a.intersect(&b).is_err());
    }

    #[test]
    fn complement_gives_lifts() {
        let small = Subspace::line(&e(3, 2));
        let lifts = small.complement_in(&Subspace::full(3)).unwrap();
        assert_eq!(lifts.rows(), 2);
        let total = small
            .sum(&Subspace::from_span(&lifts))
            .unwrap();
        assert!(total.is_full());
    }

    #[test]
    fn preimage_of_kernel() {
        // op = projection onto e1 along e2 in dim 2
        let op = Matrix::from_int_rows(&[&[1, 0], &[0, 0]]);
        let pre = Subspace::zero(2).preimage(&op);
        assert_eq!(pre, Subspace::line(&e(2, 1)));
    }
}
