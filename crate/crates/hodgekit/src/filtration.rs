//! Increasing and decreasing filtrations with exact graded pieces.
//!
//! An increasing filtration `W` stores its jump indices only; `W_k` is
//! constant between jumps, zero below the first jump. A decreasing
//! filtration `F` is stored the same way with reversed monotonicity.
//! Graded pieces `Gr^W_k = W_k / W_{k−1}` are realized through explicit
//! lift bases so that induced filtrations have concrete coordinates.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::GaussianRational;
use crate::subspace::Subspace;

type S = GaussianRational;

/// Increasing filtration `… ⊆ W_k ⊆ W_{k+1} ⊆ …`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IncFiltration {
    ambient: usize,
    /// `(k, W_k)` at the jump indices, ascending, strictly increasing spaces.
    jumps: Vec<(i64, Subspace)>,
    zero: Subspace,
}

impl IncFiltration {
    /// Build from values `W_k = pieces[k]`; between supplied indices the
    /// filtration is constant. Nesting is checked.
    pub fn from_pieces(ambient: usize, pieces: Vec<(i64, Subspace)>) -> Result<Self> {
        let mut sorted = pieces;
        sorted.sort_by_key(|(k, _)| *k);
        let mut jumps: Vec<(i64, Subspace)> = Vec::new();
        for (k, s) in sorted {
            if s.ambient_dim() != ambient {
                return Err(Error::DimensionMismatch(
                    "filtration piece has wrong ambient dimension".into(),
                ));
            }
            if let Some((pk, prev)) = jumps.last() {
                if *pk == k {
                    if *prev != s {
                        return Err(Error::InvalidInstance(format!(
                            "two distinct subspaces supplied for filtration index {k}"
                        )));
                    }
                    continue;
                }
                if !s.contains(prev) {
                    return Err(Error::InvalidInstance(format!(
                        "increasing filtration not nested at index {k}"
                    )));
                }
                if s.dim() == prev.dim() {
                    continue; // no jump
                }
            } else if s.is_zero() {
                continue;
            }
            jumps.push((k, s));
        }
        Ok(Self {
            ambient,
            jumps,
            zero: Subspace::zero(ambient),
        })
    }

    /// Filtration of a pure weight: one jump to the full space at `k`.
    pub fn pure(ambient: usize, k: i64) -> Self {
        Self::from_pieces(ambient, vec![(k, Subspace::full(ambient))]).unwrap()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn at(&self, k: i64) -> &Subspace {
        match self.jumps.iter().rev().find(|(j, _)| *j <= k) {
            Some((_, s)) => s,
            None => &self.zero,
        }
    }

    /// Indices where the filtration grows.
    pub fn jump_indices(&self) -> Vec<i64> {
        self.jumps.iter().map(|(k, _)| *k).collect()
    }

    /// Largest `k` with `W_k = 0` (one below the first jump).
    pub fn lowest_zero(&self) -> Option<i64> {
        self.jumps.first().map(|(k, _)| k - 1)
    }

    /// Smallest `k` with `W_k` equal to the final piece.
    pub fn highest(&self) -> Option<i64> {
        self.jumps.last().map(|(k, _)| *k)
    }

    pub fn is_exhaustive(&self) -> bool {
        self.jumps.last().map_or(self.ambient == 0, |(_, s)| s.is_full())
    }

    /// Length `min{k : W_k = V} − max{k : W_k = 0}` of an exhaustive
    /// filtration.
    pub fn length(&self) -> i64 {
        assert!(self.is_exhaustive(), "length of a non-exhaustive filtration");
        match (self.highest(), self.lowest_zero()) {
            (Some(h), Some(l)) => h - l,
            _ => 0,
        }
    }

    pub fn graded_dim(&self, k: i64) -> usize {
        self.at(k).dim() - self.at(k - 1).dim()
    }

    /// Weights with a nonzero graded piece.
    pub fn weights(&self) -> Vec<i64> {
        self.jump_indices()
    }

    pub fn is_real(&self) -> bool {
        self.jumps.iter().all(|(_, s)| s.conj() == *s)
    }

    pub fn conj(&self) -> Self {
        Self {
            ambient: self.ambient,
            jumps: self
                .jumps
                .iter()
                .map(|(k, s)| (*k, s.conj()))
                .collect(),
            zero: self.zero.clone(),
        }
    }

    /// Image filtration `(g·W)_k = g(W_k)` under an invertible operator.
    pub fn apply(&self, op: &Matrix) -> Self {
        Self {
            ambient: op.rows(),
            jumps: self
                .jumps
                .iter()
                .map(|(k, s)| (*k, s.apply(op)))
                .collect(),
            zero: Subspace::zero(op.rows()),
        }
    }

    /// Shift: the result takes at `k` the old value at `k − delta`.
    pub fn shift(&self, delta: i64) -> Self {
        Self {
            ambient: self.ambient,
            jumps: self
                .jumps
                .iter()
                .map(|(k, s)| (*k + delta, s.clone()))
                .collect(),
            zero: self.zero.clone(),
        }
    }

    /// True when `op · W_k ⊆ W_{k+shift}` for all `k`.
    pub fn preserved_by(&self, op: &Matrix, shift: i64) -> bool {
        self.jumps
            .iter()
            .all(|(k, s)| self.at(*k + shift).contains(&s.apply(op)))
    }
}

/// Decreasing filtration `… ⊇ F^p ⊇ F^{p+1} ⊇ …`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DecFiltration {
    ambient: usize,
    /// `(p, F^p)` at jump indices, ascending in `p`, strictly decreasing
    /// spaces; `F` is constant on `(p_{i−1}, p_i]` and zero above the last.
    jumps: Vec<(i64, Subspace)>,
    zero: Subspace,
}

impl DecFiltration {
    pub fn from_pieces(ambient: usize, pieces: Vec<(i64, Subspace)>) -> Result<Self> {
        let mut sorted = pieces;
        sorted.sort_by_key(|(p, _)| *p);
        let mut jumps: Vec<(i64, Subspace)> = Vec::new();
        for (p, s) in sorted.into_iter().rev() {
            if s.ambient_dim() != ambient {
                return Err(Error::DimensionMismatch(
                    "filtration piece has wrong ambient dimension".into(),
                ));
            }
            if let Some((pk, prev)) = jumps.last() {
                if *pk == p {
                    if *prev != s {
                        return Err(Error::InvalidInstance(format!(
                            "two distinct subspaces supplied for filtration index {p}"
                        )));
                    }
                    continue;
                }
                if !s.contains(prev) {
                    return Err(Error::InvalidInstance(format!(
                        "decreasing filtration not nested at index {p}"
                    )));
                }
                if s.dim() == prev.dim() {
                    continue;
                }
            } else if s.is_zero() {
                continue;
            }
            jumps.push((p, s));
        }
        jumps.reverse();
        Ok(Self {
            ambient,
            jumps,
            zero: Subspace::zero(ambient),
        })
    }

    /// One-step filtration: `F^p = V` for `p ≤ at`, zero above.
    pub fn one_step(ambient: usize, at: i64) -> Self {
        Self::from_pieces(ambient, vec![(at, Subspace::full(ambient))]).unwrap()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn at(&self, p: i64) -> &Subspace {
        match self.jumps.iter().find(|(j, _)| *j >= p) {
            Some((_, s)) => s,
            None => &self.zero,
        }
    }

    pub fn jump_indices(&self) -> Vec<i64> {
        self.jumps.iter().map(|(p, _)| *p).collect()
    }

    /// Largest `p` with `F^p ≠ 0`.
    pub fn highest(&self) -> Option<i64> {
        self.jumps.last().map(|(p, _)| *p)
    }

    /// Largest `p` with `F^p` equal to the full first piece.
    pub fn lowest(&self) -> Option<i64> {
        self.jumps.first().map(|(p, _)| *p)
    }

    pub fn is_exhaustive(&self) -> bool {
        self.jumps.first().map_or(self.ambient == 0, |(_, s)| s.is_full())
    }

    pub fn graded_dim(&self, p: i64) -> usize {
        self.at(p).dim() - self.at(p + 1).dim()
    }

    pub fn conj(&self) -> Self {
        Self {
            ambient: self.ambient,
            jumps: self
                .jumps
                .iter()
                .map(|(p, s)| (*p, s.conj()))
                .collect(),
            zero: self.zero.clone(),
        }
    }

    pub fn apply(&self, op: &Matrix) -> Self {
        Self {
            ambient: op.rows(),
            jumps: self
                .jumps
                .iter()
                .map(|(p, s)| (*p, s.apply(op)))
                .collect(),
            zero: Subspace::zero(op.rows()),
        }
    }

    pub fn shift(&self, delta: i64) -> Self {
        Self {
            ambient: self.ambient,
            jumps: self
                .jumps
                .iter()
                .map(|(p, s)| (*p + delta, s.clone()))
                .collect(),
            zero: self.zero.clone(),
        }
    }

    /// True when `op · F^p ⊆ F^{p+shift}` for all `p` (horizontality is
    /// `shift = −1`).
    pub fn preserved_by(&self, op: &Matrix, shift: i64) -> bool {
        self.jumps
            .iter()
            .all(|(p, s)| self.at(*p + shift).contains(&s.apply(op)))
    }
}

/// A graded piece `Gr^W_k` realized by an explicit lift basis.
#[derive(Clone, Debug)]
pub struct GradedPiece {
    pub weight: i64,
    /// Rows: vectors of `W_k` projecting to a basis of `Gr^W_k`.
    pub lifts: Matrix,
    /// Basis of `W_{k−1}`, used to quotient out.
    below: Matrix,
}

impl GradedPiece {
    /// Canonical lifts: extend a basis of `W_{k−1}` inside `W_k`.
    pub fn auto(w: &IncFiltration, k: i64) -> Result<Self> {
        let lifts = w.at(k - 1).complement_in(w.at(k))?;
        Ok(Self {
            weight: k,
            lifts,
            below: w.at(k - 1).basis().clone(),
        })
    }

    /// User-declared lifts; validated to project to a basis of `Gr^W_k`.
    pub fn from_lifts(w: &IncFiltration, k: i64, lifts: Matrix) -> Result<Self> {
        let expected = w.graded_dim(k);
        if lifts.rows() != expected {
            return Err(Error::InvalidInstance(format!(
                "graded piece at weight {k} needs {expected} lift vectors, got {}",
                lifts.rows()
            )));
        }
        for row in lifts.rows_iter() {
            if !w.at(k).contains_vector(row) {
                return Err(Error::InvalidInstance(format!(
                    "lift vector at weight {k} is not inside W_{k}"
                )));
            }
        }
        let joint = w
            .at(k - 1)
            .sum(&Subspace::from_span(&lifts))
            .expect("ambient checked");
        if joint.dim() != w.at(k - 1).dim() + expected {
            return Err(Error::InvalidInstance(format!(
                "lift vectors at weight {k} are dependent modulo W_{}",
                k - 1
            )));
        }
        Ok(Self {
            weight: k,
            lifts,
            below: w.at(k - 1).basis().clone(),
        })
    }

    pub fn dim(&self) -> usize {
        self.lifts.rows()
    }

    /// Coordinates of `v ∈ W_k` in the lift basis, modulo `W_{k−1}`.
    pub fn project(&self, v: &[S]) -> Option<Vec<S>> {
        let d = self.dim();
        let cols = d + self.below.rows();
        if cols == 0 {
            return Some(vec![]);
        }
        // Solve liftsᵀ·x + belowᵀ·y = v and keep x.
        let lhs = if self.below.rows() == 0 {
            self.lifts.transpose()
        } else {
            self.lifts.transpose().hstack(&self.below.transpose())
        };
        lhs.solve(v).map(|sol| sol[..d].to_vec())
    }

    /// Project a subspace of `W_k` to its image in `Gr^W_k` coordinates.
    pub fn project_subspace(&self, s: &Subspace) -> Option<Subspace> {
        let mut rows = Vec::new();
        for r in s.basis().rows_iter() {
            rows.push(self.project(r)?);
        }
        Some(Subspace::from_vectors(self.dim(), &rows))
    }

    /// Matrix of the action induced on `Gr^W_k` by a `W`-preserving
    /// operator, in the lift basis.
    pub fn induced_operator(&self, op: &Matrix) -> Option<Matrix> {
        let d = self.dim();
        let mut cols = Vec::with_capacity(d);
        for r in 0..d {
            let img = op.mul_vec(self.lifts.row(r));
            cols.push(self.project(&img)?);
        }
        // cols[j] are the images of basis vectors: assemble column-wise.
        Some(Matrix::from_fn(d, d, |i, j| cols[j][i].clone()))
    }
}

/// Filtration induced by `F` on `Gr^W_k`: the image of `F^p ∩ W_k`.
pub fn induced_graded_dec(
    f: &DecFiltration,
    w: &IncFiltration,
    piece: &GradedPiece,
) -> Result<DecFiltration> {
    let k = piece.weight;
    let mut pieces = Vec::new();
    let mut ps = f.jump_indices();
    if let Some(lo) = f.lowest() {
        ps.push(lo - 1);
    }
    for p in ps {
        let cap = f.at(p).intersect(w.at(k))?;
        let img = piece.project_subspace(&cap).ok_or_else(|| {
            Error::InvalidInstance("graded projection failed".into())
        })?;
        pieces.push((p, img));
    }
    DecFiltration::from_pieces(piece.dim(), pieces)
}

/// Filtration induced by an increasing `M` on `Gr^W_k`.
pub fn induced_graded_inc(
    m: &IncFiltration,
    w: &IncFiltration,
    piece: &GradedPiece,
) -> Result<IncFiltration> {
    let k = piece.weight;
    let mut pieces = Vec::new();
    let mut ks = m.jump_indices();
    if let Some(h) = m.highest() {
        ks.push(h + 1);
    }
    for l in ks {
        let cap = m.at(l).intersect(w.at(k))?;
        let img = piece.project_subspace(&cap).ok_or_else(|| {
            Error::InvalidInstance("graded projection failed".into())
        })?;
        pieces.push((l, img));
    }
    IncFiltration::from_pieces(piece.dim(), pieces)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(); n];
        v[i] = S::one();
        v
    }

    fn full_flag_2() -> (DecFiltration, IncFiltration) {
        // F: F^0 = V, F^1 = span{e0}; W: W_{-1} = span{e1}, W_0 = V.
        let f = DecFiltration::from_pieces(
            2,
            vec![
                (0, Subspace::full(2)),
                (1, Subspace::line(&e(2, 0))),
            ],
        )
        .unwrap();
        let w = IncFiltration::from_pieces(
            2,
            vec![
                (-1, Subspace::line(&e(2, 1))),
                (0, Subspace::full(2)),
            ],
        )
        .unwrap();
        (f, w)
    }

    #[test]
    fn access_and_length() {
        let (_, w) = full_flag_2();
        assert!(w.at(-2).is_zero());
        assert_eq!(w.at(-1).dim(), 1);
        assert!(w.at(5).is_full());
        assert_eq!(w.length(), 2);
        assert_eq!(IncFiltration::pure(3, 7).length(), 1);
        assert_eq!(w.graded_dim(0), 1);
        assert_eq!(w.graded_dim(17), 0);
    }

    #[test]
    fn trivial_weight_returns_f_itself() {
        let (f, _) = full_flag_2();
        let w = IncFiltration::pure(2, 0);
        let piece = GradedPiece::auto(&w, 0).unwrap();
        let induced = induced_graded_dec(&f, &w, &piece).unwrap();
        // lift basis is the identity, so the induced filtration matches F
        assert_eq!(induced.at(1).dim(), 1);
        assert_eq!(induced.at(0).dim(), 2);
        assert_eq!(induced.at(2).dim(), 0);
    }

    #[test]
    fn full_flag_induced_on_graded() {
        let (f, w) = full_flag_2();
        // Gr^W_0 is one-dimensional; F induces a jump where
        // F^p ∩ W_0 ⊄ W_{−1}, i.e. the image of F^1 = span{e0} survives.
        let piece = GradedPiece::auto(&w, 0).unwrap();
        let induced = induced_graded_dec(&f, &w, &piece).unwrap();
        assert_eq!(induced.at(1).dim(), 1);
        assert_eq!(induced.at(2).dim(), 0);
        let piece_m1 = GradedPiece::auto(&w, -1).unwrap();
        let induced_m1 = induced_graded_dec(&f, &w, &piece_m1).unwrap();
        assert_eq!(induced_m1.at(0).dim(), 1);
        assert_eq!(induced_m1.at(1).dim(), 0);
    }

    #[test]
    fn induced_operator_on_graded() {
        let (_, w) = full_flag_2();
        let n = Matrix::from_int_rows(&[&[0, 0], &[1, 0]]); // e0 ↦ e1
        let piece = GradedPiece::auto(&w, -1).unwrap();
        let ind = piece.induced_operator(&n).unwrap();
        assert!(ind.is_zero()); // N(e1) = 0 on Gr_{-1}
    }
}
