//! Weight filtrations of nilpotent operators: the monodromy weight
//! filtration `W(N)` (shifted to any center), the relative weight
//! filtration `M(N, W)`, and admissibility checks for nilpotent orbits.
//!
//! `W(N)` is built from the closed kernels-of-powers formula
//! `M_k = Σ_j ker N^{j+1} ∩ im N^{j−k}` and the two defining axioms are
//! asserted afterwards. `M(N, W)` is built by descending induction on the
//! top weight, lifting primitive vectors of the top graded piece subject
//! to the depth condition `N^{j+1} p ∈ M_{b−j−2}`; when the lift system
//! is unsolvable the relative filtration does not exist and this is
//! reported, never patched.

use crate::error::{Error, Result};
use crate::filtration::{induced_graded_inc, DecFiltration, GradedPiece, IncFiltration};
use crate::matrix::Matrix;
use crate::mhs::Bigrading;
use crate::scalar::GaussianRational;
use crate::subspace::Subspace;

type S = GaussianRational;

/// Monodromy weight filtration of a real nilpotent operator, centered at
/// `center`: the unique increasing filtration `M` with `N·M_l ⊆ M_{l−2}`
/// and `N^l : Gr_{center+l} ≅ Gr_{center−l}`.
pub fn monodromy_weight_filtration(n_op: &Matrix, center: i64) -> Result<IncFiltration> {
    if !n_op.is_real() {
        return Err(Error::NotReal);
    }
    let Some(m) = n_op.nilpotency_index() else {
        return Err(Error::NotNilpotent);
    };
    let dim = n_op.rows();
    let mut powers = vec![Matrix::identity(dim)];
    for _ in 0..=m {
        powers.push(&powers[powers.len() - 1].clone() * n_op);
    }
    let kernel_of = |j: usize| -> Subspace {
        Subspace::from_span(&powers[j.min(powers.len() - 1)].kernel())
    };
    let image_of = |j: usize| -> Subspace {
        if j >= powers.len() {
            Subspace::zero(dim)
        } else {
            Subspace::from_span(&powers[j].transpose())
        }
    };
    let reach = m as i64;
    let mut pieces = Vec::new();
    for k in -reach..=reach {
        let mut acc = Subspace::zero(dim);
        for j in 0..=(m as i64 + k.abs()) as usize {
            let shift = j as i64 - k;
            let im = image_of(shift.max(0) as usize);
            acc = acc.sum(&kernel_of(j + 1).intersect(&im)?)?;
        }
        pieces.push((k + center, acc));
    }
    let filt = IncFiltration::from_pieces(dim, pieces)?;
    assert_weight_axioms(&filt, n_op, center)?;
    Ok(filt)
}

fn assert_weight_axioms(m: &IncFiltration, n_op: &Matrix, center: i64) -> Result<()> {
    if !m.preserved_by(n_op, -2) {
        return Err(Error::InvalidInstance(
            "weight filtration does not satisfy N·M_l ⊆ M_{l−2}".into(),
        ));
    }
    let reach = m
        .jump_indices()
        .iter()
        .map(|k| (k - center).abs())
        .max()
        .unwrap_or(0);
    for l in 1..=reach {
        let up = center + l;
        let down = center - l;
        if m.graded_dim(up) != m.graded_dim(down) {
            return Err(Error::InvalidInstance(format!(
                "graded dimensions at {up} and {down} differ"
            )));
        }
        // N^l maps M_{c+l} onto M_{c−l} modulo M_{c−l−1}
        let pow = n_op.pow(l as u32);
        let image = m.at(up).apply(&pow).sum(m.at(down - 1))?;
        if image != *m.at(down) {
            return Err(Error::InvalidInstance(format!(
                "N^{l} does not induce an isomorphism Gr_{up} → Gr_{down}"
            )));
        }
    }
    Ok(())
}

/// Coordinates of a nested subspace: basis matrix plus conversion of
/// ambient vectors into basis coordinates.
struct SubCoords {
    basis: Matrix,
}

impl SubCoords {
    fn new(s: &Subspace) -> Self {
        Self {
            basis: s.basis().clone(),
        }
    }

    fn dim(&self) -> usize {
        self.basis.rows()
    }

    fn to_coords(&self, v: &[S]) -> Option<Vec<S>> {
        if self.dim() == 0 {
            return if v.iter().all(|x| x.is_zero()) {
                Some(vec![])
            } else {
                None
            };
        }
        self.basis.transpose().solve(v)
    }

    fn to_ambient(&self, x: &[S]) -> Vec<S> {
        let n = self.basis.cols();
        let mut v = vec![S::zero(); n];
        for (i, c) in x.iter().enumerate() {
            for (vj, bj) in v.iter_mut().zip(self.basis.row(i)) {
                *vj += &(c * bj);
            }
        }
        v
    }

    /// Matrix of an operator that maps the subspace into itself.
    fn restrict(&self, op: &Matrix) -> Option<Matrix> {
        let d = self.dim();
        let mut cols = Vec::with_capacity(d);
        for i in 0..d {
            let img = op.mul_vec(self.basis.row(i));
            cols.push(self.to_coords(&img)?);
        }
        Some(Matrix::from_fn(d, d, |r, c| cols[c][r].clone()))
    }

    fn subspace_to_coords(&self, s: &Subspace) -> Option<Subspace> {
        let mut rows = Vec::new();
        for r in s.basis().rows_iter() {
            rows.push(self.to_coords(r)?);
        }
        Some(Subspace::from_vectors(self.dim(), &rows))
    }

    fn subspace_to_ambient(&self, s: &Subspace) -> Subspace {
        let rows: Vec<Vec<S>> = s
            .basis()
            .rows_iter()
            .map(|r| self.to_ambient(r))
            .collect();
        Subspace::from_vectors(self.basis.cols(), &rows)
    }
}

/// Relative weight filtration `M(N, W)`: `N·M_l ⊆ M_{l−2}` and `M`
/// induces `W(Gr_k N)[−k]` on every `Gr^W_k`. Errors with
/// [`Error::RelativeFiltrationMissing`] when the inductive lift fails,
/// which is exactly the failure of admissibility.
pub fn relative_weight_filtration(n_op: &Matrix, w: &IncFiltration) -> Result<IncFiltration> {
    if !n_op.is_real() {
        return Err(Error::NotReal);
    }
    if !n_op.is_nilpotent() {
        return Err(Error::NotNilpotent);
    }
    if !w.preserved_by(n_op, 0) {
        return Err(Error::InvalidInstance(
            "operator does not preserve the weight filtration".into(),
        ));
    }
    let m = relative_inner(n_op, w)?;
    check_relative_axioms(&m, n_op, w)?;
    Ok(m)
}

fn relative_inner(n_op: &Matrix, w: &IncFiltration) -> Result<IncFiltration> {
    let dim = n_op.rows();
    let weights = w.weights();
    if dim == 0 || weights.is_empty() {
        return Ok(IncFiltration::pure(dim, 0));
    }
    if weights.len() == 1 {
        return monodromy_weight_filtration(n_op, weights[0]);
    }
    let b = *weights.last().unwrap();
    let below = w.at(b - 1).clone();
    // Recurse on V' = W_{b−1} in its own coordinates.
    let coords = SubCoords::new(&below);
    let n_restricted = coords.restrict(n_op).ok_or_else(|| {
        Error::InvalidInstance("operator does not preserve W_{b−1}".into())
    })?;
    let mut inner_pieces = Vec::new();
    for &k in &weights[..weights.len() - 1] {
        let img = coords
            .subspace_to_coords(w.at(k))
            .ok_or_else(|| Error::InvalidInstance("weight piece escapes W_{b−1}".into()))?;
        inner_pieces.push((k, img));
    }
    let w_inner = IncFiltration::from_pieces(coords.dim(), inner_pieces)?;
    let m_inner = relative_inner(&n_restricted, &w_inner)?;
    // Top graded piece and its monodromy filtration centered at b.
    let piece = GradedPiece::auto(w, b)?;
    let n_bar = piece.induced_operator(n_op).ok_or_else(|| {
        Error::InvalidInstance("operator does not descend to the top graded piece".into())
    })?;
    let m_bar = monodromy_weight_filtration(&n_bar, b)?;
    let nil = n_bar.nilpotency_index().unwrap_or(1).max(1) as i64;

    // Lift primitive ladders: for each primitive p̄ of weight b+j on the
    // top graded piece, find a lift p with N^{j+1}·p ∈ M'_{b−j−2}.
    let mut ladder: Vec<(i64, Vec<S>)> = Vec::new(); // (weight, vector)
    for j in (0..nil).rev() {
        let cj = Subspace::from_span(&n_bar.pow(j as u32 + 1).kernel())
            .intersect(m_bar.at(b + j))?;
        let lower = cj.intersect(m_bar.at(b + j - 1))?;
        let prim = lower.complement_in(&cj)?;
        if prim.rows() == 0 {
            continue;
        }
        let m_target = coords.subspace_to_ambient(m_inner.at(b - j - 2));
        let below_basis = below.basis();
        for pr in prim.rows_iter() {
            // ambient lift of the primitive vector
            let mut p0 = vec![S::zero(); dim];
            for (c, lift_row) in pr.iter().zip(piece.lifts.rows_iter()) {
                if c.is_zero() {
                    continue;
                }
                for (pj, lj) in p0.iter_mut().zip(lift_row) {
                    *pj += &(c * lj);
                }
            }
            let npow = n_op.pow(j as u32 + 1);
            let rhs: Vec<S> = npow.mul_vec(&p0).iter().map(|x| -x.clone()).collect();
            // solve N^{j+1}·(B'ᵀ x) − Mᵀ y = −N^{j+1} p0
            let lhs_a = &npow * &below_basis.transpose();
            let lhs = if m_target.dim() == 0 {
                lhs_a
            } else {
                lhs_a.hstack(&m_target.basis().transpose().map(|v| -v))
            };
            let sol = lhs.solve(&rhs).ok_or_else(|| {
                Error::RelativeFiltrationMissing(format!(
                    "no admissible lift for a primitive vector of weight {}",
                    b + j
                ))
            })?;
            let mut p = p0;
            for (i, c) in sol[..below_basis.rows()].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (pj, bj) in p.iter_mut().zip(below_basis.row(i)) {
                    *pj += &(c * bj);
                }
            }
            // ladder N^i p with weights b+j−2i
            let mut v = p;
            for i in 0..=j {
                ladder.push((b + j - 2 * i, v.clone()));
                v = n_op.mul_vec(&v);
            }
        }
    }
    // assemble M_l = M'_l + span{ladder vectors of weight ≤ l}
    let mut levels: Vec<i64> = m_inner
        .jump_indices()
        .into_iter()
        .chain(ladder.iter().map(|(wt, _)| *wt))
        .collect();
    levels.sort_unstable();
    levels.dedup();
    let mut pieces = Vec::new();
    for &l in &levels {
        let mut acc = coords.subspace_to_ambient(m_inner.at(l));
        let rows: Vec<Vec<S>> = ladder
            .iter()
            .filter(|(wt, _)| *wt <= l)
            .map(|(_, v)| v.clone())
            .collect();
        if !rows.is_empty() {
            acc = acc.sum(&Subspace::from_vectors(dim, &rows))?;
        }
        pieces.push((l, acc));
    }
    IncFiltration::from_pieces(dim, pieces)
}

/// Assert `N·M_l ⊆ M_{l−2}` and that `M` induces `W(Gr_k N)[−k]` on each
/// graded piece of `W`.
pub fn check_relative_axioms(
    m: &IncFiltration,
    n_op: &Matrix,
    w: &IncFiltration,
) -> Result<()> {
    if !m.preserved_by(n_op, -2) {
        return Err(Error::InvalidInstance(
            "relative filtration does not satisfy N·M_l ⊆ M_{l−2}".into(),
        ));
    }
    for k in w.weights() {
        let piece = GradedPiece::auto(w, k)?;
        let n_bar = piece.induced_operator(n_op).ok_or_else(|| {
            Error::InvalidInstance("operator does not descend to a graded piece".into())
        })?;
        let expected = monodromy_weight_filtration(&n_bar, k)?;
        let induced = induced_graded_inc(m, w, &piece)?;
        if induced != expected {
            return Err(Error::InvalidInstance(format!(
                "relative filtration does not induce W(Gr_{k} N)[−{k}] on Gr_{k}"
            )));
        }
    }
    Ok(())
}

/// Admissibility report for a pre-orbit `(N_1..N_r, F_∞, W)`.
#[derive(Clone, Debug)]
pub struct AdmissibilityReport {
    pub commuting: bool,
    pub horizontal: bool,
    pub relative_exists: bool,
    pub limit_is_mhs: bool,
    pub negative_morphisms: bool,
    pub failures: Vec<String>,
}

impl AdmissibilityReport {
    pub fn admissible(&self) -> bool {
        self.commuting
            && self.horizontal
            && self.relative_exists
            && self.limit_is_mhs
            && self.negative_morphisms
    }
}

/// Check the admissibility clauses of a nilpotent orbit: commutation,
/// horizontality, existence of `M(ΣN_j, W)`, the limit pair `(F_∞, M)`
/// being a mixed Hodge structure, and each `N_j` acting as a
/// `(−1,−1)`-morphism of it.
pub fn check_admissible_orbit(
    nilpotents: &[Matrix],
    f_inf: &DecFiltration,
    w: &IncFiltration,
) -> (AdmissibilityReport, Option<IncFiltration>) {
    let mut failures = Vec::new();
    let mut commuting = true;
    for (i, a) in nilpotents.iter().enumerate() {
        if !a.is_real() {
            commuting = false;
            failures.push(format!("N_{} is not real", i + 1));
        }
        if !a.is_nilpotent() {
            commuting = false;
            failures.push(format!("N_{} is not nilpotent", i + 1));
        }
        if !w.preserved_by(a, 0) {
            commuting = false;
            failures.push(format!("N_{} does not preserve W", i + 1));
        }
        for (j, b) in nilpotents.iter().enumerate().skip(i + 1) {
            if !Matrix::commutator(a, b).is_zero() {
                commuting = false;
                failures.push(format!("[N_{}, N_{}] ≠ 0", i + 1, j + 1));
            }
        }
    }
    let mut horizontal = true;
    for (i, a) in nilpotents.iter().enumerate() {
        if !f_inf.preserved_by(a, -1) {
            horizontal = false;
            failures.push(format!("N_{} F^p ⊄ F^{{p−1}}", i + 1));
        }
    }
    let dim = w.ambient_dim();
    let total = nilpotents
        .iter()
        .fold(Matrix::zeros(dim, dim), |acc, n| &acc + n);
    let relative = if commuting {
        match relative_weight_filtration(&total, w) {
            Ok(m) => Some(m),
            Err(e) => {
                failures.push(format!("M(ΣN_j, W): {e}"));
                None
            }
        }
    } else {
        None
    };
    let relative_exists = relative.is_some();
    let mut limit_is_mhs = false;
    let mut negative_morphisms = false;
    if let Some(m) = &relative {
        match Bigrading::compute(f_inf, m) {
            Ok(bigr) => {
                limit_is_mhs = true;
                negative_morphisms = true;
                for (i, a) in nilpotents.iter().enumerate() {
                    let comps = bigr.operator_components(a);
                    if !comps.iter().all(|(deg, _)| *deg == (-1, -1)) {
                        negative_morphisms = false;
                        failures.push(format!(
                            "N_{} is not a (−1,−1)-morphism of (F_∞, M)",
                            i + 1
                        ));
                    }
                }
            }
            Err(e) => {
                failures.push(format!("(F_∞, M): {e}"));
            }
        }
    }
    (
        AdmissibilityReport {
            commuting,
            horizontal,
            relative_exists,
            limit_is_mhs,
            negative_morphisms,
            failures,
        },
        relative,
    )
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
    fn zero_operator_filtration() {
        let n = Matrix::zeros(3, 3);
        let m = monodromy_weight_filtration(&n, 0).unwrap();
        assert!(m.at(-1).is_zero());
        assert!(m.at(0).is_full());
    }

    #[test]
    fn jordan_block_two() {
        // N e0 = e1
        let n = Matrix::from_int_rows(&[&[0, 0], &[1, 0]]);
        let m = monodromy_weight_filtration(&n, 0).unwrap();
        assert!(m.at(-2).is_zero());
        assert_eq!(*m.at(-1), Subspace::line(&e(2, 1)));
        assert_eq!(*m.at(0), Subspace::line(&e(2, 1)));
        assert!(m.at(1).is_full());
    }

    #[test]
    fn jordan_block_three() {
        // N e0 = e1, N e1 = e2
        let n = Matrix::from_int_rows(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        let m = monodromy_weight_filtration(&n, 0).unwrap();
        assert!(m.at(-3).is_zero());
        assert_eq!(*m.at(-2), Subspace::line(&e(3, 2)));
        // Gr dims are 1,0,1,0,1, so M_{−1} = M_{−2} and M_1 = M_0
        assert_eq!(*m.at(-1), Subspace::line(&e(3, 2)));
        let mid = Subspace::from_vectors(3, &[e(3, 1), e(3, 2)]);
        assert_eq!(*m.at(0), mid);
        assert_eq!(*m.at(1), mid);
        assert!(m.at(2).is_full());
        // graded dims 1,0,1,0,1 across weights −2..2
        let dims: Vec<usize> = (-2..=2).map(|k| m.graded_dim(k)).collect();
        assert_eq!(dims, vec![1, 0, 1, 0, 1]);
    }

    #[test]
    fn ad_equivariance() {
        let n = Matrix::from_int_rows(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        let g = Matrix::from_int_rows(&[&[1, 2, 0], &[0, 1, 3], &[1, 0, 1]]);
        let conj = &(&g * &n) * &g.inverse().unwrap();
        let m1 = monodromy_weight_filtration(&n, 1).unwrap();
        let m2 = monodromy_weight_filtration(&conj, 1).unwrap();
        for k in -2..=4 {
            assert_eq!(m1.at(k).apply(&g), *m2.at(k));
        }
    }

    #[test]
    fn relative_reduces_to_monodromy_for_pure_weight() {
        let n = Matrix::from_int_rows(&[&[0, 0], &[1, 0]]);
        let w = IncFiltration::pure(2, 5);
        let m = relative_weight_filtration(&n, &w).unwrap();
        let expect = monodromy_weight_filtration(&n, 5).unwrap();
        assert_eq!(m, expect);
    }

    #[test]
    fn relative_of_zero_is_w() {
        let w = IncFiltration::from_pieces(
            2,
            vec![(-2, Subspace::line(&e(2, 1))), (0, Subspace::full(2))],
        )
        .unwrap();
        let m = relative_weight_filtration(&Matrix::zeros(2, 2), &w).unwrap();
        assert_eq!(m, w);
    }

    #[test]
    fn relative_filtration_for_limit_orbit_data() {
        // four-dimensional example: W has weights 0 and −2,
        // N: e0 ↦ e2, e1 ↦ e2, e2 ↦ e3, e3 ↦ 0
        let n = Matrix::from_int_rows(&[
            &[0, 0, 0, 0],
            &[0, 0, 0, 0],
            &[1, 1, 0, 0],
            &[0, 0, 1, 0],
        ]);
        let w = IncFiltration::from_pieces(
            4,
            vec![
                (-2, Subspace::from_vectors(4, &[e(4, 1), e(4, 2), e(4, 3)])),
                (0, Subspace::full(4)),
            ],
        )
        .unwrap();
        let m = relative_weight_filtration(&n, &w).unwrap();
        assert!(m.at(-5).is_zero());
        assert_eq!(*m.at(-4), Subspace::line(&e(4, 3)));
        assert_eq!(*m.at(-3), Subspace::line(&e(4, 3)));
        let mid = Subspace::from_vectors(4, &[e(4, 2), e(4, 3)]);
        assert_eq!(*m.at(-2), mid);
        assert_eq!(*m.at(-1), mid);
        assert!(m.at(0).is_full());
    }

    #[test]
    fn relative_filtration_can_fail() {
        // N drops the weight by exactly 1: no relative filtration
        let n = Matrix::from_int_rows(&[&[0, 0], &[1, 0]]);
        let w = IncFiltration::from_pieces(
            2,
            vec![(-1, Subspace::line(&e(2, 1))), (0, Subspace::full(2))],
        )
        .unwrap();
        match relative_weight_filtration(&n, &w) {
            Err(Error::RelativeFiltrationMissing(_)) => {}
            other => panic!("expected missing relative filtration, got {other:?}"),
        }
    }

    #[test]
    fn admissibility_of_limit_orbit_data() {
        let n = Matrix::from_int_rows(&[
            &[0, 0, 0, 0],
            &[0, 0, 0, 0],
            &[1, 1, 0, 0],
            &[0, 0, 1, 0],
        ]);
        let w = IncFiltration::from_pieces(
            4,
            vec![
                (-2, Subspace::from_vectors(4, &[e(4, 1), e(4, 2), e(4, 3)])),
                (0, Subspace::full(4)),
            ],
        )
        .unwrap();
        let f = DecFiltration::from_pieces(
            4,
            vec![
                (0, Subspace::from_vectors(4, &[e(4, 0), e(4, 1)])),
                (-1, Subspace::from_vectors(4, &[e(4, 0), e(4, 1), e(4, 2)])),
                (-2, Subspace::full(4)),
            ],
        )
        .unwrap();
        let (report, m) = check_admissible_orbit(&[n.clone()], &f, &w);
        assert!(report.admissible(), "failures: {:?}", report.failures);
        let m = m.unwrap();
        assert_eq!(*m.at(-1), Subspace::from_vectors(4, &[e(4, 2), e(4, 3)]));

        // violating horizontality is reported by name
        let f_flat = DecFiltration::from_pieces(
            4,
            vec![(0, Subspace::from_vectors(4, &[e(4, 0), e(4, 1)])), (-2, Subspace::full(4))],
        )
        .unwrap();
        let (report, _) = check_admissible_orbit(&[n], &f_flat, &w);
        assert!(!report.horizontal);
        assert!(report.failures.iter().any(|s| s.contains("F^{p−1}")));
    }
}
