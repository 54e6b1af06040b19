//! Nilpotent orbits and period maps in local normal form: orbit
//! evaluation, deck-invariant normal-form evaluation, the grading family
//! `t(y)`, and one-variable sl2 triples.

use crate::error::{Error, Result};
use crate::filtration::{DecFiltration, IncFiltration};
use crate::matrix::Matrix;
use crate::mhs::{delta_splitting, Bigrading, GradedPolarizedMhs};
use crate::scalar::{rat_to_f64, GaussianRational, Rat};
use crate::semisimple::{grades_filtration, semisimple_power};
use crate::weightfilt::{check_admissible_orbit, AdmissibilityReport};
use num_traits::ToPrimitive;

type S = GaussianRational;

/// An admissible nilpotent orbit `(e^{Σ z_j N_j}·F_∞, W)` together with
/// the classifying-space data of the underlying instance.
#[derive(Clone)]
pub struct NilpotentOrbit {
    /// Graded-polarized data with `F = F_∞` (usually a boundary point of
    /// the classifying space, so only structural validation applies).
    pub instance: GradedPolarizedMhs,
    pub nilpotents: Vec<Matrix>,
    /// Weight of a pure orbit, when the weight filtration has one step.
    pub pure_weight: Option<i64>,
}

impl NilpotentOrbit {
    pub fn new(
        instance: GradedPolarizedMhs,
        nilpotents: Vec<Matrix>,
    ) -> Result<Self> {
        if nilpotents.is_empty() {
            return Err(Error::InvalidInstance(
                "a nilpotent orbit needs at least one monodromy logarithm".into(),
            ));
        }
        let n = instance.dim();
        for op in &nilpotents {
            if op.rows() != n || op.cols() != n {
                return Err(Error::DimensionMismatch(
                    "monodromy logarithm has the wrong size".into(),
                ));
            }
        }
        let weights = instance.weight_filtration().weights();
        let pure_weight = if weights.len() == 1 {
            Some(weights[0])
        } else {
            None
        };
        Ok(Self {
            instance,
            nilpotents,
            pure_weight,
        })
    }

    pub fn variables(&self) -> usize {
        self.nilpotents.len()
    }

    pub fn dim(&self) -> usize {
        self.instance.dim()
    }

    /// Admissibility clauses and, on success, the relative weight
    /// filtration `M(ΣN_j, W)`.
    pub fn admissibility(&self) -> (AdmissibilityReport, Option<IncFiltration>) {
        check_admissible_orbit(
            &self.nilpotents,
            self.instance.hodge_filtration(),
            self.instance.weight_filtration(),
        )
    }

    /// `M(ΣN_j, W)`, failing when the orbit is not admissible.
    pub fn relative_filtration(&self) -> Result<IncFiltration> {
        let (report, m) = self.admissibility();
        m.ok_or_else(|| {
            Error::RelativeFiltrationMissing(report.failures.join("; "))
        })
    }

    /// `N(v) = Σ v_j N_j` for exact coefficients.
    pub fn n_of(&self, v: &[S]) -> Matrix {
        let n = self.dim();
        let mut acc = Matrix::zeros(n, n);
        for (c, op) in v.iter().zip(&self.nilpotents) {
            if !c.is_zero() {
                acc = &acc + &op.scale(c);
            }
        }
        acc
    }

    /// `e^{N(z)}·F_∞`, exact.
    pub fn eval(&self, z: &[S]) -> Result<DecFiltration> {
        if z.len() != self.variables() {
            return Err(Error::DimensionMismatch(
                "wrong number of orbit coordinates".into(),
            ));
        }
        let g = self.n_of(z).exp_nilpotent()?;
        Ok(self.instance.hodge_filtration().apply(&g))
    }

    /// The limit mixed Hodge structure pair `(F_∞, M)` as a bigrading.
    pub fn limit_bigrading(&self) -> Result<Bigrading> {
        let m = self.relative_filtration()?;
        Bigrading::compute(self.instance.hodge_filtration(), &m)
    }
}

/// Local normal form data: `Γ(s) = Σ_K s^K Γ_K` with `Γ(0) = 0`, every
/// coefficient in `q = ⊕_{a<0} g^{a,b}` of the limit mixed Hodge
/// structure, and `[N_j, Γ_K] = 0` whenever `K_j = 0`.
#[derive(Clone)]
pub struct LocalNormalForm {
    /// `(K, Γ_K)` with `K ≠ 0` an exponent vector of length `r`.
    pub terms: Vec<(Vec<u32>, Matrix)>,
}

impl LocalNormalForm {
    pub fn trivial() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn single(k: Vec<u32>, gamma: Matrix) -> Self {
        Self {
            terms: vec![(k, gamma)],
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.terms.iter().all(|(_, g)| g.is_zero())
    }

    /// Validate the normal-form invariants against an orbit.
    pub fn validate(&self, orbit: &NilpotentOrbit) -> Result<()> {
        let r = orbit.variables();
        let bigr = orbit.limit_bigrading()?;
        for (k, gamma) in &self.terms {
            if k.len() != r {
                return Err(Error::InvalidNormalForm(
                    "exponent vector has the wrong length".into(),
                ));
            }
            if k.iter().all(|&e| e == 0) {
                return Err(Error::InvalidNormalForm(
                    "normal form must vanish at s = 0".into(),
                ));
            }
            for ((a, _), _) in bigr.operator_components(gamma) {
                if a >= 0 {
                    return Err(Error::InvalidNormalForm(format!(
                        "coefficient at {k:?} has a component of nonnegative Hodge degree {a}"
                    )));
                }
            }
            // coefficients must be infinitesimal isometries of the graded
            // polarizations, or evaluation leaves the classifying space
            let w = orbit.instance.weight_filtration();
            if !w.preserved_by(gamma, 0) {
                return Err(Error::InvalidNormalForm(format!(
                    "coefficient at {k:?} does not preserve the weight filtration"
                )));
            }
            for wt in w.weights() {
                let piece = orbit.instance.graded_piece(wt).ok_or_else(|| {
                    Error::InvalidNormalForm("missing graded data".into())
                })?;
                let q_form = &orbit
                    .instance
                    .polarization(wt)
                    .ok_or_else(|| Error::InvalidNormalForm("missing polarization".into()))?
                    .form;
                let graded = piece.induced_operator(gamma).ok_or_else(|| {
                    Error::InvalidNormalForm("coefficient does not act on a graded piece".into())
                })?;
                let residual = &(&graded.transpose() * q_form) + &(q_form * &graded);
                if !residual.is_zero() {
                    return Err(Error::InvalidNormalForm(format!(
                        "coefficient at {k:?} is not an infinitesimal isometry at weight {wt}"
                    )));
                }
            }
            for (j, (&kj, nj)) in k.iter().zip(&orbit.nilpotents).enumerate() {
                if kj == 0 && !Matrix::commutator(nj, gamma).is_zero() {
                    return Err(Error::InvalidNormalForm(format!(
                        "[N_{}, Γ_K] ≠ 0 for K = {k:?} with K_{} = 0",
                        j + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// `Γ(s)` at exact coordinates.
    pub fn eval(&self, s: &[S]) -> Matrix {
        let n = self
            .terms
            .first()
            .map(|(_, g)| g.rows())
            .unwrap_or(s.len().max(1));
        let mut acc = Matrix::zeros(n, n);
        for (k, gamma) in &self.terms {
            let mut coeff = S::one();
            for (e, sj) in k.iter().zip(s) {
                for _ in 0..*e {
                    coeff = &coeff * sj;
                }
            }
            if !coeff.is_zero() {
                acc = &acc + &gamma.scale(&coeff);
            }
        }
        acc
    }

    /// `Γ_j`: the normal form with the first `j` variables set to zero.
    pub fn truncate(&self, j: usize) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| k[..j.min(k.len())].iter().all(|&e| e == 0))
                .cloned()
                .collect(),
        }
    }
}

/// Reduce `Re z` into `[0, 1)` by deck moves; returns the reduced point
/// and the integer deck exponents.
pub fn reduce_real_parts(z: &[S]) -> (Vec<S>, Vec<i64>) {
    let mut reduced = Vec::with_capacity(z.len());
    let mut decks = Vec::with_capacity(z.len());
    for zj in z {
        let fl = zj.re.floor();
        let k = fl.to_integer().to_i64().expect("deck exponent fits i64");
        reduced.push(S::new(&zj.re - &fl, zj.im.clone()));
        decks.push(k);
    }
    (reduced, decks)
}

/// `s_j = e^{2πi z_j}` evaluated in floating point and promoted exactly.
pub fn puncture_coordinates(z: &[S]) -> Vec<S> {
    z.iter()
        .map(|zj| {
            let x = rat_to_f64(&zj.re);
            let y = rat_to_f64(&zj.im);
            let r = (-2.0 * std::f64::consts::PI * y).exp();
            let ang = 2.0 * std::f64::consts::PI * x;
            S::from_f64(r * ang.cos(), r * ang.sin())
        })
        .collect()
}

/// Period-map evaluation in local normal form:
/// `F(z) = e^{N(z)} e^{Γ(s)} · F_∞` with `s = e^{2πi z}`, after reducing
/// `Re z` into `[0,1)` by deck moves. Deck invariance
/// `F(z + 1_j) = e^{N_j}·F(z)` is exact by construction.
pub fn lnf_eval(
    orbit: &NilpotentOrbit,
    lnf: &LocalNormalForm,
    z: &[S],
) -> Result<DecFiltration> {
    let (reduced, decks) = reduce_real_parts(z);
    let s = puncture_coordinates(&reduced);
    let gamma = if lnf.terms.is_empty() {
        Matrix::zeros(orbit.dim(), orbit.dim())
    } else {
        lnf.eval(&s)
    };
    let inner = &orbit.n_of(&reduced).exp_nilpotent()? * &gamma.exp_nilpotent()?;
    let deck_coeffs: Vec<S> = decks.iter().map(|&k| S::from_int(k)).collect();
    let deck = orbit.n_of(&deck_coeffs).exp_nilpotent()?;
    Ok(orbit
        .instance
        .hodge_filtration()
        .apply(&(&deck * &inner)))
}

/// The commuting semisimple data of the sl2 grading family
/// `t(y) = y_1^{−Y_0/2} Π_j y_j^{−H_j/2}`.
#[derive(Clone)]
pub struct Sl2Data {
    pub h_ops: Vec<Matrix>,
    pub y0: Matrix,
}

impl Sl2Data {
    pub fn validate(&self, w: &IncFiltration) -> Result<()> {
        if !self.y0.is_real() {
            return Err(Error::InvalidSl2Data("Y_0 is not real".into()));
        }
        if !grades_filtration(&self.y0, w) {
            return Err(Error::InvalidSl2Data(
                "Y_0 does not grade the weight filtration".into(),
            ));
        }
        for (i, h) in self.h_ops.iter().enumerate() {
            if !h.is_real() {
                return Err(Error::InvalidSl2Data(format!("H_{} is not real", i + 1)));
            }
            if !Matrix::commutator(&self.y0, h).is_zero() {
                return Err(Error::InvalidSl2Data(format!(
                    "[Y_0, H_{}] ≠ 0",
                    i + 1
                )));
            }
            for (j, h2) in self.h_ops.iter().enumerate().skip(i + 1) {
                if !Matrix::commutator(h, h2).is_zero() {
                    return Err(Error::InvalidSl2Data(format!(
                        "[H_{}, H_{}] ≠ 0",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(())
    }

    /// `t(y)`; scalar half-integer powers are evaluated in floating point
    /// and promoted exactly.
    pub fn t_of(&self, y: &[f64]) -> Result<Matrix> {
        if y.len() != self.h_ops.len() {
            return Err(Error::DimensionMismatch(
                "t(y) needs one coordinate per H_j".into(),
            ));
        }
        if y.iter().any(|&v| !(v > 0.0)) {
            return Err(Error::InvalidSl2Data("t(y) needs positive y".into()));
        }
        let minus_half = Rat::new((-1).into(), 2.into());
        let mut acc = semisimple_power(&self.y0, y[0], &minus_half)?;
        for (h, &yj) in self.h_ops.iter().zip(y) {
            acc = &acc * &semisimple_power(h, yj, &minus_half)?;
        }
        Ok(acc)
    }

    pub fn t_inverse_of(&self, y: &[f64]) -> Result<Matrix> {
        let half = Rat::new(1.into(), 2.into());
        let mut acc = semisimple_power(&self.y0, y[0], &half)?;
        for (h, &yj) in self.h_ops.iter().zip(y) {
            acc = &acc * &semisimple_power(h, yj, &half)?;
        }
        Ok(acc)
    }
}

/// Canonical `Y_0` in the two cases with a canonical recipe: pure weight
/// (scalar grading) and unipotent type (`M(N, W) = W`, where the grading
/// of the split limit works).
pub fn canonical_y0(orbit: &NilpotentOrbit) -> Result<Matrix> {
    let w = orbit.instance.weight_filtration();
    if let Some(k) = orbit.pure_weight {
        return Ok(Matrix::identity(orbit.dim()).scale(&S::from_int(k)));
    }
    let m = orbit.relative_filtration()?;
    if m == *w {
        let (_, split_f) = delta_splitting(orbit.instance.hodge_filtration(), &m)?;
        let bigr = Bigrading::compute(&split_f, &m)?;
        let y = bigr.grading();
        if !y.is_real() {
            return Err(Error::InvalidSl2Data(
                "split grading is not real".into(),
            ));
        }
        return Ok(y);
    }
    Err(Error::InvalidSl2Data(
        "no canonical Y_0 recipe for this orbit; supply sl2 data explicitly".into(),
    ))
}

/// One-variable sl2 triple through a real nilpotent `N` and the split
/// limit mixed Hodge structure `(F̂, W(N)[−k])`: returns `(H, N⁺)` with
/// `H` acting as `p+q−k` on `I^{p,q}`, `[H, N⁺] = 2N⁺`, `[N⁺, N] = H`.
pub fn sl2_triple_one_var(
    n_op: &Matrix,
    split_f: &DecFiltration,
    w_n: &IncFiltration,
    k: i64,
) -> Result<(Matrix, Matrix)> {
    if !n_op.is_real() {
        return Err(Error::NotReal);
    }
    let expected_w = crate::weightfilt::monodromy_weight_filtration(n_op, k)?;
    if expected_w != *w_n {
        return Err(Error::NoTriple(
            "weight filtration is not W(N)[−k]".into(),
        ));
    }
    let bigr = Bigrading::compute(split_f, w_n)?;
    if !bigr.is_r_split() {
        return Err(Error::NoTriple(
            "limit mixed Hodge structure is not split over ℝ".into(),
        ));
    }
    let h = bigr.weighted_operator(|p, q| S::from_int(p + q - k));
    if !h.is_real() {
        return Err(Error::NoTriple("grading operator is not real".into()));
    }
    let n = n_op.rows();
    let nn = n * n;
    // unknowns X_{ij}; equations [H,X] − 2X = 0 and [X,N] − H = 0
    let mut lhs = Matrix::zeros(2 * nn, nn);
    let mut rhs = vec![S::zero(); 2 * nn];
    let idx = |i: usize, j: usize| i * n + j;
    for r in 0..n {
        for c in 0..n {
            let row1 = idx(r, c);
            let row2 = nn + idx(r, c);
            for i in 0..n {
                for j in 0..n {
                    let col = idx(i, j);
                    let mut c1 = S::zero();
                    if j == c {
                        c1 += &h[(r, i)];
                    }
                    if i == r {
                        c1 -= &h[(j, c)];
                        if j == c {
                            c1 -= &S::from_int(2);
                        }
                    }
                    if !c1.is_zero() {
                        lhs[(row1, col)] = c1;
                    }
                    let mut c2 = S::zero();
                    if i == r {
                        c2 += &n_op[(j, c)];
                    }
                    if j == c {
                        c2 -= &n_op[(r, i)];
                    }
                    if !c2.is_zero() {
                        lhs[(row2, col)] = c2;
                    }
                }
            }
            rhs[row2] = h[(r, c)].clone();
        }
    }
    let sol = lhs
        .solve(&rhs)
        .ok_or_else(|| Error::NoTriple("bracket system is unsolvable".into()))?;
    if lhs.kernel().rows() != 0 {
        return Err(Error::NoTriple("bracket system is not determined".into()));
    }
    let n_plus = Matrix::from_fn(n, n, |i, j| sol[idx(i, j)].clone());
    // exact bracket verification
    let comm_h = Matrix::commutator(&h, &n_plus);
    if comm_h != n_plus.scale(&S::from_int(2)) {
        return Err(Error::NoTriple("[H, N⁺] ≠ 2N⁺".into()));
    }
    if Matrix::commutator(&n_plus, n_op) != h {
        return Err(Error::NoTriple("[N⁺, N] ≠ H".into()));
    }
    if Matrix::commutator(&h, n_op) != n_op.scale(&S::from_int(-2)) {
        return Err(Error::NoTriple("[H, N] ≠ −2N".into()));
    }
    Ok((h, n_plus))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::Subspace;
    use num_traits::Zero;

    fn e(n: usize, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(); n];
        v[i] = S::one();
        v
    }

    #[test]
    fn standard_sl2_triple() {
        // N: e0 ↦ e1 with H = diag(1, −1) gives N⁺: e1 ↦ e0
        let n = Matrix::from_int_rows(&[&[0, 0], &[1, 0]]);
        let w = crate::weightfilt::monodromy_weight_filtration(&n, 1).unwrap();
        let f = DecFiltration::from_pieces(
            2,
            vec![(0, Subspace::full(2)), (1, Subspace::line(&e(2, 0)))],
        )
        .unwrap();
        let (h, n_plus) = sl2_triple_one_var(&n, &f, &w, 1).unwrap();
        assert_eq!(h, Matrix::from_int_rows(&[&[1, 0], &[0, -1]]));
        assert_eq!(n_plus, Matrix::from_int_rows(&[&[0, 1], &[0, 0]]));
    }

    #[test]
    fn jordan_three_triple() {
        let n = Matrix::from_int_rows(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
        let w = crate::weightfilt::monodromy_weight_filtration(&n, 0).unwrap();
        // split Hodge–Tate filtration: F^1 = span e0, F^0 = span(e0,e1), F^{−1} = V
        let f = DecFiltration::from_pieces(
            3,
            vec![
                (1, Subspace::line(&e(3, 0))),
                (0, Subspace::from_vectors(3, &[e(3, 0), e(3, 1)])),
                (-1, Subspace::full(3)),
            ],
        )
        .unwrap();
        let (h, n_plus) = sl2_triple_one_var(&n, &f, &w, 0).unwrap();
        assert_eq!(h, Matrix::from_int_rows(&[&[2, 0, 0], &[0, 0, 0], &[0, 0, -2]]));
        // N⁺: e1 ↦ 2 e0, e2 ↦ 2 e1
        assert_eq!(
            n_plus,
            Matrix::from_int_rows(&[&[0, 2, 0], &[0, 0, 2], &[0, 0, 0]])
        );
    }

    #[test]
    fn deck_invariance_is_exact() {
        // unipotent two-variable data
        let inst = crate::gallery::unipotent_two_variable();
        let orbit = inst.0;
        let lnf = inst.1;
        let z = vec![
            S::new(Rat::new(1.into(), 3.into()), Rat::new(2.into(), 1.into())),
            S::new(Rat::new(1.into(), 7.into()), Rat::new(3.into(), 2.into())),
        ];
        let base = lnf_eval(&orbit, &lnf, &z).unwrap();
        for j in 0..2 {
            let mut z2 = z.clone();
            z2[j] = &z2[j] + &S::one();
            let moved = lnf_eval(&orbit, &lnf, &z2).unwrap();
            let deck = orbit.nilpotents[j].exp_nilpotent().unwrap();
            assert_eq!(moved, base.apply(&deck));
        }
    }

    #[test]
    fn lnf_reduces_to_orbit_when_trivial() {
        let (orbit, _) = crate::gallery::unipotent_two_variable();
        let z = vec![
            S::new(Rat::zero(), Rat::new(5.into(), 1.into())),
            S::new(Rat::zero(), Rat::new(3.into(), 1.into())),
        ];
        let lhs = lnf_eval(&orbit, &LocalNormalForm::trivial(), &z).unwrap();
        let rhs = orbit.eval(&z).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn t_of_ones_is_identity() {
        let (orbit, _) = crate::gallery::unipotent_two_variable();
        let sl2 = crate::gallery::unipotent_sl2(&orbit);
        sl2.validate(orbit.instance.weight_filtration()).unwrap();
        let t = sl2.t_of(&[1.0, 1.0]).unwrap();
        assert_eq!(t, Matrix::identity(orbit.dim()));
    }
}
