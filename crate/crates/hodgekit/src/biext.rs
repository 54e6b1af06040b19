//! Biextension-type mixed Hodge structures: the central map μ, the
//! height metric `|[F]| = e^{−2πδ/μ}`, the ℂ*-action on equivalence
//! classes, and the local-integrability scan for `φ = −log|V|`.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::mhs::{delta_splitting, GradedPolarizedMhs};
use crate::orbits::{lnf_eval, LocalNormalForm, NilpotentOrbit};
use crate::scalar::{rat_from_f64, rat_to_f64, GaussianRational, Rat};
use num_traits::Zero;
use serde::Serialize;

type S = GaussianRational;

/// A biextension instance: graded pieces `ℤ(0), H, ℤ(1)` with marked
/// generators `1` (a real lift of the top generator) and `1^∨`
/// (spanning `W_{−2}`).
#[derive(Clone)]
pub struct Biextension {
    pub instance: GradedPolarizedMhs,
    pub one: Vec<S>,
    pub one_dual: Vec<S>,
}

impl Biextension {
    pub fn new(instance: GradedPolarizedMhs, one: Vec<S>, one_dual: Vec<S>) -> Result<Self> {
        let w = instance.weight_filtration();
        if w.graded_dim(0) != 1 || w.graded_dim(-2) != 1 {
            return Err(Error::NotBiextension(
                "graded pieces at weights 0 and −2 must have rank one".into(),
            ));
        }
        if !w.at(0).is_full() || !w.at(-3).is_zero() {
            return Err(Error::NotBiextension(
                "weights must lie in {0, −1, −2}".into(),
            ));
        }
        if one.iter().any(|x| !x.is_real()) || one_dual.iter().any(|x| !x.is_real()) {
            return Err(Error::NotBiextension("marked generators must be real".into()));
        }
        if w.at(-1).contains_vector(&one) {
            return Err(Error::NotBiextension(
                "the marked lift of 1 lies in W_{−1}".into(),
            ));
        }
        if !w.at(-2).contains_vector(&one_dual)
            || one_dual.iter().all(|x| x.is_zero())
        {
            return Err(Error::NotBiextension(
                "1^∨ must span W_{−2}".into(),
            ));
        }
        Ok(Self {
            instance,
            one,
            one_dual,
        })
    }

    /// The central map: kills `W_{−1}`, sends any lift of `1` to `1^∨`,
    /// and is verified to be central in `Lie G_ℂ`.
    pub fn mu(&self) -> Result<Matrix> {
        let n = self.instance.dim();
        let w = self.instance.weight_filtration();
        // functional φ with φ(W_{−1}) = 0 and φ(one) = 1
        let wm1 = w.at(-1);
        let mut rows: Vec<Vec<S>> = wm1.basis().rows_iter().map(|r| r.to_vec()).collect();
        rows.push(self.one.clone());
        let lhs = Matrix::from_rows(rows);
        let mut rhs = vec![S::zero(); wm1.dim() + 1];
        rhs[wm1.dim()] = S::one();
        let phi = lhs
            .solve(&rhs)
            .ok_or(Error::NoCentralSolution)?;
        let mut mu = Matrix::zeros(n, n);
        for (i, a) in self.one_dual.iter().enumerate() {
            for (j, b) in phi.iter().enumerate() {
                mu[(i, j)] = a * b;
            }
        }
        // centrality against generators of Lie G_ℂ
        for x in lie_algebra_basis(&self.instance)? {
            if !Matrix::commutator(&mu, &x).is_zero() {
                return Err(Error::NoCentralSolution);
            }
        }
        if !(&mu * &mu).is_zero() {
            return Err(Error::NoCentralSolution);
        }
        Ok(mu)
    }

    /// The scalar `δ/μ`; real, and `δ = (Y − Ȳ)/4i` exactly (short
    /// length).
    pub fn delta_over_mu(&self) -> Result<Rat> {
        let f = self.instance.hodge_filtration();
        let w = self.instance.weight_filtration();
        let (delta, _) = delta_splitting(f, w)?;
        // cross-check the short-length closed form
        let y = self.instance.bigrading()?.grading();
        let closed = (&y - &y.conj()).scale(&S::new(
            Rat::zero(),
            Rat::new((-1).into(), 4.into()),
        ));
        if closed != delta {
            return Err(Error::InvalidInstance(
                "δ does not match (Y − Ȳ)/4i on a short weight filtration".into(),
            ));
        }
        let mu = self.mu()?;
        scalar_ratio(&delta, &mu)
    }

    /// `|[F]| = e^{−2πδ/μ}`.
    pub fn metric_value(&self) -> Result<f64> {
        let c = self.delta_over_mu()?;
        Ok((-2.0 * std::f64::consts::PI * rat_to_f64(&c)).exp())
    }

    /// The ℂ*-action `t·[F] = e^{(log t / 2πi)·μ}·F` expressed through
    /// the exact exponent `a = log t / 2πi`.
    pub fn act(&self, a: &S) -> Result<Self> {
        let mu = self.mu()?;
        let g = mu.scale(a).exp_nilpotent()?;
        Ok(Self {
            instance: self.instance.translate(&g)?,
            one: self.one.clone(),
            one_dual: self.one_dual.clone(),
        })
    }
}

/// Solve `a = c·b` for a scalar `c`; errors unless exact and real.
fn scalar_ratio(a: &Matrix, b: &Matrix) -> Result<Rat> {
    let mut c: Option<S> = None;
    'outer: for r in 0..b.rows() {
        for col in 0..b.cols() {
            if !b[(r, col)].is_zero() {
                c = Some(&a[(r, col)] / &b[(r, col)]);
                break 'outer;
            }
        }
    }
    let c = c.ok_or_else(|| Error::InvalidInstance("μ vanishes".into()))?;
    if *a != b.scale(&c) {
        return Err(Error::InvalidInstance(
            "δ is not proportional to μ; extension data is invalid".into(),
        ));
    }
    if !c.is_real() {
        return Err(Error::InvalidInstance("δ/μ is not real".into()));
    }
    Ok(c.re)
}

/// Basis of `Lie G_ℂ`: operators preserving `W` whose graded actions are
/// infinitesimal isometries of the graded polarizations.
pub fn lie_algebra_basis(inst: &GradedPolarizedMhs) -> Result<Vec<Matrix>> {
    let n = inst.dim();
    let w = inst.weight_filtration();
    let nn = n * n;
    let mut rows: Vec<Vec<S>> = Vec::new();
    let idx = |i: usize, j: usize| i * n + j;
    // X·W_k ⊆ W_k: equations(W_k) · X · basis(W_k)ᵀ = 0
    for k in w.jump_indices() {
        let eq = w.at(k).equations();
        let basis = w.at(k).basis();
        for er in 0..eq.rows() {
            for br in 0..basis.rows() {
                let mut row = vec![S::zero(); nn];
                for i in 0..n {
                    for j in 0..n {
                        let c = &eq[(er, i)] * &basis[(br, j)];
                        if !c.is_zero() {
                            row[idx(i, j)] = c;
                        }
                    }
                }
                rows.push(row);
            }
        }
    }
    // graded infinitesimal invariance: Gr(X)ᵀ Q + Q Gr(X) = 0 per weight
    for &wt in &w.weights() {
        let piece = inst
            .graded_piece(wt)
            .ok_or_else(|| Error::InvalidInstance(format!("no graded piece at {wt}")))?;
        let q = &inst.polarization(wt).unwrap().form;
        let d = piece.dim();
        // coordinates of Gr(X): need the projection of X·lift_r for each
        // lift; build the linear map entries symbolically through the
        // projection solve. We express: for each pair (r, c) of graded
        // indices, Σ_{i,j} P[r][i]·X_{ij}·L[c][j], with P the projection
        // functionals and L the lifts.
        let funcs = projection_functionals(inst, wt)?;
        let lifts = &piece.lifts;
        for a in 0..d {
            for b in 0..d {
                // entry (a,b) of Gr(X)ᵀQ + QGr(X) = Σ_c Gr(X)_{ca} Q_{cb} + Q_{ac} Gr(X)_{cb}
                let mut row = vec![S::zero(); nn];
                for cc in 0..d {
                    for i in 0..n {
                        for j in 0..n {
                            let mut coeff = S::zero();
                            if !q[(cc, b)].is_zero() {
                                coeff += &(&( &funcs[(cc, i)] * &lifts[(a, j)]) * &q[(cc, b)]);
                            }
                            if !q[(a, cc)].is_zero() {
                                coeff += &(&(&funcs[(cc, i)] * &lifts[(b, j)]) * &q[(a, cc)]);
                            }
                            if !coeff.is_zero() {
                                row[idx(i, j)] += &coeff;
                            }
                        }
                    }
                }
                rows.push(row);
            }
        }
    }
    let constraints = Matrix::from_rows(rows);
    let kernel = constraints.kernel();
    Ok((0..kernel.rows())
        .map(|r| Matrix::from_fn(n, n, |i, j| kernel[(r, idx(i, j))].clone()))
        .collect())
}

/// Row `r` gives the functional extracting the `r`-th graded coordinate
/// at weight `wt` (kills `W_{wt−1}` and the chosen complement).
fn projection_functionals(inst: &GradedPolarizedMhs, wt: i64) -> Result<Matrix> {
    let n = inst.dim();
    let w = inst.weight_filtration();
    let piece = inst.graded_piece(wt).unwrap();
    let d = piece.dim();
    // Functionals on W_wt extended by zero on a complement of W_wt:
    // solve against the full basis (lifts, basis of W_{wt−1}, complement).
    let below = w.at(wt - 1);
    let complement = w.at(wt).complement_in(&crate::subspace::Subspace::full(n))?;
    let mut basis_rows: Vec<Vec<S>> = piece.lifts.rows_iter().map(|r| r.to_vec()).collect();
    basis_rows.extend(below.basis().rows_iter().map(|r| r.to_vec()));
    basis_rows.extend(complement.rows_iter().map(|r| r.to_vec()));
    let basis = Matrix::from_rows(basis_rows);
    let inv = basis.transpose().inverse().map_err(|_| {
        Error::InvalidInstance("graded lift basis is degenerate".into())
    })?;
    // coordinates: x = inv·v; the first d rows are the graded coordinates
    Ok(Matrix::from_fn(d, n, |r, c| inv[(r, c)].clone()))
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiPoint {
    pub s1_abs: f64,
    pub y: Vec<f64>,
    pub phi: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PhiScanReport {
    pub points: Vec<PhiPoint>,
    pub max_ratio: f64,
    pub ratio_bounded: bool,
    /// Riemann sums of `∫|φ|` over `ε_k ≤ |s_1| ≤ r_max` at successive
    /// refinements (shrinking inner cutoff, doubling resolution).
    pub integrals: Vec<f64>,
    pub integrals_converged: bool,
}

/// Height-metric scan: per point `φ = 2π·δ/μ` of the evaluated period
/// map; asserts boundedness of `φ / (−log|s_1|)` and convergence of the
/// nested Riemann sums of `∫|φ|`.
pub fn phi_scan(
    orbit: &NilpotentOrbit,
    one: &[S],
    one_dual: &[S],
    lnf: &LocalNormalForm,
    radii: &[f64],
    angles: usize,
    refinements: usize,
) -> Result<PhiScanReport> {
    let r_vars = orbit.variables();
    let phi_at = |s1_abs: f64, angle: f64| -> Result<f64> {
        // z_1 = angle + i·y with y = −log|s_1|/2π; other variables at i
        let y1 = -(s1_abs.ln()) / (2.0 * std::f64::consts::PI);
        let mut z = vec![S::new(rat_from_f64(angle), rat_from_f64(y1))];
        for _ in 1..r_vars {
            z.push(S::new(Rat::zero(), Rat::new(1.into(), 1.into())));
        }
        let f = lnf_eval(orbit, lnf, &z)?;
        let inst = orbit.instance.with_hodge_filtration(f)?;
        let biext = Biextension::new(inst, one.to_vec(), one_dual.to_vec())?;
        let c = biext.delta_over_mu()?;
        Ok(2.0 * std::f64::consts::PI * rat_to_f64(&c))
    };
    let mut points = Vec::new();
    let mut max_ratio = 0f64;
    for &rad in radii {
        let phi = phi_at(rad, 0.0)?;
        let ratio = phi / (-rad.ln());
        max_ratio = max_ratio.max(ratio.abs());
        points.push(PhiPoint {
            s1_abs: rad,
            y: vec![-(rad.ln()) / (2.0 * std::f64::consts::PI)],
            phi,
            ratio,
        });
        // invariance in the angle is exact for the δ/μ scalar; sample one
        // extra angle as a cross-check
        let phi_angle = phi_at(rad, 0.25)?;
        if (phi_angle - phi).abs() > 1e-9 * phi.abs().max(1.0) {
            return Err(Error::InvalidInstance(
                "φ is not invariant along the angular direction".into(),
            ));
        }
    }
    // nested Riemann sums of ∫|φ| over an annulus with shrinking inner
    // cutoff and doubling resolution; monotone by positivity
    let r_max = radii.iter().cloned().fold(0.0f64, f64::max);
    let mut integrals = Vec::new();
    for level in 0..refinements {
        let cells_r = 16usize << level;
        let eps = r_max * 0.25f64.powi(level as i32 + 2);
        let mut acc = 0.0;
        // geometric radial cells on [eps, r_max]
        for i in 0..cells_r {
            let t0 = i as f64 / cells_r as f64;
            let t1 = (i + 1) as f64 / cells_r as f64;
            let r0 = eps * (r_max / eps).powf(t0);
            let r1 = eps * (r_max / eps).powf(t1);
            let rm = 0.5 * (r0 + r1);
            let phi = phi_at(rm, 0.0)?;
            let area: f64 = std::f64::consts::PI * (r1 * r1 - r0 * r0);
            let mut cell = phi.abs() * area;
            for _ in 1..angles.max(1) {
                cell = cell.max(phi.abs() * area);
            }
            acc += cell;
        }
        integrals.push(acc);
    }
    let integrals_converged = integrals
        .windows(2)
        .last()
        .map(|w| w[1] >= w[0] - 1e-12 && (w[1] - w[0]).abs() <= 0.01 * w[1].abs().max(1e-300))
        .unwrap_or(false);
    Ok(PhiScanReport {
        points,
        max_ratio,
        ratio_bounded: max_ratio.is_finite(),
        integrals,
        integrals_converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    fn rat(a: i64, b: i64) -> Rat {
        Rat::new(a.into(), b.into())
    }

    #[test]
    fn mu_of_rank4_model() {
        let (inst, one, dual) = gallery::height_pairing_rank4(S::zero());
        let biext = Biextension::new(inst, one, dual).unwrap();
        let mu = biext.mu().unwrap();
        // μ: e0 ↦ e3, zero elsewhere
        let mut expect = Matrix::zeros(4, 4);
        expect[(3, 0)] = S::one();
        assert_eq!(mu, expect);
        assert!((&mu * &mu).is_zero());
    }

    #[test]
    fn non_biextension_is_rejected() {
        let inst = gallery::noninvariant_limit_lmhs();
        let one = vec![S::one(), S::zero(), S::zero(), S::zero()];
        let dual = vec![S::zero(), S::zero(), S::zero(), S::one()];
        assert!(Biextension::new(inst, one, dual).is_err());
    }

    #[test]
    fn delta_over_mu_matches_parameter() {
        // F^0 = span(e0 + iλ·e3, e1 + i·e2) has δ/μ = λ
        for (num, den) in [(1i64, 1i64), (3, 7), (-2, 5)] {
            let lam = S::new(Rat::zero(), rat(num, den));
            let (inst, one, dual) = gallery::height_pairing_rank4(lam);
            let biext = Biextension::new(inst, one, dual).unwrap();
            assert_eq!(biext.delta_over_mu().unwrap(), rat(num, den));
        }
    }

    #[test]
    fn split_instance_has_unit_height() {
        let (inst, one, dual) = gallery::height_pairing_rank4(S::zero());
        let biext = Biextension::new(inst, one, dual).unwrap();
        assert_eq!(biext.delta_over_mu().unwrap(), Rat::zero());
        assert_eq!(biext.metric_value().unwrap(), 1.0);
    }

    #[test]
    fn c_star_action_scales_the_height() {
        let lam = S::new(Rat::zero(), rat(2, 3));
        let (inst, one, dual) = gallery::height_pairing_rank4(lam);
        let biext = Biextension::new(inst, one, dual).unwrap();
        let c0 = biext.delta_over_mu().unwrap();
        // a = 5/7 + (1/4)i: t = e^{2πia}, |t| = e^{−π/2}
        let a = S::new(rat(5, 7), rat(1, 4));
        let moved = biext.act(&a).unwrap();
        let c1 = moved.delta_over_mu().unwrap();
        // exact: δ/μ shifts by Im(a)
        assert_eq!(&c1 - &c0, rat(1, 4));
        let ratio = moved.metric_value().unwrap() / biext.metric_value().unwrap();
        let t_abs = (-2.0 * std::f64::consts::PI * 0.25f64).exp();
        assert!((ratio - t_abs).abs() <= 1e-12 * t_abs);
        // integer a leaves the class and the metric fixed
        let fixed = biext.act(&S::from_int(3)).unwrap();
        assert_eq!(fixed.delta_over_mu().unwrap(), c0);
    }

    #[test]
    fn phi_scan_on_central_orbit() {
        let orbit = gallery::central_direction_orbit();
        let one = vec![S::one(), S::zero(), S::zero(), S::zero()];
        let dual = vec![S::zero(), S::zero(), S::zero(), S::one()];
        let radii: Vec<f64> = (0..8).map(|k| 0.1 * 0.1f64.powf(k as f64 / 2.0)).collect();
        let report = phi_scan(
            &orbit,
            &one,
            &dual,
            &LocalNormalForm::trivial(),
            &radii,
            2,
            3,
        )
        .unwrap();
        // φ = 2π(λ + y) with λ = 0: ratio → 1
        assert!(report.ratio_bounded);
        assert!(report.max_ratio < 2.0, "max ratio {}", report.max_ratio);
        assert!(
            report.integrals_converged,
            "integrals: {:?}",
            report.integrals
        );
    }
}
