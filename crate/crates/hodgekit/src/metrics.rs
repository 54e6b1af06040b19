//! The mixed Hodge metric, the twisted metric, and a computable distance
//! surrogate on the classifying space.
//!
//! The metric makes the Deligne bigrading orthogonal and on `I^{p,q}` is
//! `h(u,v) = i^{p−q}⟨Gr u, conj(Gr v)⟩_{p+q}`. Gram matrices are exact;
//! norms, the twist `τ` (fractional powers) and path integrals are
//! evaluated in floating point. The distance surrogate is the length of
//! the straight chart path `t ↦ e^{tu}·F`, an upper bound for the
//! Riemannian distance in the chosen metric.

use crate::error::{Error, Result};
use crate::filtration::DecFiltration;
use crate::matrix::Matrix;
use crate::mhs::{delta_splitting, i_pow, sl2_splitting, Bigrading, GradedPolarizedMhs};
use crate::numeric::simpson;
use rayon::prelude::*;
use crate::scalar::{rat_to_f64, GaussianRational, Rat};
use num_traits::Signed;

type S = GaussianRational;

/// Which splitting operator feeds the twist function τ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwistSource {
    Delta,
    Epsilon,
}

/// Metric flavor for norms and distance surrogates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MetricMode {
    Standard,
    Twisted(TwistSource),
}

impl Default for MetricMode {
    fn default() -> Self {
        MetricMode::Standard
    }
}

/// The mixed Hodge metric at an instance, with optional twist.
///
/// The hermitian form is kept exactly in the adapted (bigraded) basis,
/// where it is block diagonal and positivity is decided by exact leading
/// minors. Norm evaluations go through rounded copies of the coordinate
/// changes; they carry only float tolerances anyway.
pub struct MetricContext {
    bigrading: Bigrading,
    /// Exact hermitian form in the adapted basis (block diagonal).
    h_ad: Matrix,
    /// Rounded adapted form, its inverse, and coordinate changes.
    h_r: Matrix,
    h_inv_r: Matrix,
    to_r: Matrix,
    from_r: Matrix,
    tau: f64,
    mode: MetricMode,
}

impl MetricContext {
    /// Standard metric; errors unless the graded positivity (and hence
    /// membership in `M` up to polarization data) holds.
    pub fn standard(inst: &GradedPolarizedMhs) -> Result<Self> {
        Self::build(inst, MetricMode::Standard)
    }

    pub fn twisted(inst: &GradedPolarizedMhs, source: TwistSource) -> Result<Self> {
        Self::build(inst, MetricMode::Twisted(source))
    }

    pub fn build(inst: &GradedPolarizedMhs, mode: MetricMode) -> Result<Self> {
        let bigrading = inst.bigrading()?;
        let n = inst.dim();
        // Hermitian form in the adapted basis: block diagonal over pieces.
        let mut h_ad = Matrix::zeros(n, n);
        let mut offset = 0usize;
        for ((p, q), piece) in bigrading.pieces() {
            let w = p + q;
            let graded = inst.graded_piece(w).ok_or_else(|| {
                Error::InvalidInstance(format!("no polarization at weight {w}"))
            })?;
            let form = &inst
                .polarization(w)
                .ok_or_else(|| Error::InvalidInstance(format!("no polarization at weight {w}")))?
                .form;
            let d = piece.dim();
            let mut coords = Vec::with_capacity(d);
            for row in piece.basis().rows_iter() {
                let c = graded.project(row).ok_or_else(|| {
                    Error::InvalidInstance("bigrading piece escapes its weight".into())
                })?;
                coords.push(c);
            }
            let cmat = Matrix::from_rows(coords);
            let block = (&(&cmat * form) * &cmat.conj_transpose()).scale(&i_pow(p - q));
            for r in 0..d {
                for c in 0..d {
                    h_ad[(offset + r, offset + c)] = block[(r, c)].clone();
                }
            }
            offset += d;
        }
        if h_ad != h_ad.conj_transpose() {
            return Err(Error::InvalidInstance("metric form is not hermitian".into()));
        }
        if !gram_positive(&h_ad) {
            return Err(Error::InvalidInstance(
                "mixed Hodge metric is not positive definite; instance is outside M".into(),
            ));
        }
        let h_r = h_ad.round_f64();
        let h_inv_r = h_r.inverse().map_err(|_| Error::Singular)?;
        let to_r = bigrading.to_adapted().round_f64();
        let from_r = bigrading.from_adapted().round_f64();
        let mut ctx = Self {
            bigrading,
            h_ad,
            h_r,
            h_inv_r,
            to_r,
            from_r,
            tau: 1.0,
            mode: MetricMode::Standard,
        };
        if let MetricMode::Twisted(source) = mode {
            ctx.tau = tau_with(inst, &ctx, source)?;
            ctx.mode = mode;
        }
        Ok(ctx)
    }

    /// Twisted context with a caller-supplied τ (used along short paths
    /// where τ is constant to float accuracy and need not be recomputed).
    pub fn with_fixed_tau(
        inst: &GradedPolarizedMhs,
        source: TwistSource,
        tau: f64,
    ) -> Result<Self> {
        let mut ctx = Self::build(inst, MetricMode::Standard)?;
        ctx.tau = tau;
        ctx.mode = MetricMode::Twisted(source);
        Ok(ctx)
    }

    pub fn bigrading(&self) -> &Bigrading {
        &self.bigrading
    }

    /// Exact hermitian form in the adapted basis (block diagonal).
    pub fn adapted_form(&self) -> &Matrix {
        &self.h_ad
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn mode(&self) -> MetricMode {
        self.mode
    }

    /// Exact `‖v‖²` in the standard metric.
    pub fn vector_norm_sq(&self, v: &[S]) -> Rat {
        let x = self.bigrading.to_adapted().mul_vec(v);
        let hx = self
            .h_ad
            .mul_vec(&x.iter().map(|c| c.conj()).collect::<Vec<_>>());
        let mut acc = S::zero();
        for (a, b) in x.iter().zip(&hx) {
            acc += &(a * b);
        }
        debug_assert!(acc.is_real());
        acc.re
    }

    /// Mode-aware norm of a vector (twisted metric scales `I^{p,q}` by
    /// `τ^{(p+q)/2}`).
    pub fn vector_norm(&self, v: &[S]) -> f64 {
        let x = self.to_r.mul_vec(v);
        let mut acc = 0f64;
        for (pq, range) in self.bigrading.piece_ranges() {
            let mut block = 0f64;
            for r in range.clone() {
                for c in range.clone() {
                    let (hre, him) = self.h_r[(r, c)].to_f64();
                    let (ar, ai) = x[r].to_f64();
                    let (br, bi) = x[c].to_f64();
                    // x_r · h · conj(x_c), real part
                    let (pr, pi) = (ar * hre - ai * him, ar * him + ai * hre);
                    block += pr * br + pi * bi;
                }
            }
            let scale = match self.mode {
                MetricMode::Standard => 1.0,
                MetricMode::Twisted(_) => self.tau.powi((pq.0 + pq.1) as i32),
            };
            acc += scale * block;
        }
        acc.max(0.0).sqrt()
    }

    /// Exact `‖A‖² = Tr(A·A*)` in the standard metric, the Frobenius norm
    /// in any h-unitary basis.
    pub fn endo_norm_sq(&self, a: &Matrix) -> Rat {
        let x = &(self.bigrading.to_adapted() * a) * self.bigrading.from_adapted();
        let h_inv = self.h_ad.inverse().expect("positive form is invertible");
        let adj = &(&h_inv * &x.conj_transpose()) * &self.h_ad;
        let t = (&x * &adj).trace();
        debug_assert!(t.is_real());
        t.re
    }

    /// Mode-aware endomorphism norm (rounded frame; float accuracy).
    pub fn endo_norm(&self, a: &Matrix) -> f64 {
        let x = (&(&self.to_r * a) * &self.from_r).round_f64();
        self.endo_norm_adapted(&x, |_, _| true)
    }

    /// Norm of the `q`-projection of a tangent generator: only the
    /// blocks strictly lowering the Hodge degree count.
    pub fn q_tangent_norm(&self, u: &Matrix) -> f64 {
        let x = (&(&self.to_r * u) * &self.from_r).round_f64();
        self.endo_norm_adapted(&x, |p_to, p_from| p_to < p_from)
    }

    /// `‖X‖² = Tr(X H⁻¹ X̄ᵀ H)` over the selected blocks, with the
    /// twisted per-block scaling when applicable. Blocks are orthogonal
    /// because `H` is block diagonal.
    fn endo_norm_adapted(&self, x_ad: &Matrix, keep: impl Fn(i64, i64) -> bool) -> f64 {
        let ranges = self.bigrading.piece_ranges();
        let mut total = 0f64;
        for (pq_to, range_to) in ranges {
            for (pq_from, range_from) in ranges {
                if !keep(pq_to.0, pq_from.0) {
                    continue;
                }
                let mut block = Matrix::zeros(range_to.len(), range_from.len());
                let mut nonzero = false;
                for (bi, r) in range_to.clone().enumerate() {
                    for (bj, c) in range_from.clone().enumerate() {
                        if !x_ad[(r, c)].is_zero() {
                            nonzero = true;
                        }
                        block[(bi, bj)] = x_ad[(r, c)].clone();
                    }
                }
                if !nonzero {
                    continue;
                }
                let rows_to: Vec<usize> = range_to.clone().collect();
                let rows_from: Vec<usize> = range_from.clone().collect();
                let h_to = self.h_r.submatrix(&rows_to, &rows_to);
                let h_from_inv = self
                    .h_inv_r
                    .submatrix(&rows_from, &rows_from);
                let adj = &(&h_from_inv * &block.conj_transpose()) * &h_to;
                let t = (&block * &adj).trace();
                let norm_sq = rat_to_f64(&t.re).max(0.0);
                let scale = match self.mode {
                    MetricMode::Standard => 1.0,
                    MetricMode::Twisted(_) => {
                        let deg = (pq_to.0 + pq_to.1) - (pq_from.0 + pq_from.1);
                        self.tau.powi(deg as i32)
                    }
                };
                total += scale * norm_sq;
            }
        }
        total.sqrt()
    }
}


fn gram_positive(g: &Matrix) -> bool {
    for k in 1..=g.rows() {
        let idx: Vec<usize> = (0..k).collect();
        let det = crate::mhs::determinant(&g.submatrix(&idx, &idx));
        if !det.is_real() || !det.re.is_positive() {
            return false;
        }
    }
    true
}

/// The splitting operator feeding τ: Deligne's δ or the sl2 ε.
pub fn twist_operator(inst: &GradedPolarizedMhs, source: TwistSource) -> Result<Matrix> {
    match source {
        TwistSource::Delta => {
            Ok(delta_splitting(inst.hodge_filtration(), inst.weight_filtration())?.0)
        }
        TwistSource::Epsilon => {
            Ok(sl2_splitting(inst.hodge_filtration(), inst.weight_filtration())?.0)
        }
    }
}

/// `τ(F) = 1 + Σ_{p,q<0} ‖s^{p,q}‖^{−2/(p+q)}`, with `s` the chosen
/// splitting operator and norms in the standard metric at `(F, W)`.
pub fn tau_of(inst: &GradedPolarizedMhs, source: TwistSource) -> Result<f64> {
    let ctx = MetricContext::standard(inst)?;
    tau_with(inst, &ctx, source)
}

fn tau_with(
    inst: &GradedPolarizedMhs,
    ctx: &MetricContext,
    source: TwistSource,
) -> Result<f64> {
    let op = match source {
        TwistSource::Delta => {
            crate::mhs::delta_splitting_with(
                &ctx.bigrading,
                inst.hodge_filtration(),
                inst.weight_filtration(),
            )?
            .0
        }
        TwistSource::Epsilon => {
            if !ctx.bigrading.lambda_concentrated_in_minus_one() {
                return Err(Error::UnsupportedLength(
                    "Λ^{−1,−1} has components besides (−1,−1); use the δ splitting".into(),
                ));
            }
            crate::mhs::delta_splitting_with(
                &ctx.bigrading,
                inst.hodge_filtration(),
                inst.weight_filtration(),
            )?
            .0
            .scale(&S::i())
        }
    };
    let mut tau = 1.0f64;
    for ((r, s), comp) in ctx.bigrading.operator_components(&op) {
        if r >= 0 || s >= 0 {
            return Err(Error::InvalidInstance(
                "splitting operator has components outside Λ^{−1,−1}".into(),
            ));
        }
        let norm = rat_to_f64(&ctx.endo_norm_sq(&comp)).sqrt();
        let exponent = -2.0 / (r + s) as f64;
        tau += norm.powf(exponent);
    }
    Ok(tau)
}

/// Chart coordinate of `target` around `base`, using the pivot-based
/// graded splitting of the base flag. Exact; errors with
/// [`Error::OutOfChart`] when `target` is not in the chart.
///
/// When `(base, W)` is a mixed Hodge structure, prefer
/// [`chart_log_adapted`], whose splitting is the Deligne one and which
/// is therefore equivariant under real `W`-preserving maps.
pub fn chart_log(base: &DecFiltration, target: &DecFiltration) -> Result<Matrix> {
    let mut degrees = base.jump_indices();
    degrees.sort_unstable();
    degrees.reverse();
    let mut blocks = Vec::new();
    for &a in &degrees {
        let lifts = base.at(a + 1).complement_in(base.at(a))?;
        blocks.push((a, lifts.rows_iter().map(|r| r.to_vec()).collect()));
    }
    chart_log_core(&blocks, base, target)
}

/// Chart coordinate of `target` around the filtration underlying a
/// Deligne bigrading; the result is the unique `u ∈ q = ⊕_{p<0} g^{p,q}`
/// with `e^u·F = target`.
pub fn chart_log_adapted(
    bigr: &Bigrading,
    base: &DecFiltration,
    target: &DecFiltration,
) -> Result<Matrix> {
    let mut degrees: Vec<i64> = bigr.bidegrees().iter().map(|(p, _)| *p).collect();
    degrees.sort_unstable();
    degrees.dedup();
    degrees.reverse();
    let mut blocks = Vec::new();
    for &a in &degrees {
        let piece = bigr.span_where(|(p, _)| p == a);
        blocks.push((a, piece.basis_vectors()));
    }
    chart_log_core(&blocks, base, target)
}

fn chart_log_core(
    blocks_in: &[(i64, Vec<Vec<S>>)],
    base: &DecFiltration,
    target: &DecFiltration,
) -> Result<Matrix> {
    let n = base.ambient_dim();
    if target.ambient_dim() != n {
        return Err(Error::DimensionMismatch("chart_log ambient".into()));
    }
    let mut rows: Vec<Vec<S>> = Vec::new();
    let mut blocks: Vec<(i64, std::ops::Range<usize>)> = Vec::new();
    for (a, brows) in blocks_in {
        let start = rows.len();
        rows.extend(brows.iter().cloned());
        blocks.push((*a, start..rows.len()));
    }
    if rows.len() != n {
        return Err(Error::OutOfChart);
    }
    let basis = Matrix::from_rows(rows);
    let from_ad = basis.transpose();
    let to_ad = from_ad.inverse().map_err(|_| Error::OutOfChart)?;

    let mut u_ad = Matrix::identity(n);
    for (i, (a, _)) in blocks.iter().enumerate() {
        let upper: usize = blocks[..=i].iter().map(|(_, r)| r.len()).sum();
        let t = target.at(*a);
        if t.dim() != upper {
            return Err(Error::OutOfChart);
        }
        // target basis in adapted coordinates
        let t_ad = t.basis() * &to_ad.transpose();
        let t_upper = t_ad.submatrix(
            &(0..t_ad.rows()).collect::<Vec<_>>(),
            &(0..upper).collect::<Vec<_>>(),
        );
        // for each unit vector of this block, find the combination of
        // target basis rows whose upper coordinates equal it
        for k in blocks[i].1.clone() {
            let mut unit = vec![S::zero(); upper];
            unit[k] = S::one();
            let Some(c) = t_upper.transpose().solve(&unit) else {
                return Err(Error::OutOfChart);
            };
            // full adapted coordinates of the lifted vector
            let mut col = vec![S::zero(); n];
            for (ci, crow) in c.iter().zip(t_ad.rows_iter()) {
                if ci.is_zero() {
                    continue;
                }
                for (cj, tj) in col.iter_mut().zip(crow) {
                    *cj += &(ci * tj);
                }
            }
            for r in 0..n {
                u_ad[(r, k)] = col[r].clone();
            }
        }
    }
    let u_std = &(&from_ad * &u_ad) * &to_ad;
    let u = u_std.log_unipotent().map_err(|_| Error::OutOfChart)?;
    // exact postcondition
    if base.apply(&u_std) != *target {
        return Err(Error::OutOfChart);
    }
    Ok(u)
}

/// Length of the chart path `γ(t) = e^{tu}·F₁` from `F₁` to `F₂`,
/// integrated by composite Simpson; an upper bound for the Riemannian
/// distance in the chosen metric mode.
pub fn distance_surrogate(
    inst1: &GradedPolarizedMhs,
    f2: &DecFiltration,
    mode: MetricMode,
    panels: usize,
) -> Result<f64> {
    let base_bigr = inst1.bigrading()?;
    let u = chart_log_adapted(&base_bigr, inst1.hodge_filtration(), f2)?.round_f64();
    if u.is_zero() {
        return Ok(0.0);
    }
    let n = inst1.dim();
    // powers of u for exponentials at rational times; u is rounded, so
    // truncate at the dimension rather than waiting for an exact zero
    let mut powers = vec![Matrix::identity(n)];
    for _ in 0..n {
        let next = &powers[powers.len() - 1].clone() * &u;
        if next.is_zero() {
            break;
        }
        powers.push(next.round_f64());
    }
    let panels = panels.max(2) + panels % 2;
    let exp_tu = |num: usize, den: usize| -> Matrix {
        let mut acc = Matrix::zeros(n, n);
        let mut factorial = Rat::new(1.into(), 1.into());
        for (k, pw) in powers.iter().enumerate() {
            if k > 0 {
                factorial = factorial * Rat::new((k as i64).into(), 1.into());
            }
            let tk = Rat::new(
                num.pow(k as u32).into(),
                den.pow(k as u32).into(),
            );
            acc = &acc + &pw.scale_rat(&(tk / factorial.clone()));
        }
        acc
    };
    // flag prefixes of the base point in descending Hodge degree; node
    // flags are rebuilt from rounded images of these rows, which keeps
    // every coefficient thin while preserving nesting by construction
    let mut degrees: Vec<i64> = base_bigr.bidegrees().iter().map(|(p, _)| *p).collect();
    degrees.sort_unstable();
    degrees.dedup();
    degrees.reverse();
    let mut adapted_rows: Vec<Vec<S>> = Vec::with_capacity(n);
    let mut profile: Vec<(i64, usize)> = Vec::new();
    for &p in &degrees {
        let piece = base_bigr.span_where(|(a, _)| a == p);
        adapted_rows.extend(piece.basis_vectors());
        profile.push((p, adapted_rows.len()));
    }
    let adapted = Matrix::from_rows(adapted_rows);
    let node_instance = |j: usize| -> Result<GradedPolarizedMhs> {
        let g = exp_tu(j, panels);
        let moved = (&adapted * &g.transpose()).round_f64();
        let mut pieces = Vec::with_capacity(profile.len());
        for &(p, upto) in &profile {
            pieces.push((p, crate::subspace::Subspace::from_span(&moved.take_rows(upto))));
        }
        inst1.with_hodge_filtration(DecFiltration::from_pieces(n, pieces)?)
    };
    // τ is constant along the path to float accuracy whenever the
    // endpoints agree; only then is the per-node δ recomputation skipped
    let fixed_tau = if let MetricMode::Twisted(source) = mode {
        let t0 = MetricContext::build(&node_instance(0)?, mode)?.tau();
        let t1 = MetricContext::build(&node_instance(panels)?, mode)?.tau();
        if (t0 - t1).abs() <= 1e-6 * t0.abs().max(1.0) {
            Some((source, 0.5 * (t0 + t1)))
        } else {
            None
        }
    } else {
        None
    };
    // nodes are independent; gather in index order
    let samples: Vec<f64> = (0..=panels)
        .into_par_iter()
        .map(|j| -> Result<f64> {
            let inst_t = node_instance(j)?;
            let ctx = match fixed_tau {
                Some((source, tau)) => MetricContext::with_fixed_tau(&inst_t, source, tau)?,
                None => MetricContext::build(&inst_t, mode)?,
            };
            // the tangent vector is the part of u outside the stabilizer
            Ok(ctx.q_tangent_norm(&u))
        })
        .collect::<Result<Vec<_>>>()?;
    let h = 1.0 / panels as f64;
    Ok(simpson(|t| {
        // samples are uniform; reuse them through index lookup
        let idx = (t / h).round() as usize;
        samples[idx.min(panels)]
    }, 0.0, 1.0, panels))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::filtration::IncFiltration;
    use crate::subspace::Subspace;
    use num_traits::Zero;
    use std::collections::BTreeMap;

    fn e(n: usize, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(); n];
        v[i] = S::one();
        v
    }

    fn ei(n: usize, re: usize, im: usize) -> Vec<S> {
        let mut v = vec![S::zero(); n];
        v[re] = S::one();
        v[im] = S::i();
        v
    }

    fn elliptic() -> GradedPolarizedMhs {
        let f = DecFiltration::from_pieces(
            2,
            vec![(0, Subspace::full(2)), (1, Subspace::line(&ei(2, 0, 1)))],
        )
        .unwrap();
        let w = IncFiltration::pure(2, 1);
        let mut h = BTreeMap::new();
        h.insert((1, 0), 1);
        h.insert((0, 1), 1);
        GradedPolarizedMhs::new(
            2,
            w,
            f,
            h,
            vec![crate::mhs::Polarization {
                weight: 1,
                lifts: Matrix::identity(2),
                form: Matrix::from_int_rows(&[&[0, 1], &[-1, 0]]),
            }],
        )
        .unwrap()
    }

    fn tate_extension() -> GradedPolarizedMhs {
        let f = DecFiltration::from_pieces(
            2,
            vec![(-1, Subspace::full(2)), (0, Subspace::line(&ei(2, 0, 1)))],
        )
        .unwrap();
        let w = IncFiltration::from_pieces(
            2,
            vec![(-2, Subspace::line(&e(2, 1))), (0, Subspace::full(2))],
        )
        .unwrap();
        let mut h = BTreeMap::new();
        h.insert((0, 0), 1);
        h.insert((-1, -1), 1);
        GradedPolarizedMhs::new(
            2,
            w,
            f,
            h,
            vec![
                crate::mhs::Polarization {
                    weight: 0,
                    lifts: Matrix::from_int_rows(&[&[1, 0]]),
                    form: Matrix::identity(1),
                },
                crate::mhs::Polarization {
                    weight: -2,
                    lifts: Matrix::from_int_rows(&[&[0, 1]]),
                    form: Matrix::identity(1),
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn elliptic_norm_value() {
        // h(e0 + i·e1, e0 + i·e1) = i·⟨v, v̄⟩ = 2
        let ctx = MetricContext::standard(&elliptic()).unwrap();
        let v = ei(2, 0, 1);
        assert_eq!(ctx.vector_norm_sq(&v), Rat::new(2.into(), 1.into()));
    }

    #[test]
    fn identity_endo_norm_is_sqrt_dim() {
        let ctx = MetricContext::standard(&elliptic()).unwrap();
        let id = Matrix::identity(2);
        assert_eq!(ctx.endo_norm_sq(&id), Rat::new(2.into(), 1.into()));
    }

    #[test]
    fn tate_extension_tau() {
        // only a (−1,−1) component: exponent is 1, τ = 1 + ‖δ‖
        let inst = tate_extension();
        let tau = tau_of(&inst, TwistSource::Delta).unwrap();
        let ctx = MetricContext::standard(&inst).unwrap();
        let (delta, _) =
            delta_splitting(inst.hodge_filtration(), inst.weight_filtration()).unwrap();
        let expect = 1.0 + rat_to_f64(&ctx.endo_norm_sq(&delta)).sqrt();
        assert!((tau - expect).abs() < 1e-14);
        assert!(tau > 1.0);
    }

    #[test]
    fn tau_of_split_is_one() {
        let inst = elliptic();
        assert_eq!(tau_of(&inst, TwistSource::Delta).unwrap(), 1.0);
        assert_eq!(tau_of(&inst, TwistSource::Epsilon).unwrap(), 1.0);
    }

    #[test]
    fn chart_log_round_trip() {
        let inst = tate_extension();
        let bigr = inst.bigrading().unwrap();
        // u: e0 ↦ (3/7)·e1 lies in g^{−1,−1} of the instance
        let mut u = Matrix::zeros(2, 2);
        u[(1, 0)] = S::from_frac(3, 7);
        let moved = inst
            .hodge_filtration()
            .apply(&u.exp_nilpotent().unwrap());
        let back = chart_log_adapted(&bigr, inst.hodge_filtration(), &moved).unwrap();
        assert_eq!(back, u);
        // identity case, both splittings
        let z = chart_log_adapted(&bigr, inst.hodge_filtration(), inst.hodge_filtration())
            .unwrap();
        assert!(z.is_zero());
        let z2 = chart_log(inst.hodge_filtration(), inst.hodge_filtration()).unwrap();
        assert!(z2.is_zero());
        // pivot-based chart also solves the flag equation, in its own
        // complement: e^{u'}·F = moved even though u' ≠ u
        let u2 = chart_log(inst.hodge_filtration(), &moved).unwrap();
        let again = inst
            .hodge_filtration()
            .apply(&u2.exp_nilpotent().unwrap());
        assert_eq!(again, moved);
    }

    #[test]
    fn chart_log_detects_out_of_chart() {
        let inst = tate_extension();
        // a flag with the wrong dimension profile
        let bad = DecFiltration::one_step(2, 0);
        assert!(matches!(
            chart_log(inst.hodge_filtration(), &bad),
            Err(Error::OutOfChart)
        ));
    }

    #[test]
    fn surrogate_zero_iff_equal() {
        let inst = tate_extension();
        let d = distance_surrogate(
            &inst,
            inst.hodge_filtration(),
            MetricMode::Standard,
            64,
        )
        .unwrap();
        assert_eq!(d, 0.0);
    }

    #[test]
    fn surrogate_first_order_matches_norm() {
        // pure weight-1: d(F, e^{εu}F) ≈ ‖u‖_F · ε for small ε and u ∈ q.
        // u maps I^{1,0} ∋ v = e0 + i·e1 to v̄ and kills v̄: pure g^{−1,1}.
        let inst = elliptic();
        let half = S::from_frac(1, 2);
        let mi_half = S::new(Rat::zero(), Rat::new((-1).into(), 2.into()));
        let u = Matrix::from_rows(vec![
            vec![half.clone(), mi_half.clone()],
            vec![mi_half, -half],
        ]);
        let eps = 1e-4;
        let step = u.scale(&S::from_f64(eps, 0.0));
        let moved = inst
            .hodge_filtration()
            .apply(&step.exp_nilpotent().unwrap());
        let d = distance_surrogate(&inst, &moved, MetricMode::Standard, 64).unwrap();
        let ctx = MetricContext::standard(&inst).unwrap();
        // u is its own q-projection here
        let bigr = inst.bigrading().unwrap();
        let comps = bigr.operator_components(&u);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].0, (-1, 1));
        let expect = rat_to_f64(&ctx.endo_norm_sq(&u)).sqrt() * eps;
        assert!(
            (d - expect).abs() <= 1e-6 * expect.max(1e-12),
            "d = {d}, first order = {expect}"
        );
    }

    #[test]
    fn surrogate_invariant_under_real_isometries() {
        let inst = elliptic();
        let mut n = Matrix::zeros(2, 2);
        n[(1, 0)] = S::one();
        let step = n.scale(&S::from_frac(1, 3));
        let moved = inst
            .hodge_filtration()
            .apply(&step.exp_nilpotent().unwrap());
        let d1 = distance_surrogate(&inst, &moved, MetricMode::Standard, 64).unwrap();
        // g ∈ Sp(2, ℝ) preserves the polarization
        let g = Matrix::from_int_rows(&[&[2, 1], &[1, 1]]);
        let inst_g = inst.translate(&g).unwrap();
        let moved_g = moved.apply(&g);
        let d2 = distance_surrogate(&inst_g, &moved_g, MetricMode::Standard, 64).unwrap();
        assert!((d1 - d2).abs() < 1e-9 * d1.max(1.0), "{d1} vs {d2}");
    }

    #[test]
    fn scaling_law_for_real_gradings() {
        // ‖y^{αY}v‖_{y^{αY}F} = y^{(p+q)α}·‖v‖_F on I^{p,q}
        let inst = tate_extension();
        let bigr = inst.bigrading().unwrap();
        let (delta, split_f) =
            delta_splitting(inst.hodge_filtration(), inst.weight_filtration()).unwrap();
        let _ = delta;
        let split = inst.with_hodge_filtration(split_f).unwrap();
        let y_op = split.bigrading().unwrap().grading();
        assert!(y_op.is_real());
        for &(y, alpha) in &[(2.0, (1i64, 2i64)), (10.0, (-1, 2)), (100.0, (1, 1)), (7.0, (-1, 1))] {
            let al = Rat::new(alpha.0.into(), alpha.1.into());
            let g = crate::semisimple::semisimple_power(&y_op, y, &al).unwrap();
            let moved = inst.translate(&g).unwrap();
            let ctx0 = MetricContext::standard(&inst).unwrap();
            let ctx1 = MetricContext::standard(&moved).unwrap();
            for ((p, q), piece) in bigr.pieces() {
                for v in piece.basis_vectors() {
                    let lhs = rat_to_f64(&ctx1.vector_norm_sq(&g.mul_vec(&v))).sqrt();
                    let scale = y.powf(((p + q) as f64) * rat_to_f64(&al));
                    let rhs = scale * rat_to_f64(&ctx0.vector_norm_sq(&v)).sqrt();
                    assert!(
                        (lhs - rhs).abs() <= 1e-10 * rhs.abs().max(1e-30),
                        "p={p} q={q} y={y} α={al}: {lhs} vs {rhs}"
                    );
                }
            }
        }
    }

    #[test]
    fn twisting_factor_identity() {
        // τ(y^{−Y/2}·F) = 1 + y(τ(F) − 1) for a real grading Y of W
        let inst = tate_extension();
        let (_, split_f) =
            delta_splitting(inst.hodge_filtration(), inst.weight_filtration()).unwrap();
        let y_op = inst
            .with_hodge_filtration(split_f)
            .unwrap()
            .bigrading()
            .unwrap()
            .grading();
        let tau0 = tau_of(&inst, TwistSource::Delta).unwrap();
        for &y in &[2.0f64, 10.0, 100.0] {
            let g = crate::semisimple::semisimple_power(
                &y_op,
                y,
                &Rat::new((-1).into(), 2.into()),
            )
            .unwrap();
            let moved = inst.translate(&g).unwrap();
            let tau1 = tau_of(&moved, TwistSource::Delta).unwrap();
            let expect = 1.0 + y * (tau0 - 1.0);
            assert!(
                (tau1 - expect).abs() <= 1e-10 * expect,
                "y={y}: τ = {tau1}, expected {expect}"
            );
        }
    }
}
