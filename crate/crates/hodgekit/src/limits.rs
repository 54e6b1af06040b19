//! Reduced limit Hodge filtrations: the pure limit attached to the split
//! limit mixed Hodge structure, its mixed refinement through the
//! eigenspaces of a grading `Y^0`, the Satake boundary map for even-type
//! cones, and convergence measurements along sequences.

use crate::error::{Error, Result};
use crate::filtration::DecFiltration;
use crate::matrix::Matrix;
use crate::metrics::chart_log;
use crate::mhs::{delta_splitting, Bigrading};
use crate::orbits::NilpotentOrbit;
use crate::scalar::{rat_to_f64, GaussianRational};
use crate::semisimple::integer_eigenspaces;
use crate::subspace::Subspace;
use crate::weightfilt::monodromy_weight_filtration;
use serde::Serialize;

type S = GaussianRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum LimitKind {
    Pure,
    Mixed,
    Satake,
}

/// A reduced limit filtration in the compact dual.
#[derive(Clone)]
pub struct ReducedLimit {
    pub filtration: DecFiltration,
    pub kind: LimitKind,
}

/// Core of the pure reduced limit: from `(N_1..N_r, F)` of weight `k`,
/// split the limit mixed Hodge structure via δ and set
/// `Φ^p = ⊕_{s ≤ k−p} I^{r,s}`. The result is fixed by every operator
/// in the cone (asserted exactly).
pub fn reduced_limit_pure_data(
    nilpotents: &[Matrix],
    f: &DecFiltration,
    k: i64,
) -> Result<ReducedLimit> {
    let dim = f.ambient_dim();
    let total = nilpotents
        .iter()
        .fold(Matrix::zeros(dim, dim), |acc, n| &acc + n);
    let w = monodromy_weight_filtration(&total, k)?;
    for n in nilpotents {
        if !w.preserved_by(n, -2) {
            return Err(Error::InvalidInstance(
                "a cone generator does not lower W(ΣN) by two".into(),
            ));
        }
    }
    let (_, split_f) = delta_splitting(f, &w)?;
    let bigr = Bigrading::compute(&split_f, &w)?;
    let phi = limit_from_bigrading(&bigr, |_, s, _| s, k, dim)?;
    for n in nilpotents {
        if !phi
            .jump_indices()
            .iter()
            .all(|&p| phi.at(p).contains(&phi.at(p).apply(n)))
        {
            return Err(Error::InvalidInstance(
                "pure reduced limit is not fixed by the cone".into(),
            ));
        }
    }
    Ok(ReducedLimit {
        filtration: phi,
        kind: LimitKind::Pure,
    })
}

/// `Φ^p = ⊕_{selector ≤ k−p} I^{r,s}`-style assembly.
fn limit_from_bigrading(
    bigr: &Bigrading,
    selector: impl Fn(i64, i64, i64) -> i64,
    k: i64,
    dim: usize,
) -> Result<DecFiltration> {
    let mut ps: Vec<i64> = bigr
        .bidegrees()
        .iter()
        .flat_map(|&(r, s)| vec![k - selector(r, s, k), k - selector(r, s, k) + 1])
        .collect();
    ps.sort_unstable();
    ps.dedup();
    let mut pieces = Vec::new();
    for p in ps {
        let span = bigr.span_where(|(r, s)| selector(r, s, k) <= k - p);
        pieces.push((p, span));
    }
    DecFiltration::from_pieces(dim, pieces)
}

/// Pure reduced limit of an orbit (requires a one-step weight
/// filtration).
pub fn reduced_limit_pure(orbit: &NilpotentOrbit) -> Result<ReducedLimit> {
    let k = orbit.pure_weight.ok_or_else(|| {
        Error::InvalidInstance("pure reduced limit needs a pure-weight orbit".into())
    })?;
    reduced_limit_pure_data(&orbit.nilpotents, orbit.instance.hodge_filtration(), k)
}

/// Mixed reduced limit: with `(F̂_∞, W¹)` the split limit and `Y^0` a
/// grading of `W^0` preserving its bigrading,
/// `Φ^p = ⊕_{k, s≤k−p} I^{r,s} ∩ E_k(Y^0)`.
pub fn reduced_limit_mixed(orbit: &NilpotentOrbit, y0: &Matrix) -> Result<ReducedLimit> {
    let dim = orbit.dim();
    let w0 = orbit.instance.weight_filtration();
    let m = orbit.relative_filtration()?;
    let (_, split_f) = delta_splitting(orbit.instance.hodge_filtration(), &m)?;
    let bigr = Bigrading::compute(&split_f, &m)?;
    if !crate::semisimple::grades_filtration(y0, w0) {
        return Err(Error::InvalidSl2Data(
            "Y^0 does not grade the weight filtration".into(),
        ));
    }
    for ((r, s), _) in bigr.operator_components(y0) {
        if (r, s) != (0, 0) {
            return Err(Error::InvalidSl2Data(
                "Y^0 does not preserve the Deligne bigrading of the split limit".into(),
            ));
        }
    }
    let eig = integer_eigenspaces(y0)?;
    let mut ps: Vec<i64> = Vec::new();
    for &(k, _) in &eig {
        for &(_, s) in &bigr.bidegrees() {
            ps.push(k - s);
            ps.push(k - s + 1);
        }
    }
    ps.sort_unstable();
    ps.dedup();
    let mut pieces = Vec::new();
    for p in ps {
        let mut acc = Subspace::zero(dim);
        for (k, e) in &eig {
            let allowed = bigr.span_where(|(_, s)| s <= k - p);
            acc = acc.sum(&allowed.intersect(e)?)?;
        }
        pieces.push((p, acc));
    }
    Ok(ReducedLimit {
        filtration: DecFiltration::from_pieces(dim, pieces)?,
        kind: LimitKind::Mixed,
    })
}

/// Even-type test for a cone on a weight −1 structure: `N² = 0` on the
/// cone and `I^{p,−1−p} = 0` for odd `p`. Odd type is recognized and
/// rejected by name.
pub fn even_type_bigrading(
    nilpotents: &[Matrix],
    f: &DecFiltration,
) -> Result<(Bigrading, crate::filtration::IncFiltration)> {
    let dim = f.ambient_dim();
    for (i, a) in nilpotents.iter().enumerate() {
        for (j, b) in nilpotents.iter().enumerate() {
            let anti = &(a * b) + &(b * a);
            if !anti.is_zero() {
                return Err(Error::NotEvenType(format!(
                    "N_{}N_{} + N_{}N_{} ≠ 0, so N² ≠ 0 on the cone",
                    i + 1,
                    j + 1,
                    j + 1,
                    i + 1
                )));
            }
        }
    }
    let total = nilpotents
        .iter()
        .fold(Matrix::zeros(dim, dim), |acc, n| &acc + n);
    let w = monodromy_weight_filtration(&total, -1)?;
    let bigr = Bigrading::compute(f, &w)?;
    let mut saw_even = false;
    let mut saw_odd = false;
    for &(p, q) in &bigr.bidegrees() {
        if p + q == -1 {
            if p.rem_euclid(2) == 0 {
                saw_even = true;
            } else {
                saw_odd = true;
            }
        }
    }
    if saw_odd && !saw_even {
        return Err(Error::OddTypeUnsupported);
    }
    if saw_odd {
        return Err(Error::NotEvenType(
            "weight −1 pieces occur in both parities".into(),
        ));
    }
    Ok((bigr, w))
}

/// The Satake boundary point of an even-type nilpotent orbit:
/// `Ψ^0 = (⊕_{p even} I^{p,−1−p}) ⊕ W_{−2,ℂ}`, checked to be fixed by
/// the complexified cone and to satisfy `Ψ^0 ∩ conj(Ψ^0) = W_{−2,ℂ}`.
pub fn satake_map(nilpotents: &[Matrix], f: &DecFiltration) -> Result<ReducedLimit> {
    let dim = f.ambient_dim();
    let (bigr, w) = even_type_bigrading(nilpotents, f)?;
    let even_part = bigr.span_where(|(p, q)| p + q == -1 && p.rem_euclid(2) == 0);
    let psi0 = even_part.sum(w.at(-2))?;
    for (i, n) in nilpotents.iter().enumerate() {
        if !psi0.contains(&psi0.apply(n)) {
            return Err(Error::NotEvenType(format!(
                "Ψ is not fixed by N_{}",
                i + 1
            )));
        }
    }
    let meet = psi0.intersect(&psi0.conj())?;
    if meet != *w.at(-2) {
        return Err(Error::NotEvenType(
            "Ψ^0 ∩ conj(Ψ^0) ≠ W_{−2}".into(),
        ));
    }
    let filtration = DecFiltration::from_pieces(
        dim,
        vec![(-1, Subspace::full(dim)), (0, psi0)],
    )?;
    Ok(ReducedLimit {
        filtration,
        kind: LimitKind::Satake,
    })
}

/// The interior lift `F̃` of the Satake point for a split even-type
/// orbit: `F̃^0 = (⊕_{p even} I^{p,−p−1}) ⊕ (⊕_p I^{p,−p})`.
pub fn satake_tilde_f(nilpotents: &[Matrix], split_f: &DecFiltration) -> Result<DecFiltration> {
    let dim = split_f.ambient_dim();
    let (bigr, _) = even_type_bigrading(nilpotents, split_f)?;
    let part = bigr.span_where(|(p, q)| {
        (p + q == -1 && p.rem_euclid(2) == 0) || p + q == 0
    });
    DecFiltration::from_pieces(
        dim,
        vec![(-1, Subspace::full(dim)), (0, part)],
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct TrajectoryReport {
    pub distances: Vec<f64>,
    pub converged: bool,
    pub monotone_tail: bool,
    pub used_fallback: bool,
}

/// Chart distance of a sequence of filtrations to a candidate limit,
/// with a Plücker-coordinate fallback near the boundary of the chart.
pub fn sequence_limit(
    points: &[DecFiltration],
    candidate: Option<&DecFiltration>,
    tol: f64,
) -> TrajectoryReport {
    let Some(cand) = candidate.or_else(|| points.last()) else {
        return TrajectoryReport {
            distances: vec![],
            converged: false,
            monotone_tail: false,
            used_fallback: false,
        };
    };
    let mut used_fallback = false;
    let distances: Vec<f64> = points
        .iter()
        .map(|p| match chart_log(cand, p) {
            Ok(u) => u.frobenius_f64(),
            Err(_) => {
                used_fallback = true;
                pluecker_distance(cand, p)
            }
        })
        .collect();
    let last = *distances.last().unwrap_or(&f64::INFINITY);
    let tail_start = distances.len().saturating_sub(distances.len() / 3 + 1);
    let tail = &distances[tail_start..];
    let monotone_tail = tail.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-9) + 1e-15);
    TrajectoryReport {
        converged: last < tol && monotone_tail,
        distances,
        monotone_tail,
        used_fallback,
    }
}

/// Plücker distance between two flags with the same dimension profile:
/// the maximum over steps of the normalized wedge distance.
pub fn pluecker_distance(a: &DecFiltration, b: &DecFiltration) -> f64 {
    let mut ps = a.jump_indices();
    ps.extend(b.jump_indices());
    ps.sort_unstable();
    ps.dedup();
    let mut worst = 0f64;
    for p in ps {
        let sa = a.at(p);
        let sb = b.at(p);
        if sa.dim() != sb.dim() {
            return f64::INFINITY;
        }
        if sa.dim() == 0 {
            continue;
        }
        let va = pluecker_vector(sa);
        let vb = pluecker_vector(sb);
        let dot = hermitian_dot(&va, &vb);
        let na = hermitian_dot(&va, &va).0.sqrt();
        let nb = hermitian_dot(&vb, &vb).0.sqrt();
        let cosine = (dot.0 * dot.0 + dot.1 * dot.1).sqrt() / (na * nb);
        worst = worst.max((2.0 - 2.0 * cosine.min(1.0)).max(0.0).sqrt());
    }
    worst
}

fn hermitian_dot(a: &[(f64, f64)], b: &[(f64, f64)]) -> (f64, f64) {
    let mut re = 0.0;
    let mut im = 0.0;
    for ((ar, ai), (br, bi)) in a.iter().zip(b) {
        // a·conj(b)
        re += ar * br + ai * bi;
        im += ai * br - ar * bi;
    }
    (re, im)
}

/// Normalized vector of maximal minors of the basis matrix.
fn pluecker_vector(s: &Subspace) -> Vec<(f64, f64)> {
    let basis = s.basis();
    let k = basis.rows();
    let n = basis.cols();
    let mut combos: Vec<Vec<usize>> = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        combos.push(cur.clone());
        // next combination
        let mut i = k;
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            if cur[i] != i + n - k {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
            if i == 0 {
                cur = vec![];
                break;
            }
        }
        if cur.is_empty() {
            break;
        }
    }
    let rows: Vec<usize> = (0..k).collect();
    let mut out = Vec::with_capacity(combos.len());
    let mut scale = 0f64;
    let mut minors = Vec::with_capacity(combos.len());
    for c in &combos {
        let det = crate::mhs::determinant(&basis.submatrix(&rows, c));
        let (re, im) = det.to_f64();
        scale = scale.max(re.abs()).max(im.abs());
        minors.push(det);
    }
    let scale = if scale > 0.0 { scale } else { 1.0 };
    for det in minors {
        let (re, im) = det
            .scale(&crate::scalar::rat_from_f64(1.0 / scale))
            .to_f64();
        out.push((re, im));
    }
    out
}

/// Evaluate the split and untwisted trajectories of a mixed orbit along
/// a sequence: returns `(F̂(z_m), F̃(z_m) = e^{−x_m N}F̂(z_m))`.
pub fn mixed_trajectory(
    orbit: &NilpotentOrbit,
    zs: &[Vec<S>],
) -> Result<Vec<(DecFiltration, DecFiltration)>> {
    let mut out = Vec::with_capacity(zs.len());
    for z in zs {
        let f = orbit.eval(z)?;
        let (_, hat) = delta_splitting(&f, orbit.instance.weight_filtration())?;
        let xneg: Vec<S> = z.iter().map(|c| S::from_rat(-c.re.clone())).collect();
        let unwind = orbit.n_of(&xneg).exp_nilpotent()?;
        let tilde = hat.apply(&unwind);
        out.push((hat, tilde));
    }
    Ok(out)
}

/// Classification of a sampled sequence `y(m) ∈ ℝ^r_{>0}` as
/// `y(m) = T·v(m) + b(m)` with ratio-divergent `v` and convergent `b`;
/// a finite-sample heuristic that reports failure rather than guessing.
#[derive(Clone, Debug, Serialize)]
pub struct Sl2SequenceFit {
    pub rank: usize,
    pub t: Vec<Vec<f64>>,
    pub v_last: Vec<f64>,
    pub b_limit: Vec<f64>,
    pub residual: f64,
}

pub fn sl2_sequence_decompose(samples: &[Vec<f64>], d: usize) -> Result<Sl2SequenceFit> {
    let m = samples.len();
    if m < 4 {
        return Err(Error::NotClassified("too few samples".into()));
    }
    let r = samples[0].len();
    let tail = &samples[m / 2..];
    // group coordinates whose tail ratios converge to a finite nonzero
    // limit; ratios that diverge separate groups, anything else fails
    let mut groups: Vec<Vec<usize>> = Vec::new();
    'coords: for i in 0..r {
        for g in groups.iter_mut() {
            let j = g[0];
            match ratio_class(tail, i, j)? {
                RatioClass::Finite(_) => {
                    g.push(i);
                    continue 'coords;
                }
                RatioClass::Diverges | RatioClass::Vanishes => {}
            }
        }
        groups.push(vec![i]);
    }
    // order groups by decreasing growth
    groups.sort_by(|a, b| {
        let ya = tail.last().unwrap()[a[0]];
        let yb = tail.last().unwrap()[b[0]];
        yb.partial_cmp(&ya).unwrap()
    });
    if groups.len() != d {
        return Err(Error::NotClassified(format!(
            "found {} scale groups, candidate rank is {d}",
            groups.len()
        )));
    }
    // consecutive groups must have divergent ratios
    for k in 0..groups.len().saturating_sub(1) {
        match ratio_class(tail, groups[k][0], groups[k + 1][0])? {
            RatioClass::Diverges => {}
            _ => {
                return Err(Error::NotClassified(
                    "group scales do not separate".into(),
                ))
            }
        }
    }
    // T from tail ratios against the group representative
    let mut t = vec![vec![0f64; d]; r];
    for (k, g) in groups.iter().enumerate() {
        let rep = g[0];
        for &i in g {
            let vals: Vec<f64> = tail.iter().map(|y| y[i] / y[rep]).collect();
            t[i][k] = vals[vals.len() - 1];
        }
    }
    // b(m) = y(m) − T v(m) with v = representative coordinates
    let reps: Vec<usize> = groups.iter().map(|g| g[0]).collect();
    let b_of = |y: &Vec<f64>| -> Vec<f64> {
        (0..r)
            .map(|i| {
                let mut acc = y[i];
                for (k, &rep) in reps.iter().enumerate() {
                    acc -= t[i][k] * y[rep];
                }
                acc
            })
            .collect()
    };
    let bs: Vec<Vec<f64>> = samples.iter().map(b_of).collect();
    let scale = samples
        .last()
        .unwrap()
        .iter()
        .cloned()
        .fold(1.0f64, f64::max);
    let tail_bs = &bs[m - (m / 4).max(2)..];
    let mut residual = 0f64;
    for w in tail_bs.windows(2) {
        for i in 0..r {
            residual = residual.max((w[1][i] - w[0][i]).abs());
        }
    }
    if residual > 1e-6 * scale {
        return Err(Error::NotClassified(format!(
            "offset part does not converge (residual {residual:.3e})"
        )));
    }
    Ok(Sl2SequenceFit {
        rank: d,
        t,
        v_last: reps
            .iter()
            .map(|&rep| samples.last().unwrap()[rep])
            .collect(),
        b_limit: bs.last().unwrap().clone(),
        residual,
    })
}

enum RatioClass {
    Finite(f64),
    Diverges,
    Vanishes,
}

fn ratio_class(tail: &[Vec<f64>], i: usize, j: usize) -> Result<RatioClass> {
    let ratios: Vec<f64> = tail.iter().map(|y| y[i] / y[j]).collect();
    let last = *ratios.last().unwrap();
    let increasing = ratios.windows(2).all(|w| w[1] >= w[0] * 0.999);
    let decreasing = ratios.windows(2).all(|w| w[1] <= w[0] * 1.001);
    let spread = ratios
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    let rel = (spread.1 - spread.0) / last.abs().max(1e-300);
    if rel < 5e-2 && last.is_finite() && last.abs() > 1e-9 {
        return Ok(RatioClass::Finite(last));
    }
    if increasing && last > ratios[0] * 1.5 {
        return Ok(RatioClass::Diverges);
    }
    if decreasing && last < ratios[0] / 1.5 {
        return Ok(RatioClass::Vanishes);
    }
    Err(Error::NotClassified(format!(
        "ratio of coordinates {i} and {j} neither converges nor diverges"
    )))
}

/// Exact naive limit of `e^{iyN}·F` as `y → ∞` along a ray: computed by
/// clearing denominators in the top `y`-degree of the Plücker data —
/// implemented here as evaluation at a large exact `y` plus a
/// stabilization check at `4y`.
pub fn ray_limit_probe(
    orbit: &NilpotentOrbit,
    direction: &[S],
    y_probe: i64,
) -> Result<(DecFiltration, DecFiltration)> {
    let at = |y: i64| -> Result<DecFiltration> {
        let z: Vec<S> = direction
            .iter()
            .map(|d| d * &S::new(num_traits::Zero::zero(), crate::scalar::Rat::new(y.into(), 1.into())))
            .collect();
        orbit.eval(&z)
    };
    Ok((at(y_probe)?, at(4 * y_probe)?))
}

#[allow(unused_imports)]
use num_traits::Zero;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::scalar::Rat;

    fn e(n: usize, i: usize) -> Vec<S> {
        let mut v = vec![S::zero(); n];
        v[i] = S::one();
        v
    }

    #[test]
    fn hodge_tate_pure_limit() {
        // weight-2 Jordan ladder: Φ^p = ⊕_{r ≤ 2−p} I^{r,r}
        let (orbit, _) = gallery::weight_two_degeneration();
        let phi = reduced_limit_pure(&orbit).unwrap();
        // I^{2,2} = e0, I^{1,1} = e1, I^{0,0} = e2 ⟹ Φ^0 = span(e1, e2)…
        assert_eq!(
            *phi.filtration.at(0),
            Subspace::from_vectors(3, &[e(3, 1), e(3, 2)])
        );
        assert_eq!(*phi.filtration.at(1), Subspace::line(&e(3, 2)));
        // fixed by N
        let n = &orbit.nilpotents[0];
        for p in phi.filtration.jump_indices() {
            assert!(phi
                .filtration
                .at(p)
                .contains(&phi.filtration.at(p).apply(n)));
        }
    }

    #[test]
    fn elliptic_pure_limit_is_image_of_n() {
        let orbit = gallery::elliptic_degeneration();
        let phi = reduced_limit_pure(&orbit).unwrap();
        assert_eq!(*phi.filtration.at(1), Subspace::line(&e(2, 1)));
    }

    #[test]
    fn mixed_limit_of_noninvariant_example() {
        let orbit = gallery::noninvariant_limit_orbit();
        let sl2 = gallery::noninvariant_sl2();
        let phi = reduced_limit_mixed(&orbit, &sl2.y0).unwrap();
        // Φ^0 = ℂe0 ⊕ ℂe3, not invariant under N
        let expect = Subspace::from_vectors(4, &[e(4, 0), e(4, 3)]);
        assert_eq!(*phi.filtration.at(0), expect);
        let n = &orbit.nilpotents[0];
        assert!(!expect.contains(&expect.apply(n)));
    }

    #[test]
    fn mixed_limit_reduces_to_pure_for_single_weight() {
        let orbit = gallery::elliptic_degeneration();
        let y0 = Matrix::identity(2);
        let mixed = reduced_limit_mixed(&orbit, &y0).unwrap();
        let pure = reduced_limit_pure(&orbit).unwrap();
        assert_eq!(mixed.filtration, pure.filtration);
    }

    #[test]
    fn satake_of_rank2_even_orbit() {
        // weight −1, N: e0 ↦ e1, N² = 0, F^0 = span(e0)
        let n = Matrix::from_int_rows(&[&[0, 0], &[1, 0]]);
        let f = DecFiltration::from_pieces(
            2,
            vec![(-1, Subspace::full(2)), (0, Subspace::line(&e(2, 0)))],
        )
        .unwrap();
        let psi = satake_map(&[n.clone()], &f).unwrap();
        // Ψ^0 = span{e1} (the even part vanishes, W_{−2} = span{e1})
        assert_eq!(*psi.filtration.at(0), Subspace::line(&e(2, 1)));
        // e^{zN}-invariance
        let g = n.exp_nilpotent().unwrap();
        assert_eq!(psi.filtration.at(0).apply(&g), *psi.filtration.at(0));
    }

    #[test]
    fn sl2_sequences() {
        // y(m) = (m², m): rank 2, T = I, b = 0
        let samples: Vec<Vec<f64>> = (1..=24)
            .map(|m| vec![(m * m) as f64, m as f64])
            .collect();
        let fit = sl2_sequence_decompose(&samples, 2).unwrap();
        assert_eq!(fit.rank, 2);
        assert!((fit.t[0][0] - 1.0).abs() < 1e-9 && fit.t[0][1].abs() < 1e-9);
        assert!(fit.b_limit.iter().all(|b| b.abs() < 1e-9));

        // y(m) = (2m+1, m+e^{−m}): rank 1, convergent offset
        let samples: Vec<Vec<f64>> = (1..=40)
            .map(|m| vec![2.0 * m as f64 + 1.0, m as f64 + (-(m as f64)).exp()])
            .collect();
        let fit = sl2_sequence_decompose(&samples, 1).unwrap();
        assert_eq!(fit.rank, 1);
        assert!(fit.residual < 1e-6);

        // oscillating ratio is rejected
        let samples: Vec<Vec<f64>> = (1..=40)
            .map(|m| {
                vec![
                    (m as f64) * (2.0 + if m % 2 == 0 { 1.0 } else { -1.0 }),
                    m as f64,
                ]
            })
            .collect();
        assert!(sl2_sequence_decompose(&samples, 2).is_err());
        assert!(sl2_sequence_decompose(&samples, 1).is_err());
    }

    #[test]
    fn path_dependent_limits() {
        let orbit = gallery::path_dependent_orbit();
        // along (iy, iy): F^0 → ℂe0 ⊕ ℂe2
        let mut diag_points = Vec::new();
        for k in 1..=10 {
            let y = Rat::new((1i64 << k).into(), 1.into());
            let z = vec![S::new(Rat::zero(), y.clone()), S::new(Rat::zero(), y)];
            diag_points.push(orbit.eval(&z).unwrap());
        }
        let expect_diag = DecFiltration::from_pieces(
            3,
            vec![
                (-1, Subspace::full(3)),
                (0, Subspace::from_vectors(3, &[e(3, 0), e(3, 2)])),
            ],
        )
        .unwrap();
        let report = sequence_limit(&diag_points, Some(&expect_diag.clone()), 1e-2);
        assert!(report.converged, "distances: {:?}", report.distances);

        // along (iy², iy): F^0 → ℂ(e0 − e1) ⊕ ℂe2
        let mut skew_points = Vec::new();
        for k in 1..=10 {
            let y = 1i64 << k;
            let z = vec![
                S::new(Rat::zero(), Rat::new((y * y).into(), 1.into())),
                S::new(Rat::zero(), Rat::new(y.into(), 1.into())),
            ];
            skew_points.push(orbit.eval(&z).unwrap());
        }
        let mut v = e(3, 0);
        v[1] = -S::one();
        let expect_skew = DecFiltration::from_pieces(
            3,
            vec![
                (-1, Subspace::full(3)),
                (0, Subspace::from_vectors(3, &[v, e(3, 2)])),
            ],
        )
        .unwrap();
        let report = sequence_limit(&skew_points, Some(&expect_skew), 1e-2);
        assert!(report.converged, "distances: {:?}", report.distances);
        // and the two limits differ
        assert!(expect_diag != expect_skew);
    }
}
