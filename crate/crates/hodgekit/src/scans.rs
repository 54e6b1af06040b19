//! Grid experiments over nilpotent orbits: distance decay between a
//! period map and its orbit, relative compactness of twisted values,
//! and the vanishing of the conjugated normal form along rays.
//!
//! Pass criteria are regression based: asymptotic statements are fitted
//! on log scales and compared against the predicted growth class with a
//! fixed ±0.25 window.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::metrics::{chart_log_adapted, distance_surrogate, MetricMode};
use crate::mhs::Membership;
use crate::numeric::least_squares;
use crate::orbits::{lnf_eval, LocalNormalForm, NilpotentOrbit, Sl2Data};
use crate::scalar::{rat_from_f64, rat_to_f64, GaussianRational, Rat};
use serde::Serialize;

type S = GaussianRational;

pub const SLOPE_WINDOW: f64 = 0.25;

/// Turn real coordinates `(x, y)` into the exact point `z = x + iy`.
pub fn z_point(x: &[Rat], y: &[Rat]) -> Vec<S> {
    x.iter()
        .zip(y)
        .map(|(a, b)| S::new(a.clone(), b.clone()))
        .collect()
}

fn check_region(points: &[Vec<Rat>]) -> Result<()> {
    for y in points {
        let mut prev: Option<f64> = None;
        for v in y {
            let f = rat_to_f64(v);
            if f < 1.0 {
                return Err(Error::Grid(format!(
                    "grid point {:?} leaves the region y_1 ≥ … ≥ y_r ≥ 1",
                    y.iter().map(rat_to_f64).collect::<Vec<_>>()
                )));
            }
            if let Some(p) = prev {
                if f > p + 1e-12 {
                    return Err(Error::Grid(
                        "grid point violates y_1 ≥ y_2 ≥ …".into(),
                    ));
                }
            }
            prev = Some(f);
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct DistancePoint {
    pub y: Vec<f64>,
    pub x: Vec<f64>,
    pub distance: f64,
    /// `log d̃ + 2π·y_r`, the quantity whose growth class is fitted.
    pub log_residual: f64,
    pub in_m: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceScanReport {
    pub metric: String,
    pub weight_length: i64,
    pub points: Vec<DistancePoint>,
    /// Fitted slope of the log residual against `log y_1`.
    pub slope: f64,
    pub intercept: f64,
    /// Per-variable slopes from the joint fit, when identifiable.
    pub per_variable_slopes: Option<Vec<f64>>,
    /// Growth class at most `L` within the window.
    pub weak_pass: bool,
    /// No polynomial prefactor in `y_1` within the window.
    pub strong_pass: bool,
    pub alpha: f64,
}

/// Distance between the period map and its nilpotent orbit across a grid
/// in `I' = {y_1 ≥ … ≥ y_r ≥ 1}`, with fitted growth exponents.
pub fn distance_scan(
    orbit: &NilpotentOrbit,
    lnf: &LocalNormalForm,
    grid: &[Vec<Rat>],
    x: &[Rat],
    mode: MetricMode,
    panels: usize,
) -> Result<DistanceScanReport> {
    check_region(grid)?;
    lnf.validate(orbit)?;
    let mut points = Vec::with_capacity(grid.len());
    for y in grid {
        let z = z_point(x, y);
        let fz = lnf_eval(orbit, lnf, &z)?;
        let theta = orbit.eval(&z)?;
        let inst = orbit.instance.with_hodge_filtration(fz)?;
        let in_m = inst.validate().membership == Membership::InM;
        let distance = distance_surrogate(&inst, &theta, mode, panels)?;
        let ymin = y.iter().map(rat_to_f64).fold(f64::INFINITY, f64::min);
        let log_residual = if distance > 0.0 {
            distance.ln() + 2.0 * std::f64::consts::PI * ymin
        } else {
            f64::NEG_INFINITY
        };
        points.push(DistancePoint {
            y: y.iter().map(rat_to_f64).collect(),
            x: x.iter().map(rat_to_f64).collect(),
            distance,
            log_residual,
            in_m,
        });
    }
    let usable: Vec<&DistancePoint> = points
        .iter()
        .filter(|p| p.log_residual.is_finite())
        .collect();
    let (slope, intercept) = if usable.len() >= 2 {
        let rows: Vec<Vec<f64>> = usable.iter().map(|p| vec![1.0, p.y[0].ln()]).collect();
        let ys: Vec<f64> = usable.iter().map(|p| p.log_residual).collect();
        let beta = least_squares(&rows, &ys);
        (beta[1], beta[0])
    } else {
        (0.0, 0.0)
    };
    let r = orbit.variables();
    let per_variable_slopes = if r >= 2 && usable.len() > r + 1 {
        let log_cols: Vec<Vec<f64>> = usable
            .iter()
            .map(|p| {
                let mut row = vec![1.0];
                row.extend(p.y.iter().map(|v| v.ln()));
                row
            })
            .collect();
        if columns_identifiable(&log_cols) {
            let ys: Vec<f64> = usable.iter().map(|p| p.log_residual).collect();
            Some(least_squares(&log_cols, &ys)[1..].to_vec())
        } else {
            None
        }
    } else {
        None
    };
    let length = orbit.instance.length();
    let weak_pass = slope >= -SLOPE_WINDOW && slope <= length as f64 + SLOPE_WINDOW;
    let strong_pass = slope < SLOPE_WINDOW;
    let alpha = discover_alpha(orbit, Some(lnf));
    Ok(DistanceScanReport {
        metric: match mode {
            MetricMode::Standard => "standard".into(),
            MetricMode::Twisted(_) => "twisted".into(),
        },
        weight_length: length,
        points,
        slope,
        intercept,
        per_variable_slopes,
        weak_pass,
        strong_pass,
        alpha,
    })
}

fn columns_identifiable(rows: &[Vec<f64>]) -> bool {
    // crude collinearity guard: every regressor column must vary, and no
    // two log-columns may be affinely identical
    let p = rows[0].len();
    for c in 1..p {
        let vals: Vec<f64> = rows.iter().map(|r| r[c]).collect();
        let mean = vals.iter().sum::<f64>() / vals.len() as f64;
        if vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() < 1e-12 {
            return false;
        }
    }
    for c1 in 1..p {
        for c2 in (c1 + 1)..p {
            let d: Vec<f64> = rows.iter().map(|r| r[c1] - r[c2]).collect();
            let mean = d.iter().sum::<f64>() / d.len() as f64;
            if d.iter().map(|v| (v - mean).powi(2)).sum::<f64>() < 1e-12 {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug, Serialize)]
pub struct CompactnessPoint {
    pub y: Vec<f64>,
    pub margin: f64,
    pub in_m: bool,
    pub chart_norm: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CompactnessReport {
    pub twisted: bool,
    pub points: Vec<CompactnessPoint>,
    pub min_margin: f64,
    pub max_chart_norm: f64,
    pub all_in_m: bool,
    /// First grid point that left the classifying space, if any.
    pub first_violation: Option<Vec<f64>>,
}

/// Evaluate `t^{−1}(y)·e^{−N(x)}·F(z)` across a grid and record
/// positivity margins and chart coordinates. With `twist = false` the
/// `t^{−1}(y)` factor is omitted (the contrast experiment).
pub fn rel_compact_scan(
    orbit: &NilpotentOrbit,
    lnf: &LocalNormalForm,
    sl2: &Sl2Data,
    grid: &[Vec<Rat>],
    x: &[Rat],
    twist: bool,
) -> Result<CompactnessReport> {
    check_region(grid)?;
    sl2.validate(orbit.instance.weight_filtration())?;
    let mut points = Vec::with_capacity(grid.len());
    let mut min_margin = f64::INFINITY;
    let mut max_chart = 0f64;
    let mut all_in_m = true;
    let mut first_violation = None;
    let mut reference: Option<(crate::mhs::Bigrading, crate::filtration::DecFiltration)> = None;
    for y in grid {
        let z = z_point(x, y);
        let fz = lnf_eval(orbit, lnf, &z)?;
        let xneg: Vec<S> = x.iter().map(|a| S::from_rat(-a.clone())).collect();
        let unwind = orbit.n_of(&xneg).exp_nilpotent()?;
        let yf: Vec<f64> = y.iter().map(rat_to_f64).collect();
        let op = if twist {
            &sl2.t_inverse_of(&yf)? * &unwind
        } else {
            unwind
        };
        let val = fz.apply(&op);
        let inst = orbit.instance.with_hodge_filtration(val.clone())?;
        let report = inst.validate();
        let in_m = report.membership == Membership::InM;
        if !in_m {
            all_in_m = false;
            if first_violation.is_none() {
                first_violation = Some(yf.clone());
            }
        }
        let chart_norm = match &reference {
            None => {
                if in_m {
                    reference = Some((inst.bigrading()?, val.clone()));
                }
                0.0
            }
            Some((bigr, base)) => match chart_log_adapted(bigr, base, &val) {
                Ok(u) => u.frobenius_f64(),
                Err(_) => f64::INFINITY,
            },
        };
        min_margin = min_margin.min(report.positivity_margin);
        max_chart = max_chart.max(chart_norm);
        points.push(CompactnessPoint {
            y: yf,
            margin: report.positivity_margin,
            in_m,
            chart_norm,
        });
    }
    Ok(CompactnessReport {
        twisted: twist,
        points,
        min_margin: if min_margin.is_finite() { min_margin } else { 0.0 },
        max_chart_norm: max_chart,
        all_in_m,
        first_violation,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub norms: Vec<f64>,
    pub final_norm: f64,
    pub monotone_tail: bool,
    pub below_tolerance: bool,
}

/// `‖Ad(e^{N(z(m))})·Γ(s(m))‖` along a sequence with all `Im z → ∞`;
/// asserts convergence to zero below `tol` with a monotone tail.
pub fn ad_gamma_decay(
    orbit: &NilpotentOrbit,
    lnf: &LocalNormalForm,
    ys: &[Vec<Rat>],
    x: &[Rat],
    tol: f64,
) -> Result<DecayReport> {
    lnf.validate(orbit)?;
    let mut norms = Vec::with_capacity(ys.len());
    for y in ys {
        let z = z_point(x, y);
        let (reduced, _) = crate::orbits::reduce_real_parts(&z);
        let s = crate::orbits::puncture_coordinates(&reduced);
        let gamma = if lnf.terms.is_empty() {
            Matrix::zeros(orbit.dim(), orbit.dim())
        } else {
            lnf.eval(&s)
        };
        let e = orbit.n_of(&reduced).exp_nilpotent()?;
        let conj = &(&e * &gamma) * &e.inverse()?;
        norms.push(conj.frobenius_f64());
    }
    let final_norm = *norms.last().unwrap_or(&0.0);
    let tail_start = norms.len() - (norms.len() / 4).max(1);
    let tail = &norms[tail_start.saturating_sub(1)..];
    let monotone_tail = tail.windows(2).all(|w| w[1] <= w[0] + 1e-15);
    Ok(DecayReport {
        below_tolerance: final_norm < tol,
        final_norm,
        monotone_tail,
        norms,
    })
}

/// Empirical membership threshold: the smallest `y` on the diagonal ray
/// with `e^{iy·ΣN_j}·F_∞ ∈ M` (bisection on a dyadic bracket).
pub fn discover_alpha(orbit: &NilpotentOrbit, lnf: Option<&LocalNormalForm>) -> f64 {
    let in_m_at = |y: f64| -> bool {
        let yr = rat_from_f64(y);
        let z: Vec<S> = (0..orbit.variables())
            .map(|_| S::new(Rat::from_integer(0.into()), yr.clone()))
            .collect();
        let f = match lnf {
            Some(l) => lnf_eval(orbit, l, &z),
            None => orbit.eval(&z),
        };
        let Ok(f) = f else { return false };
        let Ok(inst) = orbit.instance.with_hodge_filtration(f) else {
            return false;
        };
        inst.validate().membership == Membership::InM
    };
    let mut hi = 1.0f64;
    let mut tries = 0;
    while !in_m_at(hi) {
        hi *= 2.0;
        tries += 1;
        if tries > 24 {
            return f64::INFINITY;
        }
    }
    let mut lo = hi / 2.0;
    if hi <= 1.0 {
        // already a member at 1; probe smaller values
        lo = 1.0 / 64.0;
        if in_m_at(lo) {
            return 0.0;
        }
    }
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if in_m_at(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Grid of `y`-vectors on log scale along a fixed direction profile:
/// point `t` has `y_j = ratios[j] · base(t)` with `base` log-spaced in
/// `[start, stop]`.
pub fn ray_grid(start: f64, stop: f64, count: usize, ratios: &[f64]) -> Vec<Vec<Rat>> {
    let count = count.max(2);
    (0..count)
        .map(|i| {
            let t = i as f64 / (count - 1) as f64;
            let base = start * (stop / start).powf(t);
            ratios.iter().map(|r| rat_from_f64(r * base)).collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::metrics::TwistSource;

    #[test]
    fn trivial_normal_form_scan_is_zero() {
        let (orbit, _) = gallery::unipotent_two_variable();
        let grid = ray_grid(2.0, 8.0, 3, &[1.0, 1.0]);
        let report = distance_scan(
            &orbit,
            &LocalNormalForm::trivial(),
            &grid,
            &[Rat::from_integer(0.into()), Rat::from_integer(0.into())],
            MetricMode::Standard,
            16,
        )
        .unwrap();
        assert!(report.points.iter().all(|p| p.distance == 0.0));
        assert!(report.weak_pass);
    }

    #[test]
    fn unipotent_scan_has_no_prefactor() {
        let (orbit, lnf) = gallery::unipotent_two_variable();
        let grid = ray_grid(3.0, 12.0, 5, &[1.0, 1.0]);
        let report = distance_scan(
            &orbit,
            &lnf,
            &grid,
            &[Rat::from_integer(0.into()), Rat::from_integer(0.into())],
            MetricMode::Standard,
            32,
        )
        .unwrap();
        assert!(
            report.slope.abs() < SLOPE_WINDOW,
            "slope = {}",
            report.slope
        );
        assert!(report.strong_pass && report.weak_pass);
        assert_eq!(report.alpha, 0.0);
    }

    #[test]
    fn pure_orbit_decay_scan() {
        let (orbit, lnf) = gallery::weight_two_degeneration();
        let grid = ray_grid(4.0, 9.0, 4, &[1.0]);
        let report = distance_scan(
            &orbit,
            &lnf,
            &grid,
            &[Rat::from_integer(0.into())],
            MetricMode::Standard,
            32,
        )
        .unwrap();
        // γ has one nonvanishing bracket: slope ≈ 1, within [0, L + ¼]
        assert!(
            (report.slope - 1.0).abs() < 0.35,
            "slope = {}",
            report.slope
        );
        assert!(report.weak_pass);
        assert!(report.points.iter().all(|p| p.in_m));
    }

    #[test]
    fn ad_gamma_decay_on_default_ray() {
        let (orbit, lnf) = gallery::weight_two_degeneration();
        let ys: Vec<Vec<Rat>> = (1..=6)
            .map(|m| vec![Rat::from_integer((m as i64).into())])
            .collect();
        let report = ad_gamma_decay(&orbit, &lnf, &ys, &[Rat::from_integer(0.into())], 1e-8)
            .unwrap();
        assert!(report.below_tolerance, "final = {}", report.final_norm);
        assert!(report.monotone_tail);
    }

    #[test]
    fn rel_compact_scan_on_noninvariant_orbit() {
        let orbit = gallery::noninvariant_limit_orbit();
        let sl2 = gallery::noninvariant_sl2();
        let grid = ray_grid(1.0, 100.0, 6, &[1.0]);
        let twisted = rel_compact_scan(
            &orbit,
            &LocalNormalForm::trivial(),
            &sl2,
            &grid,
            &[Rat::from_integer(0.into())],
            true,
        )
        .unwrap();
        assert!(twisted.all_in_m);
        assert!(twisted.min_margin > 1e-4, "margin = {}", twisted.min_margin);
        let raw = rel_compact_scan(
            &orbit,
            &LocalNormalForm::trivial(),
            &sl2,
            &grid,
            &[Rat::from_integer(0.into())],
            false,
        )
        .unwrap();
        assert!(
            raw.min_margin < twisted.min_margin / 10.0,
            "twisted = {}, raw = {}",
            twisted.min_margin,
            raw.min_margin
        );
    }

    #[test]
    fn prefactor_contrast() {
        let (orbit, lnf) = gallery::prefactor_two_variable();
        let grid = ray_grid(3.0, 10.0, 5, &[1.0, 1.0]);
        let x = vec![Rat::from_integer(0.into()), Rat::from_integer(0.into())];
        let standard =
            distance_scan(&orbit, &lnf, &grid, &x, MetricMode::Standard, 32).unwrap();
        assert!(
            standard.slope > SLOPE_WINDOW,
            "standard slope = {}",
            standard.slope
        );
        assert!(standard.weak_pass);
        let twisted = distance_scan(
            &orbit,
            &lnf,
            &grid,
            &x,
            MetricMode::Twisted(TwistSource::Delta),
            32,
        )
        .unwrap();
        assert!(
            twisted.slope < SLOPE_WINDOW,
            "twisted slope = {}",
            twisted.slope
        );
    }
}
