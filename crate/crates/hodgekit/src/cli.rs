//! Command-line front end: every operation of the library behind one
//! binary, reading versioned JSON instance files and writing JSON or CSV
//! reports atomically.
//!
//! Exit codes: 0 on pass, 1 on a mathematical failure (the first violated
//! clause is named), 2 on parse or validation errors.

use crate::biext::{phi_scan, Biextension};
use crate::error::{Error, Result};
use crate::io::InstanceFile;
use crate::limits::{
    mixed_trajectory, reduced_limit_mixed, reduced_limit_pure, satake_map, sequence_limit,
};
use crate::matrix::Matrix;
use crate::metrics::{tau_of, MetricMode, TwistSource};
use crate::mhs::{delta_splitting, Membership};
use crate::orbits::{lnf_eval, NilpotentOrbit};
use crate::report::{emit, fmt_f64, CsvTable, Envelope, ReportFormat};
use crate::scalar::{rat_from_f64, rat_from_str, rat_to_f64, rat_to_string, GaussianRational, Rat};
use crate::scans::{ad_gamma_decay, discover_alpha, distance_scan, rel_compact_scan};
use crate::subspace::Subspace;
use crate::weightfilt::{monodromy_weight_filtration, relative_weight_filtration};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::path::PathBuf;

type S = GaussianRational;

#[derive(Parser)]
#[command(
    name = "hodgekit",
    version,
    about = "Mixed Hodge structures at desk scale: bigradings, splittings, weight filtrations, metrics, nilpotent orbits, heights and reduced limits"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum MetricArg {
    Standard,
    Twisted,
}

#[derive(Clone, Copy, ValueEnum)]
enum TwistArg {
    Delta,
    Epsilon,
}

#[derive(Parser)]
struct CommonArgs {
    /// Instance file (versioned JSON with exact scalars)
    #[arg(long)]
    input: PathBuf,
    /// Report destination; stdout when omitted
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    /// Echoed into reports for reproducibility
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Deligne bigrading of the instance
    Bigrade(CommonArgs),
    /// Deligne δ-splitting and the split Hodge filtration
    SplitDelta(CommonArgs),
    /// Monodromy weight filtration W(N)[−center] of the first nilpotent
    WeightFilt {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 0)]
        center: i64,
    },
    /// Relative weight filtration M(N, W)
    RelWeightFilt(CommonArgs),
    /// Admissibility clauses of the orbit data
    AdmissibleCheck(CommonArgs),
    /// Mixed Hodge metric: membership, margins, adapted form
    Metric(CommonArgs),
    /// Twist function τ of the instance
    Tau {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value = "delta")]
        twist: TwistArg,
    },
    /// Evaluate the nilpotent orbit at z
    OrbitEval {
        #[command(flatten)]
        common: CommonArgs,
        /// Complex coordinates "re+im" per variable, comma separated,
        /// e.g. "0:2,1/2:3" for z = (2i, 1/2+3i)
        #[arg(long)]
        z: String,
    },
    /// Evaluate the period map in local normal form at z
    LnfEval {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        z: String,
    },
    /// One-variable sl2 triple of N(y) against the split limit
    Sl2Triple {
        #[command(flatten)]
        common: CommonArgs,
        /// Positive weights for N(y) = Σ y_j N_j (exact rationals)
        #[arg(long, default_value = "1")]
        y: String,
    },
    /// Distance between period map and orbit across a grid, with fits
    DistanceScan {
        #[command(flatten)]
        common: CommonArgs,
        /// Per-variable ranges "y1=start:stop:count,y2=…", log spaced
        #[arg(long)]
        grid: String,
        #[arg(long, value_enum, default_value = "standard")]
        metric: MetricArg,
        #[arg(long, value_enum, default_value = "delta")]
        twist: TwistArg,
        /// Simpson panels per distance evaluation
        #[arg(long, default_value_t = 64)]
        panels: usize,
    },
    /// Twisted values t^{-1}(y)e^{-N(x)}F(z): membership and margins
    RelCompactScan {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        grid: String,
        /// Omit the t^{-1}(y) factor (contrast experiment)
        #[arg(long, default_value_t = false)]
        contrast: bool,
    },
    /// Decay of ‖Ad(e^{N(z)})Γ(s)‖ along the default ray
    GammaDecay {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 12)]
        steps: usize,
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
    },
    /// Biextension height |[F]| and δ/μ
    BiextMetric(CommonArgs),
    /// Boundedness and local integrability of φ over an |s₁|-grid
    PhiScan {
        #[command(flatten)]
        common: CommonArgs,
        /// Radial range "start:stop:count" for |s₁| (log spaced)
        #[arg(long, default_value = "1e-8:1e-1:8")]
        grid: String,
        #[arg(long, default_value_t = 3)]
        refinements: usize,
    },
    /// Reduced limit filtration (pure, or mixed via the file's Y0)
    ReducedLimit {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = false)]
        mixed: bool,
    },
    /// Satake boundary point of an even-type cone
    Satake(CommonArgs),
    /// Evaluate along a sequence and test convergence to a limit
    SequenceLimit {
        #[command(flatten)]
        common: CommonArgs,
        /// Imaginary parts per variable as powers of m, e.g. "m^2,m"
        #[arg(long)]
        ray: String,
        #[arg(long, default_value_t = 12)]
        steps: u32,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
        /// Split the evaluated points and untwist by e^{−xN} first
        #[arg(long, default_value_t = false)]
        mixed: bool,
    },
}

fn load(common: &CommonArgs) -> Result<InstanceFile> {
    let text = std::fs::read_to_string(&common.input)?;
    crate::io::parse_str(&text)
}

fn subspace_json(s: &Subspace) -> Value {
    Value::Array(
        s.basis()
            .rows_iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|x| Value::String(x.to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn matrix_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| {
                Value::Array(
                    m.row(r)
                        .iter()
                        .map(|x| Value::String(x.to_string()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn parse_z(text: &str, expected: usize) -> Result<Vec<S>> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != expected {
        return Err(Error::Parse(format!(
            "expected {expected} coordinates, found {}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            let (re, im) = match p.split_once(':') {
                Some((re, im)) => (re.trim(), im.trim()),
                None => (p.trim(), "0"),
            };
            Ok(S::new(
                rat_from_str(re).map_err(Error::Parse)?,
                rat_from_str(im).map_err(Error::Parse)?,
            ))
        })
        .collect()
}

/// Grid spec "y1=start:stop:count,y2=…" (or a bare "start:stop:count"
/// shared by all variables), log spaced, clamped into the region
/// y_1 ≥ y_2 ≥ … ≥ 1 by construction of the rays.
fn parse_grid(text: &str, variables: usize) -> Result<Vec<Vec<Rat>>> {
    let mut axes: Vec<(f64, f64, usize)> = Vec::new();
    for part in text.split(',') {
        let spec = part.split_once('=').map(|(_, s)| s).unwrap_or(part);
        let nums: Vec<&str> = spec.split(':').collect();
        if nums.len() != 3 {
            return Err(Error::Grid(format!("bad axis spec {part:?}")));
        }
        let start: f64 = nums[0]
            .trim()
            .parse()
            .map_err(|_| Error::Grid(format!("bad number in {part:?}")))?;
        let stop: f64 = nums[1]
            .trim()
            .parse()
            .map_err(|_| Error::Grid(format!("bad number in {part:?}")))?;
        let count: usize = nums[2]
            .trim()
            .parse()
            .map_err(|_| Error::Grid(format!("bad count in {part:?}")))?;
        if !(start > 0.0 && stop >= start && count >= 1) {
            return Err(Error::Grid(format!("axis {part:?} is not a positive range")));
        }
        axes.push((start, stop, count));
    }
    if axes.len() == 1 && variables > 1 {
        axes = vec![axes[0]; variables];
    }
    if axes.len() != variables {
        return Err(Error::Grid(format!(
            "grid has {} axes for {} variables",
            axes.len(),
            variables
        )));
    }
    // product grid on log scales, then keep points inside I'
    let mut per_axis: Vec<Vec<f64>> = Vec::new();
    for (start, stop, count) in axes {
        let mut vals = Vec::with_capacity(count);
        for i in 0..count {
            let t = if count == 1 {
                0.0
            } else {
                i as f64 / (count - 1) as f64
            };
            vals.push(start * (stop / start).powf(t));
        }
        per_axis.push(vals);
    }
    let mut points = vec![Vec::new()];
    for axis in &per_axis {
        let mut next = Vec::new();
        for p in &points {
            for &v in axis {
                let mut q = p.clone();
                q.push(v);
                next.push(q);
            }
        }
        points = next;
    }
    let kept: Vec<Vec<Rat>> = points
        .into_iter()
        .filter(|p| {
            p.windows(2).all(|w| w[0] >= w[1] - 1e-12) && *p.last().unwrap() >= 1.0
        })
        .map(|p| p.into_iter().map(rat_from_f64).collect())
        .collect();
    if kept.is_empty() {
        return Err(Error::Grid(
            "grid is empty after restricting to y_1 ≥ … ≥ y_r ≥ 1".into(),
        ));
    }
    Ok(kept)
}

fn parse_ray(text: &str, variables: usize) -> Result<Vec<(f64, f64)>> {
    // per variable: "m^E" or "c" (constant); returns (exponent, constant)
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != variables {
        return Err(Error::Parse(format!(
            "ray needs {variables} components, found {}",
            parts.len()
        )));
    }
    parts
        .iter()
        .map(|p| {
            let p = p.trim();
            if let Some(e) = p.strip_prefix("m^") {
                let exp: f64 = e
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad ray exponent {p:?}")))?;
                Ok((exp, 1.0))
            } else if p == "m" {
                Ok((1.0, 1.0))
            } else {
                let c: f64 = p
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad ray component {p:?}")))?;
                Ok((0.0, c))
            }
        })
        .collect()
}

struct Outcome {
    pass: bool,
    payload: Value,
    csv: Option<CsvTable>,
}

fn run_command(cmd: &Command) -> Result<(CommonArgs2, Outcome)> {
    match cmd {
        Command::Bigrade(common) => {
            let file = load(common)?;
            let inst = file.instance()?;
            let bigr = inst.bigrading()?;
            let mut pieces = serde_json::Map::new();
            let mut rows = Vec::new();
            for ((p, q), s) in bigr.pieces() {
                pieces.insert(format!("{p},{q}"), subspace_json(s));
                rows.push(vec![p.to_string(), q.to_string(), s.dim().to_string()]);
            }
            Ok((
                common.into(),
                Outcome {
                    pass: true,
                    payload: json!({ "pieces": pieces, "r_split": bigr.is_r_split() }),
                    csv: Some(CsvTable {
                        header: vec!["p".into(), "q".into(), "dim".into()],
                        rows,
                    }),
                },
            ))
        }
        Command::SplitDelta(common) => {
            let file = load(common)?;
            let inst = file.instance()?;
            let (delta, split) =
                delta_splitting(inst.hodge_filtration(), inst.weight_filtration())?;
            let mut filt = serde_json::Map::new();
            for p in split.jump_indices() {
                filt.insert(p.to_string(), subspace_json(split.at(p)));
            }
            Ok((
                common.into(),
                Outcome {
                    pass: true,
                    payload: json!({
                        "delta": matrix_json(&delta),
                        "delta_is_zero": delta.is_zero(),
                        "split_hodge_filtration": filt,
                    }),
                    csv: None,
                },
            ))
        }
        Command::WeightFilt { common, center } => {
            let file = load(common)?;
            let n = file
                .nilpotents
                .first()
                .ok_or_else(|| Error::Parse("no nilpotent in file".into()))?;
            let m = monodromy_weight_filtration(n, *center)?;
            Ok((
                common.into(),
                Outcome {
                    pass: true,
                    payload: filtration_json(&m),
                    csv: None,
                },
            ))
        }
        Command::RelWeightFilt(common) => {
            let file = load(common)?;
            let dim = file.dimension;
            let total = file
                .nilpotents
                .iter()
                .fold(Matrix::zeros(dim, dim), |acc, n| &acc + n);
            let m = relative_weight_filtration(&total, &file.weight_filtration)?;
            Ok((
                common.into(),
                Outcome {
                    pass: true,
                    payload: filtration_json(&m),
                    csv: None,
                },
            ))
        }
        Command::AdmissibleCheck(common) => {
            let file = load(common)?;
            let orbit = file.orbit()?;
            let (report, m) = orbit.admissibility();
            let payload = json!({
                "commuting": report.commuting,
                "horizontal": report.horizontal,
                "relative_filtration_exists": report.relative_exists,
                "limit_is_mhs": report.limit_is_mhs,
                "negative_morphisms": report.negative_morphisms,
                "failures": report.failures,
                "relative_filtration": m.as_ref().map(filtration_json),
            });
            Ok((
                common.into(),
                Outcome {
                    pass: report.admissible(),
                    payload,
                    csv: None,
                },
            ))
        }
        Command::Metric(common) => {
            let file = load(common)?;
            let inst = file.instance()?;
            let validation = inst.validate();
            let ctx = crate::metrics::MetricContext::standard(&inst)?;
            Ok((
                common.into(),
                Outcome {
                    pass: validation.membership == Membership::InM,
                    payload: json!({
                        "membership": format!("{:?}", validation.membership),
                        "failures": validation.failures,
                        "positivity_margin": validation.positivity_margin,
                        "adapted_form": matrix_json(ctx.adapted_form()),
                    }),
                    csv: None,
                },
            ))
        }
        Command::Tau { common, twist } => {
            let file = load(common)?;
            let inst = file.instance()?;
            let source = match twist {
                TwistArg::Delta => TwistSource::Delta,
                TwistArg::Epsilon => TwistSource::Epsilon,
            };
            let tau = tau_of(&inst, source)?;
            Ok((
                common.into(),
                Outcome {
                    pass: true,
                    payload: json!({ "tau": tau }),
                    csv: None,
                },
            ))
        }
        Command::OrbitEval { common, z } => {
            let file = load(common)?;
            let orbit = file.orbit()?;
            let zs = parse_z(z, orbit.variables())?;
            let f = orbit.eval(&zs)?;
            let inst = orbit.instance.with_hodge_filtration(f.clone())?;
            let membership = inst.validate().membership;
            Ok((
                common.into(),
                Outcome {
                    pass: true,
                    payload: json!({
                        "filtration": filtration_json_dec(&f),
                        "membership": format!("{membership:?}"),
                    }),
                    csv: None,
                },
            ))
        }
        Command::LnfEval { common, z } => {
            let file = load(common)?;
            let orbit = file.orbit()?;
            let lnf = file.normal_form();
            lnf.validate(&orbit)?;
            let zs = parse_z(z, orbit.variables())?;
            let f = lnf_eval(&orbit, &lnf, &zs)?;
            let inst = orbit.instance.with_hodge_filtration(f.clone())?;
            let membership = inst.validate().membership;
            Ok((
                common.into(),
                Outcome {
                    pass: true,
                    payload: json!({
                        "filtration": filtration_json_dec(&f),
                        "membership": format!("{membership:?}"),
                    }),
                    csv: None,
                },
            ))
        }
        Command::Sl2Triple { common, y } => {
            let file = load(common)?;
            let orbit = file.orbit()?;
            let weights: Vec<Rat> = y
                .split(',')
                .map(|p| rat_from_str(p.trim()).map_err(Error::Parse))
                .collect::<Result<_>>()?;
            if weights.len() != orbit.variables() {
                return Err(Error::Parse(format!(
                    "sl2-triple needs {} weights",
                    orbit.variables()
                )));
            }
            let k = orbit.pure_weight.ok_or_else(|| {
                Error::InvalidInstance("sl2-triple needs a pure-weight orbit".into())
            })?;
            let coeffs: Vec<S> = weights.iter().map(|r| S::from_rat(r.clone())).collect();
            let n_y = orbit.n_of(&coeffs);
            let w_n = monodromy_weight_filtration(&n_y, k)?;
            let (_, split_f) =
                delta_splitting(orbit.instance.hodge_filtration(), &w_n)?;
            let (h, n_plus) =
                crate::orbits::sl2_triple_one_var(&n_y, &split_f, &w_n, k)?;
            Ok((
                common.into(),
                Outcome {
                    pass: true,
                    payload: json!({
                        "n": matrix_json(&n_y),
                        "h": matrix_json(&h),
                        "n_plus": matrix_json(&n_plus),
                        "y": weights.iter().map(rat_to_string).collect::<Vec<_>>(),
                    }),
                    csv: None,
                },
            ))
        }
        Command::DistanceScan {
            common,
            grid,
            metric,
            twist,
            panels,
        } => {
            let file = load(common)?;
            let orbit = file.orbit()?;
            let lnf = file.normal_form();
            let grid = parse_grid(grid, orbit.variables())?;
            let source = match twist {
                TwistArg::Delta => TwistSource::Delta,
                TwistArg::Epsilon => TwistSource::Epsilon,
            };
            let mode = match metric {
                MetricArg::Standard => MetricMode::Standard,
                MetricArg::Twisted => MetricMode::Twisted(source),
            };
            let x = vec![Rat::from_integer(0.into()); orbit.variables()];
            let report = distance_scan(&orbit, &lnf, &grid, &x, mode, *panels)?;
            let csv = CsvTable {
                header: {
                    let mut h: Vec<String> = (1..=orbit.variables())
                        .map(|j| format!("y{j}"))
                        .collect();
                    h.extend(["distance".into(), "log_residual".into(), "in_m".into()]);
                    h
                },
                rows: report
                    .points
                    .iter()
                    .map(|p| {
                        let mut row: Vec<String> = p.y.iter().map(|v| fmt_f64(*v)).collect();
                        row.push(fmt_f64(p.distance));
                        row.push(fmt_f64(p.log_residual));
                        row.push((p.in_m as u8).to_string());
                        row
                    })
                    .collect(),
            };
            let pass = report.weak_pass;
            Ok((
                common.into(),
                Outcome {
                    pass,
                    payload: serde_json::to_value(&report)?,
                    csv: Some(csv),
                },
            ))
        }
        Command::RelCompactScan {
            common,
            grid,
            contrast,
        } => {
            let file = load(common)?;
            let orbit = file.orbit()?;
            let lnf = file.normal_form();
            let sl2 = file.sl2_data()?;
            let grid = parse_grid(grid, orbit.variables())?;
            let x = vec![Rat::from_integer(0.into()); orbit.variables()];
            let report = rel_compact_scan(&orbit, &lnf, &sl2, &grid, &x, !*contrast)?;
            let csv = CsvTable {
                header: {
                    let mut h: Vec<String> = (1..=orbit.variables())
                        .map(|j| format!("y{j}"))
                        .collect();
                    h.extend(["margin".into(), "in_m".into(), "chart_norm".into()]);
                    h
                },
                rows: report
                    .points
                    .iter()
                    .map(|p| {
                        let mut row: Vec<String> = p.y.iter().map(|v| fmt_f64(*v)).collect();
                        row.push(fmt_f64(p.margin));
                        row.push((p.in_m as u8).to_string());
                        row.push(fmt_f64(p.chart_norm));
                        row
                    })
                    .collect(),
            };
            let pass = report.all_in_m;
            Ok((
                common.into(),
                Outcome {
                    pass,
                    payload: serde_json::to_value(&report)?,
                    csv: Some(csv),
                },
            ))
        }
        Command::GammaDecay {
            common,
            steps,
            tolerance,
        } => {
            let file = load(common)?;
            let orbit = file.orbit()?;
            let lnf = file.normal_form();
            let ys: Vec<Vec<Rat>> = (1..=*steps)
                .map(|m| vec![Rat::from_integer((m as i64).into()); orbit.variables()])
                .collect();
            let x = vec![Rat::from_integer(0.into()); orbit.variables()];
            let report = ad_gamma_decay(&orbit, &lnf, &ys, &x, *tolerance)?;
            Ok((
                common.into(),
                Outcome {
                    pass: report.below_tolerance && report.monotone_tail,
                    payload: serde_json::to_value(&report)?,
                    csv: Some(CsvTable {
                        header: vec!["m".into(), "norm".into()],
                        rows: report
                            .norms
                            .iter()
                            .enumerate()
                            .map(|(i, n)| vec![(i + 1).to_string(), fmt_f64(*n)])
                            .collect(),
                    }),
                },
            ))
        }
        Command::BiextMetric(common) => {
            let file = load(common)?;
            let inst = file.instance()?;
            let (one, dual) = file.biextension_markers()?;
            let biext = Biextension::new(inst, one, dual)?;
            let c = biext.delta_over_mu()?;
            Ok((
                common.into(),
                Outcome {
                    pass: true,
                    payload: json!({
                        "delta_over_mu": rat_to_string(&c),
                        "metric_value": biext.metric_value()?,
                        "mu": matrix_json(&biext.mu()?),
                    }),
                    csv: None,
                },
            ))
        }
        Command::PhiScan {
            common,
            grid,
            refinements,
        } => {
            let file = load(common)?;
            let orbit = file.orbit()?;
            let lnf = file.normal_form();
            let (one, dual) = file.biextension_markers()?;
            let nums: Vec<&str> = grid.split(':').collect();
            if nums.len() != 3 {
                return Err(Error::Grid("phi-scan grid is start:stop:count".into()));
            }
            let start: f64 = nums[0].parse().map_err(|_| Error::Grid("bad start".into()))?;
            let stop: f64 = nums[1].parse().map_err(|_| Error::Grid("bad stop".into()))?;
            let count: usize = nums[2].parse().map_err(|_| Error::Grid("bad count".into()))?;
            let radii: Vec<f64> = (0..count)
                .map(|i| {
                    let t = if count == 1 {
                        0.0
                    } else {
                        i as f64 / (count - 1) as f64
                    };
                    start * (stop / start).powf(t)
                })
                .collect();
            let report = phi_scan(&orbit, &one, &dual, &lnf, &radii, 2, *refinements)?;
            Ok((
                common.into(),
                Outcome {
                    pass: report.ratio_bounded && report.integrals_converged,
                    payload: serde_json::to_value(&report)?,
                    csv: Some(CsvTable {
                        header: vec!["s1_abs".into(), "phi".into(), "ratio".into()],
                        rows: report
                            .points
                            .iter()
                            .map(|p| {
                                vec![fmt_f64(p.s1_abs), fmt_f64(p.phi), fmt_f64(p.ratio)]
                            })
                            .collect(),
                    }),
                },
            ))
        }
        Command::ReducedLimit { common, mixed } => {
            let file = load(common)?;
            let orbit = file.orbit()?;
            let limit = if *mixed {
                let (_, y0) = file
                    .sl2
                    .clone()
                    .ok_or_else(|| Error::Parse("mixed reduced limit needs sl2.Y0".into()))?;
                reduced_limit_mixed(&orbit, &y0)?
            } else {
                reduced_limit_pure(&orbit)?
            };
            Ok((
                common.into(),
                Outcome {
                    pass: true,
                    payload: json!({
                        "kind": format!("{:?}", limit.kind),
                        "filtration": filtration_json_dec(&limit.filtration),
                    }),
                    csv: None,
                },
            ))
        }
        Command::Satake(common) => {
            let file = load(common)?;
            let psi = satake_map(&file.nilpotents, &file.hodge_filtration)?;
            Ok((
                common.into(),
                Outcome {
                    pass: true,
                    payload: json!({
                        "psi": filtration_json_dec(&psi.filtration),
                    }),
                    csv: None,
                },
            ))
        }
        Command::SequenceLimit {
            common,
            ray,
            steps,
            tolerance,
            mixed,
        } => {
            let file = load(common)?;
            let orbit = file.orbit()?;
            let shape = parse_ray(ray, orbit.variables())?;
            let mut zs = Vec::new();
            for k in 1..=*steps {
                let m = (1u64 << k) as f64;
                let z: Vec<S> = shape
                    .iter()
                    .map(|&(exp, c)| S::new(Rat::from_integer(0.into()), rat_from_f64(c * m.powf(exp))))
                    .collect();
                zs.push(z);
            }
            let points: Vec<crate::filtration::DecFiltration> = if *mixed {
                mixed_trajectory(&orbit, &zs)?
                    .into_iter()
                    .map(|(_, tilde)| tilde)
                    .collect()
            } else {
                zs.iter()
                    .map(|z| orbit.eval(z))
                    .collect::<Result<Vec<_>>>()?
            };
            let report = sequence_limit(&points, None, *tolerance);
            let candidate = points.last().map(filtration_json_dec);
            Ok((
                common.into(),
                Outcome {
                    pass: report.converged,
                    payload: json!({
                        "report": serde_json::to_value(&report)?,
                        "final_point": candidate,
                    }),
                    csv: Some(CsvTable {
                        header: vec!["step".into(), "chart_distance".into()],
                        rows: report
                            .distances
                            .iter()
                            .enumerate()
                            .map(|(i, d)| vec![(i + 1).to_string(), fmt_f64(*d)])
                            .collect(),
                    }),
                },
            ))
        }
    }
}

fn filtration_json(m: &crate::filtration::IncFiltration) -> Value {
    let mut out = serde_json::Map::new();
    for k in m.jump_indices() {
        out.insert(k.to_string(), subspace_json(m.at(k)));
    }
    Value::Object(out)
}

fn filtration_json_dec(f: &crate::filtration::DecFiltration) -> Value {
    let mut out = serde_json::Map::new();
    for p in f.jump_indices() {
        out.insert(p.to_string(), subspace_json(f.at(p)));
    }
    Value::Object(out)
}

/// Copy of the relevant common-arg fields after the borrow of `Command`.
struct CommonArgs2 {
    input: String,
    output: Option<PathBuf>,
    format: ReportFormat,
    seed: Option<u64>,
}

impl From<&CommonArgs> for CommonArgs2 {
    fn from(c: &CommonArgs) -> Self {
        Self {
            input: c.input.display().to_string(),
            output: c.output.clone(),
            format: match c.format {
                FormatArg::Json => ReportFormat::Json,
                FormatArg::Csv => ReportFormat::Csv,
            },
            seed: c.seed,
        }
    }
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Bigrade(_) => "bigrade",
        Command::SplitDelta(_) => "split-delta",
        Command::WeightFilt { .. } => "weight-filt",
        Command::RelWeightFilt(_) => "rel-weight-filt",
        Command::AdmissibleCheck(_) => "admissible-check",
        Command::Metric(_) => "metric",
        Command::Tau { .. } => "tau",
        Command::OrbitEval { .. } => "orbit-eval",
        Command::LnfEval { .. } => "lnf-eval",
        Command::Sl2Triple { .. } => "sl2-triple",
        Command::DistanceScan { .. } => "distance-scan",
        Command::RelCompactScan { .. } => "rel-compact-scan",
        Command::GammaDecay { .. } => "gamma-decay",
        Command::BiextMetric(_) => "biext-metric",
        Command::PhiScan { .. } => "phi-scan",
        Command::ReducedLimit { .. } => "reduced-limit",
        Command::Satake(_) => "satake",
        Command::SequenceLimit { .. } => "sequence-limit",
    }
}

/// Entry point: returns the process exit code.
pub fn run() -> i32 {
    if let Ok(threads) = std::env::var("THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    let name = command_name(&cli.command);
    match run_command(&cli.command) {
        Ok((common, outcome)) => {
            let envelope = Envelope::new(
                name,
                &common.input,
                common.seed,
                outcome.pass,
                outcome.payload,
            );
            if let Err(e) = emit(
                &envelope,
                outcome.csv.as_ref(),
                common.format,
                common.output.as_deref(),
            ) {
                eprintln!("hodgekit: failed to write report: {e}");
                return 2;
            }
            if outcome.pass {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("hodgekit {name}: {e}");
            match e {
                Error::Parse(_) | Error::Io(_) | Error::Json(_) | Error::Grid(_)
                | Error::DimensionMismatch(_) => 2,
                _ => 1,
            }
        }
    }
}
