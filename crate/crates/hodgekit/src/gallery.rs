//! Worked examples at desk scale: degenerating Hodge structures,
//! extensions, biextensions and the orbit data used throughout the test
//! suite, the guide and the bundled instance files.

use crate::filtration::{DecFiltration, IncFiltration};
use crate::matrix::Matrix;
use crate::mhs::{GradedPolarizedMhs, Polarization};
use crate::orbits::{LocalNormalForm, NilpotentOrbit, Sl2Data};
use crate::scalar::GaussianRational;
use crate::subspace::Subspace;
use std::collections::BTreeMap;

type S = GaussianRational;

fn e(n: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[i] = S::one();
    v
}

fn span(n: usize, idx: &[usize]) -> Subspace {
    Subspace::from_vectors(n, &idx.iter().map(|&i| e(n, i)).collect::<Vec<_>>())
}

fn hodge_numbers(pairs: &[((i64, i64), usize)]) -> BTreeMap<(i64, i64), usize> {
    pairs.iter().copied().collect()
}

fn lifts(n: usize, idx: &[usize]) -> Matrix {
    Matrix::from_rows(idx.iter().map(|&i| e(n, i)).collect())
}

/// Weight-1 polarized Hodge structure of an elliptic curve:
/// `F^1 = span(e0 + sign·i·e1)`, `Q = [[0,1],[−1,0]]`. `sign = +1` lies
/// in `M`, `sign = −1` only in the compact dual.
pub fn elliptic_curve(sign: i64) -> GradedPolarizedMhs {
    let mut v = e(2, 0);
    v[1] = S::new(num_traits::Zero::zero(), num_rational::BigRational::new(sign.into(), 1.into()));
    let f = DecFiltration::from_pieces(
        2,
        vec![(0, Subspace::full(2)), (1, Subspace::line(&v))],
    )
    .unwrap();
    GradedPolarizedMhs::new(
        2,
        IncFiltration::pure(2, 1),
        f,
        hodge_numbers(&[((1, 0), 1), ((0, 1), 1)]),
        vec![Polarization {
            weight: 1,
            lifts: Matrix::identity(2),
            form: Matrix::from_int_rows(&[&[0, 1], &[-1, 0]]),
        }],
    )
    .unwrap()
}

/// Two-step Tate extension: `W_{−2} = span{e1}`, `F^0 = span(e0 + i·e1)`;
/// the smallest instance with a nonzero δ.
pub fn tate_extension() -> GradedPolarizedMhs {
    let mut v = e(2, 0);
    v[1] = S::i();
    let f = DecFiltration::from_pieces(
        2,
        vec![(-1, Subspace::full(2)), (0, Subspace::line(&v))],
    )
    .unwrap();
    let w = IncFiltration::from_pieces(
        2,
        vec![(-2, span(2, &[1])), (0, Subspace::full(2))],
    )
    .unwrap();
    GradedPolarizedMhs::new(
        2,
        w,
        f,
        hodge_numbers(&[((0, 0), 1), ((-1, -1), 1)]),
        vec![
            Polarization {
                weight: 0,
                lifts: lifts(2, &[0]),
                form: Matrix::identity(1),
            },
            Polarization {
                weight: -2,
                lifts: lifts(2, &[1]),
                form: Matrix::identity(1),
            },
        ],
    )
    .unwrap()
}

/// Degenerating elliptic curve: the weight-1 orbit `e^{zN}·F` with
/// `N: e0 ↦ e1` and `F^1_∞ = span{e0}`.
pub fn elliptic_degeneration() -> NilpotentOrbit {
    let f = DecFiltration::from_pieces(
        2,
        vec![(0, Subspace::full(2)), (1, span(2, &[0]))],
    )
    .unwrap();
    let inst = GradedPolarizedMhs::new(
        2,
        IncFiltration::pure(2, 1),
        f,
        hodge_numbers(&[((1, 0), 1), ((0, 1), 1)]),
        vec![Polarization {
            weight: 1,
            lifts: Matrix::identity(2),
            form: Matrix::from_int_rows(&[&[0, 1], &[-1, 0]]),
        }],
    )
    .unwrap();
    NilpotentOrbit::new(inst, vec![Matrix::from_int_rows(&[&[0, 0], &[1, 0]])]).unwrap()
}

/// Weight-2 pure orbit with a full Jordan ladder (`N: e0 ↦ e1 ↦ e2`) and
/// a normal-form direction with one nonvanishing bracket against `N`;
/// the standard desk example for the distance-decay experiments.
pub fn weight_two_degeneration() -> (NilpotentOrbit, LocalNormalForm) {
    let f = DecFiltration::from_pieces(
        3,
        vec![
            (2, span(3, &[0])),
            (1, span(3, &[0, 1])),
            (0, Subspace::full(3)),
        ],
    )
    .unwrap();
    let inst = GradedPolarizedMhs::new(
        3,
        IncFiltration::pure(3, 2),
        f,
        hodge_numbers(&[((2, 0), 1), ((1, 1), 1), ((0, 2), 1)]),
        vec![Polarization {
            weight: 2,
            lifts: Matrix::identity(3),
            form: Matrix::from_int_rows(&[&[0, 0, 1], &[0, -1, 0], &[1, 0, 0]]),
        }],
    )
    .unwrap();
    let n = Matrix::from_int_rows(&[&[0, 0, 0], &[1, 0, 0], &[0, 1, 0]]);
    let orbit = NilpotentOrbit::new(inst, vec![n.clone()]).unwrap();
    // q ∩ Lie G_ℂ is spanned by N itself here, so the only admissible
    // one-term normal forms are reparametrizations along the orbit
    (orbit, LocalNormalForm::single(vec![1], n))
}

/// Weight-3 pure orbit with a full Jordan ladder inside Sp(4): here
/// `q ∩ g^{−1,−1}` is two-dimensional and the second direction has a
/// nonvanishing bracket with `N`, so the distance decay picks up an
/// honest logarithmic correction.
pub fn weight_three_degeneration() -> (NilpotentOrbit, LocalNormalForm) {
    let n = 4usize;
    let f = DecFiltration::from_pieces(
        n,
        vec![
            (3, span(n, &[0])),
            (2, span(n, &[0, 1])),
            (1, span(n, &[0, 1, 2])),
            (0, Subspace::full(n)),
        ],
    )
    .unwrap();
    // antisymmetric form with N: e0↦e1↦e2↦e3 an infinitesimal isometry
    let q = Matrix::from_int_rows(&[
        &[0, 0, 0, 1],
        &[0, 0, -1, 0],
        &[0, 1, 0, 0],
        &[-1, 0, 0, 0],
    ]);
    let inst = GradedPolarizedMhs::new(
        n,
        IncFiltration::pure(n, 3),
        f,
        hodge_numbers(&[((3, 0), 1), ((2, 1), 1), ((1, 2), 1), ((0, 3), 1)]),
        vec![Polarization {
            weight: 3,
            lifts: Matrix::identity(n),
            form: q,
        }],
    )
    .unwrap();
    let nop = Matrix::from_int_rows(&[
        &[0, 0, 0, 0],
        &[1, 0, 0, 0],
        &[0, 1, 0, 0],
        &[0, 0, 1, 0],
    ]);
    let orbit = NilpotentOrbit::new(inst, vec![nop]).unwrap();
    // γ: e0 ↦ e1, e2 ↦ e3 is symplectic, and [N, γ]: e0 ↦ e2 ≠ 0
    let gamma = Matrix::from_int_rows(&[
        &[0, 0, 0, 0],
        &[1, 0, 0, 0],
        &[0, 0, 0, 0],
        &[0, 0, 1, 0],
    ]);
    (orbit, LocalNormalForm::single(vec![1], gamma))
}

/// Weight-1 rank-4 orbit generated by a two-dimensional cone of
/// commuting logarithms (two elliptic blocks).
pub fn weight_one_two_cone() -> NilpotentOrbit {
    let f = DecFiltration::from_pieces(
        4,
        vec![(0, Subspace::full(4)), (1, span(4, &[0, 2]))],
    )
    .unwrap();
    let q = Matrix::from_int_rows(&[
        &[0, 1, 0, 0],
        &[-1, 0, 0, 0],
        &[0, 0, 0, 1],
        &[0, 0, -1, 0],
    ]);
    let inst = GradedPolarizedMhs::new(
        4,
        IncFiltration::pure(4, 1),
        f,
        hodge_numbers(&[((1, 0), 2), ((0, 1), 2)]),
        vec![Polarization {
            weight: 1,
            lifts: Matrix::identity(4),
            form: q,
        }],
    )
    .unwrap();
    let n1 = Matrix::from_int_rows(&[
        &[0, 0, 0, 0],
        &[1, 0, 0, 0],
        &[0, 0, 0, 0],
        &[0, 0, 0, 0],
    ]);
    let n2 = Matrix::from_int_rows(&[
        &[0, 0, 0, 0],
        &[0, 0, 0, 0],
        &[0, 0, 0, 0],
        &[0, 0, 1, 0],
    ]);
    NilpotentOrbit::new(inst, vec![n1, n2]).unwrap()
}

fn noninv_n() -> Matrix {
    Matrix::from_int_rows(&[
        &[0, 0, 0, 0],
        &[0, 0, 0, 0],
        &[1, 1, 0, 0],
        &[0, 0, 1, 0],
    ])
}

/// The four-dimensional admissible orbit whose mixed reduced limit is not
/// invariant under the monodromy logarithm: `N: e0,e1 ↦ e2 ↦ e3`,
/// `W_{−1} = W_{−2} = span{e1,e2,e3}`, split limit
/// `I^{0,0} = span{e0,e1}`, `I^{−1,−1} = span{e2}`, `I^{−2,−2} = span{e3}`.
pub fn noninvariant_limit_orbit() -> NilpotentOrbit {
    let f = DecFiltration::from_pieces(
        4,
        vec![
            (0, span(4, &[0, 1])),
            (-1, span(4, &[0, 1, 2])),
            (-2, Subspace::full(4)),
        ],
    )
    .unwrap();
    let w = IncFiltration::from_pieces(
        4,
        vec![(-2, span(4, &[1, 2, 3])), (0, Subspace::full(4))],
    )
    .unwrap();
    let inst = GradedPolarizedMhs::new(
        4,
        w,
        f,
        hodge_numbers(&[
            ((0, 0), 1),
            ((0, -2), 1),
            ((-1, -1), 1),
            ((-2, 0), 1),
        ]),
        vec![
            Polarization {
                weight: 0,
                lifts: lifts(4, &[0]),
                form: Matrix::identity(1),
            },
            Polarization {
                weight: -2,
                lifts: lifts(4, &[1, 2, 3]),
                form: Matrix::from_int_rows(&[&[0, 0, 1], &[0, -1, 0], &[1, 0, 0]]),
            },
        ],
    )
    .unwrap();
    NilpotentOrbit::new(inst, vec![noninv_n()]).unwrap()
}

/// The limit mixed Hodge structure `(F, M)` of
/// [`noninvariant_limit_orbit`] as an instance in its own classifying
/// space (weights 0, −2, −4), split over ℝ.
pub fn noninvariant_limit_lmhs() -> GradedPolarizedMhs {
    let f = DecFiltration::from_pieces(
        4,
        vec![
            (0, span(4, &[0, 1])),
            (-1, span(4, &[0, 1, 2])),
            (-2, Subspace::full(4)),
        ],
    )
    .unwrap();
    let m = IncFiltration::from_pieces(
        4,
        vec![
            (-4, span(4, &[3])),
            (-2, span(4, &[2, 3])),
            (0, Subspace::full(4)),
        ],
    )
    .unwrap();
    GradedPolarizedMhs::new(
        4,
        m,
        f,
        hodge_numbers(&[((0, 0), 2), ((-1, -1), 1), ((-2, -2), 1)]),
        vec![
            Polarization {
                weight: 0,
                lifts: lifts(4, &[0, 1]),
                form: Matrix::identity(2),
            },
            Polarization {
                weight: -2,
                lifts: lifts(4, &[2]),
                form: Matrix::identity(1),
            },
            Polarization {
                weight: -4,
                lifts: lifts(4, &[3]),
                form: Matrix::identity(1),
            },
        ],
    )
    .unwrap()
}

/// sl2 data of [`noninvariant_limit_orbit`]: the Deligne grading
/// `Y_0 = diag(0,−2,−2,−2)` and the graded sl2 semisimple element
/// `H_1 = diag(0,2,0,−2)` lifted through it.
pub fn noninvariant_sl2() -> Sl2Data {
    Sl2Data {
        h_ops: vec![Matrix::from_int_rows(&[
            &[0, 0, 0, 0],
            &[0, 2, 0, 0],
            &[0, 0, 0, 0],
            &[0, 0, 0, -2],
        ])],
        y0: Matrix::from_int_rows(&[
            &[0, 0, 0, 0],
            &[0, -2, 0, 0],
            &[0, 0, -2, 0],
            &[0, 0, 0, -2],
        ]),
    }
}

/// The rank-3 two-variable orbit whose reduced limit depends on the path
/// to infinity: `N_1: e0, e1 ↦ e2`; `N_2: e0 ↦ −e2, e1 ↦ e2`.
pub fn path_dependent_orbit() -> NilpotentOrbit {
    let f = DecFiltration::from_pieces(
        3,
        vec![(0, span(3, &[0, 1])), (-1, Subspace::full(3))],
    )
    .unwrap();
    let w = IncFiltration::from_pieces(
        3,
        vec![(-1, span(3, &[1, 2])), (0, Subspace::full(3))],
    )
    .unwrap();
    let inst = GradedPolarizedMhs::new(
        3,
        w,
        f,
        hodge_numbers(&[((0, 0), 1), ((0, -1), 1), ((-1, 0), 1)]),
        vec![
            Polarization {
                weight: 0,
                lifts: lifts(3, &[0]),
                form: Matrix::identity(1),
            },
            Polarization {
                weight: -1,
                lifts: lifts(3, &[1, 2]),
                form: Matrix::from_int_rows(&[&[0, 1], &[-1, 0]]),
            },
        ],
    )
    .unwrap();
    let n1 = Matrix::from_int_rows(&[&[0, 0, 0], &[0, 0, 0], &[1, 1, 0]]);
    let n2 = Matrix::from_int_rows(&[&[0, 0, 0], &[0, 0, 0], &[-1, 1, 0]]);
    NilpotentOrbit::new(inst, vec![n1, n2]).unwrap()
}

/// Biextension-type rank-4 instance with extension parameter `w`:
/// `F^0 = span(e0 + w·e3, e1 + i·e2)`. Returns the instance and the
/// marked generators `(1, 1^∨) = (e0, e3)`.
pub fn height_pairing_rank4(w_param: S) -> (GradedPolarizedMhs, Vec<S>, Vec<S>) {
    let mut v0 = e(4, 0);
    v0[3] = w_param;
    let mut v1 = e(4, 1);
    v1[2] = S::i();
    let f = DecFiltration::from_pieces(
        4,
        vec![
            (-1, Subspace::full(4)),
            (0, Subspace::from_vectors(4, &[v0, v1])),
        ],
    )
    .unwrap();
    let w = IncFiltration::from_pieces(
        4,
        vec![
            (-2, span(4, &[3])),
            (-1, span(4, &[1, 2, 3])),
            (0, Subspace::full(4)),
        ],
    )
    .unwrap();
    let inst = GradedPolarizedMhs::new(
        4,
        w,
        f,
        hodge_numbers(&[
            ((0, 0), 1),
            ((0, -1), 1),
            ((-1, 0), 1),
            ((-1, -1), 1),
        ]),
        vec![
            Polarization {
                weight: 0,
                lifts: lifts(4, &[0]),
                form: Matrix::identity(1),
            },
            Polarization {
                weight: -1,
                lifts: lifts(4, &[1, 2]),
                form: Matrix::from_int_rows(&[&[0, 1], &[-1, 0]]),
            },
            Polarization {
                weight: -2,
                lifts: lifts(4, &[3]),
                form: Matrix::identity(1),
            },
        ],
    )
    .unwrap();
    (inst, e(4, 0), e(4, 3))
}

/// Biextension orbit: the rank-4 height-pairing instance at `w = 0`
/// degenerating with `N: e0 ↦ e2, e1 ↦ e2`. The graded middle piece
/// degenerates (`Gr(N): ē1 ↦ ē2`), which is what makes the relative
/// weight filtration exist.
pub fn height_pairing_orbit() -> NilpotentOrbit {
    let (inst, _, _) = height_pairing_rank4(S::zero());
    let n = Matrix::from_int_rows(&[
        &[0, 0, 0, 0],
        &[0, 0, 0, 0],
        &[1, 1, 0, 0],
        &[0, 0, 0, 0],
    ]);
    NilpotentOrbit::new(inst, vec![n]).unwrap()
}

/// Biextension orbit degenerating purely along the central direction
/// `μ: e0 ↦ e3`; the height metric decays like `|s|` along it.
pub fn central_direction_orbit() -> NilpotentOrbit {
    let (inst, _, _) = height_pairing_rank4(S::zero());
    let n = Matrix::from_int_rows(&[
        &[0, 0, 0, 0],
        &[0, 0, 0, 0],
        &[0, 0, 0, 0],
        &[1, 0, 0, 0],
    ]);
    NilpotentOrbit::new(inst, vec![n]).unwrap()
}

/// Unipotent two-variable spec: both logarithms act trivially on
/// `Gr^W`, so `M(N, W) = W` and all normal-form brackets vanish.
pub fn unipotent_two_variable() -> (NilpotentOrbit, LocalNormalForm) {
    let f = DecFiltration::from_pieces(
        3,
        vec![(0, span(3, &[0])), (-1, Subspace::full(3))],
    )
    .unwrap();
    let w = IncFiltration::from_pieces(
        3,
        vec![(-2, span(3, &[1, 2])), (0, Subspace::full(3))],
    )
    .unwrap();
    let inst = GradedPolarizedMhs::new(
        3,
        w,
        f,
        hodge_numbers(&[((0, 0), 1), ((-1, -1), 2)]),
        vec![
            Polarization {
                weight: 0,
                lifts: lifts(3, &[0]),
                form: Matrix::identity(1),
            },
            Polarization {
                weight: -2,
                lifts: lifts(3, &[1, 2]),
                form: Matrix::identity(2),
            },
        ],
    )
    .unwrap();
    let n1 = Matrix::from_int_rows(&[&[0, 0, 0], &[1, 0, 0], &[0, 0, 0]]);
    let n2 = Matrix::from_int_rows(&[&[0, 0, 0], &[0, 0, 0], &[1, 0, 0]]);
    let orbit = NilpotentOrbit::new(inst, vec![n1.clone(), n2]).unwrap();
    // Γ = s_1·N_1: commutes with both logarithms
    (orbit, LocalNormalForm::single(vec![1, 0], n1))
}

/// sl2 data for the unipotent example: trivial graded representations,
/// `Y_0` from the split limit.
pub fn unipotent_sl2(orbit: &NilpotentOrbit) -> Sl2Data {
    let y0 = crate::orbits::canonical_y0(orbit).expect("unipotent orbit has canonical Y0");
    let n = orbit.dim();
    Sl2Data {
        h_ops: vec![Matrix::zeros(n, n); orbit.variables()],
        y0,
    }
}

/// Generic mixed two-variable spec exhibiting the length prefactor: a
/// Hodge–Tate block with a full Jordan ladder carrying `N_1` and the
/// normal-form direction, plus an independent Tate block carrying `N_2`.
pub fn prefactor_two_variable() -> (NilpotentOrbit, LocalNormalForm) {
    let n = 6usize;
    let f = DecFiltration::from_pieces(
        n,
        vec![
            (0, span(n, &[0, 1, 4])),
            (-1, span(n, &[0, 1, 2, 4, 5])),
            (-2, Subspace::full(n)),
        ],
    )
    .unwrap();
    let w = IncFiltration::from_pieces(
        n,
        vec![(-2, span(n, &[1, 2, 3, 5])), (0, Subspace::full(n))],
    )
    .unwrap();
    let inst = GradedPolarizedMhs::new(
        n,
        w,
        f,
        hodge_numbers(&[
            ((0, 0), 2),
            ((0, -2), 1),
            ((-1, -1), 2),
            ((-2, 0), 1),
        ]),
        vec![
            Polarization {
                weight: 0,
                lifts: lifts(n, &[0, 4]),
                form: Matrix::identity(2),
            },
            Polarization {
                weight: -2,
                lifts: lifts(n, &[1, 2, 3, 5]),
                form: Matrix::from_int_rows(&[
                    &[0, 0, 1, 0],
                    &[0, -1, 0, 0],
                    &[1, 0, 0, 0],
                    &[0, 0, 0, 1],
                ]),
            },
        ],
    )
    .unwrap();
    let mut n1 = Matrix::zeros(n, n);
    n1[(2, 0)] = S::one(); // e0 ↦ e2
    n1[(2, 1)] = S::one(); // e1 ↦ e2
    n1[(3, 2)] = S::one(); // e2 ↦ e3
    let mut n2 = Matrix::zeros(n, n);
    n2[(5, 4)] = S::one(); // e4 ↦ e5
    let orbit = NilpotentOrbit::new(inst, vec![n1, n2]).unwrap();
    // γ: e1 ↦ e2 is in g^{−1,−1} of the limit and [N_1, γ] ≠ 0, [N_2, γ] = 0
    let mut gamma = Matrix::zeros(n, n);
    gamma[(2, 1)] = S::one();
    (orbit, LocalNormalForm::single(vec![1, 0], gamma))
}

/// sl2 data of [`prefactor_two_variable`].
pub fn prefactor_sl2() -> Sl2Data {
    let diag = |v: &[i64]| {
        let mut m = Matrix::zeros(v.len(), v.len());
        for (i, &x) in v.iter().enumerate() {
            m[(i, i)] = S::from_int(x);
        }
        m
    };
    Sl2Data {
        h_ops: vec![diag(&[0, 2, 0, -2, 0, 0]), Matrix::zeros(6, 6)],
        y0: diag(&[0, -2, -2, -2, 0, -2]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mhs::Membership;

    #[test]
    fn gallery_instances_are_structurally_valid() {
        assert_eq!(elliptic_curve(1).validate().membership, Membership::InM);
        assert_eq!(tate_extension().validate().membership, Membership::InM);
        assert_eq!(
            noninvariant_limit_lmhs().validate().membership,
            Membership::InM
        );
    }

    #[test]
    fn gallery_orbits_are_admissible() {
        for (name, orbit) in [
            ("elliptic", elliptic_degeneration()),
            ("weight2", weight_two_degeneration().0),
            ("two-cone", weight_one_two_cone()),
            ("noninv", noninvariant_limit_orbit()),
            ("nonconv", path_dependent_orbit()),
            ("biext", height_pairing_orbit()),
            ("biext-central", central_direction_orbit()),
            ("unipotent", unipotent_two_variable().0),
            ("prefactor", prefactor_two_variable().0),
        ] {
            let (report, _) = orbit.admissibility();
            assert!(report.admissible(), "{name}: {:?}", report.failures);
        }
    }

    #[test]
    fn gallery_normal_forms_are_valid() {
        for (name, (orbit, lnf)) in [
            ("weight2", weight_two_degeneration()),
            ("unipotent", unipotent_two_variable()),
            ("prefactor", prefactor_two_variable()),
        ] {
            lnf.validate(&orbit).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }

    #[test]
    fn gallery_sl2_data_valid() {
        let noninv = noninvariant_limit_orbit();
        noninvariant_sl2()
            .validate(noninv.instance.weight_filtration())
            .unwrap();
        let (uni, _) = unipotent_two_variable();
        unipotent_sl2(&uni)
            .validate(uni.instance.weight_filtration())
            .unwrap();
        let (pre, _) = prefactor_two_variable();
        prefactor_sl2()
            .validate(pre.instance.weight_filtration())
            .unwrap();
    }

    #[test]
    fn noninv_relative_filtration_matches_hand_computation() {
        let orbit = noninvariant_limit_orbit();
        let m = orbit.relative_filtration().unwrap();
        assert_eq!(*m.at(-1), span(4, &[2, 3]));
        assert_eq!(*m.at(-2), span(4, &[2, 3]));
        assert_eq!(*m.at(-3), span(4, &[3]));
        assert_eq!(*m.at(-4), span(4, &[3]));
        assert!(m.at(-5).is_zero());
    }

    #[test]
    fn noninv_orbit_points_are_in_m() {
        let orbit = noninvariant_limit_orbit();
        for y in [1i64, 3, 10] {
            let z = vec![S::new(num_traits::Zero::zero(), num_rational::BigRational::new(y.into(), 1.into()))];
            let f = orbit.eval(&z).unwrap();
            let inst = orbit.instance.with_hodge_filtration(f).unwrap();
            assert_eq!(inst.validate().membership, Membership::InM, "y = {y}");
        }
    }
}
