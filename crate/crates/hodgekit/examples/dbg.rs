use hodgekit::gallery;
use hodgekit::orbits::LocalNormalForm;
use hodgekit::scans::{ray_grid, rel_compact_scan};
use hodgekit::scalar::Rat;

fn main() {
    let orbit = gallery::noninvariant_limit_orbit();
    let sl2 = gallery::noninvariant_sl2();
    let grid = ray_grid(1.0, 100.0, 6, &[1.0]);
    let rep = rel_compact_scan(&orbit, &LocalNormalForm::trivial(), &sl2, &grid,
        &[Rat::from_integer(0.into())], true).unwrap();
    for p in &rep.points {
        eprintln!("y = {:9.3} margin = {:.6e} in_m = {} chart = {:.3e}", p.y[0], p.margin, p.in_m, p.chart_norm);
    }
    eprintln!("violation at {:?}", rep.first_violation);
    // direct check of the twisted value at the violating point
    let orbit2 = gallery::noninvariant_limit_orbit();
    let y = rep.first_violation.clone().unwrap_or(vec![2.511886431509580])[0];
    let z = vec![hodgekit::scalar::GaussianRational::new(Rat::from_integer(0.into()), hodgekit::scalar::rat_from_f64(y))];
    let f = orbit2.eval(&z).unwrap();
    let t_inv = sl2.t_inverse_of(&[y]).unwrap();
    let val = f.apply(&t_inv);
    let inst = orbit2.instance.with_hodge_filtration(val).unwrap();
    let r = inst.validate();
    eprintln!("membership {:?} failures {:?}", r.membership, r.failures);
}
