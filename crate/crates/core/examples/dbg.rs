use skdv::*;
use skdv::solver::*;
use skdv::data::*;
use skdv::norms::l2;
use num_complex::Complex64;
fn main() {
    let grid = Grid1D::new(1 << 10, 400.0).unwrap();
    let u0 = schrodinger_datum(&SchrodingerDatumParams::new(1.0, 0.0).unwrap(), &grid).unwrap();
    let v0 = kdv_datum(&KdvDatumParams::new(1.0, 0.1).unwrap(), &grid).unwrap();
    let params = SKdVParams::new(1.0, 1.0).unwrap();
    let control = StepControl { dt_override: Some(0.005), ..StepControl::default() };
    for eps in [1e-2, 1e-3, 1e-4, 1e-5] {
        let traj = evolve_trajectory(
            &u0.scaled(Complex64::new(eps, 0.0)),
            &v0.scaled(Complex64::new(eps, 0.0)),
            0.05, &params, &[], &control).unwrap();
        let (i_part, ii_part) = duhamel_split(&traj).unwrap();
        println!("eps {eps:.0e}: |I| = {:.6e}  |II| = {:.6e}", l2(i_part.slices().last().unwrap()), l2(ii_part.slices().last().unwrap()));
    }
}
