//! Finite elements in the Poincaré disk: a circle checked against the radial
//! solver, then a perturbed domain.

use hyprobin::domain2d::{make_family, Mode, RadialCurve};
use hyprobin::fem2d::{solve_domain, FemResolution};
use hyprobin::hypgeo::SpaceParams;
use hyprobin::radial::{shoot_lambda1, RadialProblem};

fn main() -> hyprobin::Result<()> {
    let res = FemResolution::default();
    let circle = RadialCurve::circle(1.0, 512)?;
    for beta in [-1.0, 1.0] {
        let fem = solve_domain(&circle, beta, res)?;
        let exact = shoot_lambda1(&RadialProblem::new(SpaceParams::plane(), 1.0, beta)?)?;
        println!(
            "circle beta={beta:>4}: fem {:.10} radial {exact:.10} order {:.2}",
            fem.lambda1,
            fem.observed_order.unwrap_or(f64::NAN)
        );
        for (dof, lambda) in &fem.levels {
            println!("    {dof:>6} dof  {lambda:.10}");
        }
    }

    let wobble = make_family(1.0, &[Mode::new(2, 0.05, 0.0)], 512)?;
    let fem = solve_domain(&wobble, -1.0, res)?;
    println!("r = 1 + 0.05 cos 2θ, beta=-1: {:.10} (estimate {:.1e})", fem.lambda1, fem.error_estimate);
    Ok(())
}
