//! First Robin eigenvalue of geodesic balls in H^n, computed by the
//! weak-form solver and by shooting.
//!
//! ```text
//! cargo run --example ball_eigenvalue
//! ```

use hyprobin::hypgeo::SpaceParams;
use hyprobin::radial::{eigen_quantities, shoot_lambda1, solve_radial_refined, RadialProblem, DEFAULT_ELEMENTS};

fn main() -> hyprobin::Result<()> {
    println!("{:>2} {:>4} {:>5} {:>18} {:>18} {:>9} {:>9}", "n", "R", "beta", "weak", "shooting", "v_min", "v_max");
    for n in [2, 3, 4] {
        let sp = SpaceParams::new(n)?;
        for (radius, beta) in [(1.0, -1.0), (1.0, 1.0), (2.0, -0.5)] {
            let prob = RadialProblem::new(sp, radius, beta)?;
            let pair = solve_radial_refined(&prob, DEFAULT_ELEMENTS)?;
            let shoot = shoot_lambda1(&prob)?;
            let (v_min, v_max, _) = eigen_quantities(&pair, sp)?;
            println!(
                "{n:>2} {radius:>4} {beta:>5} {:>18.12} {shoot:>18.12} {v_min:>9.5} {v_max:>9.5}",
                pair.lambda1
            );
        }
    }
    Ok(())
}
