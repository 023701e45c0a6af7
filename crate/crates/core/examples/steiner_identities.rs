//! Outer parallel perimeters against the Steiner formula, for balls in
//! H^2..H^4 and for a planar domain.

use hyprobin::domain2d::{curve_geometry, make_family, outer_from_geometry, Mode};
use hyprobin::hypgeo::{ball_curvature_integrals, ball_perimeter, steiner_outer_perimeter, SpaceParams};

fn main() -> hyprobin::Result<()> {
    for n in [2, 3, 4] {
        let sp = SpaceParams::new(n)?;
        let v = ball_curvature_integrals(sp, 0.8)?;
        for s in [0.25, 1.0] {
            let direct = ball_perimeter(sp, 0.8 + s)?;
            let steiner = steiner_outer_perimeter(sp, &v, s)?;
            println!("ball n={n} s={s:<5} direct {direct:.12} steiner {steiner:.12}");
        }
    }

    let g = curve_geometry(&make_family(0.9, &[Mode::new(3, 0.02, 0.3)], 512)?)?;
    let v = [g.total_curvature, g.perimeter];
    for s in [0.25, 1.0] {
        let direct = outer_from_geometry(&g, s)?;
        let steiner = steiner_outer_perimeter(SpaceParams::plane(), &v, s)?;
        println!("domain s={s:<5}    direct {direct:.12} steiner {steiner:.12}");
    }
    Ok(())
}
