//! Geometry of a perturbed geodesic circle: perimeter, area, curvature,
//! the Gauss–Bonnet check and the inradius.

use hyprobin::domain2d::{check_hconvex, curve_geometry, focal_horizon, inradius, make_family, InradiusGrid, Mode};
use hyprobin::hypgeo::{ball_volume, radius_from_perimeter, SpaceParams};

fn main() -> hyprobin::Result<()> {
    let curve = make_family(1.0, &[Mode::new(2, 0.05, 0.0)], 512)?;
    let g = curve_geometry(&curve)?;
    let (hconvex, slack) = check_hconvex(&g);

    let sp = SpaceParams::plane();
    let r_star = radius_from_perimeter(sp, g.perimeter)?;

    println!("perimeter            {:.12}", g.perimeter);
    println!("area                 {:.12}", g.area);
    println!("total curvature      {:.12}", g.total_curvature);
    println!("Gauss-Bonnet resid.  {:.3e}", g.gauss_bonnet_residual());
    println!("kappa range          [{:.6}, {:.6}]", g.kappa_min, g.kappa_max);
    println!("h-convex             {hconvex} (kappa_min - 1 = {slack:.6})");
    println!("focal horizon        {:.6}", focal_horizon(&g));
    println!("inradius             {:.6}", inradius(&curve, InradiusGrid::default())?);
    println!("matched disk radius  {r_star:.12}");
    println!("isoperimetric gap    {:.6e}", ball_volume(sp, r_star)? - g.area);
    Ok(())
}
