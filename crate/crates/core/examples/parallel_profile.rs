//! Inner parallel curves of an h-convex domain: curvature evolution and the
//! perimeter profile next to that of the perimeter-matched disk.

use hyprobin::domain2d::{curve_geometry, flow_curvatures, make_family, Mode};
use hyprobin::verify::verify_perimeter_comparison;

fn main() -> hyprobin::Result<()> {
    let curve = make_family(1.0, &[Mode::new(2, 0.04, 0.0)], 512)?;
    let g = curve_geometry(&curve)?;
    for t in [0.0, 0.2, 0.4] {
        let k = flow_curvatures(&g, t)?;
        let lo = k.iter().copied().fold(f64::INFINITY, f64::min);
        println!("t={t:.1}  min curvature {lo:.6}");
    }

    println!("{:>8} {:>14} {:>14}", "t", "P(inner)", "P(disk inner)");
    for row in verify_perimeter_comparison(&curve, 9)? {
        println!("{:>8.4} {:>14.10} {:>14.10}", row.t, row.p_omega, row.p_star);
    }
    Ok(())
}
