//! Perimeter decay of inner parallel sets against its lower bound, and the
//! parallel perimeter comparison with the matched disk. Disks give equality.

use hyprobin::domain2d::{make_family, Mode, RadialCurve};
use hyprobin::verify::{verify_lemma_diffp, verify_perimeter_comparison};

fn main() -> hyprobin::Result<()> {
    let shapes = [
        ("disk", RadialCurve::circle(1.0, 512)?),
        ("wobble", make_family(1.0, &[Mode::new(2, 0.05, 0.0)], 512)?),
    ];
    for (name, curve) in &shapes {
        let lemma = verify_lemma_diffp(curve, 21)?;
        let cmp = verify_perimeter_comparison(curve, 21)?;
        let cmp_min = cmp.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
        println!("{name}:");
        println!("  total curvature {:.9}, sqrt(P^2 + 4 pi^2) {:.9}", lemma.total_curvature, lemma.total_curvature_bound);
        println!("  decay margin (relative, min) {:+.3e}", lemma.min_relative_margin());
        println!("  perimeter comparison margin (min) {cmp_min:+.3e}");
    }
    Ok(())
}
