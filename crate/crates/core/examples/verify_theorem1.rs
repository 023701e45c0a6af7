//! Lower deficit bound for a negative Robin parameter, together with the
//! comparison `λ₁(Ω) ≤ λ₁(Ω*)`.

use hyprobin::domain2d::{make_family, Mode};
use hyprobin::verify::{verify_cor1, DomainCase, VerifyResolution};

fn main() -> hyprobin::Result<()> {
    let curve = make_family(1.0, &[Mode::new(2, 0.05, 0.0)], 512)?;
    let case = DomainCase::prepare("wobble", &curve, VerifyResolution::default())?;
    for beta in [-2.0, -1.0, -0.5] {
        let r = case.report(beta)?;
        println!(
            "beta={beta:>4}: lhs {:.6e} rhs {:.6e} margin {:+.3e} ball comparison {}",
            r.lhs,
            r.rhs,
            r.margin,
            verify_cor1(&r)
        );
    }
    Ok(())
}
