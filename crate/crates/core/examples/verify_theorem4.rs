//! Upper deficit bound for a positive Robin parameter.

use hyprobin::domain2d::{make_family, Mode};
use hyprobin::verify::{DomainCase, VerifyResolution};

fn main() -> hyprobin::Result<()> {
    let curve = make_family(1.1, &[Mode::new(2, 0.03, 0.0), Mode::new(3, 0.01, 1.0)], 512)?;
    let case = DomainCase::prepare("two-mode", &curve, VerifyResolution::default())?;
    for beta in [0.5, 1.0, 2.0] {
        let r = case.report(beta)?;
        println!("beta={beta}: lhs {:.6e} rhs {:.6e} margin {:+.3e}", r.lhs, r.rhs, r.margin);
    }
    Ok(())
}
