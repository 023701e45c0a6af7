//! Seeded family sweep written as CSV to stdout.
//!
//! ```text
//! HYPROBIN_THREADS=2 cargo run --release --example sweep_report > report.csv
//! ```

use hyprobin::verify::{sweep_family, sweep_threads, write_csv, FamilySpec, VerifyResolution};

fn main() -> hyprobin::Result<()> {
    let spec = FamilySpec {
        count: 4,
        ..FamilySpec::default()
    };
    let rows = sweep_family(&spec, 7, &[-1.0, 1.0], VerifyResolution::default(), sweep_threads())?;
    write_csv(&rows, std::io::stdout().lock())?;
    let worst = rows.iter().map(|r| r.margin).fold(f64::INFINITY, f64::min);
    eprintln!("{} rows, smallest margin {worst:+.3e}", rows.len());
    Ok(())
}
