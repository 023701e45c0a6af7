//! Driving a run from a JSON configuration, as the command-line tool does.

use hyprobin::cli::run;
use hyprobin::config::{emit_config, parse_config};

fn main() -> hyprobin::Result<()> {
    let cfg = parse_config(
        r#"{
            "command": "verify-thm4",
            "domain": { "r0": 0.9, "modes": [{ "k": 2, "amplitude": 0.03, "phase": 0.0 }] },
            "betas": [1.0]
        }"#,
    )?;
    println!("{}", emit_config(&cfg));
    let out = run(&cfg)?;
    print!("{}", out.summary);
    println!("exit status {}", out.status.code());
    Ok(())
}
