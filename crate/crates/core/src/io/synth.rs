use std::io::Write;

use crate::error::{Error, Result};
use crate::rng::{SeededSource, UniformSource};

/// Column written by [`write_synthetic_hcovany`].
pub const SYNTH_COLUMN: &str = "HCOVANY";

/// Writes an `n`-row CSV shaped like an IPUMS extract (`SERIAL,HCOVANY`)
/// with `round(n * pi_a)` uninsured rows (code 1) at seeded random
/// positions, the rest coded 2. Returns the number of code-1 rows.
pub fn write_synthetic_hcovany(
    mut out: impl Write,
    n: usize,
    pi_a: f64,
    seed: u64,
) -> Result<usize> {
    if n == 0 || !(0.0..=1.0).contains(&pi_a) {
        return Err(Error::InvalidParameter(format!(
            "need n > 0 and pi_A in [0, 1], got n = {n}, pi_A = {pi_a}"
        )));
    }
    let members = (n as f64 * pi_a).round() as usize;
    let mut codes = vec![2u8; n];
    codes[..members].fill(1);
    let mut rng = SeededSource::new(seed);
    for i in (1..n).rev() {
        let j = ((rng.uniform() * (i + 1) as f64) as usize).min(i);
        codes.swap(i, j);
    }
    writeln!(out, "SERIAL,{SYNTH_COLUMN}")?;
    for (i, c) in codes.iter().enumerate() {
        writeln!(out, "{},{}", i + 1, c)?;
    }
    out.flush()?;
    Ok(members)
}
