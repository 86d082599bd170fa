//! Shared CSV formatting.

use std::io::Write;

/// Twelve significant digits, scientific notation.
pub fn fmt12(x: f64) -> String {
    if x == 0.0 {
        // fold −0 into +0
        return format!("{:.11e}", 0.0f64);
    }
    format!("{x:.11e}")
}

/// Write `#`-prefixed provenance lines.
pub fn write_provenance<W: Write>(w: &mut W, lines: &[String]) -> std::io::Result<()> {
    for line in lines {
        writeln!(w, "# {line}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(fmt12(1.0), "1.00000000000e0");
        assert_eq!(fmt12(-0.0), fmt12(0.0));
        assert_eq!(fmt12(std::f64::consts::PI), "3.14159265359e0");
        assert_eq!(fmt12(1.5e-7), "1.50000000000e-7");
    }
}
