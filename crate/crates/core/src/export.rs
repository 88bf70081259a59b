//! Text formatting shared by every CSV writer.

/// Twelve significant digits in scientific notation. Rust float formatting
/// ignores the process locale, so output is byte-stable across machines.
pub fn sig12(x: f64) -> String {
    format!("{x:.11e}")
}
