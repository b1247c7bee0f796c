//! Rounding real length formulas to edge counts.
//!
//! Formulas such as `(2d − ε)ℓ` are evaluated in floating point, where a value
//! that is mathematically an integer may land just above it. Rounding treats
//! anything within `TOLERANCE` of an integer as that integer.

pub const TOLERANCE: f64 = 1e-9;

/// `⌈x⌉`, clamped at zero.
pub fn ceil_len(x: f64) -> usize {
    (x - TOLERANCE).ceil().max(0.0) as usize
}

/// `⌊x⌋`, clamped at zero.
pub fn floor_len(x: f64) -> usize {
    (x + TOLERANCE).floor().max(0.0) as usize
}
