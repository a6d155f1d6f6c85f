//! Number rounding shared by every output format.

/// Significant digits kept in every written float.
pub const SIG_DIGITS: usize = 12;

/// Rounds to [`SIG_DIGITS`] significant digits; non-finite values and zero
/// pass through (negative zero becomes zero).
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    if x == 0.0 {
        return 0.0;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x)
        .parse()
        .expect("formatted float parses")
}

/// Shortest text of the rounded value.
pub fn num(x: f64) -> String {
    format!("{}", round_sig(x))
}
