//! Locale-independent number formatting shared by every output format.

/// Significant digits carried by CSV and JSON output.
pub const SIG_DIGITS: usize = 12;

/// Rounds `x` to [`SIG_DIGITS`] significant digits. Negative zero becomes zero.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    let rounded: f64 = format!("{:.*e}", SIG_DIGITS - 1, x)
        .parse()
        .expect("exponent formatting round-trips");
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

/// Formats `x` with at most [`SIG_DIGITS`] significant digits.
///
/// Uses plain decimal notation for magnitudes in `[1e-6, 1e15)` and
/// exponent notation outside it.
pub fn sig(x: f64) -> String {
    let r = round_sig(x);
    if r == 0.0 {
        return "0".to_string();
    }
    if !r.is_finite() {
        return format!("{r}");
    }
    let mag = r.abs();
    if (1e-6..1e15).contains(&mag) {
        format!("{r}")
    } else {
        format!("{r:e}")
    }
}

/// serde helper: serialize an `f64` rounded to [`SIG_DIGITS`].
pub fn ser_sig<S: serde::Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(round_sig(*x))
}
