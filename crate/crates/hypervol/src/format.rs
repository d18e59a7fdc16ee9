//! Locale-free number formatting for the CSV and text outputs.
//!
//! CSV output must be byte-stable across runs and platforms: every float is
//! rendered with 17 significant digits (enough to round-trip an `f64`
//! exactly), a `.` decimal separator, and `e` exponent notation. Infinities
//! render as `"inf"` in CSV and `null` in JSON.

use hypervol_core::Complex64;

/// Renders a float with 17 significant digits, byte-stable.
///
/// `+inf` renders as `"inf"` (edge lengths at ideal vertices); NaN never
/// reaches the formatter and renders as `"nan"` defensively.
pub fn csv_f64(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x:.16e}")
}

/// Renders a float for human-readable text: Rust's shortest round-trip
/// representation, `inf` for infinities.
pub fn text_f64(x: f64) -> String {
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    format!("{x}")
}

/// Renders a complex number as `a + bi` / `a - bi` for text reports.
pub fn text_complex(z: Complex64) -> String {
    if z.im >= 0.0 {
        format!("{} + {}i", text_f64(z.re), text_f64(z.im))
    } else {
        format!("{} - {}i", text_f64(z.re), text_f64(-z.im))
    }
}

/// JSON value for a possibly-infinite float: `null` when not finite.
///
/// `serde_json` already maps non-finite floats to `null`; this helper just
/// makes that contract explicit at the call sites that rely on it.
pub fn json_f64(x: f64) -> serde_json::Value {
    serde_json::Number::from_f64(x).map_or(serde_json::Value::Null, serde_json::Value::Number)
}
