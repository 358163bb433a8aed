//! Output formatting helpers shared by the file interfaces.
//!
//! Floats are rendered with 17 significant digits (`{:.16e}`) so that
//! identical inputs produce byte-identical files, and the decimal separator
//! is always `.` independent of locale.

/// 17-significant-digit scientific form, round-trip safe for f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Minimal JSON string escaping for the few free-text fields we emit.
pub fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_roundtrip() {
        for x in [0.0, 1.0, -1.79, std::f64::consts::PI, 1.234567890123456e-7] {
            let s = fmt_f64(x);
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, x, "{s}");
        }
    }

    #[test]
    fn escape() {
        assert_eq!(json_escape("a\"b\\c"), "a\\\"b\\\\c");
    }
}
