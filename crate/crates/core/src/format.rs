//! Number formatting shared by every text emitter.

/// Significant digits printed for amplitudes and physical quantities.
pub const SIGNIFICANT_DIGITS: i32 = 10;

/// Values with smaller magnitude print as `0`.
pub const SUPPRESS_BELOW: f64 = 1e-12;

/// Formats `x` with ten significant digits, trailing zeros trimmed.
pub fn format_sig(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x.abs() < SUPPRESS_BELOW {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-5..15).contains(&magnitude) {
        let s = format!("{:.*e}", (SIGNIFICANT_DIGITS - 1) as usize, x);
        let (mantissa, exp) = s.split_once('e').expect("exponent form");
        return format!("{}e{}", trim_zeros(mantissa), exp);
    }
    let decimals = (SIGNIFICANT_DIGITS - 1 - magnitude).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    let s = trim_zeros(&s);
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

/// The value `format_sig` prints, as a number.
pub fn round_sig(x: f64) -> f64 {
    format_sig(x).parse().unwrap_or(x)
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}
