//! Numeric formatting for human-facing reports: 12 significant digits,
//! positional where readable, scientific otherwise, trailing zeros trimmed.
//! File formats do not use this; they serialize via `{}` so floats
//! round-trip exactly.

/// Format with 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp10 = x.abs().log10().floor() as i32;
    if (-4..12).contains(&exp10) {
        let prec = (11 - exp10).max(0) as usize;
        trim_positional(format!("{x:.prec$}"))
    } else {
        let s = format!("{x:.11e}");
        match s.split_once('e') {
            Some((mantissa, exp)) => format!("{}e{exp}", trim_positional(mantissa.to_string())),
            None => s,
        }
    }
}

fn trim_positional(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let trimmed = s.trim_end_matches('0').trim_end_matches('.');
    trimmed.to_string()
}
