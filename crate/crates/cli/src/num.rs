//! Locale-independent number formatting with 12 significant digits.

pub const SIG_DIGITS: usize = 12;

/// `%.12g`-style: fixed notation for exponents in `[-5, 12)`, scientific
/// otherwise; trailing zeros dropped, `-0` printed as `0`.
pub fn fmt(v: f64) -> String {
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..SIG_DIGITS as i32).contains(&exp) {
        return format!("{}e{}", trim(mantissa), exp);
    }
    let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
    let fixed = trim(&format!("{:.*}", decimals, v)).to_string();
    if fixed == "-0" {
        "0".into()
    } else {
        fixed
    }
}

fn trim(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// The value rounded to what [`fmt`] prints, for JSON output.
pub fn rounded(v: f64) -> f64 {
    if v.is_finite() {
        fmt(v).parse().expect("formatted number parses")
    } else {
        v
    }
}
