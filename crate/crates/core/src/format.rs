//! Number formatting shared by every text output.

/// Fixed-point decimal with 12 significant digits. Zero prints as `0`,
/// non-finite values as `inf`, `-inf` or `nan`.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (11 - exponent).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit, e.g. 9.99… -> 10.0…
    let rounded: f64 = s.parse().expect("formatted float parses");
    if decimals > 0 && rounded.abs() >= 10f64.powi(exponent + 1) {
        let d = decimals - 1;
        return format!("{x:.d$}");
    }
    s
}
