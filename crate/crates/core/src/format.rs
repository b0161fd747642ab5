//! The one place numbers become text. Reports, plot annotations and model
//! strings all go through these helpers.

/// 17 significant digits; parses back to the identical f64.
pub fn exact(x: f64) -> String {
    format!("{x:.16e}")
}

/// Four significant digits: fixed notation for magnitudes in [1e-3, 1e4),
/// scientific otherwise.
pub fn sig4(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0.000".to_string();
    }
    let mut exp = x.abs().log10().floor() as i32;
    // Rounding can carry into the next decade (9.9996 -> 10.00).
    let scaled = (x.abs() / 10f64.powi(exp - 3)).round();
    if scaled >= 10_000.0 {
        exp += 1;
    }
    if (-3..4).contains(&exp) {
        let decimals = (3 - exp).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.3e}")
    }
}

/// Fixed number of decimals.
pub fn fixed(x: f64, decimals: usize) -> String {
    format!("{x:.decimals$}")
}
