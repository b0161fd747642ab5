//! Power sums and normal tails used for normalizing the discrete families.

use libm::erfc;

/// B_{2m} / (2m)! for m = 1..=8.
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
];

/// Sum of `(shift + j)^(-s)` for `j = from ..= to` (`to = None` means to
/// infinity, which requires `s > 1`).
///
/// Terms are summed directly until `shift + j` is large compared with `s`;
/// the remainder is closed with an Euler–Maclaurin expansion of eight
/// Bernoulli terms, whose truncation error there is below 1e-13 of the
/// first remaining term.
pub fn power_sum(s: f64, shift: f64, from: u64, to: Option<u64>) -> f64 {
    debug_assert!(shift + from as f64 > 0.0);
    debug_assert!(to.is_some() || s > 1.0);
    if let Some(to) = to {
        if to < from {
            return 0.0;
        }
    }
    let start_em = (s + 20.0).max(24.0);
    let mut j = from;
    let mut sum = 0.0;
    loop {
        let x = shift + j as f64;
        let direct_left = to.map_or(u64::MAX, |t| t - j);
        if x >= start_em && direct_left >= 64 {
            break;
        }
        sum += x.powf(-s);
        if to == Some(j) {
            return sum;
        }
        j += 1;
    }
    sum + euler_maclaurin(s, shift + j as f64, to.map(|t| shift + t as f64))
}

/// Euler–Maclaurin estimate of the sum of x^(-s) over x = a, a+1, ..., b.
fn euler_maclaurin(s: f64, a: f64, b: Option<f64>) -> f64 {
    let integral = match b {
        None => a.powf(1.0 - s) / (s - 1.0),
        Some(b) if (s - 1.0).abs() < 1e-12 => (b / a).ln(),
        Some(b) => (a.powf(1.0 - s) - b.powf(1.0 - s)) / (s - 1.0),
    };
    let fa = a.powf(-s);
    let fb = b.map_or(0.0, |b| b.powf(-s));
    let mut total = integral + 0.5 * (fa + fb);

    // d^n/dx^n x^(-s) = (-1)^n s (s+1) ... (s+n-1) x^(-s-n); only odd n appear,
    // so the derivative is -rising * x^(-s-n).
    let mut rising = s;
    let mut da = fa / a;
    let mut db = b.map_or(0.0, |b| fb / b);
    for (m, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if m > 0 {
            let n = (2 * m) as f64;
            rising *= (s + n - 1.0) * (s + n);
            da /= a * a;
            if let Some(b) = b {
                db /= b * b;
            }
        }
        // coeff * (f^(n)(b) - f^(n)(a)) with f^(n) = -rising * x^(-s-n)
        total += coeff * rising * (da - db);
    }
    total
}

/// P(Z > z) for a standard normal Z.
pub fn normal_upper_tail(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute(s: f64, shift: f64, from: u64, to: u64) -> f64 {
        (from..=to).map(|j| (shift + j as f64).powf(-s)).sum()
    }

    #[test]
    fn zeta_two() {
        let z = power_sum(2.0, 0.0, 1, None);
        assert!(
            (z - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14,
            "{z}"
        );
    }

    #[test]
    fn zeta_four_and_shifted() {
        let z = power_sum(4.0, 0.0, 1, None);
        assert!((z - std::f64::consts::PI.powi(4) / 90.0).abs() < 1e-14);
        // Hurwitz zeta(2, 1/2) = pi^2/2 = sum over j >= 0 of (j + 1/2)^-2.
        let h = power_sum(2.0, -0.5, 1, None);
        assert!((h - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-13);
    }

    #[test]
    fn finite_ranges_match_brute_force() {
        for &(s, shift, from, to) in &[
            (0.5, 0.0, 1, 5000),
            (1.0, 0.0, 1, 100_000),
            (1.7, 3.2, 10, 20_000),
            (2.5, 0.0, 1, 63),
            (30.0, 0.0, 1, 1000),
            (1.1, 200.0, 500, 900),
        ] {
            let got = power_sum(s, shift, from, Some(to));
            let want = brute(s, shift, from, to);
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "{s} {shift}: {got} vs {want}"
            );
        }
        assert_eq!(power_sum(2.0, 0.0, 5, Some(4)), 0.0);
    }

    #[test]
    fn tails_match_brute_force_plus_midpoint_integral() {
        for &(s, shift) in &[
            (1.2, 0.0),
            (2.2, 6.7),
            (3.0, 0.5),
            (50.0, 0.0),
            (80.0, 208.0),
        ] {
            let n = 200_000u64;
            let head = brute(s, shift, 1, n);
            let tail = (shift + n as f64 + 0.5).powf(1.0 - s) / (s - 1.0);
            let want = head + tail;
            let got = power_sum(s, shift, 1, None);
            assert!(
                ((got - want) / want).abs() < 1e-12,
                "{s} {shift}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn normal_tail() {
        assert!((normal_upper_tail(0.0) - 0.5).abs() < 1e-15);
        let q = normal_upper_tail(1.959963984540054);
        assert!((q - 0.025).abs() < 1e-12, "{q:e}");
    }
}
