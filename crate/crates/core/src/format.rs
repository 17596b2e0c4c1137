//! Number formatting shared by the CSV writers.

/// `%.12g`-style formatting: 12 significant digits, trailing zeros trimmed,
/// scientific notation outside `1e-5 <= |x| < 1e12`.
pub fn sig12(x: f64) -> String {
    significant(x, 12)
}

pub fn significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (-1.82172107, "-1.82172107"),
            (std::f64::consts::PI, "3.14159265359"),
            (-std::f64::consts::SQRT_2, "-1.41421356237"),
            (1e-7, "1e-7"),
            (0.000123456789012345, "0.000123456789012"),
            (123456789012345.0, "1.23456789012e14"),
            (999999999999.9, "1e12"),
            (0.5, "0.5"),
        ];
        for (x, expect) in cases {
            assert_eq!(sig12(x), expect, "{x}");
        }
    }

    #[test]
    fn round_trips_to_twelve_digits() {
        for x in [-3.91127550, 0.18177154, 12345.678901234, -0.000042] {
            let back: f64 = sig12(x).parse().unwrap();
            assert!(((back - x) / x).abs() < 1e-11);
        }
    }
}
