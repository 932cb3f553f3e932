//! Deterministic float rendering: 12 significant digits, `.` separator,
//! trailing zeros trimmed, scientific notation outside a positional
//! window. Locale-independent by construction.

pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", 11, x); // 12 significant digits
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("valid exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let digits = digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };
    let sign = if negative { "-" } else { "" };

    if (-4..12).contains(&exp) {
        // positional rendering with the point after position exp+1
        let point = exp + 1;
        if point <= 0 {
            format!("{sign}0.{}{digits}", "0".repeat(-point as usize))
        } else if (point as usize) >= digits.len() {
            format!("{sign}{digits}{}", "0".repeat(point as usize - digits.len()))
        } else {
            format!("{sign}{}.{}", &digits[..point as usize], &digits[point as usize..])
        }
    } else if digits.len() == 1 {
        format!("{sign}{digits}e{exp}")
    } else {
        format!("{sign}{}.{}e{exp}", &digits[..1], &digits[1..])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renders_fixture_values() {
        assert_eq!(fmt_f64(0.0), "0");
        assert_eq!(fmt_f64(2.0), "2");
        assert_eq!(fmt_f64(16.0), "16");
        assert_eq!(fmt_f64(0.25), "0.25");
        assert_eq!(fmt_f64(0.35), "0.35");
        assert_eq!(fmt_f64(1.0 / 6.0), "0.166666666667");
        assert_eq!(fmt_f64(14.0 / 60.0), "0.233333333333");
        assert_eq!(fmt_f64(-1.5), "-1.5");
        assert_eq!(fmt_f64(0.1 + 0.2), "0.3");
        assert_eq!(fmt_f64(1e15), "1e15");
        assert_eq!(fmt_f64(1.25e-7), "1.25e-7");
        assert_eq!(fmt_f64(123456789012345.0), "1.23456789012e14");
        assert_eq!(fmt_f64(0.0001), "0.0001");
        assert_eq!(fmt_f64(0.00001), "1e-5");
    }
}
