//! Numeric rendering for analytic output.
//!
//! Results are printed with at most 12 significant digits in the shortest
//! form that preserves them (`%.12g` style, `.` decimal separator). JSON
//! output carries the same values by round-tripping through [`g12_value`],
//! so CSV and JSON renderings of one result agree digit for digit.

/// Formats with at most 12 significant digits, trimming trailing zeros.
///
/// Fixed-point notation is used for decimal exponents in `[-4, 11]`,
/// scientific notation (`1.5e-7` style, no exponent padding) outside.
pub fn g12(x: f64) -> String {
    if x == 0.0 {
        return "0".to_owned();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let scientific = format!("{x:.11e}");
    let (mantissa, exp_str) = scientific.split_once('e').expect("exponent present");
    let exp: i32 = exp_str.parse().expect("valid exponent");
    let negative = mantissa.starts_with('-');
    let all_digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let digits = all_digits.trim_end_matches('0');
    let digits = if digits.is_empty() { "0" } else { digits };

    let body = if (-4..12).contains(&exp) {
        if exp >= 0 {
            let int_len = (exp + 1) as usize;
            if digits.len() > int_len {
                format!("{}.{}", &digits[..int_len], &digits[int_len..])
            } else {
                format!("{}{}", digits, "0".repeat(int_len - digits.len()))
            }
        } else {
            format!("0.{}{}", "0".repeat((-exp - 1) as usize), digits)
        }
    } else {
        let (head, rest) = digits.split_at(1);
        if rest.is_empty() {
            format!("{head}e{exp}")
        } else {
            format!("{head}.{rest}e{exp}")
        }
    };
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// The value [`g12`] prints, parsed back to `f64`.
pub fn g12_value(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    g12(x).parse().expect("g12 output parses as f64")
}
