//! Number formatting shared by the CSV and JSON writers.

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_complex::Complex64;

/// Formats `x` with 15 significant digits in positional notation, falling
/// back to exponent notation for very large or very small magnitudes.
pub fn fmt_sig(x: f64) -> String {
    fmt_sig_digits(x, 15)
}

pub fn fmt_sig_digits(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-6..=20).contains(&mag) {
        return format!("{:.*e}", digits.saturating_sub(1), x);
    }
    let decimals = (digits as i32 - 1 - mag).max(0) as usize;
    let s = format!("{:.*}", decimals, x);
    let s = if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    };
    if s == "-0" {
        "0".to_string()
    } else {
        s
    }
}

/// `a+bi` / `a-bi` with both parts at 15 significant digits.
pub fn fmt_complex(z: Complex64) -> String {
    join_complex(fmt_sig(z.re), fmt_sig(z.im))
}

fn join_complex(re: String, im: String) -> String {
    match im.strip_prefix('-') {
        Some(abs) => format!("{re}-{abs}i"),
        None => format!("{re}+{im}i"),
    }
}

/// Like [`fmt_sig`] for a wide float whose magnitude may be far outside
/// the range of a double.
pub fn fmt_bigfloat_sig(x: &BigFloat) -> String {
    let mut cc = Consts::new().expect("astro-float constants");
    let s = match x.format(Radix::Dec, RoundingMode::ToEven, &mut cc) {
        Ok(s) => s,
        Err(_) => return "NaN".to_string(),
    };
    let (mantissa, exp) = match s.split_once('e') {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (s.as_str(), 0),
    };
    if (-300..=300).contains(&exp) {
        return fmt_sig(s.parse().unwrap_or(f64::NAN));
    }
    // The mantissa is in [1, 10); rounding may carry into the exponent.
    let m: f64 = mantissa.parse().unwrap_or(f64::NAN);
    let mut rounded = format!("{:.14}", m.abs());
    let mut exp = exp;
    if rounded.starts_with("10") {
        rounded = format!("{:.14}", m.abs() / 10.0);
        exp += 1;
    }
    let sign = if m < 0.0 { "-" } else { "" };
    format!("{sign}{rounded}e{exp}")
}

pub fn fmt_bigfloat_complex(re: &BigFloat, im: &BigFloat) -> String {
    join_complex(fmt_bigfloat_sig(re), fmt_bigfloat_sig(im))
}
