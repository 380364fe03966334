//! Fixed-width scientific formatting for text artifacts.

use alloc::format;
use alloc::string::String;

/// 17 significant digits, explicit signs, two-digit exponent at minimum:
/// `+1.0000000000000000e+00`, `-1.9531250000000000e-03`.
pub fn sci(x: f64) -> String {
    if x.is_nan() {
        return String::from("nan");
    }
    if x.is_infinite() {
        return String::from(if x > 0.0 { "+inf" } else { "-inf" });
    }
    let raw = format!("{:.16e}", x.abs());
    let (mantissa, exp) = raw.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if x.is_sign_negative() && x != 0.0 {
        '-'
    } else {
        '+'
    };
    let esign = if exp < 0 { '-' } else { '+' };
    format!("{sign}{mantissa}e{esign}{:02}", exp.abs())
}

#[cfg(test)]
mod tests {
    use super::sci;

    #[test]
    fn examples() {
        assert_eq!(sci(1.0), "+1.0000000000000000e+00");
        assert_eq!(sci(-0.001953125), "-1.9531250000000000e-03");
        assert_eq!(sci(0.0), "+0.0000000000000000e+00");
        assert_eq!(sci(-0.0), "+0.0000000000000000e+00");
        assert_eq!(sci(2f64.powi(400)), "+2.5822498780869086e+120");
        assert_eq!(sci(f64::NAN), "nan");
        for x in [0.1, 1.0 / 3.0, -2.0f64.sqrt(), 1e-300] {
            assert_eq!(sci(x).parse::<f64>().unwrap(), x);
        }
    }
}
