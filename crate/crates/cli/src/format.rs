//! Fixed number formatting for CSV output.

/// C's `%.17g`: 17 significant digits, trailing zeros removed, exponent form
/// below 1e-4 and from 1e17 on.
pub fn g17(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let m = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One CSV line terminated by LF.
pub fn csv_row(cells: &[String]) -> String {
    let mut line = cells.join(",");
    line.push('\n');
    line
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf() {
        let cases = [
            (1.0, "1"),
            (-1.0, "-1"),
            (0.5, "0.5"),
            (0.1, "0.10000000000000001"),
            (1.2130613194252668, "1.2130613194252668"),
            (1e-5, "1.0000000000000001e-05"),
            (1e-4, "0.0001"),
            (123456.0, "123456"),
            (1e17, "1e+17"),
            (1e16, "10000000000000000"),
            (-2.5e-300, "-2.5e-300"),
            (9.999999999999999e16, "99999999999999984"),
            (1e-300 / 3.0, "3.3333333333333334e-301"),
            (f64::NAN, "nan"),
            (f64::NEG_INFINITY, "-inf"),
            (0.0, "0"),
        ];
        for (x, want) in cases {
            assert_eq!(g17(x), want, "{x:e}");
        }
    }
}
