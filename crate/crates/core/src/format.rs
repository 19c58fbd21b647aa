//! Number formatting shared by the CLI, CSV output and reports.

/// Shortest stable rendering of `x`.
///
/// The value is rounded to 13 significant digits, then printed positionally
/// for exponents in `[-5, 15)` and in scientific notation otherwise.
pub fn num(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.12e}");
    let rounded: f64 = sci.parse().unwrap_or(x);
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap_or(0);
    if (-5..15).contains(&exp) {
        let decimals = (12 - exp).max(0) as usize;
        trim(format!("{rounded:.decimals$}"))
    } else {
        format!("{}e{exp}", trim(mantissa.to_string()))
    }
}

fn trim(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}
