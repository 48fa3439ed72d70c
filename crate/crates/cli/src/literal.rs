//! Complex literals `a+bi`, `a-bi`, `bi`, `a`, with `−` accepted for `-`.

use qkzb::C64;

/// Parses one complex literal; no spaces allowed.
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let norm = s.replace('\u{2212}', "-");
    let bad = || format!("'{s}' is not a complex literal (expected a+bi, a-bi, bi or a)");
    if norm.is_empty() || norm.contains(char::is_whitespace) {
        return Err(bad());
    }
    let Some(body) = norm.strip_suffix('i') else {
        return match norm.parse::<f64>() {
            Ok(re) if re.is_finite() => Ok(C64::new(re, 0.0)),
            _ => Err(bad()),
        };
    };
    // The sign that splits real from imaginary part is the last `+`/`-`
    // that is neither leading nor part of an exponent.
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    if !(re.is_finite() && im.is_finite()) {
        return Err(bad());
    }
    Ok(C64::new(re, im))
}

/// A positive real, e.g. a tolerance.
pub fn parse_positive(s: &str) -> Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v > 0.0 && v.is_finite() => Ok(v),
        _ => Err(format!("'{s}' is not a positive number")),
    }
}
