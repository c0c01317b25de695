//! Parsing of complex numbers in `a+bi` form.

use num_complex::Complex64 as C64;

/// Parse `"1"`, `"-0.5"`, `"2i"`, `"-i"`, `"1+2i"`, `"0.5-0.3i"`,
/// `"1e-3+2e-4i"` and friends.
pub fn parse_complex(input: &str) -> Result<C64, String> {
    let s = input.trim();
    if s.is_empty() {
        return Err("empty complex number".into());
    }
    if !s.ends_with('i') && !s.ends_with('I') {
        let re: f64 = s
            .parse()
            .map_err(|_| format!("cannot parse '{input}' as a real number"))?;
        return Ok(C64::new(re, 0.0));
    }

    let body = &s[..s.len() - 1];
    // Split at the last +/- that starts the imaginary part (not a leading
    // sign, not an exponent sign).
    let bytes = body.as_bytes();
    let mut split = None;
    for pos in (1..bytes.len()).rev() {
        let b = bytes[pos];
        if (b == b'+' || b == b'-') && !matches!(bytes[pos - 1], b'e' | b'E') {
            split = Some(pos);
            break;
        }
    }
    let (re_str, im_str) = match split {
        Some(pos) => (&body[..pos], &body[pos..]),
        None => ("", body),
    };
    let re = if re_str.is_empty() {
        0.0
    } else {
        re_str
            .parse()
            .map_err(|_| format!("cannot parse real part of '{input}'"))?
    };
    let im = match im_str {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other
            .parse()
            .map_err(|_| format!("cannot parse imaginary part of '{input}'"))?,
    };
    Ok(C64::new(re, im))
}

/// Render a complex number compactly (`0.5-0.3i`), inverse of
/// [`parse_complex`] up to float formatting.
pub fn format_complex(z: C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}{}i", z.re, z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}
