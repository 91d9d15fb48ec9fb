//! Parsers for the command line: rationals, comma lists and `key = value` configs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::series::Scalar;

/// Longest accepted numerator or denominator, in characters.
const MAX_DIGITS: usize = 512;

fn parse_int(s: &str) -> Result<BigInt> {
    let s = s.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || digits.len() > MAX_DIGITS || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not an integer: {s:?}")));
    }
    s.parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}")))
}

/// `"3"`, `"-2/7"` or `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Scalar> {
    let s = s.trim();
    if let Some((num, den)) = s.split_once('/') {
        let den = parse_int(den)?;
        if den.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Scalar::new(parse_int(num)?, den));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || frac.len() > MAX_DIGITS || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal: {s:?}")));
        }
        let negative = whole.trim_start().starts_with('-');
        let whole = if whole.trim().is_empty() || whole.trim() == "-" || whole.trim() == "+" {
            BigInt::zero()
        } else {
            parse_int(whole)?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let part = Scalar::new(frac.parse::<BigInt>().map_err(|e| Error::Parse(e.to_string()))?, scale);
        let whole = Scalar::from_integer(whole);
        return Ok(if negative { whole - part } else { whole + part });
    }
    Ok(Scalar::from_integer(parse_int(s)?))
}

/// Comma separated rationals; the empty string is the empty list.
pub fn parse_list(s: &str) -> Result<Vec<Scalar>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(parse_rational).collect()
}

/// Comma separated integers, for partitions and shifts.
pub fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|p| p.trim().parse::<i64>().map_err(|_| Error::Parse(format!("not a small integer: {p:?}"))))
        .collect()
}

/// `key = value` lines. `#` starts a comment, blank lines are skipped and
/// repeated keys are rejected.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| Error::Parse(format!("line {}: missing '='", no + 1)))?;
        let k = k.trim();
        if k.is_empty() || !k.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(Error::Parse(format!("line {}: bad key {k:?}", no + 1)));
        }
        if out.insert(k.to_string(), v.trim().to_string()).is_some() {
            return Err(Error::Parse(format!("line {}: duplicate key {k:?}", no + 1)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::frac;

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-2/6").unwrap(), frac(-1, 3));
        assert_eq!(parse_rational(" 0.25").unwrap(), frac(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), frac(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn config() {
        let c = parse_config("N = 2\n# note\nt=1/3 # inline\n").unwrap();
        assert_eq!(c["N"], "2");
        assert_eq!(c["t"], "1/3");
        assert!(parse_config("a=1\na=2").is_err());
        assert!(parse_config("junk").is_err());
    }
}
