//! Value parsers for command-line lists, ranges and rational exponents.

use crate::error::CliError;

/// A decimal or an exact rational such as `4/3`.
pub fn number(text: &str) -> Result<f64, CliError> {
    let text = text.trim();
    let bad = || CliError::Usage(format!("`{text}` is not a number"));
    let value = match text.split_once('/') {
        Some((num, den)) => {
            let num: f64 = num.trim().parse().map_err(|_| bad())?;
            let den: f64 = den.trim().parse().map_err(|_| bad())?;
            if den == 0.0 {
                return Err(CliError::Usage(format!("zero denominator in `{text}`")));
            }
            num / den
        }
        None => text.parse().map_err(|_| bad())?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

/// Comma-separated numbers.
pub fn numbers(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',').map(number).collect()
}

fn integer(text: &str) -> Result<usize, CliError> {
    text.trim().parse().map_err(|_| CliError::Usage(format!("`{}` is not a nonnegative integer", text.trim())))
}

/// Comma-separated integers or inclusive ranges: `3`, `1..8`, `1,4..6`.
pub fn integers(text: &str) -> Result<Vec<usize>, CliError> {
    let mut out = Vec::new();
    for part in text.split(',') {
        match part.split_once("..") {
            Some((lo, hi)) => {
                let (lo, hi) = (integer(lo)?, integer(hi.trim_start_matches('='))?);
                if lo > hi {
                    return Err(CliError::Usage(format!("empty range `{}`", part.trim())));
                }
                out.extend(lo..=hi);
            }
            None => out.push(integer(part)?),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals() {
        assert_eq!(number("4/3").unwrap(), 4.0 / 3.0);
        assert_eq!(number(" 1.5 ").unwrap(), 1.5);
        assert_eq!(numbers("4/3,2").unwrap(), vec![4.0 / 3.0, 2.0]);
        assert!(number("1/0").is_err());
        assert!(number("x").is_err());
        assert!(number("inf").is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(integers("1..8").unwrap(), (1..=8).collect::<Vec<_>>());
        assert_eq!(integers("1").unwrap(), vec![1]);
        assert_eq!(integers("2,5..=6").unwrap(), vec![2, 5, 6]);
        assert!(integers("4..2").is_err());
        assert!(integers("-1").is_err());
    }
}
