//! Sweep configuration files.
//!
//! One entry per line, either `a,b,c p` or `r; a11,...,arr p`. Text after `#`
//! is ignored, as are blank lines.

use std::str::FromStr;

use qform_core::{Prime, QuadraticForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepEntry {
    pub line: usize,
    pub form: QuadraticForm,
    pub prime: Prime,
}

#[derive(Debug, thiserror::Error)]
#[error("line {line}: {reason}")]
pub struct ConfigError {
    pub line: usize,
    pub reason: String,
}

pub fn parse(text: &str) -> Result<Vec<SweepEntry>, ConfigError> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fail = |reason: String| ConfigError { line, reason };
        let (form, prime) = content
            .rsplit_once(char::is_whitespace)
            .ok_or_else(|| fail(format!("expected \"<form> <prime>\", found {content:?}")))?;
        let prime: u64 = prime
            .parse()
            .map_err(|_| fail(format!("{prime:?} is not a positive integer")))?;
        let prime = Prime::new(prime).map_err(|e| fail(e.to_string()))?;
        let form = QuadraticForm::from_str(form.trim()).map_err(|e| fail(e.to_string()))?;
        entries.push(SweepEntry { line, form, prime });
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_shapes() {
        let text =
            "# grid\n1,0,1 5\n\n 3; 1,0,0, 1,0, 1   7  # sum of three squares\n1, -1, -1 2\n";
        let entries = parse(text).unwrap();
        assert_eq!(entries.len(), 3);
        assert_eq!(entries[0].form.to_string(), "1,0,1");
        assert_eq!(entries[1].form.rank(), 3);
        assert_eq!(entries[1].prime.get(), 7);
        assert_eq!(entries[2].line, 5);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse("1,0,1 5\n2,0,2 3\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = parse("1,0,1 9\n").unwrap_err();
        assert!(err.reason.contains("not prime"));
        assert_eq!(parse("1,0,1\n").unwrap_err().line, 1);
    }
}
