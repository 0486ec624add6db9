//! The measure config file.
//!
//! ```text
//! # middle-third style example
//! p = 1
//! q = 2
//! r = 1
//! preperiod = [2]
//! period = [3]
//! ```
//!
//! One `key = value` pair per line, keys in any order, each at most once.
//! `p`, `q`, `r` and `period` are required; `preperiod` defaults to `[]`.
//! Lines whose first non-blank character is `#` are comments.

use num_bigint::BigInt;

use super::{canonicalize_ratio, DigitSequence, MoranMeasure};
use crate::error::{Error, Result};

#[derive(Default)]
struct Fields {
    p: Option<BigInt>,
    q: Option<BigInt>,
    r: Option<u32>,
    preperiod: Option<Vec<u64>>,
    period: Option<Vec<u64>>,
}

/// Parses a measure description; the ratio is canonicalized and every digit
/// checked for primality.
pub fn parse_measure_config(text: &str) -> Result<MoranMeasure> {
    let mut fields = Fields::default();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let trimmed = raw.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut cursor = Cursor::new(raw, line);
        cursor.skip_ws();
        let key_col = cursor.column();
        let key = cursor.take_while(|c| c.is_ascii_alphanumeric() || c == '_');
        if key.is_empty() {
            return Err(cursor.error("expected a key"));
        }
        cursor.skip_ws();
        cursor.expect('=')?;
        cursor.skip_ws();
        let duplicate = || Error::Syntax {
            line,
            column: key_col,
            message: format!("duplicate key `{key}`"),
        };
        match key.as_str() {
            "p" | "q" => {
                let value = cursor.integer()?;
                let slot = if key == "p" { &mut fields.p } else { &mut fields.q };
                if slot.replace(value).is_some() {
                    return Err(duplicate());
                }
            }
            "r" => {
                let col = cursor.column();
                let value = cursor.integer()?;
                let r = u32::try_from(&value).map_err(|_| Error::Syntax {
                    line,
                    column: col,
                    message: format!("r = {value} is out of range"),
                })?;
                if fields.r.replace(r).is_some() {
                    return Err(duplicate());
                }
            }
            "preperiod" | "period" => {
                let list = cursor.digit_list()?;
                let slot = if key == "period" {
                    &mut fields.period
                } else {
                    &mut fields.preperiod
                };
                if slot.replace(list).is_some() {
                    return Err(duplicate());
                }
            }
            _ => {
                return Err(Error::Syntax {
                    line,
                    column: key_col,
                    message: format!("unknown key `{key}`"),
                })
            }
        }
        cursor.skip_ws();
        if !cursor.at_end() {
            return Err(cursor.error("unexpected trailing characters"));
        }
    }

    let missing = |name: &str| Error::Syntax {
        line: last_line.max(1),
        column: 1,
        message: format!("missing required key `{name}`"),
    };
    let p = fields.p.ok_or_else(|| missing("p"))?;
    let q = fields.q.ok_or_else(|| missing("q"))?;
    let r = fields.r.ok_or_else(|| missing("r"))?;
    let period = fields.period.ok_or_else(|| missing("period"))?;
    let digits = DigitSequence::new(fields.preperiod.unwrap_or_default(), period)?;
    let ratio = canonicalize_ratio(p, q, r)?;
    Ok(MoranMeasure::new(ratio, digits))
}

struct Cursor {
    chars: Vec<char>,
    pos: usize,
    line: usize,
}

impl Cursor {
    fn new(src: &str, line: usize) -> Self {
        Self {
            chars: src.chars().collect(),
            pos: 0,
            line,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn take_while(&mut self, pred: impl Fn(char) -> bool) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if pred(c)) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a nonnegative integer"));
        }
        let digits: String = self.chars[start..self.pos].iter().collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn digit_list(&mut self) -> Result<Vec<u64>> {
        self.expect('[')?;
        let mut out = Vec::new();
        self.skip_ws();
        if self.peek() == Some(']') {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            self.skip_ws();
            let col = self.column();
            let value = self.integer()?;
            let digit = u64::try_from(&value).map_err(|_| Error::Syntax {
                line: self.line,
                column: col,
                message: format!("digit {value} is out of range"),
            })?;
            out.push(digit);
            self.skip_ws();
            match self.peek() {
                Some(',') => self.pos += 1,
                Some(']') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(self.error("expected `,` or `]`")),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn triple(m: &MoranMeasure) -> (i64, i64, u32) {
        let r = m.ratio();
        (r.p().to_i64().unwrap(), r.q().to_i64().unwrap(), r.r())
    }

    #[test]
    fn parses_full_config() {
        let m = parse_measure_config(
            "# sample\n\np = 2\nq=3\n  r = 2\npreperiod = [3]\nperiod = [5, 7]\n",
        )
        .unwrap();
        assert_eq!(triple(&m), (2, 3, 2));
        assert_eq!(m.digits().preperiod(), &[3]);
        assert_eq!(m.digits().period(), &[5, 7]);
        assert_eq!(m.sup_digit(), 7);
    }

    #[test]
    fn preperiod_defaults_to_empty() {
        let m = parse_measure_config("period = [3]\nr = 1\nq = 2\np = 1").unwrap();
        assert!(m.digits().preperiod().is_empty());
        assert_eq!(triple(&m), (1, 2, 1));
    }

    #[test]
    fn canonicalizes_ratio() {
        let m = parse_measure_config("p = 4\nq = 9\nr = 4\nperiod = [5]\n").unwrap();
        assert_eq!(triple(&m), (2, 3, 2));
    }

    #[test]
    fn rejects_composite_digit() {
        let err = parse_measure_config("p = 1\nq = 2\nr = 1\nperiod = [4]\n").unwrap_err();
        assert_eq!(err, Error::NotPrime(4));
        assert_eq!(err.to_string(), "digit 4 is not prime");
    }

    #[test]
    fn rejects_bad_ratio_and_empty_period() {
        assert!(matches!(
            parse_measure_config("p = 3\nq = 2\nr = 1\nperiod = [3]"),
            Err(Error::InvalidRatio(_))
        ));
        assert_eq!(
            parse_measure_config("p = 1\nq = 2\nr = 1\nperiod = []"),
            Err(Error::EmptyPeriod)
        );
    }

    #[test]
    fn reports_positions() {
        let err = parse_measure_config("p = 1\nq = 2\nr = x\nperiod = [3]").unwrap_err();
        assert_eq!(
            err,
            Error::Syntax {
                line: 3,
                column: 5,
                message: "expected a nonnegative integer".into()
            }
        );
        let err = parse_measure_config("p = 1\np = 1\nq = 2\nr = 1\nperiod = [3]").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 2, column: 1, .. }), "{err}");
        let err = parse_measure_config("p = 1\nq = 2\nr = 1\nperiod = [3 5]").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 4, column: 13, .. }), "{err}");
        let err = parse_measure_config("p = 1\nq = 2\nperiod = [3]").unwrap_err();
        assert!(err.to_string().contains("missing required key `r`"));
        let err = parse_measure_config("p = 1\nq = 2\nr = 1\nperiod = [3]\nrho = 3").unwrap_err();
        assert!(err.to_string().contains("unknown key `rho`"));
        let err = parse_measure_config("p = 1 2\nq = 2\nr = 1\nperiod = [3]").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, column: 7, .. }), "{err}");
    }
}
