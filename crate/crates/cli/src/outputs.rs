//! Small text-output helpers: CSV assembly and number formatting.
//!
//! All artifacts are UTF-8 with LF line endings and deterministic
//! column order; floats print in Rust's shortest round-trip form.

/// Shortest decimal representation that parses back to the same `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v}")
}

/// Quotes a CSV field only when it needs it (comma, quote, newline).
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Incremental CSV text builder.
#[derive(Debug, Clone)]
pub struct Csv {
    buf: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Csv {
        let mut csv = Csv { buf: String::new() };
        csv.row(header.iter().map(|s| s.to_string()));
        csv
    }

    pub fn row<I>(&mut self, fields: I)
    where
        I: IntoIterator<Item = String>,
    {
        let mut first = true;
        for field in fields {
            if !first {
                self.buf.push(',');
            }
            first = false;
            self.buf.push_str(&csv_field(&field));
        }
        self.buf.push('\n');
    }

    pub fn into_string(self) -> String {
        self.buf
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_display() {
        for v in [0.1, 1.0 / 3.0, 1e-9, 123456.789, -0.00014325, f64::MAX] {
            assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn csv_quotes_only_when_needed() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn builder_emits_lf_rows() {
        let mut csv = Csv::new(&["cuisine", "value"]);
        csv.row(["a".to_string(), fmt_f64(1.5)]);
        assert_eq!(csv.into_string(), "cuisine,value\na,1.5\n");
    }
}
