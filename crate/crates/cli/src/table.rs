//! Fixed-format CSV emission.

use std::io::Write;

/// Significant digits of every floating-point field.
pub const SIGNIFICANT_DIGITS: usize = 12;

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `printf("%.12g")`: shortest of fixed and scientific notation at 12
/// significant digits, trailing zeros removed.
pub fn format_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sig = SIGNIFICANT_DIGITS as i32;
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("`e` format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= sig {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        let decimals = (sig - 1 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Empty,
}

impl Cell {
    pub fn from_option(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(i) => Some(*i as f64),
            Cell::Empty => None,
        }
    }

    fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_g(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column(&self, name: &str) -> Option<Vec<Cell>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// Writes the table, preceded by `# ` comment lines if any.
    pub fn write_csv<W: Write>(&self, mut w: W, comments: &[String]) -> Result<(), csv::Error> {
        for c in comments {
            writeln!(w, "# {c}")?;
        }
        let mut out = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(w);
        out.write_record(&self.header)?;
        for row in &self.rows {
            out.write_record(row.iter().map(Cell::render))?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self, comments: &[String]) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, comments)
            .expect("writing to memory");
        String::from_utf8(buf).expect("CSV output is ASCII")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn g_format_round_trips_to_twelve_digits(x in prop::num::f64::NORMAL) {
            let back: f64 = format_g(x).parse().unwrap();
            prop_assert!(((back - x) / x).abs() <= 5e-12, "{} -> {}", x, format_g(x));
        }

        #[test]
        fn g_format_is_plain_ascii(x in prop::num::f64::ANY) {
            let s = format_g(x);
            prop_assert!(s.is_ascii() && !s.contains(','));
        }
    }

    #[test]
    fn g_format_cases() {
        assert_eq!(format_g(0.0), "0");
        assert_eq!(format_g(-0.0), "0");
        assert_eq!(format_g(1.0), "1");
        assert_eq!(format_g(0.1), "0.1");
        assert_eq!(format_g(-2.5), "-2.5");
        assert_eq!(format_g(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_g(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_g(1.234e-7), "1.234e-07");
        assert_eq!(format_g(0.0001), "0.0001");
        assert_eq!(format_g(1e12), "1e+12");
        assert_eq!(format_g(123456789012.0), "123456789012");
        assert_eq!(format_g(9.9999999999999e-5), "0.0001");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["a", "b", "c"]);
        t.rows.push(vec![Cell::Num(0.5), Cell::Int(2), Cell::Empty]);
        let s = t.to_csv_string(&["note=1".into()]);
        assert_eq!(s, "# note=1\na,b,c\n0.5,2,\n");
    }
}
