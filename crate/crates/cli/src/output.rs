//! CSV/report writing with a reproducibility header.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

/// Destination plus float precision; every emitter goes through this so runs
/// are byte-identical for identical configurations.
pub struct Output {
    writer: BufWriter<Box<dyn Write>>,
    precision: usize,
}

impl Output {
    pub fn create(path: Option<&Path>, precision: usize) -> io::Result<Self> {
        let sink: Box<dyn Write> = match path {
            Some(p) => Box::new(File::create(p)?),
            None => Box::new(io::stdout()),
        };
        Ok(Output {
            writer: BufWriter::new(sink),
            precision,
        })
    }

    /// `#`-prefixed header block echoing the full effective configuration.
    pub fn header(&mut self, command: &str, entries: &[(&str, String)]) -> io::Result<()> {
        writeln!(
            self.writer,
            "# boson-budget {} ({command})",
            env!("CARGO_PKG_VERSION")
        )?;
        for (key, value) in entries {
            writeln!(self.writer, "# {key} = {value}")?;
        }
        Ok(())
    }

    pub fn row(&mut self, fields: &[String]) -> io::Result<()> {
        writeln!(self.writer, "{}", fields.join(","))
    }

    pub fn line(&mut self, text: &str) -> io::Result<()> {
        writeln!(self.writer, "{text}")
    }

    pub fn num(&self, x: f64) -> String {
        format_sig(x, self.precision)
    }

    pub fn finish(mut self) -> io::Result<()> {
        self.writer.flush()
    }
}

/// Fixed-significant-digit decimal formatting with trailing zeros trimmed.
pub fn format_sig(x: f64, sig: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (sig as i32 - 1 - exponent).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::format_sig;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(3.7753001, 6), "3.7753");
        assert_eq!(format_sig(0.0035, 6), "0.0035");
        assert_eq!(format_sig(391.20233, 6), "391.202");
        assert_eq!(format_sig(1e9, 6), "1000000000");
        assert_eq!(format_sig(0.0, 6), "0");
        assert_eq!(format_sig(-0.05, 3), "-0.05");
    }
}
