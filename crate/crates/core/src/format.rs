//! Fixed 17-significant-digit number formatting for CSV and JSON output.

use std::io;

use serde::Serialize;
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

use crate::error::{Error, Result};

/// Formats `v` with 17 significant digits, in positional notation when the
/// decimal exponent lies in `[-5, 16]` and scientific notation otherwise.
pub fn sig17(v: f64) -> String {
    if !v.is_finite() {
        return format!("{v}");
    }
    if v == 0.0 {
        return "0.0000000000000000".to_string();
    }
    let sci = format!("{v:.16e}");
    let exp: i32 = sci[sci.find('e').expect("scientific format") + 1..]
        .parse()
        .expect("integer exponent");
    if (-5..=16).contains(&exp) {
        format!("{:.*}", (16 - exp) as usize, v)
    } else {
        sci
    }
}

/// serde_json formatter writing every float through [`sig17`].
pub struct Sig17<F = CompactFormatter>(pub F);

impl<F: Formatter> Formatter for Sig17<F> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        writer.write_all(sig17(value).as_bytes())
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f32) -> io::Result<()> {
        self.write_f64(writer, f64::from(value))
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }
    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }
    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }
    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }
    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }
    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }
    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }
    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }
    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Pretty-printed JSON with 17-significant-digit floats.
pub fn to_json_string<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, Sig17(PrettyFormatter::new()));
    value.serialize(&mut ser).map_err(|e| Error::Parse(e.to_string()))?;
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(sig17(2f64.powf(0.75)), "1.6817928305074290");
        assert_eq!(sig17(1.0), "1.0000000000000000");
        assert_eq!(sig17(-0.125), "-0.12500000000000000");
        assert_eq!(sig17(1234.5), "1234.5000000000000");
        // 1e-7 is stored just below its decimal value
        assert_eq!(sig17(1e-7), "9.9999999999999995e-8");
        assert_eq!(sig17(0.0), "0.0000000000000000");
    }

    #[test]
    fn json_round_trips() {
        let v = vec![1.0 / 3.0, 2.5e-9, 1e20];
        let s = to_json_string(&v).unwrap();
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
        assert!(s.contains("0.33333333333333331"));
    }
}
