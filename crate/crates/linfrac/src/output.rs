//! Deterministic JSON output.
//!
//! Floating-point numbers are printed with 17 significant digits so that
//! identical runs produce byte-identical files and round-trip exactly.

use serde::Serialize;
use std::io;

use crate::error::Result;

/// Compact JSON formatter printing every float as `{:.16e}`.
pub struct SigFig17;

impl serde_json::ser::Formatter for SigFig17 {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        if value.is_finite() {
            write!(writer, "{value:.16e}")
        } else {
            writer.write_all(b"null")
        }
    }

    fn write_f32<W>(&mut self, writer: &mut W, value: f32) -> io::Result<()>
    where
        W: ?Sized + io::Write,
    {
        self.write_f64(writer, value as f64)
    }
}

/// Serializes a value with 17-significant-digit floats and a trailing newline.
pub fn to_json_string<T: Serialize>(value: &T) -> Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigFig17);
    value.serialize(&mut ser)?;
    buf.push(b'\n');
    Ok(String::from_utf8(buf).expect("serializer emits utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        let s = to_json_string(&serde_json::json!({"x": 0.5})).unwrap();
        assert_eq!(s, "{\"x\":5.0000000000000000e-1}\n");
    }

    #[test]
    fn output_round_trips() {
        let values = vec![1.0 / 3.0, -2.5e-11, 1234.5678, f64::MIN_POSITIVE];
        let s = to_json_string(&values).unwrap();
        let back: Vec<f64> = serde_json::from_str(&s).unwrap();
        assert_eq!(values, back);
    }

    #[test]
    fn integers_stay_integers() {
        let s = to_json_string(&serde_json::json!({"k": 42})).unwrap();
        assert_eq!(s, "{\"k\":42}\n");
    }
}
