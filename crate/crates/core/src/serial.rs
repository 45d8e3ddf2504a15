//! Text serialization helpers shared by the file formats.
//!
//! All floating-point values are written with 17 significant digits so that
//! every `f64` round-trips exactly through its decimal form.

use serde::Serialize;

use crate::{Error, Result};

/// Formats a float with 17 significant digits (`d.16e` scientific form).
pub fn g17(x: f64) -> String {
    format!("{:.16e}", x)
}

/// Serializes a value to JSON, writing every float with 17 significant digits.
pub fn to_json_g17<T: Serialize>(value: &T) -> Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, G17Formatter);
    value
        .serialize(&mut ser)
        .map_err(|e| Error::Format(e.to_string()))?;
    String::from_utf8(out).map_err(|e| Error::Format(e.to_string()))
}

/// JSON formatter that expands `f64` values to 17 significant digits.
struct G17Formatter;

impl serde_json::ser::Formatter for G17Formatter {
    fn write_f64<W>(&mut self, writer: &mut W, value: f64) -> std::io::Result<()>
    where
        W: ?Sized + std::io::Write,
    {
        write!(writer, "{:.16e}", value)
    }
}

/// Parses a single float, mapping failures to a format error.
pub fn parse_f64(field: &str, s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| Error::Format(format!("cannot parse {field} from {s:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g17_round_trips_exactly() {
        for &x in &[
            0.25,
            1.0 / 3.0,
            std::f64::consts::PI,
            2.2250738585072014e-308,
            -1.2345678901234567e30,
        ] {
            let back: f64 = g17(x).parse().unwrap();
            assert_eq!(back.to_bits(), x.to_bits());
        }
    }

    #[test]
    fn json_floats_use_g17() {
        #[derive(Serialize)]
        struct Demo {
            v: f64,
            n: u32,
        }
        let s = to_json_g17(&Demo { v: 0.25, n: 3 }).unwrap();
        assert_eq!(s, "{\"v\":2.5000000000000000e-1,\"n\":3}");
    }
}
