//! Output formatting shared by the CLI: floats with 17 significant digits.

use std::str::FromStr;

use serde::{Serialize, Serializer};

/// Formats a float with 17 significant digits, which round-trips any `f64`.
/// Positional notation for exponents in `-5..17`, scientific otherwise.
pub fn float17(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0.0".to_string();
    }
    let sign = if x < 0.0 { "-" } else { "" };
    let sci = format!("{:.16e}", x.abs());
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    match exp {
        0..=16 => {
            let (int, frac) = digits.split_at(exp as usize + 1);
            let frac = if frac.is_empty() { "0" } else { frac };
            format!("{sign}{int}.{frac}")
        }
        -5..=-1 => {
            let zeros = "0".repeat((-exp - 1) as usize);
            format!("{sign}0.{zeros}{digits}")
        }
        _ => format!("{sign}{mantissa}e{exp}"),
    }
}

/// Serializes as a bare JSON number written by [`float17`]; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Float17(pub f64);

impl Serialize for Float17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let number =
            serde_json::Number::from_str(&float17(self.0)).map_err(serde::ser::Error::custom)?;
        number.serialize(serializer)
    }
}
