//! Byte-stable JSON output and the small input grammars of the CLI.

use std::io;
use std::str::FromStr;

use serde::Serialize;
use serde_json::ser::Formatter;
use serde_json::{json, Value};
use wkl_core::{CMatrix, C64};

/// Writes every float as `d.ddddddddddddddddde±x` (17 significant digits).
struct FixedFloats;

impl Formatter for FixedFloats {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        write!(w, "{v:.16e}")
    }

    fn write_f32<W: ?Sized + io::Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, f64::from(v))
    }
}

/// Serializes with fixed float formatting; non-finite floats become `null`.
pub fn to_string<T: Serialize>(v: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats);
    v.serialize(&mut ser).expect("in-memory serialization");
    String::from_utf8(buf).expect("serde_json writes UTF-8")
}

pub fn complex(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn vector(v: &[C64]) -> Value {
    Value::Array(v.iter().copied().map(complex).collect())
}

/// Row-major nested arrays of `{re, im}`.
pub fn matrix(m: &CMatrix) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| complex(m[(i, j)])).collect())).collect())
}

/// A real number that may be infinite or NaN, as `null` in that case.
pub fn real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn parse_complex(s: &str) -> Result<C64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    C64::from_str(&t).map_err(|_| format!("cannot read {s:?} as a complex number"))
}

fn value_to_complex(v: &Value) -> Result<C64, String> {
    match v {
        Value::Number(n) => n.as_f64().map(|x| C64::new(x, 0.0)).ok_or_else(|| format!("bad number {n}")),
        Value::String(s) => parse_complex(s),
        Value::Object(o) => {
            let get = |k: &str| o.get(k).and_then(Value::as_f64).unwrap_or(0.0);
            if o.keys().any(|k| k != "re" && k != "im") {
                return Err(format!("unexpected keys in {v}"));
            }
            Ok(C64::new(get("re"), get("im")))
        }
        other => Err(format!("cannot read {other} as a complex number")),
    }
}

/// Reads a matrix either as JSON (entries: numbers, strings such as `"1-2i"`,
/// or `{re, im}` objects) or in the bracket shorthand `[[1,0],[i,1]]`.
pub fn parse_matrix(s: &str) -> Result<CMatrix, String> {
    let rows: Vec<Vec<C64>> = match serde_json::from_str::<Value>(s) {
        Ok(Value::Array(rows)) => rows
            .iter()
            .map(|r| match r {
                Value::Array(es) => es.iter().map(value_to_complex).collect(),
                other => Err(format!("row {other} is not an array")),
            })
            .collect::<Result<_, _>>()?,
        Ok(other) => return Err(format!("{other} is not a nested array")),
        Err(_) => {
            let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
            let inner = t
                .strip_prefix("[[")
                .and_then(|t| t.strip_suffix("]]"))
                .ok_or_else(|| format!("cannot read {s:?} as a matrix"))?;
            inner
                .split("],[")
                .map(|row| row.split(',').map(parse_complex).collect::<Result<Vec<_>, _>>())
                .collect::<Result<_, _>>()?
        }
    };
    CMatrix::from_rows(&rows).map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_have_seventeen_digits() {
        assert_eq!(to_string(&json!([1.0, -0.5, f64::NAN])), "[1.0000000000000000e0,-5.0000000000000000e-1,null]");
        assert_eq!(to_string(&json!({"b": 1, "a": 0.1})), r#"{"a":1.0000000000000001e-1,"b":1}"#);
    }

    #[test]
    fn matrix_shorthand_and_json_agree() {
        let a = parse_matrix("[[1,0],[i,1]]").unwrap();
        let b = parse_matrix(r#"[[1, 0], [{"re": 0, "im": 1}, "1"]]"#).unwrap();
        assert_eq!(a, b);
        assert_eq!(a[(1, 0)], C64::new(0.0, 1.0));
        assert_eq!(parse_matrix("[[ -0.5+2i , 1e-3-i ]]").unwrap()[(0, 1)], C64::new(1e-3, -1.0));
        assert!(parse_matrix("[[1,0],[x,1]]").is_err());
        assert!(parse_matrix("[[1,0],[1]]").is_err());
    }
}
