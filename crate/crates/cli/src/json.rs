//! JSON helpers: conversions of core types and a formatter that writes
//! floats with 17 significant digits.

use std::io;

use qpair::linalg::{CMat4, CVec4};
use qpair::{Mat3, Vec3};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};
use serde_json::{Map, Value};

/// Finite floats become numbers, the rest `null`.
pub fn num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

pub fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

pub fn array(xs: &[f64]) -> Value {
    Value::Array(xs.iter().copied().map(num).collect())
}

pub fn vec3(v: &Vec3) -> Value {
    array(v.as_slice())
}

/// Row-major nested arrays.
pub fn mat3(m: &Mat3) -> Value {
    Value::Array((0..3).map(|r| array(&[m[(r, 0)], m[(r, 1)], m[(r, 2)]])).collect())
}

pub fn cmat4(m: &CMat4) -> Value {
    let part = |f: fn(&qpair::linalg::Complex64) -> f64| {
        Value::Array((0..4).map(|r| Value::Array((0..4).map(|c| num(f(&m[(r, c)]))).collect())).collect())
    };
    object([("re", part(|z| z.re)), ("im", part(|z| z.im))])
}

pub fn cvec4(v: &CVec4) -> Value {
    object([
        ("re", Value::Array(v.iter().map(|z| num(z.re)).collect())),
        ("im", Value::Array(v.iter().map(|z| num(z.im)).collect())),
    ])
}

pub fn object<const N: usize>(entries: [(&str, Value); N]) -> Value {
    Value::Object(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect::<Map<_, _>>())
}

struct Digits17<F>(F);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
            self.0.$name(w $(, $arg)*)
        })*
    };
}

impl<F: Formatter> Formatter for Digits17<F> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }

    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        end_object_key();
        begin_object_value();
        end_object_value();
    }
}

fn write_with<F: Formatter>(v: &Value, f: F) -> String {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, f);
    serde::Serialize::serialize(v, &mut ser).expect("writing JSON to memory");
    String::from_utf8(out).expect("JSON is UTF-8")
}

/// Keys come out sorted (serde_json maps are ordered).
pub fn to_string(v: &Value, pretty: bool) -> String {
    if pretty {
        write_with(v, Digits17(PrettyFormatter::new()))
    } else {
        write_with(v, Digits17(CompactFormatter))
    }
}
