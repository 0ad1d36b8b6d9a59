//! Helpers shared by the integration tests.

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polar-orbits"))
}

/// Run the binary with `--out-dir dir` prepended.
pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().arg("--out-dir").arg(dir).args(args).output().expect("binary runs")
}

pub fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"))
}

pub fn load_schema(name: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(schema_path(name)).unwrap()).unwrap()
}

/// Check `value` against the subset of JSON Schema used by the shipped
/// schemas: `type`, `enum`, `properties`, `required`, `additionalProperties`,
/// `items`, `oneOf`, `minimum` and local `$ref`s. Returns the first problem.
pub fn check(schema: &Value, value: &Value) -> Result<(), String> {
    check_at(schema, schema, value, "$")
}

fn resolve<'a>(root: &'a Value, node: &'a Value) -> &'a Value {
    match node.get("$ref").and_then(Value::as_str) {
        Some(r) => {
            let name = r.strip_prefix("#/$defs/").expect("only local refs");
            &root["$defs"][name]
        }
        None => node,
    }
}

fn type_matches(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.is_u64() || v.is_i64(),
        other => panic!("unsupported type {other}"),
    }
}

fn check_at(root: &Value, node: &Value, v: &Value, path: &str) -> Result<(), String> {
    let node = resolve(root, node);
    if let Some(t) = node.get("type") {
        let ok = match t {
            Value::String(s) => type_matches(s, v),
            Value::Array(ts) => ts.iter().any(|t| type_matches(t.as_str().unwrap(), v)),
            _ => panic!("bad type keyword"),
        };
        if !ok {
            return Err(format!("{path}: {v} is not of type {t}"));
        }
    }
    if let Some(Value::Array(options)) = node.get("enum") {
        if !options.contains(v) {
            return Err(format!("{path}: {v} not in {options:?}"));
        }
    }
    if let (Some(min), Some(x)) = (node.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if x < min {
            return Err(format!("{path}: {x} < {min}"));
        }
    }
    if let Some(Value::Array(options)) = node.get("oneOf") {
        let passing = options.iter().filter(|o| check_at(root, o, v, path).is_ok()).count();
        if passing != 1 {
            return Err(format!("{path}: {passing} oneOf branches match"));
        }
    }
    if let Value::Object(map) = v {
        if let Some(Value::Array(req)) = node.get("required") {
            for k in req {
                if !map.contains_key(k.as_str().unwrap()) {
                    return Err(format!("{path}: missing {k}"));
                }
            }
        }
        let props = node.get("properties").and_then(Value::as_object);
        for (k, child) in map {
            let sub = format!("{path}.{k}");
            match (props.and_then(|p| p.get(k)), node.get("additionalProperties")) {
                (Some(s), _) => check_at(root, s, child, &sub)?,
                (None, Some(Value::Bool(false))) => return Err(format!("{path}: unexpected key {k}")),
                (None, Some(s @ Value::Object(_))) => check_at(root, s, child, &sub)?,
                _ => {}
            }
        }
    }
    if let (Value::Array(items), Some(s)) = (v, node.get("items")) {
        for (i, item) in items.iter().enumerate() {
            check_at(root, s, item, &format!("{path}[{i}]"))?;
        }
    }
    Ok(())
}

/// Rotating-frame acceleration of the planet written out in components.
pub fn rotating_accel(b: f64, omega: f64, s: &[f64; 6]) -> [f64; 3] {
    let xl = b / (1.0 + b);
    let xh = xl - 1.0;
    let [x, y, z, vx, vy, _] = *s;
    let d1 = ((x - xl).powi(2) + y * y + z * z).powf(1.5);
    let d2 = ((x - xh).powi(2) + y * y + z * z).powf(1.5);
    [
        -(x - xl) / d1 - b * (x - xh) / d2 + 2.0 * omega * vy + omega * omega * x,
        -y / d1 - b * y / d2 - 2.0 * omega * vx + omega * omega * y,
        -z / d1 - b * z / d2,
    ]
}

/// Classical fixed-step RK4 over `steps` equal steps.
pub fn rk4(b: f64, omega: f64, s0: [f64; 6], t_end: f64, steps: usize) -> [f64; 6] {
    let f = |s: &[f64; 6]| {
        let a = rotating_accel(b, omega, s);
        [s[3], s[4], s[5], a[0], a[1], a[2]]
    };
    let axpy = |s: &[f64; 6], k: &[f64; 6], c: f64| std::array::from_fn::<f64, 6, _>(|i| s[i] + c * k[i]);
    let h = t_end / steps as f64;
    let mut s = s0;
    for _ in 0..steps {
        let k1 = f(&s);
        let k2 = f(&axpy(&s, &k1, 0.5 * h));
        let k3 = f(&axpy(&s, &k2, 0.5 * h));
        let k4 = f(&axpy(&s, &k3, h));
        for i in 0..6 {
            s[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
    }
    s
}
