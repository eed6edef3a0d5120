enum Value {
    Bits(u32),
    Real(f32),
}

fn describe(v: &Value) -> &'static str {
    match v {
        Value::Bits(_) => "bits",
        Value::Real(_) => "real",
    }
}

fn main() {
    let v = Value::Bits(7);
    let _ = describe(&v);
}
