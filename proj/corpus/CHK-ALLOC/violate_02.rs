fn main() {
    let s = String::from("alpha");
    let t = "beta".to_string();
    let _ = (s.len(), t.len());
}
