fn parse_len(s: Option<&str>) -> Result<usize, &'static str> {
    match s {
        Some(v) => Ok(v.len()),
        None => Err("missing value"),
    }
}


fn main() {
    let _ = parse_len(Some("abc"));
}
