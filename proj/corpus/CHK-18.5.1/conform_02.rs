fn first_char(s: &str) -> Result<char, &'static str> {
    s.chars().next().ok_or("empty input")
}

fn describe(s: &str) -> Result<String, &'static str> {
    let c = first_char(s)?;
    Ok(format!("starts with {c}"))
}

fn main() {
    let _ = describe("abc");
}
