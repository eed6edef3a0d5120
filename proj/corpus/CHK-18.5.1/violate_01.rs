fn parse_pair(s: &str) -> (u32, u32) {
    let mut it = s.split(',');
    let a = it.next().unwrap();
    let b = it.next().expect("missing second field");
    (a.len() as u32, b.len() as u32)
}

fn main() {
    let _ = parse_pair("1,2");
}
