fn join_len(a: &str, b: &str) -> usize {
    a.len() + b.len()
}

fn main() {
    let _ = join_len("alpha", "beta");
}
