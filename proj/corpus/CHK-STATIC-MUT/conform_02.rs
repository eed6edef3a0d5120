static LIMIT: u32 = 10;

fn main() {
    let mut local = 0;
    local += LIMIT;
    let _ = local;
}
