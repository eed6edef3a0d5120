fn top(n: u32) -> u32 {
    middle(n) + 1
}

fn middle(n: u32) -> u32 {
    bottom(n) + 1
}

fn bottom(n: u32) -> u32 {
    n
}

fn main() {
    let _ = top(1);
}
