fn ping(n: u32) -> u32 {
    if n == 0 {
        0
    } else {
        pong(n - 1)
    }
}

fn pong(n: u32) -> u32 {
    if n == 0 {
        1
    } else {
        ping(n - 1)
    }
}

fn main() {
    let _ = ping(4);
}
