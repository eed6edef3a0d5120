fn factorial(n: u64) -> u64 {
    let mut acc = 1;
    let mut i = n;
    while i > 1 {
        acc *= i;
        i -= 1;
    }
    acc
}

fn main() {
    let _ = factorial(5);
}
