fn main() {
    assert!(1 + 1 == 2);
    let xs = [0u8; 4];
    let _ = xs.len();
}
