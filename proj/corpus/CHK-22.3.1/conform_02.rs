fn main() {
    let n = std::env::args().count();
    assert!(n > 0);
    let m = n + 1;
    assert_eq!(m, n + 1);
}
