fn main() {
    assert_eq!(4, 2 + 2);
    assert!(true);
}
