fn main() {
    const { assert!(1 + 1 == 2) };
    const { assert!(u32::BITS >= 8) };
}
