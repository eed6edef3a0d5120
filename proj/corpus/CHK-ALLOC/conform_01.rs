fn main() {
    let xs = [1u32, 2, 3, 4];
    let sum: u32 = xs.iter().sum();
    let _ = sum;
}
