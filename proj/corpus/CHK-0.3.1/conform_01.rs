fn main() {
    let a: u32 = 3;
    let b: u32 = 4;
    if a == b {
        println!("same");
    }
    if a != 0 {
        println!("nonzero");
    }
}
