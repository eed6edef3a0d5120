fn main() {
    let a: f64 = 0.3;
    if a == 0.1 {
        println!("exact");
    }
}
