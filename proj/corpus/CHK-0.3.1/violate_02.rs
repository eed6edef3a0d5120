fn reading() -> f64 {
    0.25
}

fn main() {
    let x: f64 = reading();
    let y: f64 = 0.5;
    if x != y {
        println!("differs");
    }
    if 0.5 == y {
        println!("half");
    }
}
