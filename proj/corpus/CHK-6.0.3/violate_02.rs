static GREETING: &str = "hello";

trait Greeter {
    fn greet(&self) -> &'static str;
}

fn main() {
    let _ = GREETING;
}
