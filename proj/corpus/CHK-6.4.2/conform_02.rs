struct Console;

impl Console {
    fn hello(&self) -> &'static str {
        "inherent only"
    }
}

fn main() {
    let c = Console;
    let _ = c.hello();
}
