trait Greet {
    fn hello(&self) -> &'static str;
}

struct Console;

impl Greet for Console {
    fn hello(&self) -> &'static str {
        "trait hello"
    }
}

impl Console {
    fn hello(&self) -> &'static str {
        "inherent hello"
    }
}

fn main() {
    let c = Console;
    let _ = c.hello();
}
