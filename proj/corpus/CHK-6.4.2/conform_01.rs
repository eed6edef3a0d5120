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
    fn banner(&self) -> &'static str {
        "banner"
    }
}

fn main() {
    let c = Console;
    let _ = (c.hello(), c.banner());
}
