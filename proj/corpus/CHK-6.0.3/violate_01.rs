mod geometry {
    pub fn area(w: u32, h: u32) -> u32 {
        w * h
    }
}

struct Config {
    verbose: bool,
}

fn helper() -> u32 {
    geometry::area(2, 3)
}

fn main() {
    let c = Config { verbose: false };
    let _ = (c.verbose, helper());
}
