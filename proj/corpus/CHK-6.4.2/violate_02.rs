trait Codec {
    fn encode(&self) -> u32;
    fn decode(&self) -> u32;
}

struct Raw;

impl Codec for Raw {
    fn encode(&self) -> u32 {
        1
    }
    fn decode(&self) -> u32 {
        2
    }
}

impl Raw {
    fn encode(&self) -> u32 {
        10
    }
    fn decode(&self) -> u32 {
        20
    }
}

fn main() {
    let r = Raw;
    let _ = (r.encode(), r.decode());
}
