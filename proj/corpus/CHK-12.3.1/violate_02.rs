union Word {
    w: u32,
    b: [u8; 4],
}

union Flags {
    raw: u16,
    pair: [u8; 2],
}

fn main() {
    let w = Word { w: 1 };
    let f = Flags { raw: 0 };
    let _ = (w, f);
}
