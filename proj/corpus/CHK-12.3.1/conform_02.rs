struct Narrow {
    bits: u32,
}

struct Wide {
    lo: u32,
    hi: u32,
}

fn main() {
    let n = Narrow { bits: 1 };
    let w = Wide { lo: 2, hi: 3 };
    let _ = (n.bits, w.lo, w.hi);
}
