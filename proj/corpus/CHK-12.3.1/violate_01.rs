// Register overlay carried over from a C driver.

union RawReg {
    bits: u32,
    half: [u16; 2],
}

fn main() {
    let r = RawReg { bits: 0 };
    let _ = r;
}
