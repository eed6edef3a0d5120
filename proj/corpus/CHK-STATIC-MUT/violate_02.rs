static mut SCRATCH: [u8; 16] = [0; 16];

fn main() {}
