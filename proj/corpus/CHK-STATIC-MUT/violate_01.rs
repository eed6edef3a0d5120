static mut COUNTER: u32 = 0;

fn bump() {
    // SAFETY: single-threaded demo, no concurrent access
    unsafe {
        COUNTER += 1;
    }
}

fn main() {
    bump();
}
