fn main() {
    let x: u8 = 5;
    let p: *const u8 = &x;
    // SAFETY: p points at x, alive until the end of main
    let v = unsafe { *p };
    let _ = v;
}
