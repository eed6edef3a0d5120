fn main() {
    let n: u32 = 40;
    let w = n as usize;
    let x: i32 = 7;
    let p: *const i32 = &x;
    // SAFETY: p points at x, which outlives this block
    let v = unsafe { *p };
    let _ = (w, v);
}
