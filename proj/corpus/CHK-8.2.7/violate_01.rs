fn main() {
    let x: i32 = 7;
    let p: *const i32 = &x;
    let addr = p as usize;
    // SAFETY: p points at x, which outlives this block
    let v = unsafe { *p };
    let _ = (addr, v);
}
