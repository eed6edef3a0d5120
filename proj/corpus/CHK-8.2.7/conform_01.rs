fn main() {
    let x: i32 = 7;
    let p: *const i32 = &x;
    let addr = p as usize;
    let v = x;
    let _ = (addr, v);
}
