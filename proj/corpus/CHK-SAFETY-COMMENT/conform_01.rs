fn main() {
    let x: u8 = 5;
    let p: *const u8 = &x;
    let v = x;
    let _ = (p, v);
}
