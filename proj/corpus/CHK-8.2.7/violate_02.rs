fn tag(x: &u64) -> usize {
    (x as *const u64) as usize
}

fn main() {
    let v: u64 = 9;
    let t = tag(&v);
    let p: *const u64 = &v;
    // SAFETY: p derives from a live reference
    let w = unsafe { *p };
    let _ = (t, w);
}
