fn main() {
    let v = vec![1, 2, 3];
    let b = Box::new(7u32);
    let _ = (v.len(), *b);
}
