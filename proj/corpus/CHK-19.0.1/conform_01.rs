#![allow(dead_code)]

#[derive(Clone, Debug)]
struct Point {
    x: i32,
    y: i32,
}

#[inline]
fn origin() -> Point {
    Point { x: 0, y: 0 }
}

#[unsafe(no_mangle)]
fn exported() -> i32 {
    3
}

fn main() {
    let _ = origin().clone();
    let _ = exported();
}
