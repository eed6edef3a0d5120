use std::env::*;
use core::cmp::*;

fn main() {
    let _ = args().count();
    let _ = max(1, 2);
}
