#![allow(dead_code)]

mod config {
    pub const VERBOSE: bool = false;
}

use crate::config::VERBOSE;

const LIMIT: usize = 16;

fn main() {
    let _ = (VERBOSE, LIMIT);
}
