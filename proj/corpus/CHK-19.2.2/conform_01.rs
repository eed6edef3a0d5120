mod prelude {
    pub use std::collections::HashMap;
}

use crate::prelude::*;

fn main() {
    let mut m: HashMap<u32, u32> = HashMap::new();
    m.insert(1, 2);
    let _ = m.len();
}
