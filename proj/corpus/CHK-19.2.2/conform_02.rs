use std::collections::HashMap;
use std::fmt::Debug;

fn show<T: Debug>(t: &T) -> String {
    format!("{:?}", t)
}

fn main() {
    let mut m: HashMap<u32, u32> = HashMap::new();
    m.insert(1, 2);
    let _ = show(&m.len());
}
