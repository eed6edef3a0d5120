const MAX_ENTRIES: usize = 8;

fn main() {
    let _ = MAX_ENTRIES;
}
