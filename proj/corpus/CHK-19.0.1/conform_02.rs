#[rustfmt::skip]
fn table() -> [u32; 3] {
    [1, 2, 3]
}

#[cfg(test)]
mod tests {
    #[test]
    fn smoke() {
        assert_eq!(super::table()[0], 1);
    }
}

fn main() {
    let _ = table();
}
