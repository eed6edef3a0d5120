fn checked(flag: bool) -> u32 {
    if flag {
        panic!("unsupported configuration");
    }
    7
}

fn pending() -> u32 {
    todo!()
}

fn main() {
    let _ = checked(false);
    let _ = pending();
}
