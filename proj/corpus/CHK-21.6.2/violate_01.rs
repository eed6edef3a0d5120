struct Buffer {
    ptr: *mut u8,
    len: usize,
}

impl Buffer {
    fn empty() -> Buffer {
        Buffer { ptr: core::ptr::null_mut(), len: 0 }
    }
}

fn main() {
    let b = Buffer::empty();
    let _ = b.len;
}
