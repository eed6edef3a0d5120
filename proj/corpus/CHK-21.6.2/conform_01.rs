struct Buffer {
    ptr: *mut u8,
    len: usize,
}

impl Drop for Buffer {
    fn drop(&mut self) {
        self.ptr = core::ptr::null_mut();
        self.len = 0;
    }
}

fn main() {
    let b = Buffer { ptr: core::ptr::null_mut(), len: 0 };
    let _ = b.len;
}
