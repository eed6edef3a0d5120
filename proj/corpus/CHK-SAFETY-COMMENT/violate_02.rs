struct Handle {
    raw: *mut u8,
}

impl Drop for Handle {
    fn drop(&mut self) {
        self.raw = core::ptr::null_mut();
    }
}

unsafe impl Send for Handle {}

unsafe fn reset(h: &mut Handle) {
    h.raw = core::ptr::null_mut();
}

fn main() {
    let mut h = Handle { raw: core::ptr::null_mut() };
    // SAFETY: h is exclusively owned here
    unsafe {
        reset(&mut h);
    }
}
