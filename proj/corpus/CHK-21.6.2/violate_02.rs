struct Owned {
    handle: *mut u8,
}

impl Drop for Owned {
    fn drop(&mut self) {
        self.handle = core::ptr::null_mut();
    }
}

struct Leaky {
    view: *const u8,
}

fn main() {
    let o = Owned { handle: core::ptr::null_mut() };
    let l = Leaky { view: core::ptr::null() };
    let _ = (o.handle, l.view);
}
