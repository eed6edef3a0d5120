struct Owned {
    data: Vec<u8>,
    name: String,
}

fn main() {
    let o = Owned { data: Vec::new(), name: String::new() };
    let _ = (o.data.len(), o.name.len());
}
