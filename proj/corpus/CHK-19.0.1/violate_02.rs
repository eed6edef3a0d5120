#[mytool::trace]
fn traced() -> u32 {
    41
}

#[buidl(skip)]
fn skipped() {}

fn main() {
    let _ = traced();
    skipped();
}
