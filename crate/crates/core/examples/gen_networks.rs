//! Regenerates the bundled network files under networks/ from the presets.

use hjnet_core::presets;

fn main() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../networks");
    std::fs::create_dir_all(&dir).unwrap();
    for (name, net) in [
        ("test1", presets::test1()),
        ("test2", presets::test2()),
        ("test3", presets::test3()),
        ("test4", presets::test4()),
    ] {
        let path = dir.join(format!("{name}.json"));
        std::fs::write(&path, net.to_json() + "\n").unwrap();
        println!("wrote {}", path.display());
    }
}
