//! The shipped network files must stay in sync with the presets they were
//! generated from (`cargo run -p hjnet-core --example gen_networks`).

use hjnet_core::{presets, validate_network, Network};
use std::path::Path;

fn load(name: &str) -> Network {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../networks")
        .join(format!("{name}.json"));
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing bundled file {}: {e}", path.display()));
    Network::from_json(&text).unwrap()
}

#[test]
fn bundled_files_match_the_presets_and_validate() {
    for (name, preset) in [
        ("test1", presets::test1()),
        ("test2", presets::test2()),
        ("test3", presets::test3()),
        ("test4", presets::test4()),
    ] {
        let net = load(name);
        assert!(validate_network(&net).all_passed(), "{name} fails validation");
        assert_eq!(net.vertices.len(), preset.vertices.len(), "{name}");
        assert_eq!(net.arcs.len(), preset.arcs.len(), "{name}");
        assert_eq!(net.boundary, preset.boundary, "{name}");
        for (a, b) in net.vertices.iter().zip(&preset.vertices) {
            assert_eq!(a.position, b.position, "{name} vertex {}", a.id);
        }
        for (a, b) in net.arcs.iter().zip(&preset.arcs) {
            assert_eq!((a.start, a.end), (b.start, b.end), "{name} arc {}", a.id);
            assert_eq!(a.length, b.length, "{name} arc {}", a.id);
        }
        assert_eq!(net.cost.eta, preset.cost.eta, "{name}");
    }
}
