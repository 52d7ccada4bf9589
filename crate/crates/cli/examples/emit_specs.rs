//! Regenerates the shipped spec files under `specs/` from the built-in
//! constructions:
//!
//! ```text
//! cargo run -p tricover-cli --example emit_specs -- specs/
//! ```

use tricover::constructions::{builtin, BuiltinName};
use tricover_cli::specfile;

fn main() -> std::io::Result<()> {
    let dir = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "specs".to_string());
    std::fs::create_dir_all(&dir)?;
    for name in BuiltinName::all() {
        let spec = builtin(name);
        let comment = format!("built-in construction `{name}`");
        let text = specfile::render_spec(&spec, &comment);
        let path = format!("{dir}/{name}.spec");
        std::fs::write(&path, text)?;
        println!("wrote {path}");
    }

    // a surface-only file for section-oracle queries on the three-point
    // del Pezzo surface
    let y3 = "\
tricover-spec v1
# the plane blown up at three general points; surface-only, for `h0`

[surface]
points = 3
";
    std::fs::write(format!("{dir}/y3.spec"), y3)?;
    println!("wrote {dir}/y3.spec");
    Ok(())
}
