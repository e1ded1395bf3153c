//! The content-addressed result cache used by the command line tool.

use ekedahl::cache::{cache_key, Cache};
use ekedahl::cohomology::bogomolov_multiplier;
use ekedahl::group::builtin_group;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("ekedahl-example-{}", std::process::id()));
    let cache = Cache::new(&dir);
    let g = builtin_group("dihedral", &[6])?;
    let key = cache_key(&g.fingerprint(), "bogomolov", env!("CARGO_PKG_VERSION"));
    println!("key {key}");
    for round in 0..2 {
        match cache.get(&key) {
            Some(v) => println!("round {round}: hit {v}"),
            None => {
                let b0 = bogomolov_multiplier(&g)?;
                cache.put(&key, &serde_json::json!({ "result": b0.to_string() }))?;
                println!("round {round}: miss, stored B0 = {b0}");
            }
        }
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}
