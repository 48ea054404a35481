// Draws a hotspot scenario, grows it to a higher density and saves it as
// JSON for `vhetnet inspect`.
//
//     cargo run --example generate_scenario

use vhetnet::cli::summarize_scenario;
use vhetnet::prelude::*;

pub fn run_example() -> vhetnet::Result<()> {
    let config = EnvironmentConfig::default();
    let sparse = Scenario::generate(&config, 2e-4)?;
    let dense = sparse.extend_population(1e-3)?;
    assert_eq!(&dense.ues[..sparse.ues.len()], &sparse.ues[..]);

    print!("{}", summarize_scenario(&dense));

    let dir = std::env::temp_dir().join("vhetnet-examples");
    std::fs::create_dir_all(&dir)?;
    let path = dir.join("scenario.json");
    dense.save(&path)?;
    println!("saved {}", path.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> vhetnet::Result<()> {
    run_example()
}
