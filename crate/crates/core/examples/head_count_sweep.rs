// Sweep over head count: writes the row and aggregate CSVs and an SVG chart
// to a temporary directory and prints the mean curve of each method.
//
//     cargo run --release --example head_count_sweep

use vhetnet::prelude::*;

pub fn run_example() -> vhetnet::Result<()> {
    let env = EnvironmentConfig::default();
    let spec = SweepSpec {
        replications: 3,
        ..SweepSpec::head_count()
    };
    let result = run_sweep(&spec, &env)?;

    let param = spec.kind.param();
    println!("{param}: {:?}", spec.values);
    for &m in &spec.methods {
        let means: Vec<String> = result
            .mean_series(m)
            .iter()
            .map(|v| format!("{v:.3e}"))
            .collect();
        println!("  {:8} {}", m.name(), means.join(" "));
    }

    let dir = std::env::temp_dir().join("vhetnet-examples").join("head_count");
    std::fs::create_dir_all(&dir)?;
    std::fs::write(dir.join("rows.csv"), result.rows_csv()?)?;
    std::fs::write(dir.join("aggregate.csv"), result.aggregate_csv()?)?;
    let svg = render_svg(&result.aggregates, "Energy score vs head count");
    std::fs::write(dir.join(format!("energy_vs_{param}.svg")), svg)?;
    println!("outputs in {}", dir.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> vhetnet::Result<()> {
    run_example()
}
