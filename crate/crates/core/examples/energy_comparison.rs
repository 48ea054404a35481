// Energy scores of DLC-AHN, SLC and CUP on one shared scenario, with and
// without the DLC-AHN heads in the benchmark totals.
//
//     cargo run --example energy_comparison

use std::collections::BTreeSet;

use vhetnet::prelude::*;

fn print_report(label: &str, report: &EnergyReport) {
    println!("{label}: total {:.6e}", report.total);
    for b in &report.per_uav {
        println!(
            "    UAV {}: load {:5} access {:7.1} m backhaul {:8.1} m score {:.4e}{}",
            b.uav_id,
            b.load,
            b.access_distance,
            b.backhaul_distance,
            b.score,
            if b.excluded { "  (excluded)" } else { "" }
        );
    }
}

pub fn run_example() -> vhetnet::Result<()> {
    let scenario = Scenario::generate(&EnvironmentConfig::default(), 5e-4)?;
    let spec = ClusterSpec::default();
    let n = 8;
    let access = AccessMode::Assigned;

    let dlc = build_dlc_ahn(&scenario, n, 1, &spec)?;
    let slc = build_slc(&scenario, n, &spec)?;
    let cup = build_cup(&scenario, n, 1.0)?;

    let proposed = evaluate_dlc_ahn(&dlc, &scenario, &LoadModel::ue_count(&dlc), access)?;
    print_report("DLC_AHN", &proposed);

    for (name, bench) in [("SLC", &slc), ("CUP", &cup)] {
        let loads = LoadModel::ue_count(bench);
        let heads = dlc_exclusion_for(bench, &dlc)?;
        let excluded = evaluate_benchmark(bench, &scenario, &loads, access, &heads, false)?;
        let inc = evaluate_benchmark(bench, &scenario, &loads, access, &BTreeSet::new(), true)?;
        print_report(name, &excluded);
        println!("{name}_inc: total {:.6e}", inc.total);
        println!(
            "{name}/DLC_AHN ratio: {:.2}",
            excluded.total / proposed.total
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> vhetnet::Result<()> {
    run_example()
}
