// Builds the two-layer DLC-AHN topology and the SLC/CUP benchmarks for one
// scenario and prints the UAV roles.
//
//     cargo run --example dlc_ahn_topology

use vhetnet::prelude::*;

pub fn run_example() -> vhetnet::Result<()> {
    let scenario = Scenario::generate(&EnvironmentConfig::default(), 5e-4)?;
    let spec = ClusterSpec::default();
    let (n, k) = (8, 2);

    let dlc = build_dlc_ahn(&scenario, n, k, &spec)?;
    dlc.validate(&scenario)?;
    let loads = dlc.loads();
    println!("DLC-AHN with n = {n}, k = {k}");
    for uav in &dlc.uavs {
        let p = uav.position;
        let role = match (uav.role, uav.head_id) {
            (Role::Head, _) => "head (on landing spot)".to_string(),
            (_, Some(h)) => format!("relays to UAV {h}"),
            _ => "standalone".to_string(),
        };
        println!(
            "  UAV {}: ({:7.1}, {:7.1}, {:5.1}) load {:4}  {role}",
            uav.id, p.x, p.y, p.z, loads[uav.id]
        );
    }

    let slc = build_slc(&scenario, n, &spec)?;
    assert_eq!(slc.layer1_positions, dlc.layer1_positions);
    let cup = build_cup(&scenario, n, 1.0)?;
    println!("SLC loads: {:?}", slc.loads());
    println!("CUP loads: {:?}", cup.loads());

    let json = dlc.to_json()?;
    println!("topology JSON: {} bytes", json.len());
    Ok(())
}

#[allow(dead_code)]
fn main() -> vhetnet::Result<()> {
    run_example()
}
