// First-layer placement: k-means over user positions gives the UAV ground
// positions.
//
//     cargo run --example kmeans_placement

use vhetnet::prelude::*;

pub fn run_example() -> vhetnet::Result<()> {
    let scenario = Scenario::generate(&EnvironmentConfig::default(), 5e-4)?;
    let points = scenario.ue_positions();

    for k in [4, 6, 8] {
        let result = kmeans(&points, &ClusterSpec::new(k))?;
        println!(
            "k = {k}: inertia {:.4e} m², {} Lloyd iterations",
            result.inertia, result.iterations
        );
        for (c, members) in result.centroids.iter().zip(result.members()) {
            println!("  UAV at ({:7.1}, {:7.1}) over {:4} UEs", c.x, c.y, members.len());
        }
    }

    let hotspot = scenario.hotspot_centers[0];
    let nearest = nearest_point_to(&points, &hotspot)?;
    println!("UE {nearest} is closest to hotspot 0");
    Ok(())
}

#[allow(dead_code)]
fn main() -> vhetnet::Result<()> {
    run_example()
}
