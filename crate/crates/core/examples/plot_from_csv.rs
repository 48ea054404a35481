// Regenerates an SVG chart from an aggregate CSV. The chart depends only on
// the CSV contents, so re-plotting a saved run reproduces its SVG exactly.
//
//     cargo run --example plot_from_csv [aggregate.csv] [out.svg]

use vhetnet::harness::{read_aggregate_csv, AggregateRow, SweepMethod};
use vhetnet::prelude::*;

const SAMPLE: &str = "\
method,swept_param,swept_value,mean_total,sd_total
DLC_AHN,k,1,5798100,0
DLC_AHN,k,2,4089900,0
DLC_AHN,k,3,2923900,0
SLC,k,1,79137000,0
SLC,k,2,70777000,0
SLC,k,3,56683000,0
SLC_inc,k,1,90466000,0
SLC_inc,k,2,90466000,0
SLC_inc,k,3,90466000,0
";

pub fn run_example() -> vhetnet::Result<()> {
    let mut args = std::env::args().skip(1);
    let rows: Vec<AggregateRow> = match args.next() {
        Some(path) => read_aggregate_csv(std::fs::File::open(path)?)?,
        None => read_aggregate_csv(SAMPLE.as_bytes())?,
    };
    let methods: Vec<SweepMethod> = {
        let mut m: Vec<_> = rows.iter().map(|r| r.method).collect();
        m.dedup();
        m
    };
    let svg = render_svg(&rows, "Energy score");
    assert_eq!(svg, render_svg(&rows, "Energy score"));
    let out = args
        .next()
        .map(Into::into)
        .unwrap_or_else(|| std::env::temp_dir().join("vhetnet-examples").join("replot.svg"));
    if let Some(dir) = std::path::Path::new(&out).parent() {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(&out, &svg)?;
    println!("plotted {} methods to {}", methods.len(), out.display());
    Ok(())
}

#[allow(dead_code)]
fn main() -> vhetnet::Result<()> {
    run_example()
}
