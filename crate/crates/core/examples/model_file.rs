//! Solving a model written in the text format.

use glassfd::cli::{parse_model_str, run, RunConfig};

const MODEL: &str = "
    % three workers, each on a different shift, costs differ
    var ann in 1..3;
    var bob in 1..3;
    var cat in 1..3;
    ann #\\= bob; ann #\\= cat; bob #\\= cat;
    bob #< cat;
    solve minimize 4*ann + 2*bob + cat;
";

fn main() {
    let file = parse_model_str(MODEL).unwrap();
    let outcome = run(&file, &RunConfig::default()).unwrap();
    println!("{:?}: {:?}, objective {:?}", outcome.status, outcome.solutions, outcome.objective);
    for line in outcome.stats.lines() {
        println!("  {line}");
    }
}
