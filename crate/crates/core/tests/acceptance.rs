use std::process::ExitCode;
use std::time::Instant;

use quadcoh::acceptance::{run_criterion, CRITERIA};
use quadcoh::NumericOptions;

fn main() -> ExitCode {
    let opts = NumericOptions::default();
    let mut failed = Vec::new();
    for id in 1..=CRITERIA {
        let start = Instant::now();
        let r = run_criterion(id, &opts);
        println!("{r} [{:.2} s]", start.elapsed().as_secs_f64());
        if !r.pass {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {CRITERIA} criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
