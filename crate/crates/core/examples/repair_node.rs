// Lose one node of the (8, 5) code and rebuild it from six helpers.

use mdsx::repair::{default_helpers, RepairSolver};
use mdsx::{build, repair};

pub fn run_example() -> mdsx::Result<()> {
    let built = build(8, 5, 2)?;
    let q = built.code.field().modulus();
    let message: Vec<u32> = (0..built.k() * built.code.sub_packetization()).map(|i| (i as u32 * 5 + 3) % q).collect();
    let word = built.code.encode_default(&message)?;

    let failed = 3;
    let helpers = default_helpers(&built, failed);
    let (shard, report) = repair(&built, &word, failed, &helpers)?;
    assert_eq!(shard, word.shards[failed]);
    println!("node {failed} from {:?}", report.helpers);
    println!(
        "  {} symbols per helper, {} total, bound {}, optimal: {}",
        report.downloaded_per_helper,
        report.total_downloaded,
        report.bound,
        report.is_optimal()
    );

    // the solver can be reused across stripes
    let plan = built.repair_plan(failed)?;
    let solver = RepairSolver::new(&built.code, built.delta, plan, &[0, 1, 2, 5, 6, 7])?;
    let downloads: Vec<u32> = solver
        .helpers()
        .iter()
        .flat_map(|&h| solver.accessed().iter().map(move |&a| (h, a)))
        .map(|(h, a)| word.shards[h][a])
        .collect();
    assert_eq!(solver.recover(&downloads)?, word.shards[failed]);
    println!("  also rebuilt from {:?}, reading indices {:?}", solver.helpers(), solver.accessed());
    Ok(())
}

fn main() -> mdsx::Result<()> {
    run_example()
}
