// One transformation step on a (15, 11) base: a (12, 8) code whose first
// two nodes can be repaired by reading a third of each helper.

use mdsx::builder::RepairPlan;
use mdsx::code::vandermonde_code;
use mdsx::repair::repair_node;
use mdsx::{apply_transform, Field, TransformSpec};

pub fn run_example() -> mdsx::Result<()> {
    let delta = 3;
    let base = vandermonde_code(15, 4, Field::new(19)?)?;
    let code = apply_transform(&base, &TransformSpec::new(delta, (0, 1)))?;
    println!(
        "({}, {}) code with {} symbols per node over F_{}",
        code.n(),
        code.k(),
        code.sub_packetization(),
        code.field().modulus()
    );
    let mds = code.is_mds();
    println!("MDS over all {} subsets: {}", mds.subsets_checked, mds.is_mds());

    let message: Vec<u32> = (0..code.k() * code.sub_packetization()).map(|i| (i * 7 % 19) as u32).collect();
    let word = code.encode_default(&message)?;

    // node 0 was goal 0 of the only round; it reads symbol 0 of each helper
    let plan = RepairPlan::from_digit(0, 0, 0, delta, 1, 1);
    let helpers: Vec<usize> = (2..12).collect();
    let (shard, report) = repair_node(&code, delta, &plan, &word, &helpers)?;
    assert_eq!(shard, word.shards[0]);
    println!(
        "repaired node 0 from {} helpers: {} symbols downloaded, bound {}",
        helpers.len(),
        report.total_downloaded,
        report.bound
    );
    Ok(())
}

fn main() -> mdsx::Result<()> {
    run_example()
}
