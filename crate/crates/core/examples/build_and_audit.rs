// Build the (8, 5) code with delta = 2 and print its repair plans.

use mdsx::repair::{audit, render_audit};
use mdsx::{build, check_repair_systems};

pub fn run_example() -> mdsx::Result<()> {
    let built = build(8, 5, 2)?;
    println!(
        "q = {}, rounds = {}, N = {}, helpers d = {}",
        built.code.field().modulus(),
        built.tau,
        built.code.sub_packetization(),
        built.helpers()
    );
    for (i, step) in built.intermediates.iter().enumerate() {
        println!("after round {}: ({}, {}) with N = {}", i, step.n(), step.k(), step.sub_packetization());
    }
    print!("{}", render_audit(&audit(&built), false));

    let mds = built.code.is_mds();
    let systems = check_repair_systems(&built);
    println!("MDS subsets: {}, repair systems: {}", mds.subsets_checked, systems.systems_checked);
    assert!(mds.is_mds() && systems.passed());
    Ok(())
}

fn main() -> mdsx::Result<()> {
    run_example()
}
