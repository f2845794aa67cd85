// Store a file on a simulated 8-node cluster, lose a node, repair it and
// read the file back.

use mdsx::build;
use mdsx::cluster::{ingest, Cluster};

pub fn run_example() -> mdsx::Result<()> {
    let dir = tempfile::tempdir()?;
    let data: Vec<u8> = (0..20_000u32).map(|i| (i.wrapping_mul(2654435761) >> 24) as u8).collect();

    let built = build(8, 5, 2)?;
    let cluster = ingest(&built, "demo.bin", &data, dir.path())?;
    println!("{} bytes in {} stripes", data.len(), cluster.stripes());

    cluster.kill(3)?;
    let out = cluster.repair(3, Some(&[0, 1, 2, 4, 5, 6]), false)?;
    println!(
        "repair read {} symbols ({} bytes), {} per stripe",
        out.report.total_downloaded,
        out.bytes_read,
        out.report.total_downloaded / out.stripes
    );

    let reopened = Cluster::open(dir.path())?;
    let back = reopened.reassemble(Some(&[0, 2, 4, 6, 7]))?;
    assert_eq!(back, data);
    println!("reassembled {} bytes from nodes 0, 2, 4, 6, 7", back.len());
    Ok(())
}

fn main() -> mdsx::Result<()> {
    run_example()
}
