// A scalar Vandermonde MDS code: encode, lose nodes, decode.

use mdsx::{vandermonde_code, Field};

pub fn run_example() -> mdsx::Result<()> {
    // (6, 4) code over F_17, one symbol per node
    let field = Field::new(17)?;
    let code = vandermonde_code(6, 2, field)?;
    let report = code.is_mds();
    println!("(6,4) Vandermonde: MDS over {} node subsets: {}", report.subsets_checked, report.is_mds());

    let word = code.encode_default(&[3, 1, 4, 1])?;
    println!("codeword: {:?}", word.shards);
    assert!(code.is_codeword(&word));

    // any 4 shards determine the rest
    let survivors: Vec<(usize, Vec<u32>)> = [1, 2, 4, 5].iter().map(|&i| (i, word.shards[i].clone())).collect();
    let decoded = code.decode_any_k(&survivors)?;
    assert_eq!(decoded, word);
    println!("decoded from nodes 1, 2, 4, 5");

    println!("json: {}", code.to_json()?);
    Ok(())
}

fn main() -> mdsx::Result<()> {
    run_example()
}
