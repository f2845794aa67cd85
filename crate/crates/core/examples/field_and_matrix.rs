// Prime-field arithmetic and exact linear algebra.

use mdsx::{Field, Matrix};

pub fn run_example() -> mdsx::Result<()> {
    let f = Field::new(17)?;
    println!("in F_{}: 3 * 6 = {}, 2^-1 = {}, -5 = {}", f.modulus(), f.mul(3, 6), f.inv(2)?, f.neg(5));

    // a 3x3 Vandermonde system on points 1, 2, 3
    let a = Matrix::from_rows(&[vec![1, 1, 1], vec![1, 2, 3], vec![1, 4, 9]])?;
    let x = vec![5, 0, 11];
    let b = a.mul_vec(&x, &f)?;
    let solved = a.solve(&Matrix::column(&b), &f)?.into_data();
    println!("A x = {b:?}, solve gives back {solved:?}");
    assert_eq!(solved, x);

    let inv = a.inverse(&f)?;
    assert_eq!(a.mul(&inv, &f)?, Matrix::identity(3));
    println!("rank {} and A * A^-1 = I", a.rank(&f));
    Ok(())
}

fn main() -> mdsx::Result<()> {
    run_example()
}
