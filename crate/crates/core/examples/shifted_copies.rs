//! The admissible word w_u built from shifted copies of u.
//!
//! cargo run --example shifted_copies

use bfree::constructions::shifted_copies;
use bfree::{BSet, Word};

fn main() -> bfree::Result<()> {
    let squares = BSet::prime_squares();
    let one: Word = "1".parse()?;
    println!("{}\n", shifted_copies(&one, 4, &squares)?);

    let u: Word = "1011".parse()?;
    let r = shifted_copies(&u, 25, &squares)?;
    println!("u = {}, b0 = {}: {} copies, |supp| = {}, checks {:?}", r.u, r.b0, r.m.len(), r.support.len(), r.checks);
    Ok(())
}
