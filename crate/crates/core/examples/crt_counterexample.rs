//! For a code with no monotone witness, build an admissible x whose image
//! meets every residue class modulo b0.
//!
//! cargo run --example crt_counterexample

use bfree::constructions::crt_counterexample;
use bfree::{BSet, Code, Error};

fn main() -> bfree::Result<()> {
    let squares = BSet::prime_squares();
    // φ = 1 on 110, 011, 101: no position is 1 in every one-block
    let c = Code::from_ones(1, [0b110, 0b011, 0b101])?.named("two_of_three");
    let cert = crt_counterexample(&c, &squares)?;
    println!("{cert}");
    println!("|supp x| = {}, |supp τ(x)| = {}", cert.x_support.len(), cert.image_support.len());

    match crt_counterexample(&Code::and_mask(&[0, 1]), &squares) {
        Err(Error::WitnessExists(w)) => println!("\nand_mask(0,1) has witness {w:?}; nothing to construct"),
        other => println!("\nunexpected: {other:?}"),
    }
    Ok(())
}
