//! Sliding block codes: application, composition, monotone witnesses.
//!
//! cargo run --example sliding_codes

use bfree::codes::{apply_code, apply_to_finite_config, compose, is_monotone};
use bfree::{Caps, Code, Word};

fn main() -> bfree::Result<()> {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/and01.code");
    let and = Code::parse_file(&std::fs::read_to_string(path)?)?;
    let x: Word = "0111011010".parse()?;
    println!("{}: {x} -> {}", and.name(), apply_code(&and, &x)?);

    let finite = Word::from_finite_support([0, 1, 2, 5, 6]);
    println!("finite configuration {finite} -> {}", apply_to_finite_config(&and, &finite)?);

    let twice = compose(&and, &and, &Caps::default())?;
    println!("and∘and has radius {} and {} one-blocks", twice.radius(), twice.ones().len());

    for c in [Code::identity(), Code::shift(-2), and, Code::builtin("negation")?] {
        let v = is_monotone(&c);
        println!("{:>14}: monotone {} witness {}", c.name(), v.monotone, v.witness);
    }
    Ok(())
}
