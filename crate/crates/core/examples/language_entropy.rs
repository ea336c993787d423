//! Admissible languages and block-growth entropy estimates.
//!
//! cargo run --example language_entropy

use bfree::sieve::{entropy_estimate, language_blocks, EntropyConfig};
use bfree::{BSet, Caps, Source};

fn main() -> bfree::Result<()> {
    let caps = Caps::default();
    let squares = BSet::prime_squares();
    for n in 1..=8 {
        let t = language_blocks(&squares, n, &Source::Admissible, &caps)?;
        println!("n = {n}: {:>3} admissible blocks", t.len());
    }

    let b = BSet::explicit([2, 3])?;
    let t = language_blocks(&b, 4, &"hered:600".parse()?, &caps)?;
    println!("\n{} blocks of length 4 below factors of η for {b}: {:?}", t.len(), t.strings());

    let config = EntropyConfig {
        window: 10_000,
        truncation: 2,
    };
    let r = entropy_estimate(&b, 16, &config, &caps)?;
    for p in &r.series {
        println!("e({:>2}) = {:.6} ({} blocks)", p.n, p.estimate, p.blocks);
    }
    println!("d = {}, e(16) - d = {:.6}", r.density.frequency, r.final_gap);
    Ok(())
}
