//! Frequencies of blocks in η, counted over one period of B_K.
//!
//! cargo run --example mirsky_frequencies

use bfree::sieve::{block_distribution, mirsky_frequency};
use bfree::Caps;

fn main() -> bfree::Result<()> {
    let caps = Caps::default();
    for block in ["1", "11", "101", "10001"] {
        let r = mirsky_frequency(block, &[2, 3], &caps)?;
        println!("{block:>6}: {}", r.frequency);
    }

    let (dist, mode) = block_distribution(4, &[4, 9, 25], &caps)?;
    println!("\nlength-4 blocks for [4, 9, 25] ({mode:?}):");
    for (block, f) in dist {
        println!("{block} {f}");
    }
    Ok(())
}
