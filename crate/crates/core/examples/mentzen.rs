//! Which radius-1 codes on the admissible domain survive the automorphism
//! filter? Only the shifts.
//!
//! cargo run --example mentzen

use bfree::audit::{mentzen_filter, MentzenVerdict};
use bfree::sieve::language_blocks;
use bfree::{BSet, Caps, Code, Source};

fn main() -> bfree::Result<()> {
    let caps = Caps::default();
    let b = BSet::prime_squares();

    for c in [Code::shift(-1), Code::identity(), Code::and_mask(&[0, 1])] {
        println!("{:>14}: {}", c.name(), mentzen_filter(&c, &b, 2_000, &caps)?);
    }

    let domain = language_blocks(&b, 3, &Source::Admissible, &caps)?;
    let blocks = domain.blocks().to_vec();
    let mut tally = [0usize; 5];
    for mask in 0u32..1 << blocks.len() {
        let ones = blocks.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v);
        let c = Code::restricted(1, domain.clone(), ones)?;
        let slot = match mentzen_filter(&c, &b, 2_000, &caps)? {
            MentzenVerdict::ShiftPower { k, .. } => {
                println!("shift power {k}: {:?}", c.ones());
                0
            }
            MentzenVerdict::RejectedByL1 { .. } => 1,
            MentzenVerdict::RejectedByL2 { .. } => 2,
            MentzenVerdict::RejectedByMaximality { .. } => 3,
            MentzenVerdict::Inconclusive { .. } => 4,
        };
        tally[slot] += 1;
    }
    println!("shift {} / L1 {} / L2 {} / maximality {} / inconclusive {}", tally[0], tally[1], tally[2], tally[3], tally[4]);
    Ok(())
}
