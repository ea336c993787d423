//! η on a window, admissibility of words, and the maximality of η.
//!
//! cargo run --example eta_and_admissibility

use bfree::sieve::{eta_window, is_admissible, maximality_audit, residue_profile};
use bfree::{BSet, Word};

fn main() -> bfree::Result<()> {
    let b = BSet::explicit([2, 3])?;
    let eta = eta_window(&b, -12, 12)?;
    println!("η on [-12, 12] for {b}: {eta}");
    println!("residues mod 2: {:?}, mod 3: {:?}", residue_profile(&eta, 2), residue_profile(&eta, 3));

    let squares = BSet::prime_squares();
    for s in ["1101", "1111", "110110"] {
        let w: Word = s.parse()?;
        println!("{s:>8} admissible for {squares}: {}", is_admissible(&w, &squares));
    }

    let report = maximality_audit(&squares, 200)?;
    for e in report.entries.iter().take(5) {
        println!(
            "b = {:>3}: {} of {} classes, {} of {} flips inadmissible",
            e.b,
            e.residues_n,
            e.b,
            e.flips_inadmissible,
            e.flips_tested
        );
    }
    println!("saturated flips all inadmissible: {}", report.saturated_flips_all_inadmissible);
    Ok(())
}
