//! Exact densities of B-free integers for a few truncations, with tail bounds.
//!
//! cargo run --example density

use bfree::bset::{classify, density_bounds, density_exact, tautness_audit, DensityMethod};
use bfree::{BSet, Caps};

fn main() -> bfree::Result<()> {
    let caps = Caps::default();

    for bk in [vec![2u64, 3], vec![4, 9], vec![6, 10, 15]] {
        let ie = density_exact(&bk, DensityMethod::InclusionExclusion, &caps)?;
        let sieve = density_exact(&bk, DensityMethod::PeriodSieve, &caps)?;
        assert_eq!(ie, sieve);
        println!("d({bk:?}) = {ie}");
    }

    let squares = BSet::prime_squares();
    let c = classify(&squares, 10_000);
    println!("\n{squares}: primitive {}, coprime {}, Erdős candidate {}", c.primitive, c.pairwise_coprime, c.erdos_candidate);
    for k in [2, 4, 6] {
        println!("K = {k}: {}", density_bounds(&squares, k, DensityMethod::PeriodSieve, &caps)?);
    }

    // 4 | 8, so dropping 8 changes nothing
    let taut = tautness_audit(&[4, 6, 8], DensityMethod::InclusionExclusion, &caps)?;
    println!("\nd({:?}) = {}", taut.truncation, taut.density);
    for e in &taut.entries {
        println!("without {:>2}: {} strict {}", e.b, e.density_without, e.strict);
    }
    println!("all strict: {}", taut.all_strict);
    Ok(())
}
