//! Full Garden-of-Eden audit of the AND code on the square-free shift.
//!
//! cargo run --example goe_audit

use bfree::audit::{goe_report, AuditConfig};
use bfree::{BSet, Caps, Code};

fn main() -> bfree::Result<()> {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data");
    let b = BSet::parse(&std::fs::read_to_string(format!("{dir}/prime_squares.bset"))?)?;
    let c = Code::parse_file(&std::fs::read_to_string(format!("{dir}/and01.code"))?)?;

    let report = goe_report(&c, &b, &AuditConfig::default(), &Caps::default())?;
    println!("{report}");
    if let Some(m) = &report.multiplicity {
        print!("{}", m.to_csv());
    }
    Ok(())
}
