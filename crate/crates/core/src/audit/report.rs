use std::fmt;

use serde::Serialize;

use super::{
    bounded_to_one_evidence, mentzen_filter, pre_injectivity_audit, surjectivity_defects, GoeDefect,
    MentzenVerdict, MultiplicityReport, PreInjectivityReport,
};
use crate::bset::{classify, BSet};
use crate::caps::Caps;
use crate::codes::{consistency_check, is_monotone, Code, Domain, Witness};
use crate::constructions::{crt_counterexample, CounterexampleResult};
use crate::error::{Error, Result};
use crate::sieve::language_for_subshift;

#[derive(Debug, Clone)]
pub struct AuditConfig {
    /// Block length for consistency and surjectivity.
    pub n: usize,
    /// Pre-injectivity configurations live on `[-N, N]`.
    pub big_n: u64,
    /// η window for non-Erdős languages and the maximality check.
    pub eta_window: u64,
    /// Multiplicity series runs over `1..=multiplicity_n`; 0 skips it.
    pub multiplicity_n: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            n: 4,
            big_n: 4,
            eta_window: 2_000,
            multiplicity_n: 4,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CodeSummary {
    pub name: String,
    pub radius: usize,
    pub ones: usize,
    pub domain: String,
    pub vanishes_at_zero: bool,
}

impl CodeSummary {
    pub fn of(c: &Code) -> Self {
        CodeSummary {
            name: c.name().to_string(),
            radius: c.radius(),
            ones: c.ones().len(),
            domain: match c.domain() {
                Domain::Full => "full".into(),
                Domain::Restricted(t) => format!("restricted({} blocks, {})", t.len(), t.source()),
            },
            vanishes_at_zero: c.vanishes_at_zero(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Consistent,
    /// Finite-scale limitation; never a refutation.
    Unresolved,
    /// B is not an Erdős candidate; the theorem does not apply.
    Exploratory,
}

#[derive(Debug, Clone, Serialize)]
pub struct Crosscheck {
    pub name: String,
    pub prediction: String,
    pub observed: String,
    pub status: CheckStatus,
}

#[derive(Debug, Clone, Serialize)]
pub struct AuditReport {
    pub code: CodeSummary,
    pub bset: String,
    pub erdos_candidate: bool,
    pub source: String,
    pub n: usize,
    #[serde(rename = "N")]
    pub big_n: u64,
    pub witness: Witness,
    pub monotone: bool,
    pub consistency_violations: usize,
    pub surjectivity_defects: Vec<GoeDefect>,
    pub preinjectivity: Option<PreInjectivityReport>,
    pub preinjectivity_skipped: Option<String>,
    pub multiplicity: Option<MultiplicityReport>,
    pub mentzen: MentzenVerdict,
    pub crosschecks: Vec<Crosscheck>,
    pub counterexample: Option<CounterexampleResult>,
}

/// Full pipeline: witness, consistency, Garden-of-Eden blocks,
/// pre-injectivity, multiplicities, the automorphism filter, and the
/// theorem crosschecks. A code with empty witness that preserves the level-n
/// language is escalated to [`crt_counterexample`].
pub fn goe_report(c: &Code, b: &BSet, config: &AuditConfig, caps: &Caps) -> Result<AuditReport> {
    let n = config.n;
    let lang_out = language_for_subshift(b, n, config.eta_window, caps)?;
    let lang_in = language_for_subshift(b, n + c.window() - 1, config.eta_window, caps)?;
    let source = lang_out.source().clone();
    let erdos = classify(b, 10_000).erdos_candidate;

    let verdict = is_monotone(c);
    let violations = consistency_check(c, &lang_in, &lang_out)?;
    let defects = surjectivity_defects(c, &lang_out, &lang_in, caps)?;
    let (preinjectivity, skipped) = match pre_injectivity_audit(c, b, config.big_n, &source, caps) {
        Ok(r) => (Some(r), None),
        Err(e @ (Error::NonVanishingAtZero | Error::NonHereditarySource(_))) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let multiplicity = if config.multiplicity_n > 0 {
        Some(bounded_to_one_evidence(c, b, &source, config.multiplicity_n, caps)?)
    } else {
        None
    };
    let mentzen = mentzen_filter(c, b, config.eta_window, caps)?;

    let mut counterexample = None;
    let status = |ok: bool| match (erdos, ok) {
        (false, _) => CheckStatus::Exploratory,
        (true, true) => CheckStatus::Consistent,
        (true, false) => CheckStatus::Unresolved,
    };
    let mut crosschecks = Vec::new();

    let (observed, ok) = if !verdict.witness.set.is_empty() {
        (format!("witness {}", verdict.witness), true)
    } else if !violations.is_empty() {
        (
            format!(
                "empty witness; {} level-{n} blocks map outside the language (first {} -> {})",
                violations.len(),
                violations[0].input,
                violations[0].image
            ),
            true,
        )
    } else {
        match crt_counterexample(c, b) {
            Ok(cert) => {
                let s = format!(
                    "empty witness; admissible x with τ(x) meeting all {} classes mod b0 = {}",
                    cert.b0, cert.b0
                );
                counterexample = Some(cert);
                (s, true)
            }
            Err(Error::WitnessExists(w)) => (format!("witness over admissible 1-blocks {w:?}"), true),
            Err(e) => (format!("empty witness, counterexample unavailable: {e}"), false),
        }
    };
    crosschecks.push(Crosscheck {
        name: "monotone".into(),
        prediction: "every CA is given by a monotone code up to a power of the shift".into(),
        observed,
        status: status(ok),
    });

    let (observed, ok) = match (defects.first(), mentzen.shift_power()) {
        (Some(d), _) => (format!("not onto: Garden-of-Eden block {}", d.block), true),
        (None, Some(k)) => (format!("no defect up to n = {n}; shift power {k}"), true),
        (None, None) => (
            format!("no defect up to n = {n}, yet not a shift power ({mentzen}); finite scale"),
            false,
        ),
    };
    crosschecks.push(Crosscheck {
        name: "onto_implies_shift".into(),
        prediction: "if the CA is onto, then it equals a power of the shift".into(),
        observed,
        status: status(ok),
    });

    let goe_found = !defects.is_empty();
    let (observed, ok) = match &preinjectivity {
        Some(p) => {
            let viol = p.pairs_total > 0;
            (
                format!("GoE blocks found: {goe_found}; pre-injectivity violations found: {viol}"),
                goe_found == viol,
            )
        }
        None => (
            format!("GoE blocks found: {goe_found}; pre-injectivity audit skipped"),
            false,
        ),
    };
    crosschecks.push(Crosscheck {
        name: "moore_myhill".into(),
        prediction: "surjective if and only if pre-injective".into(),
        observed,
        status: status(ok),
    });

    Ok(AuditReport {
        code: CodeSummary::of(c),
        bset: b.to_string(),
        erdos_candidate: erdos,
        source: source.to_string(),
        n,
        big_n: config.big_n,
        monotone: verdict.monotone,
        witness: verdict.witness,
        consistency_violations: violations.len(),
        surjectivity_defects: defects,
        preinjectivity,
        preinjectivity_skipped: skipped,
        multiplicity,
        mentzen,
        crosschecks,
        counterexample,
    })
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "code {} (radius {}) on {} [{}]", self.code.name, self.code.radius, self.bset, self.source)?;
        writeln!(f, "witness {}", self.witness)?;
        writeln!(f, "consistency violations at n = {}: {}", self.n, self.consistency_violations)?;
        let blocks: Vec<&str> = self.surjectivity_defects.iter().map(|d| d.block.as_str()).collect();
        writeln!(f, "Garden-of-Eden blocks at n = {}: {:?}", self.n, blocks)?;
        match (&self.preinjectivity, &self.preinjectivity_skipped) {
            (Some(p), _) => writeln!(f, "pre-injectivity violations at N = {}: {}", p.n, p.pairs_total)?,
            (None, Some(why)) => writeln!(f, "pre-injectivity audit skipped: {why}")?,
            _ => {}
        }
        writeln!(f, "mentzen: {}", self.mentzen)?;
        for c in &self.crosschecks {
            writeln!(f, "[{:?}] {}: {}", c.status, c.name, c.observed)?;
        }
        if let Some(cert) = &self.counterexample {
            write!(f, "{cert}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_report() {
        let r = goe_report(&Code::identity(), &BSet::prime_squares(), &AuditConfig::default(), &Caps::default()).unwrap();
        assert_eq!(r.witness.set, vec![0]);
        assert!(r.surjectivity_defects.is_empty());
        assert_eq!(r.preinjectivity.as_ref().unwrap().pairs_total, 0);
        assert_eq!(r.mentzen.shift_power(), Some(0));
        assert!(r.crosschecks.iter().all(|c| c.status == CheckStatus::Consistent));
    }

    #[test]
    fn and_report() {
        let r = goe_report(&Code::and_mask(&[0, 1]), &BSet::prime_squares(), &AuditConfig::default(), &Caps::default())
            .unwrap();
        assert_eq!(r.witness.set, vec![0, 1]);
        assert!(r.surjectivity_defects.iter().any(|d| d.block == "1110"));
        assert!(r.preinjectivity.as_ref().unwrap().pairs_total > 0);
        assert!(matches!(r.mentzen, MentzenVerdict::RejectedByL1 { .. }));
        assert!(r.crosschecks.iter().all(|c| c.status == CheckStatus::Consistent));
    }

    #[test]
    fn empty_witness_escalates() {
        let c = Code::from_ones(1, [0b110, 0b011, 0b101]).unwrap();
        let r = goe_report(&c, &BSet::prime_squares(), &AuditConfig::default(), &Caps::default()).unwrap();
        assert!(r.witness.set.is_empty());
        if r.consistency_violations == 0 {
            assert!(r.counterexample.is_some());
        }
    }

    #[test]
    fn non_erdos_is_exploratory() {
        let r = goe_report(&Code::identity(), &BSet::explicit([2, 3]).unwrap(), &AuditConfig::default(), &Caps::default())
            .unwrap();
        assert!(r.crosschecks.iter().all(|c| c.status == CheckStatus::Exploratory));
    }
}
