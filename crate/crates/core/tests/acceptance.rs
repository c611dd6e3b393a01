//! One line per acceptance criterion; every criterion is an exact identity
//! check, so there is no tolerance.

use leibniz3::par::Strategy;
use leibniz3::suite::{CheckId, Suite};

#[test]
fn acceptance() {
    let suite = Suite::standard(Strategy::default());
    let mut failed = Vec::new();
    for k in 1..=12u8 {
        let r = suite.run_check(CheckId::Criterion(k));
        println!(
            "criterion {k:>2}: {} — {} ({:.0} ms)",
            if r.pass { "PASS" } else { "FAIL" },
            r.claim,
            r.runtime_ms
        );
        for d in r.details.iter().take(10) {
            println!("    {d}");
        }
        if !r.pass {
            failed.push(k);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn supporting_properties() {
    let suite = Suite::standard(Strategy::default());
    for id in [CheckId::TraceInclusion, CheckId::PiStability, CheckId::GenericLambda, CheckId::Distinguishability] {
        let r = suite.run_check(id);
        println!("{}: {} ({:.0} ms)", r.claim, if r.pass { "PASS" } else { "FAIL" }, r.runtime_ms);
        assert!(r.pass, "{r:?}");
    }
}
