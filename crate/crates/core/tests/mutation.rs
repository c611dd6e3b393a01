use leibniz3::catalog::Family;
use leibniz3::exact::Poly;
use leibniz3::par::Strategy;
use leibniz3::suite::{CheckId, Suite};

/// e₂e₃ ↦ 2e₁ in L6: still Leibniz, but the trace table no longer matches.
#[test]
fn mutated_l6_is_caught_by_the_trace_table() {
    let mut suite = Suite::standard(Strategy::Sequential);
    for rec in suite.records.iter_mut().chain(suite.sampled.iter_mut()) {
        if rec.family == Family::L6 {
            rec.table.set(1, 2, 0, Poly::int(2));
        }
    }
    let leib = suite.run_check(CheckId::Criterion(1));
    assert!(leib.pass, "{leib:?}");
    let traces = suite.run_check(CheckId::Criterion(3));
    assert!(!traces.pass);
    assert!(traces.details.iter().all(|d| d.starts_with("L6")), "{:?}", traces.details);
    assert!(traces.details.iter().any(|d| d.contains("tr((χ0χs)χr)") && d.contains("4·z_1·z_2")), "{:?}", traces.details);
}
