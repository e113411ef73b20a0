mod support;

use support::fuzz::run_fuzz;

#[test]
fn hundred_thousand_inputs_without_a_crash() {
    let report = run_fuzz(7, 100_000);
    assert_eq!(report.inputs, 100_000);
    assert!(report.crashes.is_empty(), "{:#?}", &report.crashes[..report.crashes.len().min(5)]);
    assert!(report.unspanned.is_empty(), "{:#?}", &report.unspanned[..report.unspanned.len().min(5)]);
}
