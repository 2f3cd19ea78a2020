use spreadpack::oracles::{all_passed, check_thm32_union, default_suite};

#[test]
fn default_suite_matches() {
    let reports = default_suite(2, 1 << 26).unwrap();
    for r in &reports {
        println!("{r}");
    }
    assert!(all_passed(&reports));
    assert!(reports.iter().any(|r| r.claim == "caro-wei"));
}

#[test]
fn thm32_diagnostic_runs() {
    let r = check_thm32_union(2, 2, 2, 1 << 26).unwrap();
    println!("{r}");
    assert!(r.passed());
}
