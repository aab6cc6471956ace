use ifslab::verify::run_paper_suite;

#[test]
fn acceptance() {
    let results = run_paper_suite();
    for r in &results {
        println!(
            "[{}] criterion {:2} ({:6.1} s): {} — {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.seconds,
            r.statement,
            r.detail
        );
    }
    let failed: Vec<usize> = results.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
