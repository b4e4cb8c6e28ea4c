use radcomp_cli::verify::run_all;

#[test]
fn acceptance_criteria() {
    let rows = run_all();
    for row in &rows {
        println!("{}", row.line());
    }
    let failed: Vec<_> = rows.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert_eq!(rows.len(), 9);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
