use criterion::criterion_main;

mod suites;

criterion_main! {
    suites::circle::benches,
    suites::extension::benches,
    suites::validate::benches,
    suites::trees::benches,
}
