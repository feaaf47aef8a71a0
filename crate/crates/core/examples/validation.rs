//! The full acceptance suite with the evidence behind each resolved
//! ambiguity; exits non-zero if any criterion fails.

fn main() {
    let report = polyginibre::validation::validate();
    println!("{report}");
    for c in &report.criteria {
        eprintln!("criterion {}: {:.2} s", c.id, c.elapsed);
    }
    std::process::exit(if report.all_passed() { 0 } else { 1 });
}
