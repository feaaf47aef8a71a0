//! Every variance route side by side, with their discrepancies and notes.

use polyginibre::kernels::{DiskRadius, LandauIndex};
use polyginibre::statistics::{variance_report, Policy};

fn main() -> polyginibre::Result<()> {
    for (m, r) in [(0, 1.0), (1, 2.0), (3, 4.0)] {
        let report = variance_report(LandauIndex::new(m), DiskRadius::new(r)?, &Policy::default())?;
        println!("{report}\n");
    }
    Ok(())
}
