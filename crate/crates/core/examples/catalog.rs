//! Run a few entries of the property catalog at a small bound.

use lut::suite::{catalog, run_suite, SuiteConfig};

fn main() {
    let cfg = SuiteConfig { bound: 2, samples: 200, ..SuiteConfig::default() };
    println!("{} entries in the catalog", catalog().len());
    for id in ["U-factive", "U-moore", "fitch", "B-to-U-invalid", "complexity-9"] {
        for report in run_suite(&cfg, Some(id)).unwrap() {
            println!("{}", report.line());
        }
    }
}
