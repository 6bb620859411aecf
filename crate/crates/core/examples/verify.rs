//! Run every verification suite on total orders at k = 2.

use gforge::oracle::{verify, Suite, VerifyConfig};
use gforge::{corpus, IndexSet};

fn main() {
    let config = VerifyConfig {
        samples: 200,
        ..VerifyConfig::default()
    };
    let report = verify(
        &corpus::linear_order(),
        IndexSet::new(2).unwrap(),
        &Suite::ALL,
        &config,
    )
    .unwrap();
    println!("{} models, {} isomorphisms", report.models, report.isos);
    for c in &report.checks {
        let mark = if c.passed { "ok  " } else { "FAIL" };
        println!("{mark} {}/{} ({} checked)", c.suite, c.name, c.checked);
        if let Some(note) = &c.note {
            println!("     {note}");
        }
    }
}
