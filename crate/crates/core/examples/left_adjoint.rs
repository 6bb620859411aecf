//! The left adjoint of the source map on a few arrow opens of total orders.

use gforge::expr::parse_open;
use gforge::groupoid::build_groupoid;
use gforge::{corpus, IndexSet};

fn main() {
    let g = build_groupoid(&corpus::linear_order(), IndexSet::new(3).unwrap()).unwrap();
    for src in [
        "leq1(1,2)",
        "leq2(1,2)",
        "alpha.X(1)=2",
        "leq2(1,2) & alpha.X(1)=0",
        "leq2(1,2) & alpha.X(1)=1",
        "leq1(0,1) | per2.X(2,2)",
    ] {
        let v = parse_open(src, &g.arrows).unwrap();
        let image = g.source_lower_open(&v).unwrap();
        println!("s_!({v})\n  = {image}\n");
    }
}
