//! JSON for the propositional demo groupoid.

use gforge::groupoid::build_groupoid;
use gforge::json::groupoid_document;
use gforge::{corpus, IndexSet};

fn main() {
    let g = build_groupoid(&corpus::propositional_demo(), IndexSet::new(1).unwrap()).unwrap();
    println!("{}", groupoid_document(&g));
}
