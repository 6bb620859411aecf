//! The object presentation of total orders at k = 2.

use gforge::{corpus, propositionalize, IndexSet};

fn main() {
    let t = corpus::linear_order();
    let p = propositionalize(&t, IndexSet::new(2).unwrap()).unwrap();
    println!("{} generators:", p.generators().len());
    for g in p.generators() {
        println!("  {g}");
    }
    println!("{} inequalities, for example:", p.inequalities().len());
    for i in p.inequalities().iter().take(8) {
        println!("  {i}");
    }
}
