//! Indexed models of the bundled theories.

use gforge::oracle::{ModelSpace, SizeGuard};
use gforge::{corpus, parse_theory, IndexSet};

fn main() {
    for (name, src) in corpus::ALL {
        let t = parse_theory(src).unwrap();
        let k = if t.is_propositional() { 1 } else { 3 };
        let space = ModelSpace::new(&t, IndexSet::new(k).unwrap()).unwrap();
        let models = space.enumerate(SizeGuard::from_env()).unwrap();
        println!("{name} at k = {k}: {} models", models.len());
    }

    let space = ModelSpace::new(&corpus::linear_order(), IndexSet::new(2).unwrap()).unwrap();
    for m in space.enumerate(SizeGuard::from_env()).unwrap() {
        println!("  {}", space.describe(&m));
    }
}
