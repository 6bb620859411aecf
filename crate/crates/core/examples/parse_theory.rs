//! Parse a theory, print it back, and show what a diagnostic looks like.

use gforge::{corpus, parse_theory, render_theory};

fn main() {
    let t = parse_theory(corpus::LINEAR_ORDER).expect("bundled theory parses");
    println!(
        "{} sorts, {} relations, {} axioms",
        t.sorts.len(),
        t.relations.len(),
        t.axioms.len()
    );
    let text = render_theory(&t);
    print!("{text}");
    assert_eq!(parse_theory(&text).unwrap(), t);

    let typo = "sorts: X\nrelations: leq(X, Y)\n";
    match parse_theory(typo) {
        Ok(_) => unreachable!(),
        Err(e) => println!("\n{typo:?} -> {e}"),
    }
}
