//! The bundled example theories, parsed from the `.gt` files shipped in
//! `examples/`.

use crate::parser::parse_theory;
use crate::theory::Theory;

pub const LINEAR_ORDER: &str = include_str!("../examples/linear_order.gt");
pub const DEDEKIND_GRID: &str = include_str!("../examples/dedekind_grid.gt");
pub const PARTIAL_SURJECTION: &str = include_str!("../examples/partial_surjection.gt");
pub const PROPOSITIONAL_DEMO: &str = include_str!("../examples/propositional_demo.gt");

/// `(file name, source)` for every bundled theory.
pub const ALL: [(&str, &str); 4] = [
    ("linear_order.gt", LINEAR_ORDER),
    ("dedekind_grid.gt", DEDEKIND_GRID),
    ("partial_surjection.gt", PARTIAL_SURJECTION),
    ("propositional_demo.gt", PROPOSITIONAL_DEMO),
];

fn load(src: &str) -> Theory {
    parse_theory(src).expect("bundled theory parses")
}

/// Inhabited total orders.
pub fn linear_order() -> Theory {
    load(LINEAR_ORDER)
}

/// Dedekind cuts over the grid {0, 1/2, 1}.
pub fn dedekind_grid() -> Theory {
    load(DEDEKIND_GRID)
}

/// Partial surjections from {0, 1, 2} onto a two-element set.
pub fn partial_surjection() -> Theory {
    load(PARTIAL_SURJECTION)
}

pub fn propositional_demo() -> Theory {
    load(PROPOSITIONAL_DEMO)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::render_theory;
    use crate::theory::validate_theory;

    #[test]
    fn corpus_validates_and_round_trips() {
        for (name, src) in ALL {
            let t = parse_theory(src).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(validate_theory(&t).is_ok(), "{name}");
            assert_eq!(parse_theory(&render_theory(&t)).unwrap(), t, "{name}");
        }
    }

    #[test]
    fn linear_order_shape() {
        let t = linear_order();
        assert_eq!(
            (t.sorts.len(), t.relations.len(), t.axioms.len()),
            (1, 1, 5)
        );
    }
}
