//! The closure s_! t* on object opens: orbit saturation, and its fixed
//! points as sentences.

use gforge::expr::parse_open;
use gforge::groupoid::build_groupoid;
use gforge::oracle::{is_closure_fixed, PointGroupoid, SizeGuard};
use gforge::{corpus, IndexSet};

fn main() {
    let t = corpus::linear_order();
    let idx = IndexSet::new(3).unwrap();
    let g = build_groupoid(&t, idx).unwrap();
    let points = PointGroupoid::build(&t, idx, SizeGuard::from_env()).unwrap();
    for src in [
        "leq(0,1)",
        "per.X(0,0)",
        "leq(0,1) & leq(1,0)",
        "true",
        "false",
    ] {
        let u = parse_open(src, &g.objects).unwrap();
        let c = g.closure(&u).unwrap();
        let orbit = points.orbit_saturate(&points.object_points(&u));
        println!(
            "{u}: closure has {} basics, {} models, orbit {} models, fixed: {}",
            c.basics().len(),
            points.object_points(&c).len(),
            orbit.len(),
            is_closure_fixed(&g, &points, &u).unwrap()
        );
    }
}
