//! Images of single generators under the seven structure maps.

use gforge::groupoid::build_groupoid;
use gforge::{corpus, IndexSet, Open};

fn main() {
    let g = build_groupoid(&corpus::linear_order(), IndexSet::new(2).unwrap()).unwrap();
    println!(
        "objects: {} generators, arrows: {}, composable pairs: {}",
        g.objects.generators().len(),
        g.arrows.generators().len(),
        g.comp.generators().len()
    );

    let u = Open::generator(g.objects.generators()[1].clone());
    println!("s*({u}) = {}", g.s_star.apply(&u).unwrap());
    println!("t*({u}) = {}", g.t_star.apply(&u).unwrap());

    for v in ["alpha.X(0)=1", "leq1(0,1)", "per2.X(1,1)"] {
        let v = gforge::expr::parse_open(v, &g.arrows).unwrap();
        println!("e*({v}) = {}", g.e_star.apply(&v).unwrap());
        println!("i*({v}) = {}", g.i_star.apply(&v).unwrap());
        println!("m*({v}) = {}", g.m_star.apply(&v).unwrap());
        println!("pi1*({v}) = {}", g.pi1_star.apply(&v).unwrap());
        println!("pi2*({v}) = {}", g.pi2_star.apply(&v).unwrap());
    }
}
