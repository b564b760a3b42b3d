//! Fiber products of branched covers from their monodromy, with the
//! gcd/lcm cycle accounting over each branch point.

use corrorbit::constellation::{fiber_cycle_types, fiber_product, is_irreducible_pair, Constellation};
use corrorbit::ramcalc::abhyankar_product;

fn main() {
    let x4 = Constellation::power_map(4);
    let x6 = Constellation::power_map(6);
    let comps = fiber_product(&x4, &x6).unwrap();
    println!("x^4 against x^6: {} components", comps.len());
    for c in &comps {
        println!("  degree {} genus {}", c.constellation.degree, c.constellation.genus().unwrap());
    }
    for (label, part) in fiber_cycle_types(&comps) {
        let a = x4.monodromy_of(&label).unwrap().cycle_type();
        let b = x6.monodromy_of(&label).unwrap().cycle_type();
        println!("  over {label}: {part}, gcd/lcm count {}", abhyankar_product(&a, &b));
    }

    // Coprime degrees force a single component.
    let cubic = Constellation::from_cycles(3, &[("0", "(0 1)"), ("1", "(1 2)"), ("inf", "(0 1 2)")]).unwrap();
    let quad = Constellation::from_cycles(2, &[("0", "(0 1)"), ("1", "(0 1)"), ("inf", "()")]).unwrap();
    println!("cubic against quadratic: {:?}", is_irreducible_pair(&cubic, &quad).unwrap());
}
