//! Left factors with a common Galois closure that preserve the number of
//! components of a fiber product.

use corrorbit::constellation::Constellation;
use corrorbit::friedgset::{cover_fried, fried_decompose, verify_fried, JointAction};
use corrorbit::permgroup::Perm;

const CAP: usize = 200_000;

fn main() {
    let p = |n, s| Perm::parse_cycles(n, s).unwrap();
    // S4 on points and on edges of a tetrahedron.
    let ja = JointAction::new(vec![p(4, "(0 1 2 3)"), p(4, "(0 1)")], vec![p(6, "(0 3 5 2)(1 4)"), p(6, "(1 3)(2 4)")])
        .unwrap();
    let r = fried_decompose(&ja, CAP).unwrap();
    let check = verify_fried(&ja, &r, CAP).unwrap();
    println!("S4 on 4 and 6 points -> |Y1| = {}, |Y2| = {}, verified {}", r.y1_size, r.y2_size, check.ok());

    // x^2 and x^3 share no left factor: both quotients collapse.
    let a = Constellation::power_map(2);
    let b = Constellation::power_map(3);
    println!("x^2, x^3 -> {:?}", cover_fried(&a, &b, CAP).unwrap());

    // x^4 and x^6 keep x^2 as a common left factor.
    let a = Constellation::power_map(4);
    let b = Constellation::power_map(6);
    println!("x^4, x^6 -> {:?}", cover_fried(&a, &b, CAP).unwrap());
}
