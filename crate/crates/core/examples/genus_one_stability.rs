//! Correspondences between elliptic curves given by lattices: stability
//! verdicts and the iterate simulation agree.

use corrorbit::ellcorr::{first_reducible, iterate_simulation, stability_verdict, EllCorrSpec};
use corrorbit::quadorder::{QuadField, QuadNum};

fn main() {
    let gauss = QuadField::gaussian();
    let z = gauss.maximal_order().lattice;
    let g = |u: i64, v: i64| QuadNum::from_ints(-1, u, v);
    let cases =
        [("(2,3) on Z[i]", g(2, 0), g(3, 0)), ("(2,4) on Z[i]", g(2, 0), g(4, 0)), ("(1+i, 2-i)", g(1, 1), g(2, -1))];
    for (name, a, b) in cases {
        let spec = EllCorrSpec::new(gauss, z.clone(), z.clone(), a, b).unwrap();
        let steps = iterate_simulation(&spec, 8).unwrap();
        println!(
            "{name}: {:?}, simulation first reducible at {:?}",
            stability_verdict(&spec).unwrap(),
            first_reducible(&steps)
        );
    }

    // Non-maximal order: the sum condition passes but the ideal is not
    // invertible, so the third iterate splits.
    let f = QuadField::new(-3).unwrap();
    let o2 = f.order_of_conductor(2).lattice;
    let e = |u: i64, v: i64| QuadNum::from_ints(-3, u, v);
    let lam0 = QuadNum::from_ints(-3, 2, 0);
    let lam0 = o2.scale(&lam0).unwrap().sum(&o2.scale(&e(1, 1)).unwrap()).unwrap();
    let spec = EllCorrSpec::new(f, lam0, o2, e(2, 0), e(1, 1)).unwrap();
    for s in iterate_simulation(&spec, 4).unwrap() {
        println!("  n = {}: {} irreducible {} degrees {:?}", s.n, s.lattice, s.irreducible, s.degrees);
    }
    println!("verdict {:?}", stability_verdict(&spec).unwrap());
}
