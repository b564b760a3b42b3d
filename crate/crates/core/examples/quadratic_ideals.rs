//! Lattices in imaginary quadratic fields: orders, multiplier rings,
//! invertibility, and where the sum/intersection identity breaks.

use corrorbit::quadorder::{
    check_flat_distribute, check_sum_product_identity, ideal, is_invertible, multiplier_ring, QuadField, QuadNum,
};

fn main() {
    let field = QuadField::new(-3).unwrap();
    let o = field.order_of_conductor(2);
    let n = |u: i64, v: i64| QuadNum::from_ints(-3, u, v);
    println!("O = {} (conductor {})", o.lattice, o.conductor());

    // The prime above 2 in Z[√−3] is not invertible.
    let p = ideal(&o, &[n(2, 0), n(1, 1)]).unwrap();
    println!(
        "P = {}; multiplier ring {}; invertible {}",
        p,
        multiplier_ring(&p).lattice,
        is_invertible(&p, &o).unwrap()
    );
    println!("P·P = {}, 2P = {}", p.mul(&p).unwrap(), p.scale(&n(2, 0)).unwrap());

    let i = ideal(&o, &[n(3, 3), n(0, 12)]).unwrap();
    let j = ideal(&o, &[n(3, 1), n(0, 4)]).unwrap();
    println!("(I+J)(I∩J) = IJ for I = {i}, J = {j}: {:?}", check_sum_product_identity(&i, &j, &o).unwrap());
    println!("same for I = J = P: {:?}", check_sum_product_identity(&p, &p, &o).unwrap());
    println!("(J∩I)P = JP∩IP: {}", check_flat_distribute(&j, &i, &p).unwrap().holds);

    let q = ideal(&o, &[n(1, 1), n(4, 0)]).unwrap();
    println!(
        "Q = {q}: invertible {}, (J∩I)Q = JQ∩IQ: {}",
        is_invertible(&q, &o).unwrap(),
        check_flat_distribute(&j, &i, &q).unwrap().holds
    );
}
