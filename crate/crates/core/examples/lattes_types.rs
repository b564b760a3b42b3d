//! Ramification types of generalized Lattès maps, from the table and from
//! concrete isogenies.

use corrorbit::ellcorr::{lattes_query_from_lattices, lattes_row, lattes_rows};
use corrorbit::quadorder::{QuadField, QuadNum};

fn main() {
    for row in lattes_rows() {
        let d = (1..=24).find(|&d| row.admits_degree(d) && row.instantiate(d).is_ok()).unwrap();
        println!(
            "row {:2}: {} over {} at d = {d}: {}",
            row.row,
            row.sig0(),
            row.sig1(),
            row.instantiate(d).unwrap().type_string()
        );
    }

    let cases = [(-1, 2, 0, 4, 4), (-1, 1, 1, 4, 4), (-1, 3, 0, 2, 2), (-3, 2, 0, 3, 3), (-3, 2, 0, 6, 6)];
    for (d, u, v, a0, a1) in cases {
        let lam = QuadField::new(d).unwrap().maximal_order().lattice;
        let alpha = QuadNum::from_ints(d, u, v);
        let q = lattes_query_from_lattices(&lam, &lam, &alpha, a0, a1).unwrap();
        let row = lattes_row(&q).unwrap();
        println!(
            "D = {d}, ψ = {alpha}, auts ({a0},{a1}): degree {} row {} {}",
            q.d,
            row.row,
            row.instantiate(q.d).unwrap().type_string()
        );
    }
}
