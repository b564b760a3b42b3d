//! Chebyshev polynomials with T_d((x + 1/x)/2) = (x^d + x^-d)/2 and their
//! ramification.

use corrorbit::polyexact::{chebyshev, chebyshev_functional_identity, RatFunc};
use num_rational::BigRational;
use num_traits::One;

fn main() {
    for d in 1..=6 {
        let t = chebyshev(d);
        println!("T_{d} = {t}  (identity {})", chebyshev_functional_identity(&t, d));
    }
    let one = BigRational::one();
    for d in [5, 6] {
        let t = RatFunc::from_poly(chebyshev(d));
        println!(
            "T_{d} over 1, -1, inf: {} {} {}",
            t.fiber_partition(Some(&one)),
            t.fiber_partition(Some(&-one.clone())),
            t.fiber_partition(None)
        );
    }
}
