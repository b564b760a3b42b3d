//! Genus of the iterates of (x^d, x^e h(x)^d): prediction against the
//! exact oracle.

use corrorbit::exceptional::{
    agrees, extract_m, predict_cheb, predict_power, verify_cheb, verify_power, ChebyshevFamilySpec, PowerFamilySpec,
    Sign,
};
use corrorbit::polyexact::{parse_poly, parse_ratfunc};

fn main() {
    for (d, e, h) in [(3, 2, "x-1"), (2, 3, "x-1"), (3, 2, "(x-1)^3"), (2, -3, "(x-1)^2*(x+1)"), (3, 2, "5")] {
        let spec = PowerFamilySpec::new(d, e, parse_ratfunc(h).unwrap()).unwrap();
        let pred = predict_power(&spec, 6);
        let exact = verify_power(&spec, 6).unwrap();
        println!(
            "d={d} e={e} h={h}: m = {}, predicted {pred}, exact {exact}, agree {}",
            extract_m(&spec),
            agrees(&pred, &exact)
        );
    }

    let spec = ChebyshevFamilySpec::new(3, 1, parse_poly("x-2").unwrap(), Sign::Plus).unwrap();
    println!("Chebyshev (3, 1, x-2): g~_1 = {}", spec.g1_tilde());
    println!("  predicted {}, exact {}", predict_cheb(&spec, 4), verify_cheb(&spec, 4).unwrap());
}
