//! Genus from ramification data, signature classification, and the
//! Euclidean signatures.

use corrorbit::ramcalc::{
    classify_signature, enumerate_signatures, genus_from_portrait, signature_of, Partition, RamificationPortrait,
};
use num_rational::BigRational;

fn p(s: &str) -> Partition {
    Partition::parse_exponent_notation(s).unwrap()
}

fn main() {
    // x^5 + 1/x^5 style: the dihedral Galois type of degree 10.
    let d10 = RamificationPortrait::from_partitions(10, vec![p("2^5"), p("2^5"), p("5^2")]).unwrap();
    // A degree 4 map with four simple critical values.
    let generic = RamificationPortrait::from_partitions(4, vec![p("1^2 2"); 6]).unwrap();

    for (name, portrait) in [("D5 regular", &d10), ("generic quartic", &generic)] {
        let sig = signature_of(portrait);
        println!(
            "{name}: type {} genus {} signature {sig} -> {:?}",
            portrait.type_string(),
            genus_from_portrait(portrait).unwrap(),
            classify_signature(&sig).unwrap()
        );
    }

    println!("signatures with weight 2:");
    for s in enumerate_signatures(&BigRational::from_integer(2.into()), 4) {
        println!("  {s}");
    }
}
