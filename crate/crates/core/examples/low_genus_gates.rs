//! Degree inequalities that force low-genus left factors, and the Platonic
//! exclusion.

use corrorbit::exceptional::{platonic_exclusion, twelve_step_gate};
use corrorbit::ramcalc::{low_genus_threshold, Signature};

fn main() {
    println!("threshold 170d - 84 at d = 2: {}", low_genus_threshold(2));
    for d in 2..=5 {
        let r = twelve_step_gate(d, d + 1).unwrap();
        for g in r.gates.iter().filter(|g| g.applicable) {
            println!("d = {d}: {} ({} vs {}): {}", g.name, g.lhs, g.rhs, g.holds);
        }
    }
    for (sig, d) in [(vec![2, 3, 3], 2), (vec![2, 3, 4], 2), (vec![2, 3, 5], 2), (vec![2, 3, 5], 3)] {
        let s = Signature::new(sig).unwrap();
        println!("{s} with d = {d}: {:?}", platonic_exclusion(&s, d).unwrap());
    }
}
