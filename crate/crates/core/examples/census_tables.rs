//! Regenerates the census of genus-zero Galois closures from group actions
//! and instantiates the Lattès table.

use corrorbit::census::{table1, table1_match, table1_reference, table2};

fn main() {
    let rows = table1(3..=6).unwrap();
    for r in &rows {
        println!("{}", r.tsv());
    }
    println!("differences from the reference: {}", table1_match(&table1_reference(3..=6), &rows).len());

    let t2 = table2(12);
    let bad = t2.iter().filter(|e| !e.passes()).count();
    println!("Lattès instances with d <= 12: {} ({} failing)", t2.len(), bad);
}
