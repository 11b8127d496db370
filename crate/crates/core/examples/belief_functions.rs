//! Belief, plausibility, contour and pignistic transforms of a single mass function.
//!
//! ```bash
//! cargo run --example belief_functions
//! ```

use evcomm::{FocalSet, FocalSetCatalog, MassFunction};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cat = FocalSetCatalog::full(3)?;
    println!("catalog: {}", cat.labels().join(" "));

    let mut v = vec![0.0; cat.len()];
    v[0] = 0.1;
    v[cat.singleton_index(0)] = 0.4;
    v[cat.index_of(FocalSet::parse("{1,2}")?).unwrap()] = 0.3;
    v[cat.full_index()] = 0.2;
    let m = MassFunction::new(&cat, &v)?;

    for s in ["{1}", "{2}", "{1,2}", "{2,3}"] {
        let a = FocalSet::parse(s)?;
        println!("{s:>6}: Bel = {:.2}  Pl = {:.2}", m.bel(a), m.pl(a));
    }
    println!("contour:   {:?}", m.contour());
    println!("pignistic: {:?}", m.pignistic()?);
    println!("hard credal set: {}", cat.get(m.argmax_nonempty()));
    Ok(())
}
