//! Trace sets and their time-abstracted multisets for the bundled protocols.

use commont::{abstract_time, catalog, trace_set, SemanticsRegistry};

fn main() -> commont::Result<()> {
    let ont = catalog::default_ontology();
    let reg = SemanticsRegistry::standard();
    for p in [catalog::asktime(), catalog::p1(), catalog::p2()] {
        println!("T({}):", p.name());
        for t in trace_set(&p, &ont, &reg)?.iter() {
            println!("  {t}");
            println!("  abstracted: {}", abstract_time(t));
        }
    }
    Ok(())
}
