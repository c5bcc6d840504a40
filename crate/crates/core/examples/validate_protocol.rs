//! Validation reports: a clean protocol, one that stops before the reply,
//! and one with structural problems.

use commont::protocol::{validate, Protocol};
use commont::{catalog, SemanticsRegistry};

const TRUNCATED: &str = "\
protocol AskTimeShort
roles A B
state S0 initial
state S1
state S2 final
transition S0 -> S1 on TimeRequest from A to B
transition S1 -> S2 on TimeAccept from B to A
";

const BROKEN: &str = "\
protocol Broken
roles A B
state S0 initial
state S1
state S2 final
state Orphan
transition S0 -> S1 on TimeRequest from A to B
transition S0 -> S2 on TimeRequest from A to B
transition S1 -> S1 on TimeAccept from B to A
";

fn main() -> commont::Result<()> {
    let ont = catalog::default_ontology();
    let reg = SemanticsRegistry::standard();
    println!("{}", validate(&catalog::asktime(), &ont, &reg));
    for (file, src) in [("short.proto", TRUNCATED), ("broken.proto", BROKEN)] {
        let p = Protocol::load_unchecked(file, src, &ont)?;
        println!("{}", validate(&p, &ont, &reg));
    }
    match Protocol::load(
        "typo.proto",
        "protocol T\nroles A B\nstate S0 initial final\nstate S0\n",
        &ont,
    ) {
        Ok(_) => println!("unexpectedly loaded"),
        Err(e) => println!("{e}"),
    }
    Ok(())
}
