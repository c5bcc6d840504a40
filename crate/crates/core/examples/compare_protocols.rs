//! Decides all eight relations between two protocols.
//!
//! With no arguments compares the bundled P1 and P2. Otherwise pass two
//! protocol files, resolved against the bundled catalog.

use std::env;
use std::fs;

use commont::{catalog, compare, Protocol, SemanticsRegistry};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let ont = catalog::default_ontology();
    let reg = SemanticsRegistry::standard();
    let args: Vec<String> = env::args().skip(1).collect();
    let (a, b) = match args.as_slice() {
        [a, b] => (
            Protocol::load(a, &fs::read_to_string(a)?, &ont)?,
            Protocol::load(b, &fs::read_to_string(b)?, &ont)?,
        ),
        _ => (catalog::p1(), catalog::p2()),
    };
    let verdict = compare(&a, &b, &ont, &reg)?;
    print!("{}", verdict.render_table());
    Ok(())
}
