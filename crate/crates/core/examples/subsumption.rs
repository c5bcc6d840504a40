//! Subsumption queries over the act and content hierarchies.

use commont::{catalog, SemanticsRegistry};

fn main() -> commont::Result<()> {
    let ont = catalog::default_ontology();
    let reg = SemanticsRegistry::standard();
    let pairs = [
        ("RequestPulse", "A-RequestPulse"),
        ("A-RequestPulse", "RequestPulse"),
        ("Directive", "A-RequestTemp"),
        ("Assertive", "TimeInform"),
        ("Request", "TimeAccept"),
        ("TempInfo", "A-TempInfo"),
    ];
    for (general, specific) in pairs {
        println!(
            "{specific} ⊑ {general}: {}",
            ont.subsumes(general, specific)?
        );
    }
    for act in ["A-PulseInform", "TimeAccept", "A-RequestTemp"] {
        let root = ont.most_specific_semantic_ancestor(act, &reg)?;
        println!(
            "{act} takes its effects from {root}, content {}",
            ont.content_of(act).unwrap_or("-")
        );
    }
    Ok(())
}
