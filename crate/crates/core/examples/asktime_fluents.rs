//! Replays the AskTime protocol and prints the fluent store after every act.

use commont::{catalog, SemanticsRegistry};

fn main() -> commont::Result<()> {
    let ont = catalog::default_ontology();
    let reg = SemanticsRegistry::standard();
    let p = catalog::asktime();
    let run = p.follow(&["TimeRequest", "TimeAccept", "TimeInform"])?;
    let stores = run.simulate(&ont, &reg)?;
    for (k, (state, store)) in run.states.iter().zip(&stores).enumerate() {
        if k > 0 {
            println!("  -- {}", run.events[k - 1]);
        }
        println!("{state} F{k} = {store}");
    }
    Ok(())
}
