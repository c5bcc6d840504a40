//! An application layer on top of the bundled catalog: a promise act
//! (Commissive) and an inform that answers a specialized request.

use commont::dsl::{serialize_ontology, serialize_protocol};
use commont::ontology::Ontology;
use commont::protocol::{validate, Protocol};
use commont::{catalog, trace_set, SemanticsRegistry};

const APP: &str = "\
content Payment
content Delivery
act PromiseDelivery : Commissive content=Delivery condition=Payment
act Pay : Assertive content=Payment
act Deliver : Assertive content=Delivery
";

const ORDER: &str = "\
protocol Order
roles Shop Buyer
state Start initial
state Promised
state Paid
state Done final
transition Start -> Promised on PromiseDelivery from Shop to Buyer
transition Promised -> Paid on Pay from Buyer to Shop
transition Paid -> Done on Deliver from Shop to Buyer
";

fn main() -> commont::Result<()> {
    let ont = Ontology::load(&[("catalog.ont", catalog::CATALOG_SOURCE), ("shop.ont", APP)])?;
    let reg = SemanticsRegistry::standard();
    let p = Protocol::load("order.proto", ORDER, &ont)?;
    let run = &p.enumerate_runs()?[0];
    for (state, store) in run.states.iter().zip(run.simulate(&ont, &reg)?) {
        println!("{state}: {store}");
    }
    println!("{}", validate(&p, &ont, &reg));
    for t in trace_set(&p, &ont, &reg)?.iter() {
        println!("trace {t}");
    }
    println!("\n{}", serialize_protocol(&p));
    let app_only: Vec<_> = serialize_ontology(&ont)
        .lines()
        .filter(|l| l.contains("Pay") || l.contains("Deliver"))
        .map(String::from)
        .collect();
    println!("{}", app_only.join("\n"));
    Ok(())
}
