use std::fmt::Write;

use crate::ontology::{DeclaredRef, Ontology};
use crate::protocol::Protocol;

/// Canonical text for the user-declared part of an ontology, in declaration order.
pub fn serialize_ontology(ont: &Ontology) -> String {
    let mut out = String::new();
    for decl in ont.declarations() {
        match decl {
            DeclaredRef::Content(c) => {
                out.push_str("content ");
                out.push_str(&c.name);
                if !c.parents.is_empty() {
                    let _ = write!(out, " : {}", c.parents.join(", "));
                }
            }
            DeclaredRef::Act(a) => {
                let _ = write!(out, "act {} : {}", a.name, a.parents.join(", "));
                for (key, value) in [
                    ("content", &a.content),
                    ("replyto", &a.in_reply_to),
                    ("condition", &a.condition),
                    ("system", &a.system),
                ] {
                    if let Some(v) = value {
                        let _ = write!(out, " {key}={v}");
                    }
                }
            }
        }
        out.push('\n');
    }
    out
}

pub fn serialize_protocol(p: &Protocol) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "protocol {}", p.name());
    let (a, b) = p.roles();
    let _ = writeln!(out, "roles {a} {b}");
    for s in p.states() {
        out.push_str("state ");
        out.push_str(s);
        if p.initial() == s {
            out.push_str(" initial");
        }
        if p.is_final(s) {
            out.push_str(" final");
        }
        out.push('\n');
    }
    for t in p.transitions() {
        let _ = writeln!(
            out,
            "transition {} -> {} on {} from {} to {}",
            t.source, t.target, t.act, t.sender, t.receiver
        );
    }
    out
}
