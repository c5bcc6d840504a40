use std::collections::{HashMap, HashSet};

use super::diagnostic::{Diagnostic, DiagnosticCode, Parsed, SourceSpan};
use super::lexer::{lines, Cursor, Tok};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateDecl {
    pub id: String,
    pub initial: bool,
    pub is_final: bool,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransitionDecl {
    pub source: String,
    pub target: String,
    pub act: String,
    pub sender: String,
    pub receiver: String,
    pub span: SourceSpan,
    /// Span of the act class token, for ontology lookups done later.
    pub act_span: SourceSpan,
}

/// A protocol file as written, before ontology checks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProtocolDecl {
    pub name: Option<String>,
    pub roles: Option<(String, String)>,
    pub states: Vec<StateDecl>,
    pub transitions: Vec<TransitionDecl>,
}

pub fn parse_protocol_file(file: &str, text: &str) -> Parsed<ProtocolDecl> {
    let mut p = Parser {
        file,
        decl: ProtocolDecl::default(),
        diagnostics: Vec::new(),
        state_refs: Vec::new(),
        role_refs: Vec::new(),
    };
    for (lineno, code) in lines(text) {
        let mut cur = Cursor::new(file, lineno, code);
        if cur.is_empty() {
            continue;
        }
        if let Err(d) = p.statement(&mut cur) {
            p.diagnostics.push(d);
        }
    }
    p.finish();
    Parsed {
        value: p.decl,
        diagnostics: p.diagnostics,
    }
}

struct Parser<'a> {
    file: &'a str,
    decl: ProtocolDecl,
    diagnostics: Vec<Diagnostic>,
    state_refs: Vec<(String, SourceSpan)>,
    role_refs: Vec<(String, String, SourceSpan, SourceSpan)>,
}

impl Parser<'_> {
    fn statement(&mut self, cur: &mut Cursor<'_>) -> Result<(), Diagnostic> {
        let (kw, col) = cur.ident("a statement keyword")?;
        let kw_span = cur.span_at(col);
        match kw.as_str() {
            "protocol" => {
                let (name, _) = cur.ident("a protocol name")?;
                cur.finish()?;
                if self.decl.name.is_some() {
                    return Err(Diagnostic::error(
                        DiagnosticCode::DuplicateProtocol,
                        kw_span,
                        "protocol name declared twice",
                    ));
                }
                self.decl.name = Some(name);
            }
            "roles" => {
                let (a, _) = cur.ident("the first role")?;
                let (b, bcol) = cur.ident("the second role")?;
                cur.finish()?;
                if self.decl.roles.is_some() {
                    return Err(Diagnostic::error(
                        DiagnosticCode::DuplicateRoles,
                        kw_span,
                        "roles declared twice",
                    ));
                }
                if a == b {
                    // keep them so the missing-roles check stays quiet
                    self.decl.roles = Some((a.clone(), b));
                    return Err(Diagnostic::error(
                        DiagnosticCode::DuplicateRole,
                        cur.span_at(bcol),
                        format!("a protocol needs two distinct roles, got `{a}` twice"),
                    ));
                }
                self.decl.roles = Some((a, b));
            }
            "state" => self.state(cur, kw_span)?,
            "transition" => self.transition(cur, kw_span)?,
            _ => {
                return Err(Diagnostic::error(
                    DiagnosticCode::UnknownKeyword,
                    kw_span,
                    format!("unknown statement `{kw}`"),
                ))
            }
        }
        Ok(())
    }

    fn state(&mut self, cur: &mut Cursor<'_>, span: SourceSpan) -> Result<(), Diagnostic> {
        let (id, _) = cur.ident("a state id")?;
        let mut initial = false;
        let mut is_final = false;
        let mut warnings = Vec::new();
        while !cur.at_end() {
            let (flag, col) = cur.ident("`initial` or `final`")?;
            let slot = match flag.as_str() {
                "initial" => &mut initial,
                "final" => &mut is_final,
                _ => {
                    return Err(Diagnostic::error(
                        DiagnosticCode::UnknownAttribute,
                        cur.span_at(col),
                        format!("unknown state flag `{flag}`"),
                    ))
                }
            };
            if *slot {
                warnings.push(Diagnostic::warning(
                    DiagnosticCode::RepeatedFlag,
                    cur.span_at(col),
                    format!("flag `{flag}` repeated"),
                ));
            }
            *slot = true;
        }
        if self.decl.states.iter().any(|s| s.id == id) {
            return Err(Diagnostic::error(
                DiagnosticCode::DuplicateState,
                span,
                format!("state `{id}` declared twice"),
            ));
        }
        if initial && self.decl.states.iter().any(|s| s.initial) {
            return Err(Diagnostic::error(
                DiagnosticCode::DuplicateInitial,
                span,
                format!("state `{id}` marked initial, but an initial state already exists"),
            ));
        }
        self.diagnostics.extend(warnings);
        self.decl.states.push(StateDecl {
            id,
            initial,
            is_final,
            span,
        });
        Ok(())
    }

    fn transition(&mut self, cur: &mut Cursor<'_>, span: SourceSpan) -> Result<(), Diagnostic> {
        let (source, scol) = cur.ident("a source state")?;
        cur.expect(&Tok::Arrow, "`->`")?;
        let (target, tcol) = cur.ident("a target state")?;
        cur.keyword("on")?;
        let (act, acol) = cur.ident("an act class")?;
        cur.keyword("from")?;
        let (sender, fcol) = cur.ident("the sending role")?;
        cur.keyword("to")?;
        let (receiver, rcol) = cur.ident("the receiving role")?;
        cur.finish()?;
        if sender == receiver {
            return Err(Diagnostic::error(
                DiagnosticCode::SelfAddressed,
                cur.span_at(rcol),
                format!("role `{sender}` cannot send to itself"),
            ));
        }
        self.state_refs.push((source.clone(), cur.span_at(scol)));
        self.state_refs.push((target.clone(), cur.span_at(tcol)));
        self.role_refs.push((
            sender.clone(),
            receiver.clone(),
            cur.span_at(fcol),
            cur.span_at(rcol),
        ));
        self.decl.transitions.push(TransitionDecl {
            source,
            target,
            act,
            sender,
            receiver,
            span,
            act_span: cur.span_at(acol),
        });
        Ok(())
    }

    fn finish(&mut self) {
        let start = SourceSpan::new(self.file, 1, 1);
        if self.decl.name.is_none() {
            self.diagnostics.push(Diagnostic::error(
                DiagnosticCode::MissingProtocol,
                start.clone(),
                "missing `protocol <Name>` statement",
            ));
        }
        match &self.decl.roles {
            None => self.diagnostics.push(Diagnostic::error(
                DiagnosticCode::MissingRoles,
                start.clone(),
                "missing `roles <R1> <R2>` statement",
            )),
            Some((a, b)) => {
                for (sender, receiver, fs, rs) in &self.role_refs {
                    for (role, span) in [(sender, fs), (receiver, rs)] {
                        if role != a && role != b {
                            self.diagnostics.push(Diagnostic::error(
                                DiagnosticCode::UnknownRole,
                                span.clone(),
                                format!("role `{role}` is not one of `{a}`, `{b}`"),
                            ));
                        }
                    }
                }
            }
        }
        if !self.decl.states.iter().any(|s| s.initial) {
            self.diagnostics.push(Diagnostic::error(
                DiagnosticCode::MissingInitial,
                start.clone(),
                "no state is marked `initial`",
            ));
        }
        if !self.decl.states.iter().any(|s| s.is_final) {
            self.diagnostics.push(Diagnostic::error(
                DiagnosticCode::MissingFinal,
                start,
                "no state is marked `final`",
            ));
        }
        let declared: HashSet<&str> = self.decl.states.iter().map(|s| s.id.as_str()).collect();
        let mut reported: HashMap<&str, ()> = HashMap::new();
        for (id, span) in &self.state_refs {
            if !declared.contains(id.as_str()) && reported.insert(id.as_str(), ()).is_none() {
                self.diagnostics.push(Diagnostic::error(
                    DiagnosticCode::UndeclaredState,
                    span.clone(),
                    format!("transition names undeclared state `{id}`"),
                ));
            }
        }
        self.diagnostics.sort_by(|a, b| a.span.cmp(&b.span));
    }
}
