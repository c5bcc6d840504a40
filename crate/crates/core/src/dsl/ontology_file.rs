use super::diagnostic::{Diagnostic, DiagnosticCode, Parsed, SourceSpan};
use super::lexer::{lines, Cursor, Tok};
use crate::ontology::{ActClass, ContentClass};

/// One `content` or `act` statement, with where it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Declaration {
    pub span: SourceSpan,
    pub class: DeclaredClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DeclaredClass {
    Content(ContentClass),
    Act(ActClass),
}

impl Declaration {
    pub fn name(&self) -> &str {
        match &self.class {
            DeclaredClass::Content(c) => &c.name,
            DeclaredClass::Act(a) => &a.name,
        }
    }
}

/// Parses an ontology file. Declarations are returned in file order; every
/// malformed line yields one diagnostic and is skipped.
pub fn parse_ontology_file(file: &str, text: &str) -> Parsed<Vec<Declaration>> {
    let mut decls = Vec::new();
    let mut diagnostics = Vec::new();
    for (lineno, code) in lines(text) {
        let mut cur = Cursor::new(file, lineno, code);
        if cur.is_empty() {
            continue;
        }
        match statement(&mut cur) {
            Ok(d) => decls.push(d),
            Err(d) => diagnostics.push(d),
        }
    }
    Parsed {
        value: decls,
        diagnostics,
    }
}

fn statement(cur: &mut Cursor<'_>) -> Result<Declaration, Diagnostic> {
    let span = cur.here();
    let (kw, col) = cur.ident("`content` or `act`")?;
    match kw.as_str() {
        "content" => content(cur, span),
        "act" => act(cur, span),
        _ => Err(Diagnostic::error(
            DiagnosticCode::UnknownKeyword,
            cur.span_at(col),
            format!("unknown statement `{kw}`; expected `content` or `act`"),
        )),
    }
}

fn parent_list(cur: &mut Cursor<'_>) -> Result<Vec<String>, Diagnostic> {
    let mut parents = Vec::new();
    loop {
        if cur.at_end() {
            return Err(Diagnostic::error(
                DiagnosticCode::MissingParent,
                cur.here(),
                "expected a parent class after `:`",
            ));
        }
        parents.push(cur.ident("a parent class name")?.0);
        if !cur.eat(&Tok::Comma) {
            return Ok(parents);
        }
    }
}

fn content(cur: &mut Cursor<'_>, span: SourceSpan) -> Result<Declaration, Diagnostic> {
    let (name, _) = cur.ident("a content class name")?;
    let parents = if cur.eat(&Tok::Colon) {
        parent_list(cur)?
    } else {
        Vec::new()
    };
    cur.finish()?;
    Ok(Declaration {
        span,
        class: DeclaredClass::Content(ContentClass { name, parents }),
    })
}

fn act(cur: &mut Cursor<'_>, span: SourceSpan) -> Result<Declaration, Diagnostic> {
    let (name, _) = cur.ident("an act class name")?;
    if cur.at_end() {
        return Err(Diagnostic::error(
            DiagnosticCode::MissingParent,
            cur.here(),
            format!("act class `{name}` needs `:` and at least one parent"),
        ));
    }
    cur.expect(&Tok::Colon, "`:`")?;
    let parents = parent_list(cur)?;
    let mut class = ActClass::new(name, parents);
    while !cur.at_end() {
        let (key, col) =
            cur.ident("an attribute (`content=`, `replyto=`, `system=`, `condition=`)")?;
        let slot = match key.as_str() {
            "content" => &mut class.content,
            "replyto" => &mut class.in_reply_to,
            "system" => &mut class.system,
            "condition" => &mut class.condition,
            _ => {
                return Err(Diagnostic::error(
                    DiagnosticCode::UnknownAttribute,
                    cur.span_at(col),
                    format!("unknown attribute `{key}`"),
                ))
            }
        };
        if slot.is_some() {
            return Err(Diagnostic::error(
                DiagnosticCode::DuplicateAttribute,
                cur.span_at(col),
                format!("attribute `{key}` given twice"),
            ));
        }
        cur.expect(&Tok::Eq, "`=`")?;
        *slot = Some(cur.ident("a class name")?.0);
    }
    Ok(Declaration {
        span,
        class: DeclaredClass::Act(class),
    })
}
