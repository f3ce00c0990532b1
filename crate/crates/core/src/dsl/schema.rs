use crate::model::{
    ChainError, ConstraintClass, ConstraintKind, RawChain, RawCodomain, RawConstraint, RawFunction,
    RawSchema, RawSet, ScalarType, Schema, SchemaError, Side, IDENTITY,
};

use super::diagnostic::{Diagnostic, DiagnosticCode, Pos};
use super::{PResult, Parser};
use crate::dsl::Tok;

/// Source positions of every declaration in a parsed schema, indexed like
/// the [`RawSchema`] it accompanies.
#[derive(Debug, Clone, Default)]
pub struct SourceMap {
    pub sets: Vec<Pos>,
    pub functions: Vec<Vec<Pos>>,
    /// Position of a link's target set name.
    pub link_targets: Vec<Vec<Option<Pos>>>,
    pub constraints: Vec<Pos>,
    pub constraint_domains: Vec<Pos>,
    /// Per constraint, per side: one position per chain entry (outermost
    /// first), or the single `identity` token.
    pub chains: Vec<[Vec<Pos>; 2]>,
}

/// Parses and validates a schema file.
pub fn parse_schema(source: &str) -> Result<Schema, Vec<Diagnostic>> {
    let (raw, map) = parse_raw_schema(source)?;
    Schema::build(&raw).map_err(|errors| {
        errors
            .into_iter()
            .map(|error| semantic_diagnostic(&map, error))
            .collect()
    })
}

/// Syntax-only pass: the unresolved schema plus its source map.
pub fn parse_raw_schema(source: &str) -> Result<(RawSchema, SourceMap), Vec<Diagnostic>> {
    let mut p = Parser::new(source);
    let mut raw = RawSchema::default();
    let mut map = SourceMap::default();

    if p.at_eof() {
        p.diagnostics.push(Diagnostic::error(
            Pos::START,
            DiagnosticCode::NoSchema,
            "no schema declared",
        ));
        return Err(p.diagnostics);
    }

    match header(&mut p) {
        Ok(name) => raw.name = name,
        Err(_) => p.recover_statement(),
    }

    while !p.at_eof() {
        let ok = if p.at_keyword("set") {
            set_decl(&mut p, &mut raw, &mut map)
        } else if p.at_keyword("constraint") {
            constraint_decl(&mut p, &mut raw, &mut map)
        } else {
            Err(p.error_here("`set` or `constraint`"))
        };
        if ok.is_err() {
            // Resynchronize on the next declaration keyword.
            p.advance();
            while !p.at_eof() && !p.at_keyword("set") && !p.at_keyword("constraint") {
                p.advance();
            }
        }
    }

    if p.diagnostics.is_empty() {
        Ok((raw, map))
    } else {
        p.diagnostics.sort_by_key(|d| (d.line, d.column));
        Err(p.diagnostics)
    }
}

fn header(p: &mut Parser) -> PResult<String> {
    p.keyword("schema")?;
    let (name, _) = p.ident("a schema name")?;
    p.punct(';')?;
    Ok(name)
}

fn set_decl(p: &mut Parser, raw: &mut RawSchema, map: &mut SourceMap) -> PResult<()> {
    p.keyword("set")?;
    let (name, pos) = p.ident("a set name")?;
    p.punct('{')?;
    let mut set = RawSet {
        name,
        functions: Vec::new(),
    };
    let mut positions = Vec::new();
    let mut targets = Vec::new();
    while !p.at_punct('}') && !p.at_eof() {
        match member(p) {
            Ok((function, fpos, tpos)) => {
                set.functions.push(function);
                positions.push(fpos);
                targets.push(tpos);
            }
            Err(_) => p.recover_statement(),
        }
    }
    p.punct('}')?;
    raw.sets.push(set);
    map.sets.push(pos);
    map.functions.push(positions);
    map.link_targets.push(targets);
    Ok(())
}

fn member(p: &mut Parser) -> PResult<(RawFunction, Pos, Option<Pos>)> {
    let is_name = p.at_keyword("name") && matches!(p.peek_nth(1), Tok::Ident(_));
    if is_name {
        p.advance();
    }
    let (name, pos) = p.ident("a function name")?;
    if p.at_punct(':') {
        p.advance();
        let ty = if p.at_keyword("text") {
            ScalarType::Text
        } else if p.at_keyword("integer") {
            ScalarType::Integer
        } else {
            return Err(p.error_here("`text` or `integer`"));
        };
        p.advance();
        let nullable = optional_mark(p);
        p.punct(';')?;
        Ok((
            RawFunction {
                name,
                codomain: RawCodomain::Scalar(ty),
                nullable,
                is_name,
            },
            pos,
            None,
        ))
    } else if !is_name && p.peek().tok == Tok::Arrow {
        p.advance();
        let (target, tpos) = p.ident("a target set name")?;
        let nullable = optional_mark(p);
        p.punct(';')?;
        Ok((
            RawFunction {
                name,
                codomain: RawCodomain::Set(target),
                nullable,
                is_name: false,
            },
            pos,
            Some(tpos),
        ))
    } else if is_name {
        Err(p.error_here("`:`"))
    } else {
        Err(p.error_here("`:` or `->`"))
    }
}

fn optional_mark(p: &mut Parser) -> bool {
    if p.at_punct('?') {
        p.advance();
        true
    } else {
        false
    }
}

fn constraint_decl(p: &mut Parser, raw: &mut RawSchema, map: &mut SourceMap) -> PResult<()> {
    p.keyword("constraint")?;
    let (id, pos) = p.ident("a constraint name")?;
    let kind = if p.at_keyword("commutative") {
        ConstraintKind::Commutative
    } else if p.at_keyword("anticommutative") {
        ConstraintKind::AntiCommutative
    } else {
        return Err(p.error_here("`commutative` or `anticommutative`"));
    };
    p.advance();
    p.keyword("on")?;
    let (domain, dpos) = p.ident("a set name")?;
    p.punct('{')?;
    p.keyword("left")?;
    p.punct('=')?;
    let (left, lpos) = chain(p)?;
    p.punct(';')?;
    p.keyword("right")?;
    p.punct('=')?;
    let (right, rpos) = chain(p)?;
    p.punct(';')?;
    let mut message = None;
    if p.at_keyword("message") {
        p.advance();
        p.punct('=')?;
        match &p.peek().tok {
            Tok::Str(s) => {
                message = Some(s.clone());
                p.advance();
            }
            _ => return Err(p.error_here("a message string")),
        }
        p.punct(';')?;
    }
    p.punct('}')?;
    raw.constraints.push(RawConstraint {
        id,
        kind,
        domain,
        left,
        right,
        message,
    });
    map.constraints.push(pos);
    map.constraint_domains.push(dpos);
    map.chains.push([lpos, rpos]);
    Ok(())
}

fn chain(p: &mut Parser) -> PResult<(RawChain, Vec<Pos>)> {
    if p.at_keyword(IDENTITY) && !matches!(p.peek_nth(1), Tok::Punct('.')) {
        let pos = p.advance().pos;
        return Ok((RawChain::Identity, vec![pos]));
    }
    let mut names = Vec::new();
    let mut positions = Vec::new();
    loop {
        let (name, pos) = p.ident("a function name")?;
        names.push(name);
        positions.push(pos);
        if p.at_punct('.') {
            p.advance();
        } else {
            break;
        }
    }
    Ok((RawChain::Functions(names), positions))
}

fn semantic_diagnostic(map: &SourceMap, error: SchemaError) -> Diagnostic {
    use DiagnosticCode as C;
    let message = error.to_string();
    let (pos, code) = match &error {
        SchemaError::DuplicateSet { set, .. } => (map.sets[*set], C::DuplicateSet),
        SchemaError::DuplicateFunction { set, function, .. } => {
            (map.functions[*set][*function], C::DuplicateFunction)
        }
        SchemaError::ReservedIdentifier { set, function, .. } => (
            function.map_or(map.sets[*set], |f| map.functions[*set][f]),
            C::ReservedIdentifier,
        ),
        SchemaError::UnknownLinkTarget { set, function, .. } => (
            map.link_targets[*set][*function].unwrap_or(map.functions[*set][*function]),
            C::UnknownSet,
        ),
        SchemaError::MissingNameAttribute { set, .. } => (map.sets[*set], C::MissingNameAttribute),
        SchemaError::MultipleNameAttributes { set, function, .. } => {
            (map.functions[*set][*function], C::MultipleNameAttributes)
        }
        SchemaError::DuplicateConstraint { constraint, .. } => {
            (map.constraints[*constraint], C::DuplicateConstraint)
        }
        SchemaError::UnknownDomain { constraint, .. } => {
            (map.constraint_domains[*constraint], C::UnknownSet)
        }
        SchemaError::Chain {
            constraint, error, ..
        } => {
            let at = |side: &Side, position: usize| {
                let positions = &map.chains[*constraint][*side as usize];
                positions
                    .get(position.wrapping_sub(1))
                    .copied()
                    .unwrap_or(map.constraints[*constraint])
            };
            match error {
                ChainError::UnknownFunction { side, position, .. } => {
                    (at(side, *position), C::UnknownFunction)
                }
                ChainError::BrokenComposition { side, position, .. } => {
                    (at(side, *position), C::BrokenComposition)
                }
                ChainError::AttributeInChain { side, position, .. } => {
                    (at(side, *position), C::AttributeInChain)
                }
                ChainError::DomainMismatch { side, .. } => {
                    let positions = &map.chains[*constraint][*side as usize];
                    (at(side, positions.len()), C::DomainMismatch)
                }
                ChainError::UnknownDomain { .. } => {
                    (map.constraint_domains[*constraint], C::UnknownSet)
                }
                ChainError::CodomainMismatch { .. } => {
                    (map.constraints[*constraint], C::CodomainMismatch)
                }
                ChainError::DegenerateIdentity => {
                    (map.constraints[*constraint], C::DegenerateIdentity)
                }
                ChainError::Refused(class) => (
                    map.constraints[*constraint],
                    match class {
                        ConstraintClass::Local => C::RefusedLocal,
                        _ => C::RefusedHbfp,
                    },
                ),
            }
        }
    };
    Diagnostic::error(pos, code, message)
}
