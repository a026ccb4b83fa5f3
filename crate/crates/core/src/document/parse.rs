//! Recursive-descent parser for documents. Literals are resolved against
//! their space as soon as the space is known, so every diagnostic points at
//! the offending token.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Call, Definition, Document, IdealArg, Operation, Query, SetQuery};
use crate::error::SslabError;
use crate::ordinal::Ordinal;
use crate::prufer::{Homeomorphism, MapKind, PruferDescriptor, StableOpPair};
use crate::radical::RadicalOp;
use crate::spaces::cantor::{CantorPoint, CantorSet, Clopen};
use crate::spaces::ordset::{End, OrdSet};
use crate::spaces::poset::Poset;
use crate::spaces::{DefinableSet, Point, SetOp, Space};
use crate::spectral::{IdealDescriptor, SpectralOp};

/// A 1-based line and column.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

type PResult<T> = Result<T, ParseError>;

fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_'
}

struct Cursor<'a> {
    src: &'a str,
    at: usize,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.at..]
    }

    fn pos_of(&self, at: usize) -> Pos {
        let before = &self.src[..at];
        let line = before.matches('\n').count() + 1;
        let line_start = before.rfind('\n').map_or(0, |i| i + 1);
        Pos { line, column: before[line_start..].chars().count() + 1 }
    }

    fn skip_ws(&mut self) {
        loop {
            let trimmed = self.rest().trim_start();
            self.at = self.src.len() - trimmed.len();
            if trimmed.starts_with('#') {
                self.at += trimmed.find('\n').unwrap_or(trimmed.len());
            } else {
                return;
            }
        }
    }

    /// Position of the next token.
    fn pos(&mut self) -> Pos {
        self.skip_ws();
        self.pos_of(self.at)
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn error<T>(&mut self, pos: Pos, message: impl Into<String>) -> PResult<T> {
        Err(ParseError { pos, message: message.into() })
    }

    fn describe_next(&mut self) -> String {
        self.skip_ws();
        match self.rest().chars().next() {
            None => "end of input".to_string(),
            Some(c) if is_ident_start(c) => {
                let word: String = self.rest().chars().take_while(|&c| is_ident_char(c) || c == '-').collect();
                format!("`{word}`")
            }
            Some(c) => format!("`{c}`"),
        }
    }

    /// Consumes `tok` if it comes next; words must end at a word boundary.
    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        let rest = self.rest();
        if !rest.starts_with(tok) {
            return false;
        }
        let wordy = tok.chars().last().is_some_and(is_ident_char);
        if wordy && rest[tok.len()..].chars().next().is_some_and(|c| is_ident_char(c) || c == '-') {
            return false;
        }
        self.at += tok.len();
        true
    }

    fn expect(&mut self, tok: &str) -> PResult<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            let pos = self.pos();
            let found = self.describe_next();
            self.error(pos, format!("expected `{tok}`, found {found}"))
        }
    }

    /// An identifier; `-` may join two word characters (`is-spectral`).
    fn ident(&mut self) -> PResult<(String, Pos)> {
        let pos = self.pos();
        let rest = self.rest();
        if !rest.starts_with(is_ident_start) {
            let found = self.describe_next();
            return self.error(pos, format!("expected a name, found {found}"));
        }
        let bytes = rest.as_bytes();
        let mut end = 0;
        while end < bytes.len() {
            let c = bytes[end] as char;
            let joins = c == '-' && bytes.get(end + 1).is_some_and(|&n| is_ident_char(n as char));
            if is_ident_char(c) || joins {
                end += 1;
            } else {
                break;
            }
        }
        self.at += end;
        Ok((rest[..end].to_string(), pos))
    }

    fn string(&mut self) -> PResult<(String, Pos)> {
        let pos = self.pos();
        if !self.rest().starts_with('"') {
            let found = self.describe_next();
            return self.error(pos, format!("expected a quoted string, found {found}"));
        }
        let body = &self.rest()[1..];
        match body.find(['"', '\n']) {
            Some(i) if body[i..].starts_with('"') => {
                self.at += i + 2;
                Ok((body[..i].to_string(), pos))
            }
            _ => self.error(pos, "unterminated string"),
        }
    }

    fn number(&mut self) -> PResult<(u32, Pos)> {
        let pos = self.pos();
        let digits: String = self.rest().chars().take_while(char::is_ascii_digit).collect();
        if digits.is_empty() {
            let found = self.describe_next();
            return self.error(pos, format!("expected a number, found {found}"));
        }
        self.at += digits.len();
        match digits.parse() {
            Ok(n) => Ok((n, pos)),
            Err(_) => self.error(pos, format!("number {digits} is too large")),
        }
    }

    /// Raw text up to (not including) the first of `stops`, trimmed.
    fn raw_until(&mut self, stops: &[char]) -> PResult<(String, Pos)> {
        let pos = self.pos();
        let rest = self.rest();
        let end = rest.find(|c| stops.contains(&c) || c == '\n').unwrap_or(rest.len());
        let text = rest[..end].trim_end();
        if text.is_empty() {
            let found = self.describe_next();
            return self.error(pos, format!("expected a literal, found {found}"));
        }
        self.at += end;
        Ok((text.to_string(), pos))
    }
}

/// One `[a,b] nu>=r` piece of a `cells[...]` literal.
#[derive(Debug, Clone)]
struct CellLit {
    open_start: bool,
    start: (String, Pos),
    end: (String, Pos),
    closed_end: bool,
    /// `(exact, r)` for `nu=r` / `nu>=r`.
    level: Option<(bool, u32)>,
}

#[derive(Debug, Clone)]
enum SetExpr {
    Empty,
    All,
    Generic,
    Points(Vec<(String, Pos)>),
    Cells(Vec<CellLit>),
    Cylinders(Vec<(String, Pos)>),
    CantorPoints(Vec<(String, Pos)>),
    Named(String),
    SpacePart(String, String),
    Complement(Box<Located<SetExpr>>),
    Binary(SetOp, Box<Located<SetExpr>>, Box<Located<SetExpr>>),
}

#[derive(Debug, Clone)]
struct Located<T> {
    pos: Pos,
    node: T,
}

#[derive(Debug, Clone)]
enum PointExpr {
    Generic,
    Text(String),
}

#[derive(Debug, Clone)]
enum IdealExpr {
    Zero,
    Closed { c: Located<SetExpr>, sharp: Option<Located<SetExpr>> },
    Prime { point: Located<PointExpr>, primary: bool },
    Named(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Space,
    Set,
    Ideal,
    Prufer,
    Operation,
    Map,
    Query,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Space => "a space",
            Kind::Set => "a set",
            Kind::Ideal => "an ideal",
            Kind::Prufer => "a Prüfer descriptor",
            Kind::Operation => "an operation",
            Kind::Map => "a map",
            Kind::Query => "a query",
        })
    }
}

struct Parser<'a> {
    cur: Cursor<'a>,
    doc: Document,
    names: HashMap<String, (Kind, usize, Pos)>,
}

/// Parses and resolves a document, stopping at the first error.
pub fn parse_document(text: &str) -> Result<Document, ParseError> {
    let mut p = Parser { cur: Cursor { src: text, at: 0 }, doc: Document::default(), names: HashMap::new() };
    while !p.cur.at_end() {
        p.statement()?;
    }
    Ok(p.doc)
}

fn same_space(a: &Arc<Space>, b: &Arc<Space>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

fn sslab_error(pos: Pos, e: impl Into<SslabError>) -> ParseError {
    ParseError { pos, message: e.into().to_string() }
}

impl Parser<'_> {
    fn statement(&mut self) -> PResult<()> {
        let (kw, pos) = self.cur.ident()?;
        match kw.as_str() {
            "space" => self.space_stmt(),
            "set" => self.set_stmt(),
            "ideal" => self.ideal_stmt(),
            "prufer" => self.prufer_stmt(),
            "op" => self.op_stmt(),
            "map" => self.map_stmt(),
            "query" => self.query_stmt(),
            _ => self.cur.error(
                pos,
                format!("unknown statement `{kw}`; expected space, set, ideal, prufer, op, map or query"),
            ),
        }
    }

    /// Claims a fresh name, reporting both sites on a clash.
    fn declare(&mut self, kind: Kind) -> PResult<(String, Pos)> {
        let (name, pos) = self.cur.ident()?;
        if let Some(&(_, _, first)) = self.names.get(&name) {
            return self.cur.error(pos, format!("duplicate name `{name}`: defined at {first} and again at {pos}"));
        }
        let index = match kind {
            Kind::Space => self.doc.spaces.len(),
            Kind::Set => self.doc.sets.len(),
            Kind::Ideal => self.doc.ideals.len(),
            Kind::Prufer => self.doc.descriptors.len(),
            Kind::Operation => self.doc.operations.len(),
            Kind::Map => self.doc.maps.len(),
            Kind::Query => self.doc.queries.len(),
        };
        self.names.insert(name.clone(), (kind, index, pos));
        Ok((name, pos))
    }

    fn lookup(&mut self, name: &str, pos: Pos, want: Kind) -> PResult<usize> {
        match self.names.get(name) {
            None => self.cur.error(pos, format!("unknown name `{name}`")),
            Some(&(kind, index, _)) if kind == want => Ok(index),
            Some(&(kind, _, def)) => {
                self.cur.error(pos, format!("type mismatch: `{name}` (defined at {def}) is {kind}, expected {want}"))
            }
        }
    }

    fn space_ref(&mut self) -> PResult<(Arc<Space>, Pos)> {
        let (name, pos) = self.cur.ident()?;
        let i = self.lookup(&name, pos, Kind::Space)?;
        Ok((self.doc.spaces[i].value.clone(), pos))
    }

    fn descriptor_ref(&mut self) -> PResult<(Arc<PruferDescriptor>, Pos)> {
        let (name, pos) = self.cur.ident()?;
        let i = self.lookup(&name, pos, Kind::Prufer)?;
        Ok((self.doc.descriptors[i].value.clone(), pos))
    }

    // ---- statements -------------------------------------------------

    fn space_stmt(&mut self) -> PResult<()> {
        let (name, pos) = self.declare(Kind::Space)?;
        self.cur.expect("=")?;
        let space = self.space_expr()?;
        self.doc.spaces.push(Definition { name, pos, value: Arc::new(space) });
        Ok(())
    }

    fn space_expr(&mut self) -> PResult<Space> {
        let (kw, pos) = self.cur.ident()?;
        match kw.as_str() {
            "cantor" => Ok(Space::Cantor),
            "ordinal" => {
                self.cur.expect("(")?;
                let (text, tpos) = self.cur.raw_until(&[')'])?;
                self.cur.expect(")")?;
                let top: Ordinal = text.parse().map_err(|e| ParseError { pos: tpos, message: format!("{e}") })?;
                Ok(Space::ordinal(top))
            }
            "poset" => self.poset_literal(),
            _ => self.cur.error(pos, format!("unknown space `{kw}`; expected poset {{...}}, ordinal(...) or cantor")),
        }
    }

    /// `{o < p < r, o < q, s}`: chains of covering or order relations.
    fn poset_literal(&mut self) -> PResult<Space> {
        let pos = self.cur.pos();
        self.cur.expect("{")?;
        let mut names: Vec<String> = Vec::new();
        let mut relations = Vec::new();
        let mut index = |n: String| match names.iter().position(|m| *m == n) {
            Some(i) => i,
            None => {
                names.push(n);
                names.len() - 1
            }
        };
        if !self.cur.eat("}") {
            loop {
                let (first, _) = self.cur.ident()?;
                let mut prev = index(first);
                while self.cur.eat("<") {
                    let (next, _) = self.cur.ident()?;
                    let next = index(next);
                    relations.push((prev, next));
                    prev = next;
                }
                if self.cur.eat("}") {
                    break;
                }
                self.cur.expect(",")?;
            }
        }
        Poset::new(names, &relations).map(Space::Poset).map_err(|e| sslab_error(pos, e))
    }

    fn set_stmt(&mut self) -> PResult<()> {
        let (name, pos) = self.declare(Kind::Set)?;
        self.cur.expect("on")?;
        let (space, _) = self.space_ref()?;
        self.cur.expect("=")?;
        let expr = self.set_expr()?;
        let set = self.eval_set(&expr, &space)?;
        self.doc.sets.push(Definition { name, pos, value: (space, set) });
        Ok(())
    }

    fn ideal_stmt(&mut self) -> PResult<()> {
        let (name, pos) = self.declare(Kind::Ideal)?;
        self.cur.expect("on")?;
        let (space, _) = self.space_ref()?;
        self.cur.expect("=")?;
        let expr = self.ideal_expr()?;
        let ideal = self.eval_ideal(&expr, &space)?;
        self.doc.ideals.push(Definition { name, pos, value: (space, ideal.node) });
        Ok(())
    }

    fn prufer_stmt(&mut self) -> PResult<()> {
        let (name, pos) = self.declare(Kind::Prufer)?;
        self.cur.expect("on")?;
        let (space, _) = self.space_ref()?;
        self.cur.expect("{")?;
        let mut idempotent = None;
        let mut branched = None;
        loop {
            let (field, fpos) = self.cur.ident()?;
            self.cur.expect(":")?;
            let expr = self.set_expr()?;
            let set = self.eval_set(&expr, &space)?;
            match field.as_str() {
                "idempotent" if idempotent.is_none() => idempotent = Some(set),
                "branched" if branched.is_none() => branched = Some(set),
                "idempotent" | "branched" => return self.cur.error(fpos, format!("field `{field}` given twice")),
                _ => return self.cur.error(fpos, format!("unknown field `{field}`; expected idempotent or branched")),
            }
            if self.cur.eat("}") {
                break;
            }
            self.cur.expect(",")?;
        }
        let idempotent = idempotent.unwrap_or_else(|| space.empty_set());
        let descriptor = PruferDescriptor::new(space, idempotent, branched).map_err(|e| sslab_error(pos, e))?;
        self.doc.descriptors.push(Definition { name, pos, value: Arc::new(descriptor) });
        Ok(())
    }

    fn op_stmt(&mut self) -> PResult<()> {
        let (name, pos) = self.declare(Kind::Operation)?;
        self.cur.expect("=")?;
        let op = self.operation()?;
        self.doc.operations.push(Definition { name, pos, value: op.node });
        Ok(())
    }

    fn map_stmt(&mut self) -> PResult<()> {
        let (name, pos) = self.declare(Kind::Map)?;
        self.cur.expect(":")?;
        let (source, _) = self.descriptor_ref()?;
        self.cur.expect("->")?;
        let (target, _) = self.descriptor_ref()?;
        self.cur.expect("=")?;
        let (kw, kpos) = self.cur.ident()?;
        let kind = match kw.as_str() {
            "identity" => MapKind::Identity,
            "bitflip" => MapKind::CantorBitFlip,
            "perm" => self.permutation(&source, &target)?,
            _ => return self.cur.error(kpos, format!("unknown map `{kw}`; expected identity, bitflip or perm {{...}}")),
        };
        let map = Homeomorphism::new(source, target, kind).map_err(|e| sslab_error(kpos, e))?;
        self.doc.maps.push(Definition { name, pos, value: map });
        Ok(())
    }

    /// `perm {p -> q, q -> p}`; unlisted points go to the point of the same name.
    fn permutation(&mut self, source: &PruferDescriptor, target: &PruferDescriptor) -> PResult<MapKind> {
        let pos = self.cur.pos();
        let (Space::Poset(a), Space::Poset(b)) = (&**source.space(), &**target.space()) else {
            return self.cur.error(pos, "backend mismatch: perm maps need poset spaces");
        };
        let mut image: Vec<Option<usize>> = vec![None; a.len()];
        self.cur.expect("{")?;
        if !self.cur.eat("}") {
            loop {
                let (x, xpos) = self.cur.ident()?;
                self.cur.expect("->")?;
                let (y, ypos) = self.cur.ident()?;
                let Some(i) = a.index_of(&x) else { return self.cur.error(xpos, format!("unknown point `{x}`")) };
                let Some(j) = b.index_of(&y) else { return self.cur.error(ypos, format!("unknown point `{y}`")) };
                if image[i].replace(j).is_some() {
                    return self.cur.error(xpos, format!("point `{x}` mapped twice"));
                }
                if self.cur.eat("}") {
                    break;
                }
                self.cur.expect(",")?;
            }
        }
        let mut perm = Vec::with_capacity(a.len());
        for (i, slot) in image.into_iter().enumerate() {
            match slot.or_else(|| b.index_of(a.name(i))) {
                Some(j) => perm.push(j),
                None => return self.cur.error(pos, format!("no image given for point `{}`", a.name(i))),
            }
        }
        Ok(MapKind::Poset(perm))
    }

    fn query_stmt(&mut self) -> PResult<()> {
        let (name, pos) = self.declare(Kind::Query)?;
        self.cur.expect("=")?;
        let start = {
            self.cur.skip_ws();
            self.cur.at
        };
        let call = self.call()?;
        // lookahead for `on SPACE` may have skipped comments after the call
        let text = self.cur.src[start..self.cur.at]
            .lines()
            .map(|l| l.split_once('#').map_or(l, |(code, _)| code))
            .flat_map(str::split_whitespace)
            .collect::<Vec<_>>()
            .join(" ");
        self.doc.queries.push(Query { name, pos, text, call });
        Ok(())
    }

    // ---- queries ----------------------------------------------------

    fn call(&mut self) -> PResult<Call> {
        let (func, fpos) = self.cur.ident()?;
        self.cur.expect("(")?;
        if let Some(q) = SetQuery::ALL.into_iter().find(|q| q.name() == func) {
            return self.set_call(q, fpos);
        }
        let call = match func.as_str() {
            "member" | "tau" => {
                let op = self.operation()?;
                self.cur.expect(",")?;
                let expr = self.ideal_expr()?;
                let ideal = self.eval_ideal(&expr, op.node.space())?.node;
                if func == "member" {
                    Call::Member(op.node, ideal)
                } else {
                    Call::Tau(op.node, ideal)
                }
            }
            "leq" => {
                let a = self.operation()?;
                self.cur.expect(",")?;
                let b = self.operation()?;
                self.check_same_space(&a, &b)?;
                Call::Leq(a.node, b.node)
            }
            "inf" | "sup" => {
                let ops = self.operation_list()?;
                if func == "inf" {
                    Call::Inf(ops)
                } else {
                    Call::Sup(ops)
                }
            }
            "qspec" => Call::Qspec(self.operation()?.node),
            "is-spectral" => Call::IsSpectral(self.operation()?.node),
            "is-trivial" => Call::IsTrivial(self.operation()?.node),
            "is-radical" => Call::IsRadical(self.operation()?.node),
            "gqc" => {
                let op = self.operation()?;
                let Some(radical) = op.node.as_radical() else {
                    return self.cur.error(op.pos, format!("type mismatch: gqc needs a radical operation, found a {}", op.node.kind()));
                };
                self.cur.expect(",")?;
                let expr = self.set_expr()?;
                let set = self.eval_set(&expr, op.node.space())?;
                Call::Gqc(radical, set)
            }
            "sigma" => Call::Sigma(self.stable_pair()?),
            "rebuild" => Call::Rebuild(self.stable_pair()?),
            "normalize" => {
                let (d, _) = self.descriptor_ref()?;
                self.cur.expect(",")?;
                let op = self.operation()?;
                if !same_space(d.space(), op.node.space()) {
                    return self.cur.error(op.pos, "space mismatch: the operation lives on another space");
                }
                Call::Normalize(d, op.node)
            }
            "transfer" => {
                let (name, pos) = self.cur.ident()?;
                let i = self.lookup(&name, pos, Kind::Map)?;
                let map = self.doc.maps[i].value.clone();
                self.cur.expect(",")?;
                Call::Transfer(map, self.stable_pair()?)
            }
            "enumerate" => Call::Enumerate(self.descriptor_ref()?.0),
            _ => return self.cur.error(fpos, format!("unknown query function `{func}`")),
        };
        self.cur.expect(")")?;
        Ok(call)
    }

    /// `f(SET, ...)`, with the space read from a named reference or a
    /// trailing `on SPACE`.
    fn set_call(&mut self, q: SetQuery, fpos: Pos) -> PResult<Call> {
        let mut exprs = vec![self.set_expr()?];
        while self.cur.eat(",") {
            exprs.push(self.set_expr()?);
        }
        self.cur.expect(")")?;
        if exprs.len() != q.arity() {
            return self.cur.error(fpos, format!("{} takes {} set argument(s), found {}", q.name(), q.arity(), exprs.len()));
        }
        let space = if self.cur.eat("on") {
            self.space_ref()?.0
        } else {
            match exprs.iter().find_map(|e| self.inferred_space(e)) {
                Some(space) => space,
                None => {
                    return self.cur.error(fpos, format!("cannot tell which space the arguments of {} live on; add `on SPACE`", q.name()))
                }
            }
        };
        let sets = exprs.iter().map(|e| self.eval_set(e, &space)).collect::<PResult<Vec<_>>>()?;
        Ok(Call::Set(q, space, sets))
    }

    fn operation_list(&mut self) -> PResult<Vec<Operation>> {
        let first = self.operation()?;
        let mut ops = vec![first.node.clone()];
        while self.cur.eat(",") {
            let next = self.operation()?;
            self.check_same_space(&first, &next)?;
            ops.push(next.node);
        }
        Ok(ops)
    }

    fn check_same_space(&mut self, a: &Located<Operation>, b: &Located<Operation>) -> PResult<()> {
        if !same_space(a.node.space(), b.node.space()) {
            return self.cur.error(b.pos, "space mismatch: operations live on different spaces");
        }
        Ok(())
    }

    fn stable_pair(&mut self) -> PResult<StableOpPair> {
        let op = self.operation()?;
        match op.node {
            Operation::Stable(p) => Ok(p),
            other => self.cur.error(op.pos, format!("type mismatch: expected a stable pair, found a {}", other.kind())),
        }
    }

    // ---- operations -------------------------------------------------

    /// A named operation or an inline constructor.
    fn operation(&mut self) -> PResult<Located<Operation>> {
        let (word, pos) = self.cur.ident()?;
        let located = |node| Ok(Located { pos, node });
        if !self.cur.eat("(") {
            let i = self.lookup(&word, pos, Kind::Operation)?;
            return located(self.doc.operations[i].value.clone());
        }
        let op = match word.as_str() {
            "spectral" => {
                let (space, _) = self.space_ref()?;
                self.cur.expect(",")?;
                let expr = self.set_expr()?;
                let delta = self.eval_set(&expr, &space)?;
                Operation::Spectral(SpectralOp::canonicalize(space, &delta).map_err(|e| sslab_error(pos, e))?)
            }
            "join" => {
                let args = self.operation_list()?;
                Operation::Radical(self.join_of(args, pos)?)
            }
            "meet" => {
                let args = self.operation_list()?;
                let mut radicals = Vec::new();
                for a in args {
                    match a.as_radical() {
                        Some(r) => radicals.push(r),
                        None => return self.cur.error(pos, "type mismatch: meet takes spectral or radical operations"),
                    }
                }
                Operation::Radical(RadicalOp::meet(radicals).map_err(|e| sslab_error(pos, e))?)
            }
            "join-punctured" => {
                let (space, _) = self.space_ref()?;
                self.cur.expect(",")?;
                let m = self.keyword_set("M", &space)?;
                self.cur.expect(",")?;
                let s = self.keyword_set("S", &space)?;
                Operation::Radical(RadicalOp::punctured(space, m, s).map_err(|e| sslab_error(pos, e))?)
            }
            "stable" => {
                let (d, _) = self.descriptor_ref()?;
                let space = d.space().clone();
                self.cur.expect(",")?;
                let delta = self.keyword_set("delta", &space)?;
                let pi = if self.cur.eat(",") { self.keyword_set("pi", &space)? } else { space.empty_set() };
                Operation::Stable(StableOpPair::validate(d, &delta, &pi).map_err(|e| sslab_error(pos, e))?)
            }
            _ => {
                return self.cur.error(
                    pos,
                    format!("unknown operation `{word}`; expected spectral, join, meet, join-punctured or stable"),
                )
            }
        };
        self.cur.expect(")")?;
        located(op)
    }

    /// A join of spectral operations stays in join form; anything radical
    /// is folded with the radical join.
    fn join_of(&mut self, args: Vec<Operation>, pos: Pos) -> PResult<RadicalOp> {
        if args.iter().all(|a| matches!(a, Operation::Spectral(_))) {
            let family = args.into_iter().filter_map(|a| if let Operation::Spectral(s) = a { Some(s) } else { None }).collect();
            return RadicalOp::join(family).map_err(|e| sslab_error(pos, e));
        }
        let mut acc: Option<RadicalOp> = None;
        for a in args {
            let Some(r) = a.as_radical() else {
                return self.cur.error(pos, "type mismatch: join takes spectral or radical operations");
            };
            acc = Some(match acc {
                None => r,
                Some(prev) => RadicalOp::radical_join(&prev, &r).map_err(|e| sslab_error(pos, e))?,
            });
        }
        Ok(acc.expect("join has at least one argument"))
    }

    /// `key=SET` or a bare `SET`.
    fn keyword_set(&mut self, key: &str, space: &Arc<Space>) -> PResult<DefinableSet> {
        let save = self.cur.at;
        if let Ok((word, _)) = self.cur.ident() {
            if word == key && self.cur.eat("=") {
                let expr = self.set_expr()?;
                return self.eval_set(&expr, space);
            }
        }
        self.cur.at = save;
        let expr = self.set_expr()?;
        self.eval_set(&expr, space)
    }

    // ---- ideals -----------------------------------------------------

    fn ideal_expr(&mut self) -> PResult<Located<IdealExpr>> {
        let (word, pos) = self.cur.ident()?;
        let node = match word.as_str() {
            "zero" => IdealExpr::Zero,
            "ideal" if self.cur.eat("(") => {
                let mut c = None;
                let mut sharp = None;
                loop {
                    let (key, kpos) = self.cur.ident()?;
                    self.cur.expect("=")?;
                    let expr = self.set_expr()?;
                    match key.as_str() {
                        "C" if c.is_none() => c = Some(expr),
                        "sharp" if sharp.is_none() => sharp = Some(expr),
                        _ => return self.cur.error(kpos, format!("unexpected field `{key}`; expected C= then sharp=")),
                    }
                    if self.cur.eat(")") {
                        break;
                    }
                    self.cur.expect(",")?;
                }
                let Some(c) = c else { return self.cur.error(pos, "ideal(...) needs a closed set C=") };
                IdealExpr::Closed { c, sharp }
            }
            "prime" if self.cur.eat("(") => {
                let point = self.point_expr()?;
                let primary = if self.cur.eat(",") {
                    self.cur.expect("primary")?;
                    true
                } else {
                    false
                };
                self.cur.expect(")")?;
                IdealExpr::Prime { point, primary }
            }
            _ => IdealExpr::Named(word),
        };
        Ok(Located { pos, node })
    }

    fn point_expr(&mut self) -> PResult<Located<PointExpr>> {
        let pos = self.cur.pos();
        let node = if self.cur.eat("generic") {
            PointExpr::Generic
        } else if self.cur.eat("pt") || self.cur.peek() == Some('"') {
            PointExpr::Text(self.cur.string()?.0)
        } else {
            PointExpr::Text(self.cur.raw_until(&[',', ')', '}'])?.0)
        };
        Ok(Located { pos, node })
    }

    fn eval_point(&mut self, expr: &Located<PointExpr>, space: &Space) -> PResult<Point> {
        let PointExpr::Text(text) = &expr.node else { return Ok(Point::Generic) };
        let bad = |message: String| Err(ParseError { pos: expr.pos, message });
        match space {
            Space::Poset(p) => match p.index_of(text) {
                Some(i) => Ok(Point::Poset(i)),
                None => bad(format!("unknown point `{text}`")),
            },
            Space::Ordinal { max_top } => match text.parse::<Ordinal>() {
                Ok(x) if &x <= max_top => Ok(Point::Ordinal(x)),
                Ok(x) => bad(format!("point {x} lies beyond the top {max_top}")),
                Err(e) => bad(format!("{e}")),
            },
            Space::Cantor => text.parse::<CantorPoint>().map(Point::Cantor).or_else(|e| bad(e.to_string())),
        }
    }

    fn eval_ideal(&mut self, expr: &Located<IdealExpr>, space: &Arc<Space>) -> PResult<Located<IdealArg>> {
        let pos = expr.pos;
        let node = match &expr.node {
            IdealExpr::Zero => None,
            IdealExpr::Named(name) => {
                let i = self.lookup(name, pos, Kind::Ideal)?;
                let (s, ideal) = self.doc.ideals[i].value.clone();
                if !same_space(&s, space) {
                    return self.cur.error(pos, format!("space mismatch: ideal `{name}` lives on another space"));
                }
                ideal
            }
            IdealExpr::Closed { c, sharp } => {
                let c = self.eval_set(c, space)?;
                let sharp = match sharp {
                    Some(s) => self.eval_set(s, space)?,
                    None => space.empty_set(),
                };
                Some(IdealDescriptor::new(space.clone(), c, sharp).map_err(|e| sslab_error(pos, e))?)
            }
            IdealExpr::Prime { point, primary } => {
                let p = self.eval_point(point, space)?;
                Some(IdealDescriptor::prime(space.clone(), &p, *primary).map_err(|e| sslab_error(pos, e))?)
            }
        };
        Ok(Located { pos, node })
    }

    // ---- sets -------------------------------------------------------

    /// `term (('+' | '-' | '&') term)*`, left-associative.
    fn set_expr(&mut self) -> PResult<Located<SetExpr>> {
        let mut lhs = self.set_unary()?;
        loop {
            let op = if self.cur.eat("+") {
                SetOp::Union
            } else if self.cur.peek() == Some('-') && !self.cur.rest().starts_with("->") {
                self.cur.expect("-")?;
                SetOp::Difference
            } else if self.cur.eat("&") {
                SetOp::Intersect
            } else {
                return Ok(lhs);
            };
            let rhs = self.set_unary()?;
            lhs = Located { pos: lhs.pos, node: SetExpr::Binary(op, Box::new(lhs), Box::new(rhs)) };
        }
    }

    fn set_unary(&mut self) -> PResult<Located<SetExpr>> {
        let pos = self.cur.pos();
        if self.cur.eat("~") {
            let inner = self.set_unary()?;
            return Ok(Located { pos, node: SetExpr::Complement(Box::new(inner)) });
        }
        if self.cur.eat("(") {
            let inner = self.set_expr()?;
            self.cur.expect(")")?;
            return Ok(inner);
        }
        let (word, pos) = self.cur.ident()?;
        let node = match word.as_str() {
            "empty" => SetExpr::Empty,
            "all" => SetExpr::All,
            "generic" => SetExpr::Generic,
            "points" => SetExpr::Points(self.braced(|c| c.ident())?),
            "cyl" => SetExpr::Cylinders(self.strings()?),
            "pt" => SetExpr::CantorPoints(vec![self.cur.string()?]),
            "pts" => SetExpr::CantorPoints(self.braced(|c| c.string())?),
            "cells" => SetExpr::Cells(self.cells()?),
            _ if self.cur.rest().starts_with('.') => {
                self.cur.expect(".")?;
                let (part, _) = self.cur.ident()?;
                SetExpr::SpacePart(word, part)
            }
            _ => SetExpr::Named(word),
        };
        Ok(Located { pos, node })
    }

    fn braced<T>(&mut self, mut item: impl FnMut(&mut Cursor) -> PResult<T>) -> PResult<Vec<T>> {
        self.cur.expect("{")?;
        let mut out = Vec::new();
        if self.cur.eat("}") {
            return Ok(out);
        }
        loop {
            out.push(item(&mut self.cur)?);
            if self.cur.eat("}") {
                return Ok(out);
            }
            self.cur.expect(",")?;
        }
    }

    /// `"w"` or `{"w1", "w2"}`.
    fn strings(&mut self) -> PResult<Vec<(String, Pos)>> {
        if self.cur.peek() == Some('{') {
            self.braced(|c| c.string())
        } else {
            Ok(vec![self.cur.string()?])
        }
    }

    /// `[ [a,b] nu>=r, (a,b) nu=r, [a,top] ]`.
    fn cells(&mut self) -> PResult<Vec<CellLit>> {
        self.cur.expect("[")?;
        let mut out = Vec::new();
        if self.cur.eat("]") {
            return Ok(out);
        }
        loop {
            let open_start = if self.cur.eat("(") {
                true
            } else {
                self.cur.expect("[")?;
                false
            };
            let start = self.cur.raw_until(&[','])?;
            self.cur.expect(",")?;
            let end = self.cur.raw_until(&[']', ')'])?;
            let closed_end = if self.cur.eat("]") {
                true
            } else {
                self.cur.expect(")")?;
                false
            };
            let level = if self.cur.eat("nu") {
                let exact = if self.cur.eat(">=") {
                    false
                } else {
                    self.cur.expect("=")?;
                    true
                };
                Some((exact, self.cur.number()?.0))
            } else {
                None
            };
            out.push(CellLit { open_start, start, end, closed_end, level });
            if self.cur.eat("]") {
                return Ok(out);
            }
            self.cur.expect(",")?;
        }
    }

    /// The space of the first named set or `SPACE.part` in `expr`.
    fn inferred_space(&self, expr: &Located<SetExpr>) -> Option<Arc<Space>> {
        match &expr.node {
            SetExpr::Named(name) => match self.names.get(name) {
                Some(&(Kind::Set, i, _)) => Some(self.doc.sets[i].value.0.clone()),
                _ => None,
            },
            SetExpr::SpacePart(name, _) => match self.names.get(name) {
                Some(&(Kind::Space, i, _)) => Some(self.doc.spaces[i].value.clone()),
                _ => None,
            },
            SetExpr::Complement(e) => self.inferred_space(e),
            SetExpr::Binary(_, a, b) => self.inferred_space(a).or_else(|| self.inferred_space(b)),
            _ => None,
        }
    }

    fn eval_set(&mut self, expr: &Located<SetExpr>, space: &Arc<Space>) -> PResult<DefinableSet> {
        let pos = expr.pos;
        let wrong_backend = |literal: &str, want: &str| {
            Err(ParseError {
                pos,
                message: format!("backend mismatch: {literal} is a {want} literal but the space is {}", space.backend()),
            })
        };
        match &expr.node {
            SetExpr::Empty => Ok(space.empty_set()),
            SetExpr::All => Ok(space.max_set()),
            SetExpr::Generic => Ok(space.generic_set()),
            SetExpr::Points(names) => {
                let Space::Poset(p) = &**space else { return wrong_backend("`points {...}`", "poset") };
                let mut mask = 0;
                for (n, npos) in names {
                    match p.index_of(n) {
                        Some(i) => mask |= 1u64 << i,
                        None => return self.cur.error(*npos, format!("unknown point `{n}`")),
                    }
                }
                Ok(DefinableSet::Bits(mask))
            }
            SetExpr::Cells(cells) => {
                let Space::Ordinal { max_top } = &**space else { return wrong_backend("`cells[...]`", "ordinal") };
                let mut set = OrdSet::empty();
                for cell in cells {
                    set = set.union(&self.eval_cell(cell, max_top)?);
                }
                Ok(DefinableSet::Cells { generic: false, cells: set })
            }
            SetExpr::Cylinders(words) => {
                let Space::Cantor = &**space else { return wrong_backend("`cyl`", "cantor") };
                let mut clopen = Clopen::empty();
                for (w, wpos) in words {
                    let c = Clopen::cylinder(w).map_err(|e| sslab_error(*wpos, e))?;
                    clopen = clopen.union(&c);
                }
                Ok(DefinableSet::Simple { generic: false, set: CantorSet::from_clopen(clopen) })
            }
            SetExpr::CantorPoints(points) => {
                let Space::Cantor = &**space else { return wrong_backend("`pt`", "cantor") };
                let mut pts = Vec::new();
                for (text, ppos) in points {
                    pts.push(text.parse::<CantorPoint>().map_err(|e| sslab_error(*ppos, e))?);
                }
                Ok(DefinableSet::Simple { generic: false, set: CantorSet::points(pts) })
            }
            SetExpr::Named(name) => {
                let i = self.lookup(name, pos, Kind::Set)?;
                let (s, set) = self.doc.sets[i].value.clone();
                if !same_space(&s, space) {
                    return self.cur.error(pos, format!("space mismatch: set `{name}` lives on another space"));
                }
                Ok(set)
            }
            SetExpr::SpacePart(name, part) => {
                let i = self.lookup(name, pos, Kind::Space)?;
                let s = self.doc.spaces[i].value.clone();
                if !same_space(&s, space) {
                    return self.cur.error(pos, format!("space mismatch: `{name}` is not the space in use here"));
                }
                match part.as_str() {
                    "max" => Ok(s.max_set()),
                    "full" => Ok(s.full_set()),
                    "empty" => Ok(s.empty_set()),
                    "generic" => Ok(s.generic_set()),
                    _ => self.cur.error(pos, format!("unknown part `{name}.{part}`; expected max, full, empty or generic")),
                }
            }
            SetExpr::Complement(inner) => {
                let a = self.eval_set(inner, space)?;
                space.complement(&a).map_err(|e| sslab_error(pos, e))
            }
            SetExpr::Binary(op, a, b) => {
                let a = self.eval_set(a, space)?;
                let b = self.eval_set(b, space)?;
                space.combine(*op, &a, Some(&b)).map_err(|e| sslab_error(pos, e))
            }
        }
    }

    fn eval_ordinal(&mut self, (text, pos): &(String, Pos), top: &Ordinal) -> PResult<Ordinal> {
        if text == "top" {
            return Ok(top.clone());
        }
        match text.parse::<Ordinal>() {
            Ok(x) if &x <= top => Ok(x),
            Ok(x) => self.cur.error(*pos, format!("{x} lies beyond the top {top}")),
            Err(e) => self.cur.error(*pos, format!("{e}")),
        }
    }

    fn eval_cell(&mut self, cell: &CellLit, top: &Ordinal) -> PResult<OrdSet> {
        let mut start = self.eval_ordinal(&cell.start, top)?;
        if cell.open_start {
            start = start.successor();
        }
        let last = self.eval_ordinal(&cell.end, top)?;
        let end = match (cell.closed_end, &last == top) {
            (true, true) => End::Top,
            (true, false) => End::At(last.successor()),
            (false, _) => End::At(last),
        };
        Ok(match cell.level {
            None => OrdSet::cell(&start, &end, 0, top),
            Some((false, r)) => OrdSet::cell(&start, &end, r, top),
            Some((true, r)) => OrdSet::level_cell(&start, &end, r, top),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const V3: &str = "space V3 = poset {o < p, o < q}\n\
                      prufer D on V3 {idempotent: points {p}, branched: all}\n\
                      op A = stable(D, delta=points {o,p})\n\
                      op B = stable(D, delta=points {o}, pi=points {p})\n\
                      query le = leq(A, B)\n\
                      query lat = enumerate(D)\n";

    fn err(text: &str) -> ParseError {
        parse_document(text).expect_err("should not parse")
    }

    #[test]
    fn v3_fixture_shape() {
        let doc = parse_document(V3).unwrap();
        assert_eq!(doc.spaces.len(), 1);
        assert_eq!(doc.descriptors.len(), 1);
        assert_eq!(doc.operations.len(), 2);
        assert_eq!(doc.queries.len(), 2);
        assert_eq!(doc.queries[0].text, "leq(A, B)");
        assert_eq!(doc.queries[1].pos, Pos { line: 6, column: 7 });
    }

    #[test]
    fn dangling_reference_is_reported_at_the_use_site() {
        let e = err("space V = poset {o < p}\nquery m = member(X, zero)\n");
        assert_eq!(e.pos, Pos { line: 2, column: 18 });
        assert!(e.message.contains("unknown name `X`"), "{e}");
    }

    #[test]
    fn duplicate_names_cite_both_definitions() {
        let e = err("space V = cantor\nset V on V = all\n");
        assert_eq!(e.pos, Pos { line: 2, column: 5 });
        assert!(e.message.contains("1:7") && e.message.contains("2:5"), "{e}");
    }

    #[test]
    fn backend_and_type_mismatches() {
        let e = err("space W = ordinal(w^2)\nset S on W = points {o}\n");
        assert!(e.message.contains("backend mismatch"), "{e}");
        assert_eq!(e.pos, Pos { line: 2, column: 14 });
        let e = err("space W = cantor\nset S on W = all\nquery q = member(S, zero)\n");
        assert!(e.message.contains("type mismatch"), "{e}");
        let e = err("space W = ordinal(w^2)\nset S on W = cells[[0,w^2+1] nu>=1]\n");
        assert!(e.message.contains("beyond the top"), "{e}");
        let e = err("space W = ordinal(w+w^2)\n");
        assert!(e.message.contains("w"), "{e}");
    }

    #[test]
    fn literals_round_trip_through_rendering() {
        let doc = parse_document(
            "space W = ordinal(w^2*2+w+3)\n\
             set A on W = cells[[0,w^2] nu>=1, (w^2,w^2*2+w) nu=0] + generic\n\
             set B on W = cells[[w,top]] - cells[[0,w^2*2]]\n\
             space C = cantor\n\
             set X on C = cyl {\"01\", \"1\"} + pt \"0(01)\" - pts {\"1(0)\"}\n\
             space V = poset {o < p < r, o < q}\n\
             set Y on V = ~points {o} & (points {p, r} + V.generic)\n",
        )
        .unwrap();
        for d in &doc.sets {
            let (space, set) = &d.value;
            let text = format!("space S = {space}\nset Z on S = {}\n", space.render_set(set));
            let again = parse_document(&text).unwrap_or_else(|e| panic!("{text}: {e}"));
            // poset indices follow first mention, so compare rendered literals
            let (s2, set2) = &again.sets[0].value;
            assert_eq!(s2.render_set(set2), space.render_set(set), "{text}");
            if space.as_poset().is_none() {
                assert_eq!(set2, set, "{text}");
            }
        }
        let (w, y) = &doc.sets[3].value;
        assert_eq!(w.render_set(y), "points {p,r}");
    }

    #[test]
    fn set_queries_infer_or_name_their_space() {
        let doc = parse_document("space W2 = ordinal(w^2)\nquery r = cb-rank(W2.max)\n").unwrap();
        assert!(matches!(doc.queries[0].call, Call::Set(SetQuery::CbRank, _, _)));
        let e = err("space W2 = ordinal(w^2)\nquery r = cb-rank(cells[[0,w]])\n");
        assert!(e.message.contains("on SPACE"), "{e}");
        assert!(parse_document("space W2 = ordinal(w^2)\nquery r = cb-rank(cells[[0,w]]) on W2\n").is_ok());
    }

    #[test]
    fn invalid_pairs_are_parse_errors() {
        let e = err("space V = poset {o < p}\nprufer D on V {idempotent: empty}\nop A = stable(D, delta=points {o}, pi=points {p})\n");
        assert!(e.message.contains("idempotent"), "{e}");
        assert_eq!(e.pos.line, 3);
    }

    #[test]
    fn comments_and_multiline_statements() {
        let doc = parse_document(
            "# a comment\nspace C = cantor # trailing\nop R = join-punctured(C,\n    M=all,\n    S=all)\nquery q = qspec(R)\n",
        )
        .unwrap();
        assert_eq!(doc.operations.len(), 1);
        assert_eq!(doc.queries[0].text, "qspec(R)");
    }
}
