//! The `.crn` text format and JSON analysis reports.
//!
//! ```text
//! # comments run to the end of the line
//! species A B
//! A -> B @ 1
//! 2A + B -> 0 @ 3/2
//! vertex [0,0] -> [0,2] @ 1
//! vertex [1,1]
//! ```
//!
//! Complexes are integer combinations of declared species, `0`, or a
//! bracketed coordinate vector. A bare `vertex` line adds an isolated vertex.
//! Either every reaction carries a rate after `@` or none does; repeated
//! reactions merge, summing rates.

pub mod report;

pub use report::{analyze, AnalysisReport, ReportConfig, ReportError, REPORT_VERSION};

use std::collections::{BTreeMap, HashSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::exact::{as_integer, Rat, RatVec};
use crate::network::{MassActionSystem, NetworkError, ReactionNetwork, SpeciesContext};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A parsed document: a system when rates were given, a bare network otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParsedNetwork {
    System(MassActionSystem),
    Network(ReactionNetwork),
}

impl ParsedNetwork {
    pub fn network(&self) -> &ReactionNetwork {
        match self {
            ParsedNetwork::System(s) => s.network(),
            ParsedNetwork::Network(g) => g,
        }
    }

    pub fn system(&self) -> Option<&MassActionSystem> {
        match self {
            ParsedNetwork::System(s) => Some(s),
            ParsedNetwork::Network(_) => None,
        }
    }

    pub fn rates(&self) -> Option<&[Rat]> {
        self.system().map(MassActionSystem::rates)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Arrow,
    At,
    Slash,
    Comma,
    Open,
    Close,
}

fn describe(t: Option<&(Tok, usize)>) -> String {
    match t.map(|(t, _)| t) {
        None => "end of line".into(),
        Some(Tok::Ident(s)) => format!("`{s}`"),
        Some(Tok::Int(n)) => format!("`{n}`"),
        Some(Tok::Plus) => "`+`".into(),
        Some(Tok::Minus) => "`-`".into(),
        Some(Tok::Arrow) => "`->`".into(),
        Some(Tok::At) => "`@`".into(),
        Some(Tok::Slash) => "`/`".into(),
        Some(Tok::Comma) => "`,`".into(),
        Some(Tok::Open) => "`[`".into(),
        Some(Tok::Close) => "`]`".into(),
    }
}

struct Line {
    no: usize,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl Line {
    fn err<T>(&self, column: usize, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            line: self.no,
            column,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |(_, c)| *c)
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn unexpected<T>(&self, wanted: &str) -> Result<T, ParseError> {
        self.err(
            self.col(),
            format!(
                "expected {wanted}, found {}",
                describe(self.toks.get(self.pos))
            ),
        )
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }
}

fn lex(no: usize, text: &str) -> Result<Line, ParseError> {
    let text = text.split('#').next().unwrap_or("");
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            toks.push((Tok::Int(s.parse().expect("digits")), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' if chars.get(i + 1) == Some(&'>') => {
                i += 1;
                Tok::Arrow
            }
            '-' => Tok::Minus,
            '@' => Tok::At,
            '/' => Tok::Slash,
            ',' => Tok::Comma,
            '[' => Tok::Open,
            ']' => Tok::Close,
            _ => {
                return Err(ParseError {
                    line: no,
                    column: col,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        i += 1;
        toks.push((tok, col));
    }
    Ok(Line {
        no,
        toks,
        pos: 0,
        end_col: chars.len() + 1,
    })
}

#[derive(Clone, Debug)]
enum Complex {
    Zero,
    Raw(RatVec),
    Named(Vec<(BigInt, String, usize)>),
}

#[derive(Clone, Debug)]
struct Located {
    complex: Complex,
    line: usize,
    column: usize,
}

struct Item {
    source: Located,
    target: Option<Located>,
    rate: Option<(Rat, usize)>,
}

fn parse_rational(l: &mut Line) -> Result<Rat, ParseError> {
    let neg = l.eat(&Tok::Minus);
    let Some(Tok::Int(p)) = l.peek().cloned() else {
        return l.unexpected("a number");
    };
    l.pos += 1;
    let mut q = BigInt::from(1);
    if l.eat(&Tok::Slash) {
        let col = l.col();
        let Some(Tok::Int(d)) = l.peek().cloned() else {
            return l.unexpected("a denominator");
        };
        l.pos += 1;
        if d.is_zero() {
            return l.err(col, "zero denominator");
        }
        q = d;
    }
    let r = Rat::new(p, q);
    Ok(if neg { -r } else { r })
}

fn parse_complex(l: &mut Line) -> Result<Located, ParseError> {
    let (line, column) = (l.no, l.col());
    let at = |complex| Located {
        complex,
        line,
        column,
    };
    match l.peek() {
        Some(Tok::Open) => {
            l.pos += 1;
            let mut xs = vec![parse_rational(l)?];
            while l.eat(&Tok::Comma) {
                xs.push(parse_rational(l)?);
            }
            if !l.eat(&Tok::Close) {
                return l.unexpected("`,` or `]`");
            }
            Ok(at(Complex::Raw(RatVec::new(xs))))
        }
        Some(Tok::Int(n))
            if n.is_zero() && !matches!(l.toks.get(l.pos + 1), Some((Tok::Ident(_), _))) =>
        {
            l.pos += 1;
            Ok(at(Complex::Zero))
        }
        _ => {
            let mut terms = Vec::new();
            loop {
                let mut coef = BigInt::from(1);
                let ccol = l.col();
                if let Some(Tok::Int(n)) = l.peek().cloned() {
                    if n.is_zero() {
                        return l.err(ccol, "coefficients must be positive");
                    }
                    coef = n;
                    l.pos += 1;
                }
                let scol = l.col();
                let Some(Tok::Ident(name)) = l.peek().cloned() else {
                    return l.unexpected("a species name");
                };
                l.pos += 1;
                terms.push((coef, name, scol));
                if !l.eat(&Tok::Plus) {
                    break;
                }
            }
            Ok(at(Complex::Named(terms)))
        }
    }
}

fn parse_item(l: &mut Line) -> Result<Item, ParseError> {
    let raw_line = matches!(l.peek(), Some(Tok::Ident(s)) if s == "vertex");
    if raw_line {
        l.pos += 1;
    }
    let source = parse_complex(l)?;
    if raw_line && l.at_end() {
        return Ok(Item {
            source,
            target: None,
            rate: None,
        });
    }
    if !l.eat(&Tok::Arrow) {
        return l.unexpected("`->`");
    }
    let target = parse_complex(l)?;
    let rate = if l.eat(&Tok::At) {
        let col = l.col();
        Some((parse_rational(l)?, col))
    } else {
        None
    };
    if !l.at_end() {
        return l.unexpected("end of line");
    }
    Ok(Item {
        source,
        target: Some(target),
        rate,
    })
}

const KEYWORDS: [&str; 2] = ["species", "vertex"];

fn resolve(
    c: &Located,
    species: Option<&SpeciesContext>,
    dim: usize,
) -> Result<RatVec, ParseError> {
    let err = |column, message: String| {
        Err(ParseError {
            line: c.line,
            column,
            message,
        })
    };
    match &c.complex {
        Complex::Zero => Ok(RatVec::zeros(dim)),
        Complex::Raw(v) if v.dim() == dim => Ok(v.clone()),
        Complex::Raw(v) => err(
            c.column,
            format!("vertex has {} coordinates, expected {dim}", v.dim()),
        ),
        Complex::Named(terms) => {
            let Some(ctx) = species else {
                return err(c.column, "species names need a `species` line".into());
            };
            let mut v = RatVec::zeros(dim);
            for (coef, name, col) in terms {
                match ctx.index_of(name) {
                    Some(i) => {
                        v.add_scaled(&Rat::from_integer(coef.clone()), &RatVec::unit(dim, i))
                    }
                    None => return err(*col, format!("unknown species `{name}`")),
                }
            }
            Ok(v)
        }
    }
}

/// Parses a `.crn` document.
pub fn parse_network(text: &str) -> Result<ParsedNetwork, ParseError> {
    let mut species: Option<SpeciesContext> = None;
    let mut items: Vec<Item> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let mut l = lex(i + 1, raw)?;
        if l.at_end() {
            continue;
        }
        if matches!(l.peek(), Some(Tok::Ident(s)) if s == "species") {
            let col = l.col();
            if species.is_some() {
                return l.err(col, "second `species` line");
            }
            if !items.is_empty() {
                return l.err(col, "`species` must come before reactions");
            }
            l.pos += 1;
            let mut names = Vec::new();
            while let Some((t, c)) = l.next() {
                match t {
                    Tok::Ident(s) if KEYWORDS.contains(&s.as_str()) => {
                        return l.err(c, format!("`{s}` is reserved"));
                    }
                    Tok::Ident(s) => names.push((s, c)),
                    Tok::Comma => {}
                    _ => {
                        l.pos -= 1;
                        return l.unexpected("a species name");
                    }
                }
            }
            let mut seen = HashSet::new();
            for (s, c) in &names {
                if !seen.insert(s) {
                    return l.err(*c, format!("duplicate species `{s}`"));
                }
            }
            let names: Vec<&str> = names.iter().map(|(s, _)| s.as_str()).collect();
            species = Some(SpeciesContext::new(&names).map_err(|e| ParseError {
                line: l.no,
                column: col,
                message: e.to_string(),
            })?);
            continue;
        }
        items.push(parse_item(&mut l)?);
    }

    let dim = match &species {
        Some(ctx) => ctx.dim(),
        None => {
            let raw = items
                .iter()
                .flat_map(|it| std::iter::once(&it.source).chain(&it.target))
                .find_map(|c| match &c.complex {
                    Complex::Raw(v) => Some(v.dim()),
                    _ => None,
                });
            match raw {
                Some(n) => n,
                None => {
                    let (line, column) = items
                        .first()
                        .map_or((1, 1), |it| (it.source.line, it.source.column));
                    return Err(ParseError {
                        line,
                        column,
                        message: "no `species` line and no bracketed vertex to fix the dimension"
                            .into(),
                    });
                }
            }
        }
    };
    let context = species
        .clone()
        .unwrap_or_else(|| SpeciesContext::anonymous(dim));

    let with_rate = items
        .iter()
        .find(|it| it.target.is_some())
        .map(|it| it.rate.is_some());
    let mut isolated = Vec::new();
    let mut edges: Vec<(RatVec, RatVec, Rat)> = Vec::new();
    for it in &items {
        let s = resolve(&it.source, species.as_ref(), dim)?;
        let Some(t) = &it.target else {
            isolated.push(s);
            continue;
        };
        let t = resolve(t, species.as_ref(), dim)?;
        let line = it.source.line;
        if s == t {
            return Err(ParseError {
                line,
                column: it.source.column,
                message: format!("self-loop at [{s}]"),
            });
        }
        let k = match (&it.rate, with_rate) {
            (Some((k, col)), Some(true)) => {
                if !k.is_positive() {
                    return Err(ParseError {
                        line,
                        column: *col,
                        message: format!("rate {} is not strictly positive", fmt_scalar(k)),
                    });
                }
                k.clone()
            }
            (None, Some(false)) => Rat::from_integer(1.into()),
            (Some((_, col)), _) => {
                return Err(ParseError {
                    line,
                    column: *col,
                    message: "rate given but earlier reactions have none".into(),
                });
            }
            (None, _) => {
                return Err(ParseError {
                    line,
                    column: it.source.column,
                    message: "missing rate; earlier reactions have one".into(),
                });
            }
        };
        edges.push((s, t, k));
    }
    let in_edges: HashSet<&RatVec> = edges.iter().flat_map(|(s, t, _)| [s, t]).collect();
    let mut iso: Vec<RatVec> = Vec::new();
    for v in isolated {
        if !in_edges.contains(&v) && !iso.contains(&v) {
            iso.push(v);
        }
    }
    let build_err = |e: NetworkError| ParseError {
        line: 1,
        column: 1,
        message: e.to_string(),
    };
    if with_rate == Some(true) {
        let sys =
            MassActionSystem::from_weighted_parts(context, &iso, &edges).map_err(build_err)?;
        Ok(ParsedNetwork::System(sys))
    } else {
        let mut seen = HashSet::new();
        let pairs: Vec<(RatVec, RatVec)> = edges
            .into_iter()
            .map(|(s, t, _)| (s, t))
            .filter(|p| seen.insert(p.clone()))
            .collect();
        Ok(ParsedNetwork::Network(
            ReactionNetwork::from_parts(context, &iso, &pairs).map_err(build_err)?,
        ))
    }
}

/// Integers without a denominator, everything else as `p/q`.
pub fn fmt_scalar(r: &Rat) -> String {
    match as_integer(r) {
        Some(n) => n.to_string(),
        None => format!("{}/{}", r.numer(), r.denom()),
    }
}

fn fmt_bracket(v: &RatVec) -> String {
    let parts: Vec<String> = v.iter().map(fmt_scalar).collect();
    format!("[{}]", parts.join(","))
}

fn named_form(ctx: &SpeciesContext, v: &RatVec) -> Option<String> {
    let mut terms = Vec::new();
    for (i, x) in v.iter().enumerate() {
        let n = as_integer(x)?;
        if n.is_negative() {
            return None;
        }
        if n.is_zero() {
            continue;
        }
        let name = &ctx.names()[i];
        terms.push(if n == BigInt::from(1) {
            name.clone()
        } else {
            format!("{n}{name}")
        });
    }
    Some(if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    })
}

/// Renders a network, with rates when given, in the `.crn` format.
pub fn write_network(g: &ReactionNetwork, rates: Option<&[Rat]>) -> String {
    let ctx = g.context();
    let mut out = String::new();
    if ctx.is_named() {
        out.push_str("species ");
        out.push_str(&ctx.names().join(" "));
        out.push('\n');
    }
    let named: BTreeMap<usize, String> = if ctx.is_named() {
        (0..g.num_vertices())
            .filter_map(|i| named_form(ctx, g.vertex(i)).map(|s| (i, s)))
            .collect()
    } else {
        BTreeMap::new()
    };
    let all_named = named.len() == g.num_vertices();
    for i in g.isolated_indices() {
        match named.get(&i) {
            Some(s) if all_named => out.push_str(&format!("vertex {s}\n")),
            _ => out.push_str(&format!("vertex {}\n", fmt_bracket(g.vertex(i)))),
        }
    }
    for (e, r) in g.reactions().iter().enumerate() {
        let line = if all_named {
            format!("{} -> {}", named[&r.source], named[&r.target])
        } else {
            format!(
                "vertex {} -> {}",
                fmt_bracket(g.vertex(r.source)),
                fmt_bracket(g.vertex(r.target))
            )
        };
        out.push_str(&line);
        if let Some(k) = rates {
            out.push_str(" @ ");
            out.push_str(&fmt_scalar(&k[e]));
        }
        out.push('\n');
    }
    out
}

pub fn write_system(sys: &MassActionSystem) -> String {
    write_network(sys.network(), Some(sys.rates()))
}

pub fn write_parsed(p: &ParsedNetwork) -> String {
    write_network(p.network(), p.rates())
}

/// Parses a `;`-separated list of comma-separated coordinate vectors.
pub fn parse_vector_list(s: &str) -> Result<Vec<RatVec>, String> {
    s.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.trim_start_matches('[')
                .trim_end_matches(']')
                .parse::<RatVec>()
                .map_err(|e| e.to_string())
        })
        .collect()
}
