//! The `.ialg` session format: a line-oriented text file declaring one
//! poset, one scalar field, one presented algebra, named modules, an
//! optional default window, and a list of commands to run.
//!
//! Grammar, one directive per line (`#` starts a comment):
//!
//! ```text
//! session free_xy
//! poset zlattice 2                      # the ambient index poset
//! poset C finite {a,b,c} {a<b, b<c}    # named, for later product use
//! poset product Z C
//! field Q                              # or: field Fp 7
//! algebra invariant                    # invariant | arrows | mixed
//! gen x (1,0)                          # lattice-shift generator
//! gen f a->b                           # arrow generator (finite posets)
//! gen ta (1) a->a                      # mixed generator (product posets)
//! rel (1,1): x*y - y*x
//! module M = coker [ P(1,0) P(0,1) -> P(0,0) : x ; y ]
//! module F = free P(0,0)
//! module S = simple S(0,0)
//! window (0,0) (5,5)
//! run dims (0,0) (3,3)
//! run check cocompact (0,0)..(4,4)
//! ```
//!
//! The session poset is the last `poset` line; earlier lines may carry a
//! name so a `product` line can refer to them.  Parsing validates every
//! cross-reference, index arity, and relation homogeneity, and reports
//! failures with the line and column they occur at.

use std::collections::BTreeSet;
use std::fmt;

/// A parse or validation failure, located in the input text.  `line` is
/// 1-based; synthetic input (command-line arguments) uses line 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "argument, col {}: {}", self.col, self.message)
        } else {
            write!(f, "line {}, col {}: {}", self.line, self.col, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

/// One coordinate of a written index: an integer for lattice factors, a
/// name for finite factors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coord {
    Int(i64),
    Atom(String),
}

/// An index as written, e.g. `(0,0)` or `(2,b)` or a bare atom `a`; its
/// meaning depends on the session poset.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawIndex(pub Vec<Coord>);

impl fmt::Display for RawIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            match c {
                Coord::Int(n) => write!(f, "{n}")?,
                Coord::Atom(s) => write!(f, "{s}")?,
            }
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PosetDecl {
    ZLattice(usize),
    Finite { labels: Vec<String>, rels: Vec<(String, String)> },
    Product(String, String),
}

#[derive(Clone, Debug)]
pub struct PosetLine {
    pub name: Option<String>,
    pub decl: PosetDecl,
    pub line: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldChoice {
    Q,
    Fp(u64),
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldChoice::Q => write!(f, "Q"),
            FieldChoice::Fp(p) => write!(f, "Fp {p}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlgKind {
    Invariant,
    Arrows,
    Mixed,
}

impl AlgKind {
    fn keyword(self) -> &'static str {
        match self {
            AlgKind::Invariant => "invariant",
            AlgKind::Arrows => "arrows",
            AlgKind::Mixed => "mixed",
        }
    }
}

/// Degree of a generator, or span of a relation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DegreeDecl {
    Shift(Vec<i64>),
    Arrow(String, String),
    Mixed(Vec<i64>, String, String),
}

impl fmt::Display for DegreeDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DegreeDecl::Shift(d) => {
                write!(f, "(")?;
                for (k, c) in d.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            DegreeDecl::Arrow(a, b) => write!(f, "{a}->{b}"),
            DegreeDecl::Mixed(d, a, b) => {
                write!(f, "{}", DegreeDecl::Shift(d.clone()))?;
                write!(f, " {a}->{b}")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct GenDecl {
    pub name: String,
    pub degree: DegreeDecl,
    pub line: usize,
}

/// One summand of a written linear combination: an optional scalar
/// literal (parsed by the field later), a sign, and a generator word.
/// The empty word stands for the unit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExprTerm {
    pub neg: bool,
    pub coeff: String,
    pub word: Vec<String>,
    pub col: usize,
}

pub type Expr = Vec<ExprTerm>;

fn fmt_expr(f: &mut fmt::Formatter<'_>, e: &Expr) -> fmt::Result {
    for (k, t) in e.iter().enumerate() {
        if k == 0 {
            if t.neg {
                write!(f, "-")?;
            }
        } else if t.neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        if t.word.is_empty() {
            write!(f, "{}", t.coeff)?;
        } else {
            if t.coeff != "1" {
                write!(f, "{}*", t.coeff)?;
            }
            write!(f, "{}", t.word.join("*"))?;
        }
    }
    Ok(())
}

struct ExprDisplay<'a>(&'a Expr);

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_expr(f, self.0)
    }
}

#[derive(Clone, Debug)]
pub struct RelDecl {
    pub span: DegreeDecl,
    pub terms: Expr,
    pub line: usize,
}

/// How a module is built.  `Coker` is the cokernel of a map between free
/// sums: one image per cover generator, one expression per target block.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModuleDef {
    Free(RawIndex),
    Simple(RawIndex),
    Coker { covers: Vec<RawIndex>, targets: Vec<RawIndex>, images: Vec<Vec<Expr>> },
}

#[derive(Clone, Debug)]
pub struct ModuleDecl {
    pub name: String,
    pub def: ModuleDef,
    pub line: usize,
}

/// A module position in a command: declared by name, or free / simple at
/// an index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModRef {
    Named(String),
    Free(RawIndex),
    Simple(RawIndex),
}

impl fmt::Display for ModRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModRef::Named(n) => write!(f, "{n}"),
            ModRef::Free(i) => write!(f, "P{i}"),
            ModRef::Simple(i) => write!(f, "S{i}"),
        }
    }
}

/// An entry of a module sequence: free / simple at an index, or a named
/// module placed at an explicit index (`M@(1,0)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeqEntry {
    Free(RawIndex),
    Simple(RawIndex),
    At(String, RawIndex),
}

impl fmt::Display for SeqEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeqEntry::Free(i) => write!(f, "P{i}"),
            SeqEntry::Simple(i) => write!(f, "S{i}"),
            SeqEntry::At(n, i) => write!(f, "{n}@{i}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CheckCmd {
    Star { window: Option<(RawIndex, RawIndex)> },
    Cocompact { window: Option<(RawIndex, RawIndex)> },
    Strong { window: Option<(RawIndex, RawIndex)> },
    Coherence { module: String },
    Sequence { samples: Vec<ModRef> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    Dims { module: Option<ModRef>, lo: RawIndex, hi: RawIndex },
    Tail { module: ModRef, cut: RawIndex, strict: bool },
    Gens { module: ModRef },
    Torsion { module: ModRef },
    Hom { source: ModRef, target: ModRef },
    Tau { module: ModRef },
    QgrHom { source: ModRef, target: ModRef },
    Saturate { module: ModRef, at: RawIndex },
    Chi1 { module: ModRef, cut: RawIndex },
    ASeq { entries: Vec<SeqEntry> },
    Check(CheckCmd),
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::Dims { module, lo, hi } => {
                write!(f, "dims ")?;
                if let Some(m) = module {
                    write!(f, "{m} ")?;
                }
                write!(f, "{lo} {hi}")
            }
            Command::Tail { module, cut, strict } => {
                write!(f, "tail {module} {cut}")?;
                if !strict {
                    write!(f, " weak")?;
                }
                Ok(())
            }
            Command::Gens { module } => write!(f, "gens {module}"),
            Command::Torsion { module } => write!(f, "torsion {module}"),
            Command::Hom { source, target } => write!(f, "hom {source} {target}"),
            Command::Tau { module } => write!(f, "tau {module}"),
            Command::QgrHom { source, target } => write!(f, "qgrhom {source} {target}"),
            Command::Saturate { module, at } => write!(f, "saturate {module} {at}"),
            Command::Chi1 { module, cut } => write!(f, "chi1 {module} {cut}"),
            Command::ASeq { entries } => {
                write!(f, "aofseq")?;
                for e in entries {
                    write!(f, " {e}")?;
                }
                Ok(())
            }
            Command::Check(c) => {
                write!(f, "check ")?;
                let win = |f: &mut fmt::Formatter<'_>, w: &Option<(RawIndex, RawIndex)>| match w {
                    Some((lo, hi)) => write!(f, " {lo}..{hi}"),
                    None => Ok(()),
                };
                match c {
                    CheckCmd::Star { window } => {
                        write!(f, "star")?;
                        win(f, window)
                    }
                    CheckCmd::Cocompact { window } => {
                        write!(f, "cocompact")?;
                        win(f, window)
                    }
                    CheckCmd::Strong { window } => {
                        write!(f, "strong")?;
                        win(f, window)
                    }
                    CheckCmd::Coherence { module } => write!(f, "coherence {module}"),
                    CheckCmd::Sequence { samples } => {
                        write!(f, "sequence")?;
                        for s in samples {
                            write!(f, " {s}")?;
                        }
                        Ok(())
                    }
                }
            }
        }
    }
}

/// A fully parsed and cross-checked session.
#[derive(Clone, Debug, Default)]
pub struct SessionSpec {
    pub name: Option<String>,
    pub posets: Vec<PosetLine>,
    pub field: Option<FieldChoice>,
    pub algebra_kind: Option<AlgKind>,
    pub gens: Vec<GenDecl>,
    pub rels: Vec<RelDecl>,
    pub modules: Vec<ModuleDecl>,
    pub window: Option<(RawIndex, RawIndex)>,
    pub window_line: usize,
    pub commands: Vec<Command>,
    /// Source line of each command; empty when commands were built
    /// programmatically.
    pub command_lines: Vec<usize>,
}

// ---------------------------------------------------------------------------
// tokens

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Semi,
    Star,
    Plus,
    Minus,
    Slash,
    Eq,
    Lt,
    At,
    Arrow,
    DotDot,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Star => "`*`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Lt => "`<`".into(),
            Tok::At => "`@`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::DotDot => "`..`".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Sp {
    tok: Tok,
    col: usize,
}

fn tokenize(line_no: usize, text: &str) -> Result<Vec<Sp>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Sp { tok: Tok::Ident(chars[start..i].iter().collect()), col });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse::<i64>().map_err(|_| ParseError {
                line: line_no,
                col,
                message: format!("integer `{s}` is out of range"),
            })?;
            out.push(Sp { tok: Tok::Int(n), col });
            continue;
        }
        let two = if i + 1 < chars.len() { Some(chars[i + 1]) } else { None };
        let tok = match (c, two) {
            ('-', Some('>')) => {
                i += 1;
                Tok::Arrow
            }
            ('.', Some('.')) => {
                i += 1;
                Tok::DotDot
            }
            ('(', _) => Tok::LParen,
            (')', _) => Tok::RParen,
            ('{', _) => Tok::LBrace,
            ('}', _) => Tok::RBrace,
            ('[', _) => Tok::LBracket,
            (']', _) => Tok::RBracket,
            (',', _) => Tok::Comma,
            (':', _) => Tok::Colon,
            (';', _) => Tok::Semi,
            ('*', _) => Tok::Star,
            ('+', _) => Tok::Plus,
            ('-', _) => Tok::Minus,
            ('/', _) => Tok::Slash,
            ('=', _) => Tok::Eq,
            ('<', _) => Tok::Lt,
            ('@', _) => Tok::At,
            _ => {
                return Err(ParseError {
                    line: line_no,
                    col,
                    message: format!("unexpected character `{c}`"),
                })
            }
        };
        out.push(Sp { tok, col });
        i += 1;
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// cursor

struct Cursor {
    line: usize,
    toks: Vec<Sp>,
    pos: usize,
}

impl Cursor {
    fn new(line: usize, toks: Vec<Sp>) -> Self {
        Cursor { line, toks, pos: 0 }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|s| &s.tok)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|s| s.col)
            .unwrap_or_else(|| self.toks.last().map(|s| s.col + 1).unwrap_or(1))
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col: self.col(), message: message.into() }
    }

    fn err_at(&self, col: usize, message: impl Into<String>) -> ParseError {
        ParseError { line: self.line, col, message: message.into() }
    }

    fn next(&mut self) -> Option<Sp> {
        let sp = self.toks.get(self.pos).cloned();
        if sp.is_some() {
            self.pos += 1;
        }
        sp
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == Some(t) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok, what: &str) -> Result<(), ParseError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err(format!(
                "expected {what}, found {}",
                self.peek().map(|t| t.describe()).unwrap_or_else(|| "end of line".into())
            )))
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        let col = self.col();
        match self.next() {
            Some(Sp { tok: Tok::Ident(s), .. }) => Ok((s, col)),
            other => Err(self.err_at(
                col,
                format!(
                    "expected {what}, found {}",
                    other.map(|s| s.tok.describe()).unwrap_or_else(|| "end of line".into())
                ),
            )),
        }
    }

    fn int(&mut self, what: &str) -> Result<i64, ParseError> {
        let col = self.col();
        let neg = self.eat(&Tok::Minus);
        match self.next() {
            Some(Sp { tok: Tok::Int(n), .. }) => Ok(if neg { -n } else { n }),
            other => Err(self.err_at(
                col,
                format!(
                    "expected {what}, found {}",
                    other.map(|s| s.tok.describe()).unwrap_or_else(|| "end of line".into())
                ),
            )),
        }
    }

    fn done(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.err(format!("unexpected trailing {}", t.describe()))),
        }
    }

    /// `(c1,...,cn)` or a bare atom.
    fn index(&mut self, what: &str) -> Result<RawIndex, ParseError> {
        if let Some(Tok::Ident(_)) = self.peek() {
            let (s, _) = self.ident(what)?;
            return Ok(RawIndex(vec![Coord::Atom(s)]));
        }
        self.expect(&Tok::LParen, what)?;
        let mut coords = Vec::new();
        loop {
            match self.peek() {
                Some(Tok::Ident(_)) => {
                    let (s, _) = self.ident("coordinate")?;
                    coords.push(Coord::Atom(s));
                }
                _ => coords.push(Coord::Int(self.int("coordinate")?)),
            }
            if self.eat(&Tok::Comma) {
                continue;
            }
            self.expect(&Tok::RParen, "`)`")?;
            break;
        }
        Ok(RawIndex(coords))
    }

    /// Integer tuple `(d1,...,dn)`.
    fn shift(&mut self, what: &str) -> Result<Vec<i64>, ParseError> {
        let col = self.col();
        let idx = self.index(what)?;
        let mut out = Vec::with_capacity(idx.0.len());
        for c in idx.0 {
            match c {
                Coord::Int(n) => out.push(n),
                Coord::Atom(s) => {
                    return Err(self.err_at(col, format!("expected an integer degree, found `{s}`")))
                }
            }
        }
        Ok(out)
    }

    /// Generator degree / relation span: `(1,0)`, `a->b`, or `(1) a->b`.
    fn degree(&mut self) -> Result<DegreeDecl, ParseError> {
        if let Some(Tok::Ident(_)) = self.peek() {
            let (from, _) = self.ident("arrow source")?;
            self.expect(&Tok::Arrow, "`->`")?;
            let (to, _) = self.ident("arrow target")?;
            return Ok(DegreeDecl::Arrow(from, to));
        }
        let shift = self.shift("a degree")?;
        if let Some(Tok::Ident(_)) = self.peek() {
            let (from, _) = self.ident("arrow source")?;
            self.expect(&Tok::Arrow, "`->`")?;
            let (to, _) = self.ident("arrow target")?;
            return Ok(DegreeDecl::Mixed(shift, from, to));
        }
        Ok(DegreeDecl::Shift(shift))
    }

    /// `P(1,0)` or `S(0,0)`; with `allow_named`, also `name` or `name@(i)`.
    fn modref(&mut self, allow_named: bool) -> Result<ModRef, ParseError> {
        let col = self.col();
        let (name, _) = self.ident("a module")?;
        let inline = self.peek() == Some(&Tok::LParen);
        match (name.as_str(), inline) {
            ("P", true) => Ok(ModRef::Free(self.index("an index")?)),
            ("S", true) => Ok(ModRef::Simple(self.index("an index")?)),
            _ if allow_named => Ok(ModRef::Named(name)),
            _ => Err(self.err_at(col, format!("expected `P(..)` or `S(..)`, found `{name}`"))),
        }
    }

    /// A linear combination of scalar-times-word summands.
    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = Vec::new();
        let mut neg = self.eat(&Tok::Minus);
        loop {
            terms.push(self.term(neg)?);
            if self.eat(&Tok::Plus) {
                neg = false;
            } else if self.eat(&Tok::Minus) {
                neg = true;
            } else {
                break;
            }
        }
        Ok(terms)
    }

    fn term(&mut self, neg: bool) -> Result<ExprTerm, ParseError> {
        let col = self.col();
        let mut coeff = String::from("1");
        let mut word = Vec::new();
        match self.peek() {
            Some(Tok::Int(_)) => {
                let n = self.int("a scalar")?;
                coeff = n.to_string();
                if self.eat(&Tok::Slash) {
                    let d = self.int("a denominator")?;
                    coeff = format!("{n}/{d}");
                }
                if self.eat(&Tok::Star) {
                    word = self.word()?;
                }
            }
            Some(Tok::Ident(_)) => {
                word = self.word()?;
            }
            _ => {
                return Err(self.err("expected a scalar or a generator word"));
            }
        }
        Ok(ExprTerm { neg, coeff, word, col })
    }

    fn word(&mut self) -> Result<Vec<String>, ParseError> {
        let mut names = vec![self.ident("a generator name")?.0];
        while self.eat(&Tok::Star) {
            names.push(self.ident("a generator name")?.0);
        }
        Ok(names)
    }

    /// Window argument: `lo..hi` or `lo hi`.
    fn window_pair(&mut self) -> Result<(RawIndex, RawIndex), ParseError> {
        let lo = self.index("a window corner")?;
        self.eat(&Tok::DotDot);
        let hi = self.index("a window corner")?;
        Ok((lo, hi))
    }
}

// ---------------------------------------------------------------------------
// directives

fn parse_poset_line(cur: &mut Cursor) -> Result<PosetLine, ParseError> {
    let line = cur.line;
    let (first, col) = cur.ident("a poset kind or name")?;
    let (name, kind) = match first.as_str() {
        "zlattice" | "finite" | "product" => (None, first),
        _ => {
            let (kind, _) = cur.ident("a poset kind")?;
            (Some(first), kind)
        }
    };
    let decl = match kind.as_str() {
        "zlattice" => {
            let rank = cur.int("a rank")?;
            if rank <= 0 {
                return Err(cur.err_at(col, "lattice rank must be positive".to_string()));
            }
            PosetDecl::ZLattice(rank as usize)
        }
        "finite" => {
            cur.expect(&Tok::LBrace, "`{`")?;
            let mut labels = Vec::new();
            if !cur.eat(&Tok::RBrace) {
                loop {
                    labels.push(cur.ident("an element name")?.0);
                    if cur.eat(&Tok::Comma) {
                        continue;
                    }
                    cur.expect(&Tok::RBrace, "`}`")?;
                    break;
                }
            }
            cur.expect(&Tok::LBrace, "`{`")?;
            let mut rels = Vec::new();
            if !cur.eat(&Tok::RBrace) {
                loop {
                    let (a, acol) = cur.ident("an element name")?;
                    cur.expect(&Tok::Lt, "`<`")?;
                    let (b, _) = cur.ident("an element name")?;
                    if !labels.contains(&a) || !labels.contains(&b) {
                        let missing = if labels.contains(&a) { &b } else { &a };
                        return Err(cur.err_at(acol, format!("unknown element `{missing}`")));
                    }
                    rels.push((a, b));
                    if cur.eat(&Tok::Comma) {
                        continue;
                    }
                    cur.expect(&Tok::RBrace, "`}`")?;
                    break;
                }
            }
            PosetDecl::Finite { labels, rels }
        }
        "product" => {
            let (a, _) = cur.ident("a poset name")?;
            let (b, _) = cur.ident("a poset name")?;
            PosetDecl::Product(a, b)
        }
        other => return Err(cur.err_at(col, format!("unknown poset kind `{other}`"))),
    };
    cur.done()?;
    Ok(PosetLine { name, decl, line })
}

fn parse_field(cur: &mut Cursor) -> Result<FieldChoice, ParseError> {
    let (name, col) = cur.ident("a field name")?;
    match name.as_str() {
        "Q" => Ok(FieldChoice::Q),
        "Fp" => {
            let p = cur.int("a prime modulus")?;
            if p < 2 {
                return Err(cur.err_at(col, format!("modulus {p} is not a prime")));
            }
            Ok(FieldChoice::Fp(p as u64))
        }
        other => Err(cur.err_at(col, format!("unknown field `{other}`; use Q or Fp <p>"))),
    }
}

fn parse_command(cur: &mut Cursor) -> Result<Command, ParseError> {
    let (verb, col) = cur.ident("a command")?;
    let cmd = match verb.as_str() {
        "dims" => {
            // A leading module reference is optional; a bare `(` means the
            // plain algebra table.
            let module = match cur.peek() {
                Some(Tok::Ident(_)) => Some(cur.modref(true)?),
                _ => None,
            };
            let (lo, hi) = cur.window_pair()?;
            Command::Dims { module, lo, hi }
        }
        "tail" => {
            let module = cur.modref(true)?;
            let cut = cur.index("a cut index")?;
            let strict = match cur.peek() {
                Some(Tok::Ident(s)) if s == "weak" => {
                    cur.next();
                    false
                }
                _ => true,
            };
            Command::Tail { module, cut, strict }
        }
        "gens" => Command::Gens { module: cur.modref(true)? },
        "torsion" => Command::Torsion { module: cur.modref(true)? },
        "hom" => Command::Hom { source: cur.modref(true)?, target: cur.modref(true)? },
        "tau" => Command::Tau { module: cur.modref(true)? },
        "qgrhom" => Command::QgrHom { source: cur.modref(true)?, target: cur.modref(true)? },
        "saturate" => {
            Command::Saturate { module: cur.modref(true)?, at: cur.index("an index")? }
        }
        "chi1" => Command::Chi1 { module: cur.modref(true)?, cut: cur.index("a cut index")? },
        "aofseq" => {
            let mut entries = Vec::new();
            while cur.peek().is_some() {
                let (name, ncol) = cur.ident("a sequence entry")?;
                let inline = cur.peek() == Some(&Tok::LParen);
                let entry = match (name.as_str(), inline) {
                    ("P", true) => SeqEntry::Free(cur.index("an index")?),
                    ("S", true) => SeqEntry::Simple(cur.index("an index")?),
                    _ => {
                        if cur.eat(&Tok::At) {
                            SeqEntry::At(name, cur.index("an index")?)
                        } else {
                            return Err(cur.err_at(
                                ncol,
                                format!("entry `{name}` needs `@(index)` to place it"),
                            ));
                        }
                    }
                };
                entries.push(entry);
            }
            if entries.is_empty() {
                return Err(cur.err("aofseq needs at least one entry"));
            }
            Command::ASeq { entries }
        }
        "check" => {
            let (which, wcol) = cur.ident("a check name")?;
            let window = |cur: &mut Cursor| -> Result<Option<(RawIndex, RawIndex)>, ParseError> {
                if cur.peek().is_some() {
                    Ok(Some(cur.window_pair()?))
                } else {
                    Ok(None)
                }
            };
            let c = match which.as_str() {
                "star" => CheckCmd::Star { window: window(cur)? },
                "cocompact" => CheckCmd::Cocompact { window: window(cur)? },
                "strong" => CheckCmd::Strong { window: window(cur)? },
                "coherence" => CheckCmd::Coherence { module: cur.ident("a module name")?.0 },
                "sequence" => {
                    let mut samples = Vec::new();
                    while cur.peek().is_some() {
                        samples.push(cur.modref(true)?);
                    }
                    if samples.is_empty() {
                        return Err(cur.err("check sequence needs at least one sample"));
                    }
                    CheckCmd::Sequence { samples }
                }
                other => return Err(cur.err_at(wcol, format!("unknown check `{other}`"))),
            };
            Command::Check(c)
        }
        other => return Err(cur.err_at(col, format!("unknown command `{other}`"))),
    };
    cur.done()?;
    Ok(cmd)
}

/// Parse a single command given as plain text (the command-line interface
/// routes subcommand arguments through here).
pub fn parse_command_text(text: &str) -> Result<Command, ParseError> {
    let mut cur = Cursor::new(0, tokenize(0, text)?);
    parse_command(&mut cur)
}

/// Parse a window argument: two indices, optionally joined by `..`.
pub fn parse_window_text(text: &str) -> Result<(RawIndex, RawIndex), ParseError> {
    let mut cur = Cursor::new(0, tokenize(0, text)?);
    let w = cur.window_pair()?;
    cur.done()?;
    Ok(w)
}

// ---------------------------------------------------------------------------
// shapes: arity and atom checking against the declared poset

#[derive(Clone, Debug)]
enum Slot {
    Int,
    Atom(Vec<String>),
}

fn shape_slots(
    decls: &[PosetLine],
    which: &PosetDecl,
    line: usize,
) -> Result<Vec<Slot>, ParseError> {
    match which {
        PosetDecl::ZLattice(rank) => Ok(vec![Slot::Int; *rank]),
        PosetDecl::Finite { labels, .. } => Ok(vec![Slot::Atom(labels.clone())]),
        PosetDecl::Product(a, b) => {
            // References resolve strictly upward in the file, so the
            // recursion terminates.
            let find = |name: &str| -> Result<&PosetLine, ParseError> {
                decls
                    .iter()
                    .filter(|p| p.line < line)
                    .find(|p| p.name.as_deref() == Some(name))
                    .ok_or_else(|| ParseError {
                        line,
                        col: 1,
                        message: format!("unknown poset `{name}`"),
                    })
            };
            let (pa, pb) = (find(a)?, find(b)?);
            let mut slots = shape_slots(decls, &pa.decl, pa.line)?;
            slots.extend(shape_slots(decls, &pb.decl, pb.line)?);
            Ok(slots)
        }
    }
}

fn check_index(
    slots: &[Slot],
    idx: &RawIndex,
    line: usize,
    what: &str,
) -> Result<(), ParseError> {
    if idx.0.len() != slots.len() {
        return Err(ParseError {
            line,
            col: 1,
            message: format!(
                "{what} {idx} has {} coordinates, the poset needs {}",
                idx.0.len(),
                slots.len()
            ),
        });
    }
    for (k, (c, s)) in idx.0.iter().zip(slots).enumerate() {
        match (c, s) {
            (Coord::Int(_), Slot::Int) => {}
            (Coord::Atom(a), Slot::Atom(labels)) => {
                if !labels.contains(a) {
                    return Err(ParseError {
                        line,
                        col: 1,
                        message: format!("{what} {idx}: unknown element `{a}`"),
                    });
                }
            }
            (Coord::Atom(a), Slot::Int) => {
                return Err(ParseError {
                    line,
                    col: 1,
                    message: format!(
                        "{what} {idx}: coordinate {} should be an integer, found `{a}`",
                        k + 1
                    ),
                })
            }
            (Coord::Int(n), Slot::Atom(_)) => {
                return Err(ParseError {
                    line,
                    col: 1,
                    message: format!(
                        "{what} {idx}: coordinate {} should name a poset element, found `{n}`",
                        k + 1
                    ),
                })
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// homogeneity of relations

struct GenTable<'a> {
    gens: &'a [GenDecl],
}

impl GenTable<'_> {
    fn get(&self, name: &str) -> Option<&DegreeDecl> {
        self.gens.iter().find(|g| g.name == name).map(|g| &g.degree)
    }

    /// Total degree of a word, walking the finite part when present.
    /// `start` is the finite-part source for arrow and mixed words.
    fn word_degree(
        &self,
        word: &[String],
        start: Option<&str>,
    ) -> Result<DegreeDecl, String> {
        let mut shift: Option<Vec<i64>> = None;
        let mut cur: Option<String> = start.map(String::from);
        let mut first: Option<String> = None;
        for name in word {
            let deg = self.get(name).ok_or_else(|| format!("unknown generator `{name}`"))?;
            match deg {
                DegreeDecl::Shift(d) => {
                    let acc = shift.get_or_insert_with(|| vec![0; d.len()]);
                    if acc.len() != d.len() {
                        return Err(format!("generator `{name}` has a degree of different rank"));
                    }
                    for (a, b) in acc.iter_mut().zip(d) {
                        *a += b;
                    }
                }
                DegreeDecl::Arrow(f, t) | DegreeDecl::Mixed(_, f, t) => {
                    if let DegreeDecl::Mixed(d, _, _) = deg {
                        let acc = shift.get_or_insert_with(|| vec![0; d.len()]);
                        for (a, b) in acc.iter_mut().zip(d) {
                            *a += b;
                        }
                    }
                    match &cur {
                        Some(c) if c != f => {
                            return Err(format!(
                                "word does not compose: `{name}` starts at `{f}`, not `{c}`"
                            ))
                        }
                        _ => {}
                    }
                    if first.is_none() {
                        first = Some(f.clone());
                    }
                    cur = Some(t.clone());
                }
            }
        }
        match (shift, first, cur) {
            (Some(d), None, _) => Ok(DegreeDecl::Shift(d)),
            (Some(d), Some(f), Some(t)) => Ok(DegreeDecl::Mixed(d, f, t)),
            (None, Some(f), Some(t)) => Ok(DegreeDecl::Arrow(f, t)),
            _ => Err("empty word has no degree".into()),
        }
    }
}

fn check_homogeneous(
    gens: &GenTable<'_>,
    span: &DegreeDecl,
    terms: &Expr,
    line: usize,
) -> Result<(), ParseError> {
    for t in terms {
        if t.word.is_empty() {
            return Err(ParseError {
                line,
                col: t.col,
                message: "a relation term needs a generator word".into(),
            });
        }
        let start = match span {
            DegreeDecl::Arrow(f, _) | DegreeDecl::Mixed(_, f, _) => Some(f.as_str()),
            DegreeDecl::Shift(_) => None,
        };
        let got = gens
            .word_degree(&t.word, start)
            .map_err(|message| ParseError { line, col: t.col, message })?;
        let matches = match (span, &got) {
            (DegreeDecl::Shift(a), DegreeDecl::Shift(b)) => a == b,
            (DegreeDecl::Arrow(_, at), DegreeDecl::Arrow(_, bt)) => at == bt,
            (DegreeDecl::Mixed(a, _, at), DegreeDecl::Mixed(b, _, bt)) => a == b && at == bt,
            _ => false,
        };
        if !matches {
            return Err(ParseError {
                line,
                col: t.col,
                message: format!(
                    "relation declared at {span} but term `{}` has degree {got}",
                    t.word.join("*")
                ),
            });
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// whole sessions

/// Parse a whole session and validate every cross-reference.
pub fn parse(text: &str) -> Result<SessionSpec, ParseError> {
    let mut spec = SessionSpec::default();
    for (n, raw) in text.lines().enumerate() {
        let line_no = n + 1;
        let toks = tokenize(line_no, raw)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor::new(line_no, toks);
        let (head, hcol) = cur.ident("a directive")?;
        match head.as_str() {
            "session" => {
                spec.name = Some(cur.ident("a session name")?.0);
                cur.done()?;
            }
            "poset" => spec.posets.push(parse_poset_line(&mut cur)?),
            "field" => {
                let f = parse_field(&mut cur)?;
                cur.done()?;
                if let Some(old) = spec.field {
                    if old != f {
                        return Err(cur.err_at(hcol, format!("field already declared as {old}")));
                    }
                }
                spec.field = Some(f);
            }
            "algebra" => {
                let (kind, kcol) = cur.ident("an algebra kind")?;
                let kind = match kind.as_str() {
                    "invariant" => AlgKind::Invariant,
                    "arrows" => AlgKind::Arrows,
                    "mixed" => AlgKind::Mixed,
                    other => {
                        return Err(cur.err_at(kcol, format!("unknown algebra kind `{other}`")))
                    }
                };
                if let Some(Tok::Ident(s)) = cur.peek() {
                    if s == "field" {
                        cur.next();
                        let f = parse_field(&mut cur)?;
                        if let Some(old) = spec.field {
                            if old != f {
                                return Err(
                                    cur.err_at(hcol, format!("field already declared as {old}"))
                                );
                            }
                        }
                        spec.field = Some(f);
                    }
                }
                cur.done()?;
                spec.algebra_kind = Some(kind);
            }
            "gen" => {
                let (name, _) = cur.ident("a generator name")?;
                let degree = cur.degree()?;
                cur.done()?;
                spec.gens.push(GenDecl { name, degree, line: line_no });
            }
            "rel" => {
                let span = cur.degree()?;
                cur.expect(&Tok::Colon, "`:`")?;
                let terms = cur.expr()?;
                cur.done()?;
                spec.rels.push(RelDecl { span, terms, line: line_no });
            }
            "module" => {
                let (name, _) = cur.ident("a module name")?;
                cur.expect(&Tok::Eq, "`=`")?;
                let (kind, kcol) = cur.ident("`free`, `simple`, or `coker`")?;
                let def = match kind.as_str() {
                    "free" | "simple" => {
                        if let Some(Tok::Ident(s)) = cur.peek() {
                            // Optional P/S prefix: `free P(0,0)`.
                            if (s == "P" || s == "S") && cur.toks.get(cur.pos + 1).map(|t| &t.tok) == Some(&Tok::LParen) {
                                cur.next();
                            }
                        }
                        let idx = cur.index("an index")?;
                        if kind == "free" {
                            ModuleDef::Free(idx)
                        } else {
                            ModuleDef::Simple(idx)
                        }
                    }
                    "coker" => parse_coker(&mut cur)?,
                    other => {
                        return Err(cur.err_at(
                            kcol,
                            format!("unknown module constructor `{other}`"),
                        ))
                    }
                };
                cur.done()?;
                spec.modules.push(ModuleDecl { name, def, line: line_no });
            }
            "window" => {
                spec.window = Some(cur.window_pair()?);
                spec.window_line = line_no;
                cur.done()?;
            }
            "run" => {
                spec.commands.push(parse_command(&mut cur)?);
                spec.command_lines.push(line_no);
            }
            other => return Err(cur.err_at(hcol, format!("unknown directive `{other}`"))),
        }
    }
    validate(&spec)?;
    Ok(spec)
}

/// `[ P(a) P(b) -> P(t) : img ; img ]`, one image per cover, one
/// comma-separated expression per target block inside each image.
fn parse_coker(cur: &mut Cursor) -> Result<ModuleDef, ParseError> {
    cur.expect(&Tok::LBracket, "`[`")?;
    let plist = |cur: &mut Cursor, stop: &Tok| -> Result<Vec<RawIndex>, ParseError> {
        let mut out = Vec::new();
        while cur.peek() != Some(stop) {
            let (p, pcol) = cur.ident("`P`")?;
            if p != "P" {
                return Err(cur.err_at(pcol, format!("expected a free summand `P(..)`, found `{p}`")));
            }
            out.push(cur.index("an index")?);
        }
        if out.is_empty() {
            return Err(cur.err("expected at least one free summand"));
        }
        cur.next();
        Ok(out)
    };
    let covers = plist(cur, &Tok::Arrow)?;
    let targets = plist(cur, &Tok::Colon)?;
    let mut images = Vec::new();
    loop {
        let mut blocks = vec![cur.expr()?];
        while cur.eat(&Tok::Comma) {
            blocks.push(cur.expr()?);
        }
        images.push(blocks);
        if cur.eat(&Tok::Semi) {
            continue;
        }
        cur.expect(&Tok::RBracket, "`]`")?;
        break;
    }
    if images.len() != covers.len() {
        return Err(cur.err(format!(
            "coker has {} covers but {} images",
            covers.len(),
            images.len()
        )));
    }
    for (k, blocks) in images.iter().enumerate() {
        if blocks.len() != targets.len() {
            return Err(cur.err(format!(
                "image {} has {} blocks but the map has {} targets",
                k + 1,
                blocks.len(),
                targets.len()
            )));
        }
    }
    Ok(ModuleDef::Coker { covers, targets, images })
}

fn validate(spec: &SessionSpec) -> Result<(), ParseError> {
    let at = |line: usize, message: String| ParseError { line, col: 1, message };

    let mut poset_names = BTreeSet::new();
    for p in &spec.posets {
        if let Some(name) = &p.name {
            if !poset_names.insert(name.clone()) {
                return Err(at(p.line, format!("duplicate poset name `{name}`")));
            }
        }
        if let PosetDecl::Product(a, b) = &p.decl {
            for n in [a, b] {
                if !spec
                    .posets
                    .iter()
                    .any(|q| q.line < p.line && q.name.as_deref() == Some(n))
                {
                    return Err(at(p.line, format!("unknown poset `{n}`")));
                }
            }
        }
    }

    let session = spec.posets.last();
    let slots = match session {
        Some(p) => Some(shape_slots(&spec.posets, &p.decl, p.line)?),
        None => None,
    };
    let need_slots = |line: usize| -> Result<&[Slot], ParseError> {
        slots
            .as_deref()
            .ok_or_else(|| at(line, "no poset declared yet".into()))
    };

    // Generators: unique names, degree arity against the poset, kind
    // agreement with the declared algebra kind.
    let lattice_rank = slots.as_deref().map(|s| {
        s.iter().filter(|x| matches!(x, Slot::Int)).count()
    });
    let finite_labels: Vec<String> = slots
        .as_deref()
        .unwrap_or(&[])
        .iter()
        .filter_map(|s| match s {
            Slot::Atom(l) => Some(l.clone()),
            Slot::Int => None,
        })
        .flatten()
        .collect();
    let mut gen_names = BTreeSet::new();
    for g in &spec.gens {
        if !gen_names.insert(g.name.clone()) {
            return Err(at(g.line, format!("duplicate generator `{}`", g.name)));
        }
        need_slots(g.line)?;
        let kind = match &g.degree {
            DegreeDecl::Shift(_) => AlgKind::Invariant,
            DegreeDecl::Arrow(..) => AlgKind::Arrows,
            DegreeDecl::Mixed(..) => AlgKind::Mixed,
        };
        if let Some(declared) = spec.algebra_kind {
            if declared != kind {
                return Err(at(
                    g.line,
                    format!(
                        "generator `{}` is not of the declared `{}` kind",
                        g.name,
                        declared.keyword()
                    ),
                ));
            }
        }
        match &g.degree {
            DegreeDecl::Shift(d) | DegreeDecl::Mixed(d, _, _) => {
                let rank = lattice_rank.unwrap_or(0);
                if d.len() != rank {
                    return Err(at(
                        g.line,
                        format!(
                            "generator `{}` has a degree of rank {}, the poset has rank {rank}",
                            g.name,
                            d.len()
                        ),
                    ));
                }
            }
            DegreeDecl::Arrow(..) => {}
        }
        match &g.degree {
            DegreeDecl::Arrow(f, t) | DegreeDecl::Mixed(_, f, t) => {
                for e in [f, t] {
                    if !finite_labels.contains(e) {
                        return Err(at(g.line, format!("unknown element `{e}`")));
                    }
                }
            }
            DegreeDecl::Shift(_) => {}
        }
    }

    // Relations: span arity, then term-by-term homogeneity.
    let table = GenTable { gens: &spec.gens };
    for r in &spec.rels {
        need_slots(r.line)?;
        match &r.span {
            DegreeDecl::Shift(d) | DegreeDecl::Mixed(d, _, _) => {
                let rank = lattice_rank.unwrap_or(0);
                if d.len() != rank {
                    return Err(at(
                        r.line,
                        format!("relation span has rank {}, the poset has rank {rank}", d.len()),
                    ));
                }
            }
            DegreeDecl::Arrow(..) => {}
        }
        check_homogeneous(&table, &r.span, &r.terms, r.line)?;
    }

    // Modules: unique names, member indices, known generators in images.
    let mut module_names = BTreeSet::new();
    for m in &spec.modules {
        if !module_names.insert(m.name.clone()) {
            return Err(at(m.line, format!("duplicate module `{}`", m.name)));
        }
        let slots = need_slots(m.line)?;
        match &m.def {
            ModuleDef::Free(i) | ModuleDef::Simple(i) => check_index(slots, i, m.line, "index")?,
            ModuleDef::Coker { covers, targets, images } => {
                for i in covers.iter().chain(targets) {
                    check_index(slots, i, m.line, "index")?;
                }
                for blocks in images {
                    for e in blocks {
                        for t in e {
                            for name in &t.word {
                                if table.get(name).is_none() {
                                    return Err(ParseError {
                                        line: m.line,
                                        col: t.col,
                                        message: format!("unknown generator `{name}`"),
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    if let Some((lo, hi)) = &spec.window {
        let slots = need_slots(spec.window_line)?;
        check_index(slots, lo, spec.window_line, "window corner")?;
        check_index(slots, hi, spec.window_line, "window corner")?;
    }

    for (k, c) in spec.commands.iter().enumerate() {
        let line = spec.command_lines.get(k).copied().unwrap_or(0);
        validate_command(spec, slots.as_deref(), c, line)?;
    }
    Ok(())
}

fn validate_command(
    spec: &SessionSpec,
    slots: Option<&[Slot]>,
    c: &Command,
    line: usize,
) -> Result<(), ParseError> {
    let err = |message: String| ParseError { line, col: 1, message };
    let slots = slots.ok_or_else(|| err("commands need a poset declared first".into()))?;
    let index = |i: &RawIndex| check_index(slots, i, line, "index");
    let modref = |m: &ModRef| -> Result<(), ParseError> {
        match m {
            ModRef::Named(n) => {
                if spec.modules.iter().any(|d| &d.name == n) {
                    Ok(())
                } else {
                    Err(err(format!("unknown module `{n}`")))
                }
            }
            ModRef::Free(i) | ModRef::Simple(i) => index(i),
        }
    };
    match c {
        Command::Dims { module, lo, hi } => {
            if let Some(m) = module {
                modref(m)?;
            }
            index(lo)?;
            index(hi)
        }
        Command::Tail { module, cut, .. } => {
            modref(module)?;
            index(cut)
        }
        Command::Gens { module } | Command::Torsion { module } | Command::Tau { module } => {
            modref(module)
        }
        Command::Hom { source, target } | Command::QgrHom { source, target } => {
            modref(source)?;
            modref(target)
        }
        Command::Saturate { module, at } => {
            modref(module)?;
            index(at)
        }
        Command::Chi1 { module, cut } => {
            modref(module)?;
            index(cut)
        }
        Command::ASeq { entries } => {
            for e in entries {
                match e {
                    SeqEntry::Free(i) | SeqEntry::Simple(i) => index(i)?,
                    SeqEntry::At(n, i) => {
                        modref(&ModRef::Named(n.clone()))?;
                        index(i)?;
                    }
                }
            }
            Ok(())
        }
        Command::Check(ck) => match ck {
            CheckCmd::Star { window } | CheckCmd::Cocompact { window } | CheckCmd::Strong { window } => {
                if let Some((lo, hi)) = window {
                    index(lo)?;
                    index(hi)?;
                }
                Ok(())
            }
            CheckCmd::Coherence { module } => {
                let decl = spec
                    .modules
                    .iter()
                    .find(|d| &d.name == module)
                    .ok_or_else(|| err(format!("unknown module `{module}`")))?;
                match decl.def {
                    ModuleDef::Coker { .. } => Ok(()),
                    _ => Err(err(format!(
                        "coherence probes need a cokernel-presented module, `{module}` is not one"
                    ))),
                }
            }
            CheckCmd::Sequence { samples } => {
                for s in samples {
                    modref(s)?;
                }
                Ok(())
            }
        },
    }
}

// ---------------------------------------------------------------------------
// printing

/// Canonical text for a session; `parse` of the result reproduces the
/// same session.
pub fn print(spec: &SessionSpec) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    if let Some(name) = &spec.name {
        writeln!(out, "session {name}").unwrap();
    }
    for p in &spec.posets {
        write!(out, "poset ").unwrap();
        if let Some(n) = &p.name {
            write!(out, "{n} ").unwrap();
        }
        match &p.decl {
            PosetDecl::ZLattice(r) => writeln!(out, "zlattice {r}").unwrap(),
            PosetDecl::Finite { labels, rels } => {
                let rels: Vec<String> =
                    rels.iter().map(|(a, b)| format!("{a}<{b}")).collect();
                writeln!(out, "finite {{{}}} {{{}}}", labels.join(","), rels.join(", ")).unwrap();
            }
            PosetDecl::Product(a, b) => writeln!(out, "product {a} {b}").unwrap(),
        }
    }
    if let Some(f) = &spec.field {
        writeln!(out, "field {f}").unwrap();
    }
    if let Some(k) = spec.algebra_kind {
        writeln!(out, "algebra {}", k.keyword()).unwrap();
    }
    for g in &spec.gens {
        writeln!(out, "gen {} {}", g.name, g.degree).unwrap();
    }
    for r in &spec.rels {
        writeln!(out, "rel {}: {}", r.span, ExprDisplay(&r.terms)).unwrap();
    }
    for m in &spec.modules {
        match &m.def {
            ModuleDef::Free(i) => writeln!(out, "module {} = free P{i}", m.name).unwrap(),
            ModuleDef::Simple(i) => writeln!(out, "module {} = simple S{i}", m.name).unwrap(),
            ModuleDef::Coker { covers, targets, images } => {
                let ps = |v: &[RawIndex]| {
                    v.iter().map(|i| format!("P{i}")).collect::<Vec<_>>().join(" ")
                };
                let imgs = images
                    .iter()
                    .map(|blocks| {
                        blocks
                            .iter()
                            .map(|e| format!("{}", ExprDisplay(e)))
                            .collect::<Vec<_>>()
                            .join(", ")
                    })
                    .collect::<Vec<_>>()
                    .join(" ; ");
                writeln!(
                    out,
                    "module {} = coker [ {} -> {} : {} ]",
                    m.name,
                    ps(covers),
                    ps(targets),
                    imgs
                )
                .unwrap();
            }
        }
    }
    if let Some((lo, hi)) = &spec.window {
        writeln!(out, "window {lo} {hi}").unwrap();
    }
    for c in &spec.commands {
        writeln!(out, "run {c}").unwrap();
    }
    out
}
