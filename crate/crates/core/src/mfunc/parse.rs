//! Line-oriented scenario language.
//!
//! ```text
//! # comment
//! matrix A = [[0, 1], [0, 0]]
//! function F = resolvent(A)
//! region rect re=[0.5, 2] im=[-1, 1] grid=101x101
//! ```
//!
//! Function forms: a matrix literal of scalar expressions in `z`,
//! `resolvent(A)`, `pencil(A)`, `expz(A)`, `blockdiag(f, g, ..)`,
//! `conj(U, f, V)`, `taylor(c; C0, C1, ..)` with an optional trailing
//! `; radius`, and `block(f, start, size)` for a diagonal sub-block.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use super::expr::format_complex;
use super::{FunctionError, MatrixFunction, Region, ScalarExpr, Shape};
use crate::linalg::{CMatrix, LinalgError, MAX_DIM};

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub name: String,
    pub function: MatrixFunction,
    pub region: Region,
    pub bindings: BTreeMap<String, CMatrix>,
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseErrorKind {
    #[error("expected {expected}, found {found}")]
    Syntax { expected: String, found: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("conjugating matrix is not unitary (residual {residual:e})")]
    NonUnitary { residual: f64 },
    #[error("dimension {0} exceeds the cap of {MAX_DIM}")]
    TooLarge(usize),
    #[error("unknown matrix `{0}`")]
    UnknownMatrix(String),
    #[error("duplicate {0}")]
    Duplicate(String),
    #[error("missing {0}")]
    Missing(String),
    #[error("matrix entries must be constant")]
    NotConstant,
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("{0}")]
    Invalid(String),
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { value: f64, imag: bool },
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num { .. } => write!(f, "number"),
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Sym(c) => write!(f, "`{c}`"),
            Tok::End => write!(f, "end of line"),
        }
    }
}

fn tokenize(line: &str, lineno: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let ch = chars[i];
        let col = i + 1;
        if ch == '#' {
            break;
        }
        if ch.is_whitespace() {
            i += 1;
            continue;
        }
        if ch.is_ascii_digit() || (ch == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let text: String = chars[start..i].iter().collect();
            let value: f64 = text.parse().map_err(|_| ParseError {
                line: lineno,
                column: col,
                kind: ParseErrorKind::Syntax {
                    expected: "number".into(),
                    found: format!("`{text}`"),
                },
            })?;
            let imag = chars.get(i) == Some(&'i') && !chars.get(i + 1).is_some_and(|c| c.is_alphanumeric() || *c == '_');
            if imag {
                i += 1;
            }
            out.push((Tok::Num { value, imag }, col));
            continue;
        }
        if ch.is_alphabetic() || ch == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let sym = match ch {
            '\u{2212}' => '-',
            '\u{00b7}' => '*',
            c => c,
        };
        if "+-*()[],;=".contains(sym) {
            out.push((Tok::Sym(sym), col));
            i += 1;
            continue;
        }
        return Err(ParseError {
            line: lineno,
            column: col,
            kind: ParseErrorKind::Syntax {
                expected: "token".into(),
                found: format!("`{ch}`"),
            },
        });
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

const RESERVED: &[&str] = &[
    "i", "z", "exp", "matrix", "function", "region", "resolvent", "pencil", "expz", "blockdiag", "conj", "taylor",
    "block",
];

struct Cursor<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    line: usize,
    bindings: &'a BTreeMap<String, CMatrix>,
}

impl Cursor<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn column(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(&self, column: usize, kind: ParseErrorKind) -> ParseError {
        ParseError {
            line: self.line,
            column,
            kind,
        }
    }

    fn error(&self, kind: ParseErrorKind) -> ParseError {
        self.error_at(self.column(), kind)
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        self.error(ParseErrorKind::Syntax {
            expected: expected.into(),
            found: self.peek().to_string(),
        })
    }

    fn eat(&mut self, sym: char) -> bool {
        if *self.peek() == Tok::Sym(sym) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: char) -> Result<(), ParseError> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{sym}`")))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if *self.peek() == Tok::End {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = ScalarExpr::add(acc, self.term()?);
            } else if self.eat('-') {
                acc = ScalarExpr::sub(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    // term := unary ('*' unary)*
    fn term(&mut self) -> Result<ScalarExpr, ParseError> {
        let mut acc = self.unary()?;
        while self.eat('*') {
            acc = ScalarExpr::mul(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ScalarExpr, ParseError> {
        if self.eat('-') {
            Ok(ScalarExpr::neg(self.unary()?))
        } else if self.eat('+') {
            self.unary()
        } else {
            self.primary()
        }
    }

    fn primary(&mut self) -> Result<ScalarExpr, ParseError> {
        match self.peek().clone() {
            Tok::Num { value, imag } => {
                self.bump();
                Ok(ScalarExpr::constant(if imag {
                    Complex64::new(0.0, value)
                } else {
                    Complex64::new(value, 0.0)
                }))
            }
            Tok::Ident(s) if s == "i" => {
                self.bump();
                Ok(ScalarExpr::constant(Complex64::new(0.0, 1.0)))
            }
            Tok::Ident(s) if s == "z" => {
                self.bump();
                Ok(ScalarExpr::Z)
            }
            Tok::Ident(s) if s == "exp" => {
                self.bump();
                self.expect('(')?;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(ScalarExpr::exp(inner))
            }
            Tok::Sym('(') => {
                self.bump();
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            _ => Err(self.unexpected("number, `i`, `z`, `exp` or `(`")),
        }
    }

    fn constant(&mut self, what: &str) -> Result<Complex64, ParseError> {
        let col = self.column();
        let e = self.expr()?;
        e.as_const().ok_or_else(|| {
            self.error_at(
                col,
                ParseErrorKind::Syntax {
                    expected: what.into(),
                    found: "expression in z".into(),
                },
            )
        })
    }

    fn real(&mut self, what: &str) -> Result<f64, ParseError> {
        let col = self.column();
        let c = self.constant(what)?;
        if c.im != 0.0 || !c.re.is_finite() {
            return Err(self.error_at(
                col,
                ParseErrorKind::Syntax {
                    expected: what.into(),
                    found: format_complex(c),
                },
            ));
        }
        Ok(c.re)
    }

    fn integer(&mut self, what: &str) -> Result<usize, ParseError> {
        match self.peek().clone() {
            Tok::Num { value, imag: false } if value.fract() == 0.0 && (0.0..1e9).contains(&value) => {
                self.bump();
                Ok(value as usize)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    /// `[[e, ..], ..]` as a square grid of expressions.
    fn grid(&mut self) -> Result<(usize, Vec<ScalarExpr>), ParseError> {
        let col = self.column();
        self.expect('[')?;
        let mut rows: Vec<Vec<ScalarExpr>> = Vec::new();
        loop {
            let row_col = self.column();
            self.expect('[')?;
            let mut row = vec![self.expr()?];
            while self.eat(',') {
                row.push(self.expr()?);
            }
            self.expect(']')?;
            if let Some(first) = rows.first() {
                if row.len() != first.len() {
                    return Err(self.error_at(
                        row_col,
                        ParseErrorKind::DimensionMismatch {
                            expected: first.len(),
                            found: row.len(),
                        },
                    ));
                }
            }
            rows.push(row);
            if !self.eat(',') {
                break;
            }
        }
        self.expect(']')?;
        let n = rows.len();
        if n > MAX_DIM {
            return Err(self.error_at(col, ParseErrorKind::TooLarge(n)));
        }
        if rows[0].len() != n {
            return Err(self.error_at(
                col,
                ParseErrorKind::DimensionMismatch {
                    expected: n,
                    found: rows[0].len(),
                },
            ));
        }
        Ok((n, rows.into_iter().flatten().collect()))
    }

    fn constant_matrix(&mut self) -> Result<CMatrix, ParseError> {
        let col = self.column();
        let (n, entries) = self.grid()?;
        let values: Option<Vec<Complex64>> = entries.iter().map(ScalarExpr::as_const).collect();
        let values = values.ok_or_else(|| self.error_at(col, ParseErrorKind::NotConstant))?;
        CMatrix::from_vec(n, values).map_err(|e| self.error_at(col, linalg_kind(e)))
    }

    fn named_matrix(&mut self) -> Result<CMatrix, ParseError> {
        let col = self.column();
        let name = self.ident("matrix name")?;
        self.bindings
            .get(&name)
            .cloned()
            .ok_or_else(|| self.error_at(col, ParseErrorKind::UnknownMatrix(name)))
    }

    fn funexpr(&mut self) -> Result<MatrixFunction, ParseError> {
        let col = self.column();
        if *self.peek() == Tok::Sym('[') {
            let (n, entries) = self.grid()?;
            return MatrixFunction::entrywise(n, entries).map_err(|e| self.error_at(col, function_kind(e)));
        }
        let head = self.ident("function form")?;
        self.expect('(')?;
        let f = match head.as_str() {
            "resolvent" => MatrixFunction::Resolvent(self.named_matrix()?),
            "pencil" => MatrixFunction::Pencil(self.named_matrix()?),
            "expz" => MatrixFunction::ExpFamily(self.named_matrix()?),
            "blockdiag" => {
                let mut blocks = vec![self.funexpr()?];
                while self.eat(',') {
                    blocks.push(self.funexpr()?);
                }
                MatrixFunction::block_diag(blocks).map_err(|e| self.error_at(col, function_kind(e)))?
            }
            "conj" => {
                let u = self.named_matrix()?;
                self.expect(',')?;
                let inner = self.funexpr()?;
                self.expect(',')?;
                let v = self.named_matrix()?;
                MatrixFunction::unitary_conjugate(u, inner, v).map_err(|e| self.error_at(col, function_kind(e)))?
            }
            "taylor" => {
                let center = self.constant("complex center")?;
                self.expect(';')?;
                let mut coeffs = vec![self.constant_matrix()?];
                while self.eat(',') {
                    coeffs.push(self.constant_matrix()?);
                }
                let radius = if self.eat(';') {
                    self.real("radius")?
                } else {
                    f64::INFINITY
                };
                MatrixFunction::taylor(center, coeffs, radius).map_err(|e| self.error_at(col, function_kind(e)))?
            }
            "block" => {
                let inner = self.funexpr()?;
                self.expect(',')?;
                let start = self.integer("block start")?;
                self.expect(',')?;
                let size = self.integer("block size")?;
                MatrixFunction::principal(inner, start, size).map_err(|e| self.error_at(col, function_kind(e)))?
            }
            other => {
                return Err(self.error_at(
                    col,
                    ParseErrorKind::Syntax {
                        expected: "matrix literal, resolvent, pencil, expz, blockdiag, conj, taylor or block".into(),
                        found: format!("`{other}`"),
                    },
                ))
            }
        };
        self.expect(')')?;
        Ok(f)
    }

    fn region(&mut self) -> Result<Region, ParseError> {
        let shape_col = self.column();
        let shape = self.ident("`rect` or `disk`")?;
        let mut keys: BTreeMap<String, usize> = BTreeMap::new();
        let interval = |c: &mut Self| -> Result<(f64, f64), ParseError> {
            c.expect('[')?;
            let a = c.real("real bound")?;
            c.expect(',')?;
            let b = c.real("real bound")?;
            c.expect(']')?;
            Ok((a, b))
        };
        let (mut re, mut im, mut grid, mut center, mut radius) = (None, None, None, None, None);
        while *self.peek() != Tok::End {
            let col = self.column();
            let key = self.ident("region key")?;
            if keys.insert(key.clone(), col).is_some() {
                return Err(self.error_at(col, ParseErrorKind::Duplicate(format!("region key `{key}`"))));
            }
            self.expect('=')?;
            match (shape.as_str(), key.as_str()) {
                ("rect", "re") => re = Some(interval(self)?),
                ("rect", "im") => im = Some(interval(self)?),
                ("disk", "center") => center = Some(self.constant("complex center")?),
                ("disk", "radius") => radius = Some(self.real("radius")?),
                (_, "grid") => grid = Some(self.grid_counts()?),
                _ => {
                    return Err(self.error_at(
                        col,
                        ParseErrorKind::Syntax {
                            expected: "region key".into(),
                            found: format!("`{key}`"),
                        },
                    ))
                }
            }
        }
        let missing = |what: &str| ParseError {
            line: self.line,
            column: shape_col,
            kind: ParseErrorKind::Missing(format!("region {what}")),
        };
        let (n1, n2) = grid.ok_or_else(|| missing("grid"))?;
        let region = match shape.as_str() {
            "rect" => Region::rect(
                re.ok_or_else(|| missing("re"))?,
                im.ok_or_else(|| missing("im"))?,
                n1,
                n2,
            ),
            "disk" => Region::disk(
                center.ok_or_else(|| missing("center"))?,
                radius.ok_or_else(|| missing("radius"))?,
                n1,
                n2,
            ),
            other => {
                return Err(self.error_at(
                    shape_col,
                    ParseErrorKind::Syntax {
                        expected: "`rect` or `disk`".into(),
                        found: format!("`{other}`"),
                    },
                ))
            }
        };
        region.map_err(|e| self.error_at(shape_col, function_kind(e)))
    }

    // `NxM` lexes as a number followed by an identifier `xM`.
    fn grid_counts(&mut self) -> Result<(usize, usize), ParseError> {
        let n1 = self.integer("grid count")?;
        let col = self.column();
        match self.peek().clone() {
            Tok::Ident(s) if s == "x" => {
                self.bump();
                Ok((n1, self.integer("grid count")?))
            }
            Tok::Ident(s) if s.starts_with('x') && s[1..].chars().all(|c| c.is_ascii_digit()) && s.len() > 1 => {
                self.bump();
                let n2 = s[1..].parse().map_err(|_| {
                    self.error_at(
                        col,
                        ParseErrorKind::Syntax {
                            expected: "grid count".into(),
                            found: format!("`{s}`"),
                        },
                    )
                })?;
                Ok((n1, n2))
            }
            _ => Err(self.unexpected("`x`")),
        }
    }
}

fn linalg_kind(e: LinalgError) -> ParseErrorKind {
    match e {
        LinalgError::TooLarge(n) => ParseErrorKind::TooLarge(n),
        LinalgError::DimensionMismatch { expected, found } => ParseErrorKind::DimensionMismatch { expected, found },
        other => ParseErrorKind::Invalid(other.to_string()),
    }
}

fn function_kind(e: FunctionError) -> ParseErrorKind {
    match e {
        FunctionError::DimensionMismatch { expected, found } => ParseErrorKind::DimensionMismatch { expected, found },
        FunctionError::NotUnitary { residual } => ParseErrorKind::NonUnitary { residual },
        FunctionError::InvalidRegion(msg) => ParseErrorKind::InvalidRegion(msg),
        FunctionError::Linalg(l) => linalg_kind(l),
        other => ParseErrorKind::Invalid(other.to_string()),
    }
}

/// Parses a scenario file: named constant matrices, exactly one function and one region.
pub fn parse_scenario(text: &str) -> Result<Scenario, ParseError> {
    let mut bindings = BTreeMap::new();
    let mut function: Option<(String, MatrixFunction)> = None;
    let mut region = None;
    let mut last_line = 1;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let toks = tokenize(line, lineno)?;
        if toks[0].0 == Tok::End {
            continue;
        }
        let mut cur = Cursor {
            toks,
            pos: 0,
            line: lineno,
            bindings: &bindings,
        };
        let col = cur.column();
        let head = cur.ident("`matrix`, `function` or `region`")?;
        match head.as_str() {
            "matrix" => {
                let name_col = cur.column();
                let name = cur.ident("matrix name")?;
                if RESERVED.contains(&name.as_str()) {
                    return Err(cur.error_at(
                        name_col,
                        ParseErrorKind::Syntax {
                            expected: "matrix name".into(),
                            found: format!("reserved word `{name}`"),
                        },
                    ));
                }
                cur.expect('=')?;
                let m = cur.constant_matrix()?;
                cur.finish()?;
                if bindings.contains_key(&name) {
                    return Err(cur.error_at(name_col, ParseErrorKind::Duplicate(format!("matrix `{name}`"))));
                }
                bindings.insert(name, m);
            }
            "function" => {
                let name = cur.ident("function name")?;
                cur.expect('=')?;
                let f = cur.funexpr()?;
                cur.finish()?;
                if function.is_some() {
                    return Err(cur.error_at(col, ParseErrorKind::Duplicate("function".into())));
                }
                function = Some((name, f));
            }
            "region" => {
                let r = cur.region()?;
                if region.is_some() {
                    return Err(cur.error_at(col, ParseErrorKind::Duplicate("region".into())));
                }
                region = Some(r);
            }
            other => {
                return Err(cur.error_at(
                    col,
                    ParseErrorKind::Syntax {
                        expected: "`matrix`, `function` or `region`".into(),
                        found: format!("`{other}`"),
                    },
                ))
            }
        }
    }
    let missing = |what: &str| ParseError {
        line: last_line,
        column: 1,
        kind: ParseErrorKind::Missing(what.into()),
    };
    let (name, function) = function.ok_or_else(|| missing("function"))?;
    let region = region.ok_or_else(|| missing("region"))?;
    Ok(Scenario {
        name,
        function,
        region,
        bindings,
    })
}

fn format_real(x: f64) -> String {
    format!("{x:?}")
}

fn format_grid(n: usize, entries: &[String]) -> String {
    let rows: Vec<String> = entries.chunks(n).map(|r| format!("[{}]", r.join(", "))).collect();
    format!("[{}]", rows.join(", "))
}

fn format_matrix(m: &CMatrix) -> String {
    let entries: Vec<String> = m.as_slice().iter().map(|&c| format_complex(c)).collect();
    format_grid(m.dim(), &entries)
}

struct Printer {
    bindings: Vec<String>,
}

impl Printer {
    fn bind(&mut self, m: &CMatrix) -> String {
        let name = format!("M{}", self.bindings.len());
        self.bindings.push(format!("matrix {name} = {}", format_matrix(m)));
        name
    }

    fn function(&mut self, f: &MatrixFunction) -> String {
        match f {
            MatrixFunction::Entrywise { n, entries } => {
                let cells: Vec<String> = entries.iter().map(ToString::to_string).collect();
                format_grid(*n, &cells)
            }
            MatrixFunction::Taylor { center, coeffs, radius } => {
                let cs: Vec<String> = coeffs.iter().map(format_matrix).collect();
                let tail = if radius.is_finite() {
                    format!("; {}", format_real(*radius))
                } else {
                    String::new()
                };
                format!("taylor({}; {}{tail})", format_complex(*center), cs.join(", "))
            }
            MatrixFunction::Pencil(a) => format!("pencil({})", self.bind(a)),
            MatrixFunction::Resolvent(a) => format!("resolvent({})", self.bind(a)),
            MatrixFunction::ExpFamily(a) => format!("expz({})", self.bind(a)),
            MatrixFunction::BlockDiag(blocks) => {
                let parts: Vec<String> = blocks.iter().map(|b| self.function(b)).collect();
                format!("blockdiag({})", parts.join(", "))
            }
            MatrixFunction::UnitaryConjugate { u, inner, v } => {
                let u = self.bind(u);
                let inner = self.function(inner);
                let v = self.bind(v);
                format!("conj({u}, {inner}, {v})")
            }
            MatrixFunction::Principal { inner, start, size } => {
                format!("block({}, {start}, {size})", self.function(inner))
            }
        }
    }
}

fn format_region(r: &Region) -> String {
    match r.shape {
        Shape::Rect {
            re_min,
            re_max,
            im_min,
            im_max,
        } => format!(
            "region rect re=[{}, {}] im=[{}, {}] grid={}x{}",
            format_real(re_min),
            format_real(re_max),
            format_real(im_min),
            format_real(im_max),
            r.n1,
            r.n2
        ),
        Shape::Disk { center, radius } => format!(
            "region disk center={} radius={} grid={}x{}",
            format_complex(center),
            format_real(radius),
            r.n1,
            r.n2
        ),
    }
}

/// Scenario text that parses back to `f` and `region`.
pub fn to_scenario_text(f: &MatrixFunction, region: &Region) -> String {
    let mut p = Printer { bindings: Vec::new() };
    let body = p.function(f);
    let mut out = String::new();
    for b in &p.bindings {
        out.push_str(b);
        out.push('\n');
    }
    out.push_str(&format!("function F = {body}\n"));
    out.push_str(&format_region(region));
    out.push('\n');
    out
}
