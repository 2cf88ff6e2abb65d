//! Command-line front end: the set / step-function expression language,
//! fixture loading, and verb dispatch with text or JSON output.
//!
//! Grammar (whitespace between tokens is ignored):
//!
//! ```text
//! set      := item ("U" item)*
//! item     := "{}" | "(" bound "," bound "]"
//! bound    := ["+" | "-"] (rational | "inf")
//! fn       := ["+" | "-"] term (("+" | "-") term)*
//! term     := rational "*" "1[" set ["x" set] "]"
//! rects    := set "x" set (";" set "x" set)*
//! rational := digits ["/" digits]
//! ```

use std::ffi::OsString;
use std::fmt;
use std::io::Write;

use clap::{ArgGroup, Args, Parser, Subcommand};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::integral::{fubini_check, integrate, product_measure, RectSet, StepFn2};
use crate::intervals::IntervalSet;
use crate::measure::{
    caratheodory_sets, check_measure_axioms, check_outer_axioms, completeness_report,
    outer_extend, AxiomReport, OuterTable, SetFunction, SetTable, WeightMeasure,
};
use crate::simplefn::{MeasureSpec, PointMasses, StepFn};
use crate::structures::{check_class, generate_closure, ClassKind, FiniteFamily, FiniteUniverse};
use crate::xreal::{parse_rational, XReal};

/// A syntax error in an expression, located by byte offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseDiagnostic {
    pub offset: usize,
    pub expected: Vec<String>,
    pub found: String,
    pub message: String,
}

impl ParseDiagnostic {
    fn unexpected(offset: usize, expected: &[&str], found: &str) -> Self {
        let expected: Vec<String> = expected.iter().map(|s| s.to_string()).collect();
        let message = format!("expected {}, found {found}", join_alternatives(&expected));
        ParseDiagnostic {
            offset,
            expected,
            found: found.to_string(),
            message,
        }
    }

    fn custom(offset: usize, found: &str, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            offset,
            expected: Vec::new(),
            found: found.to_string(),
            message: message.into(),
        }
    }

    /// The message followed by the input with a caret under the offset.
    pub fn render(&self, input: &str) -> String {
        let col = input[..self.offset.min(input.len())].chars().count();
        format!("{self}\n  {input}\n  {}^", " ".repeat(col))
    }
}

impl fmt::Display for ParseDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at byte {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for ParseDiagnostic {}

fn join_alternatives(items: &[String]) -> String {
    match items {
        [] => String::new(),
        [one] => one.clone(),
        [init @ .., last] => format!("{} or {last}", init.join(", ")),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    RBracket,
    Comma,
    Union,
    Times,
    Plus,
    Minus,
    Star,
    Indicator,
    Empty,
    Semi,
    Inf,
    Num(BigRational),
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    start: usize,
    end: usize,
}

const RATIONAL: &str = "rational";

fn lex(input: &str) -> Result<Vec<Token>, ParseDiagnostic> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let single = match c {
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            b']' => Some(Tok::RBracket),
            b',' => Some(Tok::Comma),
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b';' => Some(Tok::Semi),
            _ => None,
        };
        if let Some(tok) = single {
            out.push(Token { tok, start, end: i + 1 });
            i += 1;
            continue;
        }
        if c.is_ascii_whitespace() {
            i += 1;
        } else if c == b'{' {
            let mut j = i + 1;
            while j < bytes.len() && bytes[j].is_ascii_whitespace() {
                j += 1;
            }
            if bytes.get(j) != Some(&b'}') {
                return Err(ParseDiagnostic::unexpected(j, &["`}`"], &found_at(input, j)));
            }
            out.push(Token { tok: Tok::Empty, start, end: j + 1 });
            i = j + 1;
        } else if c.is_ascii_digit() {
            let mut j = i;
            while j < bytes.len() && bytes[j].is_ascii_digit() {
                j += 1;
            }
            if bytes.get(j) == Some(&b'.') {
                return Err(ParseDiagnostic::custom(
                    start,
                    &input[start..(j + 1).min(input.len())],
                    "decimal literals are not accepted; write a fraction such as 1/10",
                ));
            }
            if &input[i..j] == "1" && bytes.get(j) == Some(&b'[') {
                out.push(Token { tok: Tok::Indicator, start, end: j + 1 });
                i = j + 1;
                continue;
            }
            if bytes.get(j) == Some(&b'/') {
                let k0 = j + 1;
                let mut k = k0;
                while k < bytes.len() && bytes[k].is_ascii_digit() {
                    k += 1;
                }
                if k == k0 {
                    return Err(ParseDiagnostic::unexpected(k0, &["denominator digits"], &found_at(input, k0)));
                }
                j = k;
            }
            let text = &input[start..j];
            let value = parse_rational(text)
                .ok_or_else(|| ParseDiagnostic::custom(start, text, "zero denominator"))?;
            out.push(Token { tok: Tok::Num(value), start, end: j });
            i = j;
        } else if c.is_ascii_alphabetic() {
            let mut j = i;
            while j < bytes.len() && bytes[j].is_ascii_alphanumeric() {
                j += 1;
            }
            let tok = match &input[i..j] {
                "U" => Tok::Union,
                "x" => Tok::Times,
                "inf" => Tok::Inf,
                word => {
                    return Err(ParseDiagnostic::custom(
                        start,
                        &format!("`{word}`"),
                        format!("unknown word `{word}`"),
                    ))
                }
            };
            out.push(Token { tok, start, end: j });
            i = j;
        } else {
            let ch = input[i..].chars().next().unwrap_or('?');
            return Err(ParseDiagnostic::custom(
                start,
                &format!("`{ch}`"),
                format!("unexpected character `{ch}`"),
            ));
        }
    }
    out.push(Token { tok: Tok::Eof, start: input.len(), end: input.len() });
    Ok(out)
}

fn found_at(input: &str, offset: usize) -> String {
    match input[offset.min(input.len())..].chars().next() {
        None => "end of input".to_string(),
        Some(c) => format!("`{c}`"),
    }
}

/// A parsed step-function expression of either dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FnExpr {
    OneDim(StepFn),
    TwoDim(StepFn2),
}

struct ExprParser<'a> {
    input: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> ExprParser<'a> {
    fn new(input: &'a str) -> Result<Self, ParseDiagnostic> {
        Ok(ExprParser { input, toks: lex(input)?, pos: 0 })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn lexeme(&self, t: &Token) -> String {
        if t.tok == Tok::Eof {
            "end of input".to_string()
        } else {
            format!("`{}`", &self.input[t.start..t.end])
        }
    }

    fn error(&self, expected: &[&str]) -> ParseDiagnostic {
        let t = self.peek();
        ParseDiagnostic::unexpected(t.start, expected, &self.lexeme(t))
    }

    fn expect(&mut self, tok: Tok, name: &str) -> Result<Token, ParseDiagnostic> {
        if self.peek().tok == tok {
            Ok(self.bump())
        } else {
            Err(self.error(&[name]))
        }
    }

    fn finish(&self, also: &[&str]) -> Result<(), ParseDiagnostic> {
        if self.peek().tok == Tok::Eof {
            return Ok(());
        }
        let mut expected = also.to_vec();
        expected.push("end of input");
        Err(self.error(&expected))
    }

    fn bound(&mut self) -> Result<(XReal, usize), ParseDiagnostic> {
        let start = self.peek().start;
        let negative = match self.peek().tok {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let value = match self.peek().tok.clone() {
            Tok::Inf => {
                self.bump();
                if negative { XReal::NegInf } else { XReal::PosInf }
            }
            Tok::Num(q) => {
                self.bump();
                XReal::Fin(if negative { -q } else { q })
            }
            _ => return Err(self.error(&[RATIONAL, "`inf`"])),
        };
        Ok((value, start))
    }

    fn interval(&mut self) -> Result<(XReal, XReal), ParseDiagnostic> {
        self.expect(Tok::LParen, "`(`")?;
        let (lo, lo_at) = self.bound()?;
        if lo == XReal::PosInf {
            return Err(ParseDiagnostic::custom(lo_at, "`inf`", "lower bound cannot be +inf"));
        }
        self.expect(Tok::Comma, "`,`")?;
        let (hi, hi_at) = self.bound()?;
        if hi == XReal::NegInf {
            return Err(ParseDiagnostic::custom(hi_at, "`-inf`", "upper bound cannot be -inf"));
        }
        self.expect(Tok::RBracket, "`]`")?;
        Ok((lo, hi))
    }

    fn set(&mut self) -> Result<IntervalSet, ParseDiagnostic> {
        let start = self.peek().start;
        let mut pairs = Vec::new();
        loop {
            match self.peek().tok {
                Tok::Empty => {
                    self.bump();
                }
                Tok::LParen => pairs.push(self.interval()?),
                _ => return Err(self.error(&["`(`", "`{}`"])),
            }
            if self.peek().tok != Tok::Union {
                break;
            }
            self.bump();
        }
        IntervalSet::normalize(pairs).map_err(|e| ParseDiagnostic::custom(start, "interval", e.to_string()))
    }

    /// One term, returning its signed coefficient and its one or two sets.
    fn term(&mut self, negative: bool) -> Result<(BigRational, IntervalSet, Option<IntervalSet>), ParseDiagnostic> {
        let coefficient = match self.peek().tok.clone() {
            Tok::Num(q) => {
                self.bump();
                if negative { -q } else { q }
            }
            _ => return Err(self.error(&[RATIONAL])),
        };
        self.expect(Tok::Star, "`*`")?;
        self.expect(Tok::Indicator, "`1[`")?;
        let sx = self.set()?;
        let sy = if self.peek().tok == Tok::Times {
            self.bump();
            Some(self.set()?)
        } else {
            None
        };
        if self.peek().tok != Tok::RBracket {
            let expected: &[&str] = if sy.is_some() { &["`U`", "`]`"] } else { &["`U`", "`x`", "`]`"] };
            return Err(self.error(expected));
        }
        self.bump();
        Ok((coefficient, sx, sy))
    }

    fn function(&mut self) -> Result<FnExpr, ParseDiagnostic> {
        let mut negative = match self.peek().tok {
            Tok::Minus => {
                self.bump();
                true
            }
            Tok::Plus => {
                self.bump();
                false
            }
            _ => false,
        };
        let mut one = Vec::new();
        let mut two = Vec::new();
        let mut two_dim: Option<bool> = None;
        loop {
            let at = self.peek().start;
            let (c, sx, sy) = self.term(negative)?;
            let is_two = sy.is_some();
            if two_dim.is_some_and(|d| d != is_two) {
                return Err(ParseDiagnostic::custom(
                    at,
                    &self.input[at..self.toks[self.pos - 1].end],
                    "cannot mix one- and two-dimensional terms",
                ));
            }
            two_dim = Some(is_two);
            match sy {
                Some(sy) => two.push((c, sx, sy)),
                None => one.push((c, sx)),
            }
            negative = match self.peek().tok {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => break,
            };
            self.bump();
        }
        self.finish(&["`+`", "`-`"])?;
        Ok(if two_dim == Some(true) {
            FnExpr::TwoDim(StepFn2::make(two))
        } else {
            FnExpr::OneDim(StepFn::make(one))
        })
    }

    fn rects(&mut self) -> Result<RectSet, ParseDiagnostic> {
        let mut rects = Vec::new();
        loop {
            let sx = self.set()?;
            if self.peek().tok != Tok::Times {
                return Err(self.error(&["`U`", "`x`"]));
            }
            self.bump();
            let sy = self.set()?;
            rects.push((sx, sy));
            if self.peek().tok != Tok::Semi {
                break;
            }
            self.bump();
        }
        self.finish(&["`U`", "`;`"])?;
        Ok(RectSet::new(rects))
    }
}

pub fn parse_set_expr(input: &str) -> Result<IntervalSet, ParseDiagnostic> {
    let mut p = ExprParser::new(input)?;
    let set = p.set()?;
    p.finish(&["`U`"])?;
    Ok(set)
}

pub fn parse_stepfn_expr(input: &str) -> Result<FnExpr, ParseDiagnostic> {
    ExprParser::new(input)?.function()
}

/// A union of rectangles such as `(0,1] x (0,3]; (2,3] x (0,1]`.
pub fn parse_rect_set(input: &str) -> Result<RectSet, ParseDiagnostic> {
    ExprParser::new(input)?.rects()
}

/// `lebesgue`, or `points(p:w, ...)` for weighted rational points.
pub fn parse_measure_spec(input: &str) -> Result<MeasureSpec, String> {
    let text = input.trim();
    if text == "lebesgue" {
        return Ok(MeasureSpec::Lebesgue);
    }
    let body = text
        .strip_prefix("points(")
        .and_then(|s| s.strip_suffix(')'))
        .ok_or_else(|| format!("unknown measure {text:?}; expected `lebesgue` or `points(p:w, ...)`"))?;
    let mut points = Vec::new();
    for item in body.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (p, w) = item
            .split_once(':')
            .ok_or_else(|| format!("expected `point:weight`, found {item:?}"))?;
        let p = parse_rational(p).ok_or_else(|| format!("bad point {:?}", p.trim()))?;
        let w: XReal = w.trim().parse().map_err(|e| format!("{e}"))?;
        points.push((p, w));
    }
    PointMasses::new(points)
        .map(MeasureSpec::PointMasses)
        .map_err(|e| e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "measurekit", version, about = "Exact measure and integration calculator")]
pub struct Cli {
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub verb: Verb,
}

#[derive(Debug, Args)]
pub struct LineMeasures {
    /// Measure on the x-axis: `lebesgue` or `points(p:w, ...)`.
    #[arg(long = "x-measure", default_value = "lebesgue")]
    pub x_measure: String,
    /// Measure on the y-axis.
    #[arg(long = "y-measure", default_value = "lebesgue")]
    pub y_measure: String,
}

#[derive(Debug, Args)]
pub struct FamilyArgs {
    #[arg(long)]
    pub universe: String,
    /// Family such as `{};{a};{b,c}`, or `@path` to read it from a file.
    #[arg(long)]
    pub family: String,
}

#[derive(Debug, Subcommand)]
pub enum Verb {
    /// Lebesgue measure of an interval set.
    Measure { set: String },
    /// Integral of a step function over a domain.
    Integrate {
        function: String,
        #[arg(long)]
        domain: Option<String>,
        /// `lebesgue` or `points(p:w, ...)`.
        #[arg(long, default_value = "lebesgue")]
        measure: String,
    },
    /// Canonical disjoint components of an interval set.
    Decomp { set: String },
    /// Check a finite family against a class of sets.
    CheckStructure {
        #[arg(long)]
        kind: String,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Smallest class of a kind containing a family.
    Generate {
        #[arg(long)]
        kind: String,
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Outer measure of every subset, from a measure on a family.
    #[command(group(ArgGroup::new("source").required(true).args(["weights", "table"])))]
    Outer {
        #[arg(long)]
        universe: String,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        table: Option<String>,
    },
    /// Carathéodory-measurable sets of an outer measure.
    #[command(group(ArgGroup::new("source").required(true).args(["weights", "table"])))]
    Caratheodory {
        #[arg(long)]
        universe: String,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        table: Option<String>,
    },
    /// Both iterated integrals and the rectangle sum of a plane step function.
    Fubini {
        function: String,
        #[command(flatten)]
        measures: LineMeasures,
    },
    /// Product measure of a union of rectangles.
    Product {
        rects: String,
        #[command(flatten)]
        measures: LineMeasures,
    },
}

#[derive(Debug)]
enum CliError {
    Parse { input: String, diag: ParseDiagnostic },
    Other(String),
}

impl CliError {
    fn render(&self) -> String {
        match self {
            CliError::Parse { input, diag } => format!("error: {}", diag.render(input)),
            CliError::Other(msg) => format!("error: {msg}"),
        }
    }
}

fn other<E: fmt::Display>(e: E) -> CliError {
    CliError::Other(e.to_string())
}

fn parse_with<T>(input: &str, f: fn(&str) -> Result<T, ParseDiagnostic>) -> Result<T, CliError> {
    f(input).map_err(|diag| CliError::Parse { input: input.to_string(), diag })
}

struct Outcome {
    text: String,
    json: Value,
    passed: bool,
}

fn read_file(path: &str) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Other(format!("{path}: {e}")))
}

fn load_family(universe: &FiniteUniverse, spec: &str) -> Result<FiniteFamily, CliError> {
    let text = match spec.strip_prefix('@') {
        Some(path) => read_file(path)?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .collect::<Vec<_>>()
            .join(";"),
        None => spec.to_string(),
    };
    FiniteFamily::parse(universe.clone(), text.trim()).map_err(other)
}

fn load_universe(csv: &str) -> Result<FiniteUniverse, CliError> {
    FiniteUniverse::parse_csv(csv).map_err(other)
}

fn family_json(f: &FiniteFamily) -> Value {
    Value::from(f.members().iter().map(|&m| f.format_member(m)).collect::<Vec<_>>())
}

fn one_dim(expr: FnExpr) -> Result<StepFn, CliError> {
    match expr {
        FnExpr::OneDim(f) => Ok(f),
        FnExpr::TwoDim(_) => Err(CliError::Other("expected a one-dimensional step function".into())),
    }
}

fn two_dim(expr: FnExpr) -> Result<StepFn2, CliError> {
    match expr {
        FnExpr::TwoDim(f) => Ok(f),
        FnExpr::OneDim(f) if f.is_zero() => Ok(StepFn2::zero()),
        FnExpr::OneDim(_) => Err(CliError::Other(
            "expected a two-dimensional step function with terms like c*1[A x B]".into(),
        )),
    }
}

/// A measure on a finite family, from either a weights or a table fixture.
enum FamilyMeasure {
    Weights(WeightMeasure),
    Table(SetTable),
}

impl FamilyMeasure {
    fn as_set_fn(&self) -> &dyn SetFunction {
        match self {
            FamilyMeasure::Weights(w) => w,
            FamilyMeasure::Table(t) => t,
        }
    }
}

fn load_measure(
    universe: &FiniteUniverse,
    family: Option<&str>,
    weights: Option<&str>,
    table: Option<&str>,
) -> Result<(FamilyMeasure, FiniteFamily), CliError> {
    let family = family.map(|f| load_family(universe, f)).transpose()?;
    if let Some(path) = weights {
        let w = WeightMeasure::parse(universe.clone(), &read_file(path)?).map_err(other)?;
        let family = family.unwrap_or_else(|| FiniteFamily::powerset(universe.clone()));
        let w = WeightMeasure::with_domain(universe.clone(), w.weights().to_vec(), family.clone()).map_err(other)?;
        return Ok((FamilyMeasure::Weights(w), family));
    }
    let path = table.ok_or_else(|| CliError::Other("one of --weights or --table is required".into()))?;
    let t = SetTable::parse(universe.clone(), &read_file(path)?).map_err(other)?;
    let family = family.unwrap_or_else(|| t.domain());
    Ok((FamilyMeasure::Table(t), family))
}

fn axiom_lines(label: &str, report: &AxiomReport, u: &FiniteUniverse, text: &mut String) -> Value {
    let rendered: Vec<String> = report.violations.iter().map(|v| v.render(u)).collect();
    let verdict = if report.holds { "ok" } else { "violated" };
    text.push_str(&format!("{label}: {verdict} [{}]\n", report.mode));
    for r in &rendered {
        text.push_str(&format!("  {r}\n"));
    }
    json!({ "holds": report.holds, "mode": report.mode.to_string(), "violations": rendered })
}

fn execute(verb: &Verb) -> Result<Outcome, CliError> {
    match verb {
        Verb::Measure { set } => {
            let s = parse_with(set, parse_set_expr)?;
            let value = s.lebesgue_measure();
            Ok(Outcome {
                text: format!("{value}\n"),
                json: json!({ "command": "measure", "set": s.to_string(), "value": value.to_string() }),
                passed: true,
            })
        }
        Verb::Integrate { function, domain, measure } => {
            let f = one_dim(parse_with(function, parse_stepfn_expr)?)?;
            let d = match domain {
                Some(d) => parse_with(d, parse_set_expr)?,
                None => IntervalSet::full(),
            };
            let mu = parse_measure_spec(measure).map_err(CliError::Other)?;
            let value = integrate(&mu, &d, &f).map_err(other)?;
            Ok(Outcome {
                text: format!("{value}\n"),
                json: json!({
                    "command": "integrate",
                    "function": f.to_string(),
                    "domain": d.to_string(),
                    "value": value.to_string(),
                }),
                passed: true,
            })
        }
        Verb::Decomp { set } => {
            let s = parse_with(set, parse_set_expr)?;
            let parts: Vec<String> = s.decomp().iter().map(|c| c.to_string()).collect();
            let text = parts.iter().map(|p| format!("{p}\n")).collect();
            Ok(Outcome {
                text,
                json: json!({ "command": "decomp", "set": s.to_string(), "components": parts }),
                passed: true,
            })
        }
        Verb::CheckStructure { kind, family } => {
            let kind: ClassKind = kind.parse().map_err(other)?;
            let u = load_universe(&family.universe)?;
            let fam = load_family(&u, &family.family)?;
            let report = check_class(kind, &fam);
            let rendered: Vec<String> = report.violations.iter().map(|v| v.render(&u)).collect();
            let mut text = format!("{kind}: {}\n", if report.holds { "ok" } else { "violated" });
            for r in &rendered {
                text.push_str(&format!("  {r}\n"));
            }
            Ok(Outcome {
                text,
                json: json!({
                    "command": "check-structure",
                    "kind": kind.name(),
                    "family": fam.to_string(),
                    "holds": report.holds,
                    "violations": rendered,
                }),
                passed: report.holds,
            })
        }
        Verb::Generate { kind, family } => {
            let kind: ClassKind = kind.parse().map_err(other)?;
            let u = load_universe(&family.universe)?;
            let fam = load_family(&u, &family.family)?;
            let closure = generate_closure(kind, &fam);
            Ok(Outcome {
                text: format!("{closure}\n"),
                json: json!({
                    "command": "generate",
                    "kind": kind.name(),
                    "size": closure.len(),
                    "members": family_json(&closure),
                }),
                passed: true,
            })
        }
        Verb::Outer { universe, family, weights, table } => {
            let u = load_universe(universe)?;
            let (mu, fam) = load_measure(&u, family.as_deref(), weights.as_deref(), table.as_deref())?;
            let ot = outer_extend(mu.as_set_fn(), &fam).map_err(other)?;
            let rows: Vec<(String, String)> = u
                .all_subsets()
                .map(|m| (u.format_subset(m), ot.get(m).to_string()))
                .collect();
            let text = rows.iter().map(|(s, v)| format!("{s} {v}\n")).collect();
            let values: Vec<Value> = rows.iter().map(|(s, v)| json!({ "set": s, "value": v })).collect();
            Ok(Outcome {
                text,
                json: json!({ "command": "outer", "values": values }),
                passed: true,
            })
        }
        Verb::Caratheodory { universe, family, weights, table } => {
            let u = load_universe(universe)?;
            let (mu, fam) = load_measure(&u, family.as_deref(), weights.as_deref(), table.as_deref())?;
            let ot = match &mu {
                FamilyMeasure::Table(t) if family.is_none() && fam.len() == u.subset_count() => {
                    OuterTable::from_table(t).map_err(other)?
                }
                _ => outer_extend(mu.as_set_fn(), &fam).map_err(other)?,
            };
            let sets = caratheodory_sets(&ot).map_err(other)?;
            let mut text = format!("{sets}\n");
            let outer = check_outer_axioms(&ot);
            let outer_json = axiom_lines("outer measure axioms", &outer, &u, &mut text);
            let sigma = check_class(ClassKind::SigmaAlgebra, &sets);
            let sigma_rendered: Vec<String> = sigma.violations.iter().map(|v| v.render(&u)).collect();
            text.push_str(&format!("{}: {}\n", ClassKind::SigmaAlgebra, if sigma.holds { "ok" } else { "violated" }));
            for r in &sigma_rendered {
                text.push_str(&format!("  {r}\n"));
            }
            let axioms = check_measure_axioms(&ot, &sets);
            let axioms_json = axiom_lines("measure axioms", &axioms, &u, &mut text);
            let completeness = completeness_report(&ot, &sets);
            text.push_str(&format!("complete: {}\n", if completeness.complete { "yes" } else { "no" }));
            let passed = outer.holds && sigma.holds && axioms.holds && completeness.complete;
            Ok(Outcome {
                text,
                json: json!({
                    "command": "caratheodory",
                    "family": sets.to_string(),
                    "outer_measure_axioms": outer_json,
                    "sigma_algebra": { "holds": sigma.holds, "violations": sigma_rendered },
                    "measure_axioms": axioms_json,
                    "complete": completeness.complete,
                }),
                passed,
            })
        }
        Verb::Fubini { function, measures } => {
            let f = two_dim(parse_with(function, parse_stepfn_expr)?)?;
            let mx = parse_measure_spec(&measures.x_measure).map_err(CliError::Other)?;
            let my = parse_measure_spec(&measures.y_measure).map_err(CliError::Other)?;
            let r = fubini_check(&mx, &my, &f).map_err(other)?;
            Ok(Outcome {
                text: format!(
                    "lhs: {}\nrhs: {}\ndirect: {}\nequal: {}\n",
                    r.lhs,
                    r.rhs,
                    r.direct,
                    if r.equal { "yes" } else { "no" }
                ),
                json: json!({
                    "command": "fubini",
                    "function": f.to_string(),
                    "lhs": r.lhs.to_string(),
                    "rhs": r.rhs.to_string(),
                    "direct": r.direct.to_string(),
                    "equal": r.equal,
                }),
                passed: r.equal,
            })
        }
        Verb::Product { rects, measures } => {
            let a = parse_with(rects, parse_rect_set)?;
            let mx = parse_measure_spec(&measures.x_measure).map_err(CliError::Other)?;
            let my = parse_measure_spec(&measures.y_measure).map_err(CliError::Other)?;
            let value = product_measure(&mx, &my, &a);
            Ok(Outcome {
                text: format!("{value}\n"),
                json: json!({ "command": "product", "rects": a.to_string(), "value": value.to_string() }),
                passed: true,
            })
        }
    }
}

/// Runs one invocation. Returns the exit status: 0 on success, 1 when a
/// check fails (the report is still printed), 2 on usage, parse or domain
/// errors.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                2
            } else {
                let _ = write!(out, "{rendered}");
                0
            };
        }
    };
    match execute(&cli.verb) {
        Ok(outcome) => {
            let written = if cli.json {
                writeln!(out, "{}", outcome.json)
            } else {
                write!(out, "{}", outcome.text)
            };
            if written.is_err() {
                return 2;
            }
            if outcome.passed { 0 } else { 1 }
        }
        Err(e) => {
            let _ = writeln!(err, "{}", e.render());
            2
        }
    }
}
