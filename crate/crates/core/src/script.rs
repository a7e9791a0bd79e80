//! Line-oriented input language.
//!
//! ```text
//! ring R = semigroup(7, 15, 17, 33)
//! ideal I = (t^7, t^17, t^33)
//! module M = I (+) I
//! check vasconcelos M
//! ```

use std::fmt;
use std::sync::Arc;

use crate::error::Error;
use crate::invariants::{DirectSumModule, FitConfig};
use crate::ring::{Exponent, Ideal, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    Undeclared,
    Duplicate,
    NotInSemigroup,
    NonPrimary,
    Invalid,
}

impl ParseErrorKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ParseErrorKind::Syntax => "syntax",
            ParseErrorKind::Undeclared => "undeclared",
            ParseErrorKind::Duplicate => "duplicate",
            ParseErrorKind::NotInSemigroup => "not_in_semigroup",
            ParseErrorKind::NonPrimary => "non_primary",
            ParseErrorKind::Invalid => "invalid",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Command {
    ComputeInvariants { target: String },
    ComputeReduction { i: String, j: String },
    Vasconcelos { module: String },
    Northcott { module: String },
    CmFiber { i: String, j: String },
    ReductionBound { i: String, j: String },
    SumFormulas { i: String, rank: usize },
    MixedSum { i: String, j: String, u: usize, v: usize },
    PropDecomposition { i: String, j: String },
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Command::ComputeInvariants { target } => write!(f, "compute invariants {target}"),
            Command::ComputeReduction { i, j } => write!(f, "compute reduction {i} {j}"),
            Command::Vasconcelos { module } => write!(f, "check vasconcelos {module}"),
            Command::Northcott { module } => write!(f, "check northcott {module}"),
            Command::CmFiber { i, j } => write!(f, "check cm_fiber {i} reduction {j}"),
            Command::ReductionBound { i, j } => write!(f, "check reduction_bound {i} reduction {j}"),
            Command::SumFormulas { i, rank } => write!(f, "check sum_formulas {i} rank {rank}"),
            Command::MixedSum { i, j, u, v } => write!(f, "check mixed_sum {i} {j} copies {u} {v}"),
            Command::PropDecomposition { i, j } => write!(f, "check prop_decomposition {i} {j}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Statement {
    pub line: usize,
    pub command: Command,
}

/// A parsed and resolved script.
#[derive(Clone, Debug, Default)]
pub struct SessionScript {
    pub ring: Option<(String, Arc<Ring>)>,
    pub ideals: Vec<(String, Ideal)>,
    pub modules: Vec<(String, DirectSumModule, Vec<String>)>,
    pub commands: Vec<Statement>,
    /// Fit settings given by `set` lines.
    pub settings: Settings,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Settings {
    pub n_max: Option<usize>,
    pub verify_window: Option<usize>,
    pub s_max: Option<usize>,
}

impl Settings {
    pub fn apply(&self, cfg: &mut FitConfig) {
        if self.n_max.is_some() {
            cfg.n_max = self.n_max;
        }
        if let Some(w) = self.verify_window {
            cfg.verify_window = w;
        }
        if let Some(s) = self.s_max {
            cfg.s_max = s;
        }
    }
}

impl SessionScript {
    pub fn ideal(&self, name: &str) -> Option<&Ideal> {
        self.ideals.iter().find(|(n, _)| n == name).map(|(_, i)| i)
    }

    pub fn module(&self, name: &str) -> Option<&DirectSumModule> {
        self.modules.iter().find(|(n, _, _)| n == name).map(|(_, m, _)| m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(u64),
    Punct(char),
    DirectSum,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "'{s}'"),
            Tok::Int(n) => write!(f, "'{n}'"),
            Tok::Punct(c) => write!(f, "'{c}'"),
            Tok::DirectSum => write!(f, "'(+)'"),
        }
    }
}

fn lex(text: &str, line: usize) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let n = s.parse().map_err(|_| ParseError {
                line,
                column: col,
                kind: ParseErrorKind::Syntax,
                message: format!("integer {s} is too large"),
            })?;
            out.push((Tok::Int(n), col));
        } else if c == '(' && chars.get(i + 1) == Some(&'+') && chars.get(i + 2) == Some(&')') {
            out.push((Tok::DirectSum, col));
            i += 3;
        } else if "(),=^*".contains(c) {
            out.push((Tok::Punct(c), col));
            i += 1;
        } else {
            return Err(ParseError {
                line,
                column: col,
                kind: ParseErrorKind::Syntax,
                message: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    line: usize,
    end_col: usize,
}

impl<'a> Cursor<'a> {
    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn err(&self, kind: ParseErrorKind, col: usize, message: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line,
            column: col,
            kind,
            message: message.into(),
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        let found = match self.toks.get(self.pos) {
            Some((t, _)) => t.to_string(),
            None => "end of line".into(),
        };
        self.err(
            ParseErrorKind::Syntax,
            self.col(),
            format!("expected {wanted}, found {found}"),
        )
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn ident(&mut self, wanted: &str) -> Result<(String, usize), ParseError> {
        match self.toks.get(self.pos) {
            Some((Tok::Ident(s), c)) => {
                self.pos += 1;
                Ok((s.clone(), *c))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.unexpected(&format!("'{kw}'"))),
        }
    }

    fn int(&mut self, wanted: &str) -> Result<(u64, usize), ParseError> {
        match self.toks.get(self.pos) {
            Some((Tok::Int(n), c)) => {
                self.pos += 1;
                Ok((*n, *c))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    fn punct(&mut self, p: char) -> Result<(), ParseError> {
        if self.peek() == Some(&Tok::Punct(p)) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("'{p}'")))
        }
    }

    fn eat(&mut self, p: char) -> bool {
        if self.peek() == Some(&Tok::Punct(p)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.pos < self.toks.len() {
            Err(self.unexpected("end of line"))
        } else {
            Ok(())
        }
    }
}

fn error_kind(e: &Error) -> ParseErrorKind {
    match e {
        Error::NotInSemigroup(_) => ParseErrorKind::NotInSemigroup,
        Error::InfiniteColength(_) => ParseErrorKind::NonPrimary,
        _ => ParseErrorKind::Invalid,
    }
}

struct Parser {
    script: SessionScript,
}

impl Parser {
    fn declared(&self, name: &str) -> bool {
        self.script.ring.as_ref().is_some_and(|(n, _)| n == name)
            || self.script.ideal(name).is_some()
            || self.script.module(name).is_some()
    }

    fn fresh(&self, cur: &Cursor, name: &str, col: usize) -> Result<(), ParseError> {
        if self.declared(name) {
            Err(cur.err(
                ParseErrorKind::Duplicate,
                col,
                format!("name '{name}' is already declared"),
            ))
        } else {
            Ok(())
        }
    }

    fn ring(&self, cur: &Cursor, col: usize) -> Result<Arc<Ring>, ParseError> {
        match &self.script.ring {
            Some((_, r)) => Ok(r.clone()),
            None => Err(cur.err(
                ParseErrorKind::Undeclared,
                col,
                "no ring declared before this line",
            )),
        }
    }

    /// An ideal reference that must be m-primary.
    fn primary_ideal(&self, cur: &mut Cursor) -> Result<String, ParseError> {
        let (name, col) = cur.ident("an ideal name")?;
        match self.script.ideal(&name) {
            None => Err(cur.err(
                ParseErrorKind::Undeclared,
                col,
                format!("ideal '{name}' is not declared"),
            )),
            Some(i) if !i.is_m_primary() => Err(cur.err(
                ParseErrorKind::NonPrimary,
                col,
                format!("ideal '{name}' = {i} is not m-primary"),
            )),
            Some(_) => Ok(name),
        }
    }

    fn module_name(&self, cur: &mut Cursor) -> Result<String, ParseError> {
        let (name, col) = cur.ident("a module name")?;
        if self.script.module(&name).is_none() {
            return Err(cur.err(
                ParseErrorKind::Undeclared,
                col,
                format!("module '{name}' is not declared"),
            ));
        }
        Ok(name)
    }

    fn count(&self, cur: &mut Cursor, what: &str) -> Result<usize, ParseError> {
        let (n, col) = cur.int(what)?;
        if n == 0 || n > 64 {
            return Err(cur.err(
                ParseErrorKind::Invalid,
                col,
                format!("{what} must lie in 1..=64"),
            ));
        }
        Ok(n as usize)
    }

    fn statement(&mut self, cur: &mut Cursor) -> Result<(), ParseError> {
        let (kw, col) = cur.ident("a statement keyword")?;
        match kw.as_str() {
            "ring" => self.ring_decl(cur, col),
            "ideal" => self.ideal_decl(cur),
            "module" => self.module_decl(cur),
            "set" => self.set(cur),
            "compute" => {
                let (what, wcol) = cur.ident("'invariants' or 'reduction'")?;
                let command = match what.as_str() {
                    "invariants" => {
                        let (target, tcol) = cur.ident("an ideal or module name")?;
                        if let Some(i) = self.script.ideal(&target) {
                            if !i.is_m_primary() {
                                return Err(cur.err(
                                    ParseErrorKind::NonPrimary,
                                    tcol,
                                    format!("ideal '{target}' = {i} is not m-primary"),
                                ));
                            }
                        } else if self.script.module(&target).is_none() {
                            return Err(cur.err(
                                ParseErrorKind::Undeclared,
                                tcol,
                                format!("'{target}' is not a declared ideal or module"),
                            ));
                        }
                        Command::ComputeInvariants { target }
                    }
                    "reduction" => {
                        let i = self.primary_ideal(cur)?;
                        let j = self.primary_ideal(cur)?;
                        Command::ComputeReduction { i, j }
                    }
                    other => {
                        return Err(cur.err(
                            ParseErrorKind::Syntax,
                            wcol,
                            format!("unknown computation '{other}'"),
                        ))
                    }
                };
                self.push(cur, command)
            }
            "check" => {
                let (name, ncol) = cur.ident("a check name")?;
                let command = match name.as_str() {
                    "vasconcelos" => Command::Vasconcelos { module: self.module_name(cur)? },
                    "northcott" => Command::Northcott { module: self.module_name(cur)? },
                    "cm_fiber" | "reduction_bound" => {
                        let i = self.primary_ideal(cur)?;
                        cur.keyword("reduction")?;
                        let j = self.primary_ideal(cur)?;
                        if name == "cm_fiber" {
                            Command::CmFiber { i, j }
                        } else {
                            Command::ReductionBound { i, j }
                        }
                    }
                    "sum_formulas" => {
                        let i = self.primary_ideal(cur)?;
                        cur.keyword("rank")?;
                        let rank = self.count(cur, "rank")?;
                        Command::SumFormulas { i, rank }
                    }
                    "mixed_sum" => {
                        let i = self.primary_ideal(cur)?;
                        let j = self.primary_ideal(cur)?;
                        cur.keyword("copies")?;
                        let u = self.count(cur, "copy count")?;
                        let v = self.count(cur, "copy count")?;
                        Command::MixedSum { i, j, u, v }
                    }
                    "prop_decomposition" => {
                        let i = self.primary_ideal(cur)?;
                        let j = self.primary_ideal(cur)?;
                        Command::PropDecomposition { i, j }
                    }
                    other => {
                        return Err(cur.err(
                            ParseErrorKind::Syntax,
                            ncol,
                            format!("unknown check '{other}'"),
                        ))
                    }
                };
                self.push(cur, command)
            }
            other => Err(cur.err(
                ParseErrorKind::Syntax,
                col,
                format!("unknown statement '{other}'"),
            )),
        }
    }

    fn push(&mut self, cur: &Cursor, command: Command) -> Result<(), ParseError> {
        cur.finish()?;
        self.script.commands.push(Statement { line: cur.line, command });
        Ok(())
    }

    fn set(&mut self, cur: &mut Cursor) -> Result<(), ParseError> {
        let (key, kcol) = cur.ident("a setting name")?;
        let (value, _) = cur.int("a value")?;
        let value = value as usize;
        match key.as_str() {
            "nmax" => self.script.settings.n_max = Some(value),
            "verify_window" => self.script.settings.verify_window = Some(value),
            "smax" => self.script.settings.s_max = Some(value),
            other => {
                return Err(cur.err(
                    ParseErrorKind::Syntax,
                    kcol,
                    format!("unknown setting '{other}'"),
                ))
            }
        }
        cur.finish()
    }

    fn ring_decl(&mut self, cur: &mut Cursor, col: usize) -> Result<(), ParseError> {
        if self.script.ring.is_some() {
            return Err(cur.err(
                ParseErrorKind::Duplicate,
                col,
                "a script declares exactly one ring",
            ));
        }
        let (name, ncol) = cur.ident("a ring name")?;
        self.fresh(cur, &name, ncol)?;
        cur.punct('=')?;
        let (kind, kcol) = cur.ident("'power_series' or 'semigroup'")?;
        cur.punct('(')?;
        let ring = match kind.as_str() {
            "power_series" => {
                let mut vars = Vec::new();
                loop {
                    let (v, vcol) = cur.ident("a variable name")?;
                    if vars.contains(&v) {
                        return Err(cur.err(
                            ParseErrorKind::Duplicate,
                            vcol,
                            format!("variable '{v}' repeated"),
                        ));
                    }
                    vars.push(v);
                    if !cur.eat(',') {
                        break;
                    }
                }
                Ring::power_series(&vars)
            }
            "semigroup" => {
                let mut gens = Vec::new();
                loop {
                    let (g, gcol) = cur.int("a positive integer")?;
                    let g = u32::try_from(g).ok().filter(|&g| g > 0).ok_or_else(|| {
                        cur.err(ParseErrorKind::Invalid, gcol, "generator out of range")
                    })?;
                    gens.push(g);
                    if !cur.eat(',') {
                        break;
                    }
                }
                Ring::semigroup(&gens)
            }
            other => {
                return Err(cur.err(
                    ParseErrorKind::Syntax,
                    kcol,
                    format!("unknown ring kind '{other}'"),
                ))
            }
        };
        cur.punct(')')?;
        cur.finish()?;
        let ring = ring.map_err(|e| cur.err(error_kind(&e), kcol, e.to_string()))?;
        self.script.ring = Some((name, ring));
        Ok(())
    }

    fn monomial(&self, cur: &mut Cursor, ring: &Ring) -> Result<(Exponent, usize), ParseError> {
        let start = cur.col();
        let arity = match ring.as_power_series() {
            Some(p) => p.dim(),
            None => 1,
        };
        let mut e = vec![0u32; arity];
        loop {
            let (var, vcol) = cur.ident("a variable")?;
            let idx = match ring.as_power_series() {
                Some(p) => p.variable_index(&var),
                None => (var == "t").then_some(0),
            };
            let Some(idx) = idx else {
                return Err(cur.err(
                    ParseErrorKind::Syntax,
                    vcol,
                    format!("'{var}' is not a variable of {ring}"),
                ));
            };
            let mut power = 1u64;
            if cur.eat('^') {
                let (p, pcol) = cur.int("an exponent")?;
                if p > u32::MAX as u64 / 2 {
                    return Err(cur.err(ParseErrorKind::Invalid, pcol, "exponent too large"));
                }
                power = p;
            }
            e[idx] = e[idx]
                .checked_add(power as u32)
                .filter(|&x| x <= u32::MAX / 2)
                .ok_or_else(|| cur.err(ParseErrorKind::Invalid, vcol, "exponent too large"))?;
            if !cur.eat('*') {
                break;
            }
        }
        Ok((e, start))
    }

    fn ideal_decl(&mut self, cur: &mut Cursor) -> Result<(), ParseError> {
        let (name, ncol) = cur.ident("an ideal name")?;
        self.fresh(cur, &name, ncol)?;
        let ring = self.ring(cur, ncol)?;
        cur.punct('=')?;
        let ideal = if cur.peek() == Some(&Tok::Ident("maximal".into())) {
            cur.pos += 1;
            Ideal::maximal(&ring)
        } else {
            let open = cur.col();
            cur.punct('(')?;
            let mut gens = Vec::new();
            loop {
                let (e, ecol) = self.monomial(cur, &ring)?;
                if let Some(s) = ring.as_semigroup() {
                    if !s.contains(e[0]) {
                        return Err(cur.err(
                            ParseErrorKind::NotInSemigroup,
                            ecol,
                            format!("t^{} is not in {ring}: {} is a gap", e[0], e[0]),
                        ));
                    }
                }
                gens.push(e);
                if !cur.eat(',') {
                    break;
                }
            }
            cur.punct(')')?;
            Ideal::new(&ring, gens).map_err(|e| cur.err(error_kind(&e), open, e.to_string()))?
        };
        cur.finish()?;
        self.script.ideals.push((name, ideal));
        Ok(())
    }

    fn module_decl(&mut self, cur: &mut Cursor) -> Result<(), ParseError> {
        let (name, ncol) = cur.ident("a module name")?;
        self.fresh(cur, &name, ncol)?;
        cur.punct('=')?;
        let mut names = vec![self.primary_ideal(cur)?];
        while cur.peek() == Some(&Tok::DirectSum) {
            cur.pos += 1;
            names.push(self.primary_ideal(cur)?);
        }
        cur.finish()?;
        let summands = names
            .iter()
            .map(|n| self.script.ideal(n).expect("resolved").clone())
            .collect();
        let module = DirectSumModule::new(summands)
            .map_err(|e| cur.err(error_kind(&e), ncol, e.to_string()))?;
        self.script.modules.push((name, module, names));
        Ok(())
    }
}

pub fn parse_script(text: &str) -> Result<SessionScript, ParseError> {
    let mut parser = Parser {
        script: SessionScript::default(),
    };
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let toks = lex(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut cur = Cursor {
            toks: &toks,
            pos: 0,
            line,
            end_col: raw.chars().count() + 1,
        };
        parser.statement(&mut cur)?;
    }
    Ok(parser.script)
}

/// Builds a self-contained script for one command over the given ideals.
///
/// Ideals are named `I1, I2, ...` in the order given; `module` lists indices
/// into `ideals` and is declared as `M`.
pub struct ReplayBuilder {
    ring: Arc<Ring>,
    ideals: Vec<Ideal>,
    module: Option<Vec<usize>>,
    settings: Settings,
}

impl ReplayBuilder {
    pub fn new(ring: &Arc<Ring>, settings: Settings) -> Self {
        ReplayBuilder {
            ring: ring.clone(),
            ideals: Vec::new(),
            module: None,
            settings,
        }
    }

    /// Name of `ideal`, declaring it if needed.
    pub fn ideal(&mut self, ideal: &Ideal) -> String {
        let k = match self.ideals.iter().position(|i| i == ideal) {
            Some(k) => k,
            None => {
                self.ideals.push(ideal.clone());
                self.ideals.len() - 1
            }
        };
        format!("I{}", k + 1)
    }

    pub fn module(&mut self, module: &DirectSumModule) -> String {
        let idx = module
            .summands()
            .iter()
            .map(|s| {
                self.ideal(s);
                self.ideals.iter().position(|i| i == s).expect("declared")
            })
            .collect();
        self.module = Some(idx);
        "M".into()
    }

    pub fn finish(&self, command: &Command) -> String {
        let mut out = format!("ring R = {}\n", self.ring);
        for (k, i) in self.ideals.iter().enumerate() {
            out.push_str(&format!("ideal I{} = {}\n", k + 1, i));
        }
        if let Some(idx) = &self.module {
            let parts: Vec<String> = idx.iter().map(|k| format!("I{}", k + 1)).collect();
            out.push_str(&format!("module M = {}\n", parts.join(" (+) ")));
        }
        if let Some(n) = self.settings.n_max {
            out.push_str(&format!("set nmax {n}\n"));
        }
        if let Some(w) = self.settings.verify_window {
            out.push_str(&format!("set verify_window {w}\n"));
        }
        if let Some(s) = self.settings.s_max {
            out.push_str(&format!("set smax {s}\n"));
        }
        out.push_str(&format!("{command}\n"));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const WORKED: &str = "\
ring R = semigroup(7, 15, 17, 33)
ideal I = (t^7, t^17, t^33)   # valuations
module M = I (+) I
check vasconcelos M
";

    fn err(text: &str) -> ParseError {
        parse_script(text).unwrap_err()
    }

    #[test]
    fn worked_script() {
        let s = parse_script(WORKED).unwrap();
        assert_eq!(s.ring.as_ref().unwrap().1.to_string(), "semigroup(7, 15, 17, 33)");
        assert_eq!(s.ideals.len(), 1);
        assert_eq!(s.modules.len(), 1);
        assert_eq!(s.commands.len(), 1);
        assert_eq!(s.commands[0].command, Command::Vasconcelos { module: "M".into() });
        assert_eq!(s.commands[0].line, 4);
        assert_eq!(s.modules[0].1.rank(), 2);
    }

    #[test]
    fn empty_and_comments() {
        let s = parse_script("").unwrap();
        assert!(s.ring.is_none() && s.commands.is_empty());
        let s = parse_script("# nothing\n\n   # more\n").unwrap();
        assert!(s.commands.is_empty());
    }

    #[test]
    fn power_series_ideals() {
        let s = parse_script(
            "ring R = power_series(x, y)\nideal I = (x^2, y)\ncompute invariants I\nideal K = (x^2*y^3, x*x, y^4)",
        )
        .unwrap();
        assert_eq!(s.ideal("I").unwrap().to_string(), "(x^2, y)");
        assert_eq!(s.ideal("K").unwrap().to_string(), "(x^2, y^4)");
    }

    #[test]
    fn all_commands_parse() {
        let text = "\
ring R = power_series(x, y)
ideal I = (x^2, x*y, y^2)
ideal J = (x^2, y^2)
ideal m = maximal
module M = I (+) J (+) m
compute invariants M
compute reduction I J
check northcott M
check cm_fiber I reduction J
check reduction_bound I reduction J
check sum_formulas I rank 2
check mixed_sum I J copies 1 1
check prop_decomposition I J
set nmax 30
";
        let s = parse_script(text).unwrap();
        assert_eq!(s.commands.len(), 8);
        assert_eq!(s.settings.n_max, Some(30));
        for st in &s.commands {
            let line = text.lines().nth(st.line - 1).unwrap();
            assert_eq!(st.command.to_string(), line);
        }
    }

    #[test]
    fn non_primary_reference() {
        let e = err("ring R = power_series(x, y)\nideal I = (x^2, x*y)\ncompute invariants I");
        assert_eq!((e.kind, e.line, e.column), (ParseErrorKind::NonPrimary, 3, 20));
        let e = err("ring R = power_series(x, y)\nideal I = (x^2, x*y)\nmodule M = I");
        assert_eq!(e.kind, ParseErrorKind::NonPrimary);
    }

    #[test]
    fn error_positions() {
        let e = err("ring R = power_series(x, y)\nideal I = (x^2, z)");
        assert_eq!((e.kind, e.line, e.column), (ParseErrorKind::Syntax, 2, 17));
        let e = err("ring R = semigroup(7, 15, 17, 33)\nideal I = (t^8)");
        assert_eq!((e.kind, e.column), (ParseErrorKind::NotInSemigroup, 12));
        let e = err("ring R = power_series(x, y)\ncheck vasconcelos M");
        assert_eq!((e.kind, e.column), (ParseErrorKind::Undeclared, 19));
        let e = err("ring R = power_series(x, y)\nideal R = (x)");
        assert_eq!(e.kind, ParseErrorKind::Duplicate);
        let e = err("ring R = power_series(x, y)\nring S = power_series(x, y)");
        assert_eq!(e.kind, ParseErrorKind::Duplicate);
        let e = err("ideal I = (x)");
        assert_eq!(e.kind, ParseErrorKind::Undeclared);
        let e = err("ring R = power_series(x, y)\nideal I = (x, y) extra");
        assert_eq!((e.kind, e.column), (ParseErrorKind::Syntax, 18));
        let e = err("ring R = power_series(x, y) $");
        assert_eq!(e.column, 29);
        let e = err("ring R = semigroup(4, 6)");
        assert_eq!(e.kind, ParseErrorKind::Invalid);
        let e = err("ring R = power_series(x, y)\nideal I = (x, y\n");
        assert_eq!((e.line, e.column), (2, 16));
    }

    #[test]
    fn replay_roundtrip() {
        let s = parse_script(WORKED).unwrap();
        let ring = &s.ring.as_ref().unwrap().1;
        let mut b = ReplayBuilder::new(ring, Settings::default());
        let m = b.module(s.module("M").unwrap());
        let text = b.finish(&Command::Vasconcelos { module: m });
        let again = parse_script(&text).unwrap();
        assert_eq!(again.module("M"), s.module("M"));
        assert_eq!(again.commands[0].command, s.commands[0].command);
    }
}
