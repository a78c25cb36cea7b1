//! Text format for module programs: lexer, recursive-descent parser, and
//! the pretty printer the round-trip tests pin down. Parse errors carry
//! line and column; predicate arities must be consistent program-wide.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use fixmod_core::logic::{Atom, Literal, Module, Predicate, Rule, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Number(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Comma,
    Dot,
    Slash,
    Arrow,
}

impl Tok {
    fn show(&self) -> String {
        match self {
            Tok::Ident(s) | Tok::Var(s) | Tok::Number(s) => format!("'{s}'"),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Dot => "'.'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Arrow => "':-'".into(),
        }
    }
}

struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c == '\n' {
            chars.next();
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            continue;
        }
        if c == '%' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
            continue;
        }
        let start = col;
        let simple = match c {
            '{' => Some(Tok::LBrace),
            '}' => Some(Tok::RBrace),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            ',' => Some(Tok::Comma),
            '.' => Some(Tok::Dot),
            '/' => Some(Tok::Slash),
            _ => None,
        };
        if let Some(tok) = simple {
            chars.next();
            col += 1;
            out.push(Lexed { tok, line, col: start });
            continue;
        }
        if c == ':' {
            chars.next();
            col += 1;
            if chars.peek() == Some(&'-') {
                chars.next();
                col += 1;
                out.push(Lexed { tok: Tok::Arrow, line, col: start });
                continue;
            }
            return Err(ParseError {
                line,
                col: start,
                message: "expected '-' after ':'".into(),
            });
        }
        if c.is_ascii_alphanumeric() {
            let mut word = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' {
                    word.push(c);
                    chars.next();
                    col += 1;
                } else {
                    break;
                }
            }
            let first = word.chars().next().unwrap();
            let tok = if first.is_ascii_uppercase() {
                Tok::Var(word)
            } else if first.is_ascii_digit() {
                if word.chars().all(|c| c.is_ascii_digit()) {
                    Tok::Number(word)
                } else {
                    return Err(ParseError {
                        line,
                        col: start,
                        message: format!("bad token '{word}': names cannot start with a digit"),
                    });
                }
            } else {
                Tok::Ident(word)
            };
            out.push(Lexed { tok, line, col: start });
            continue;
        }
        return Err(ParseError {
            line,
            col: start,
            message: format!("unexpected character '{c}'"),
        });
    }
    Ok(out)
}

/// Parsed program: an ordered list of modules with program-wide arity
/// consistency already enforced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceProgram {
    pub modules: Vec<Module>,
}

impl SourceProgram {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut parser = Parser { toks: lex(text)?, at: 0, arities: BTreeMap::new() };
        let modules = parser.program()?;
        Ok(SourceProgram { modules })
    }

    /// Canonical text; parsing it back yields an identical program.
    pub fn render(&self) -> String {
        let rendered: Vec<String> = self.modules.iter().map(|m| m.to_string()).collect();
        rendered.join("\n")
    }

    /// Predicate name to arity, over every mention in the program.
    pub fn arities(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        for module in &self.modules {
            for pred in module.predicates() {
                out.insert(pred.name.clone(), pred.arity);
            }
        }
        out
    }
}

struct Parser {
    toks: Vec<Lexed>,
    at: usize,
    arities: BTreeMap<String, usize>,
}

impl Parser {
    fn pos(&self) -> (usize, usize) {
        match self.toks.get(self.at) {
            Some(t) => (t.line, t.col),
            None => self
                .toks
                .last()
                .map(|t| (t.line, t.col + 1))
                .unwrap_or((1, 1)),
        }
    }

    fn fail<T>(&self, message: String) -> Result<T, ParseError> {
        let (line, col) = self.pos();
        Err(ParseError { line, col, message })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.tok)
    }

    fn advance(&mut self) -> Option<&Tok> {
        let tok = self.toks.get(self.at).map(|t| &t.tok);
        if tok.is_some() {
            self.at += 1;
        }
        tok
    }

    fn describe_next(&self) -> String {
        match self.toks.get(self.at) {
            Some(t) => t.tok.show(),
            None => "end of input".into(),
        }
    }

    fn expect(&mut self, want: Tok, context: &str) -> Result<(), ParseError> {
        if self.peek() == Some(&want) {
            self.at += 1;
            Ok(())
        } else {
            self.fail(format!("expected {} {context}, found {}", want.show(), self.describe_next()))
        }
    }

    fn ident(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.at += 1;
                Ok(s)
            }
            _ => self.fail(format!("expected {what}, found {}", self.describe_next())),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Ident(s)) if s == kw => {
                self.at += 1;
                Ok(())
            }
            _ => self.fail(format!("expected '{kw}', found {}", self.describe_next())),
        }
    }

    fn number(&mut self, what: &str) -> Result<usize, ParseError> {
        match self.peek() {
            Some(Tok::Number(s)) => {
                let parsed = s.parse::<usize>().map_err(|_| ParseError {
                    line: self.toks[self.at].line,
                    col: self.toks[self.at].col,
                    message: format!("number '{s}' is too large"),
                })?;
                self.at += 1;
                Ok(parsed)
            }
            _ => self.fail(format!("expected {what}, found {}", self.describe_next())),
        }
    }

    fn check_arity(
        &mut self,
        name: &str,
        arity: usize,
        line: usize,
        col: usize,
    ) -> Result<(), ParseError> {
        match self.arities.get(name) {
            Some(&known) if known != arity => Err(ParseError {
                line,
                col,
                message: format!(
                    "predicate {name} used with arity {arity} but the program uses arity {known}"
                ),
            }),
            Some(_) => Ok(()),
            None => {
                self.arities.insert(name.to_string(), arity);
                Ok(())
            }
        }
    }

    fn program(&mut self) -> Result<Vec<Module>, ParseError> {
        let mut modules = Vec::new();
        let mut names = BTreeSet::new();
        while self.peek().is_some() {
            modules.push(self.module(&mut names)?);
        }
        if modules.is_empty() {
            return self.fail("a program needs at least one module".into());
        }
        Ok(modules)
    }

    fn module(&mut self, names: &mut BTreeSet<String>) -> Result<Module, ParseError> {
        self.keyword("module")?;
        let (line, col) = self.pos();
        let name = self.ident("a module name")?;
        if !names.insert(name.clone()) {
            return Err(ParseError {
                line,
                col,
                message: format!("module name '{name}' is declared twice"),
            });
        }
        self.keyword("defines")?;
        let mut defines: BTreeSet<Predicate> = BTreeSet::new();
        while self.peek() != Some(&Tok::LBrace) {
            let (pl, pc) = self.pos();
            let pred = self.ident("a predicate name")?;
            self.expect(Tok::Slash, "after the predicate name")?;
            let arity = self.number("an arity")?;
            self.check_arity(&pred, arity, pl, pc)?;
            defines.insert(Predicate::new(&pred, arity));
            if self.peek() == Some(&Tok::Comma) {
                self.at += 1;
            } else {
                break;
            }
        }
        self.expect(Tok::LBrace, "to open the module body")?;
        let mut rules = Vec::new();
        while self.peek() != Some(&Tok::RBrace) {
            if self.peek().is_none() {
                return self.fail(format!("expected a rule or '}}' to close module '{name}'"));
            }
            rules.push(self.rule(&name, &defines)?);
        }
        self.at += 1;
        Module::new(&name, defines, rules).map_err(|e| {
            let (line, col) = self.pos();
            ParseError { line, col, message: e.to_string() }
        })
    }

    fn rule(&mut self, module: &str, defines: &BTreeSet<Predicate>) -> Result<Rule, ParseError> {
        let (line, col) = self.pos();
        let head = self.atom()?;
        let head_pred = head.predicate();
        if !defines.contains(&head_pred) {
            return Err(ParseError {
                line,
                col,
                message: format!(
                    "head predicate {head_pred} is not among the defines of module '{module}'"
                ),
            });
        }
        if self.peek() == Some(&Tok::Dot) {
            self.at += 1;
            return Ok(Rule::fact(head));
        }
        self.expect(Tok::Arrow, "or '.' after the rule head")?;
        let mut body = vec![self.literal()?];
        while self.peek() == Some(&Tok::Comma) {
            self.at += 1;
            body.push(self.literal()?);
        }
        self.expect(Tok::Dot, "to end the rule")?;
        Ok(Rule::new(head, body))
    }

    fn literal(&mut self) -> Result<Literal, ParseError> {
        if let Some(Tok::Ident(s)) = self.peek() {
            if s == "not" {
                self.at += 1;
                return Ok(Literal::neg(self.atom()?));
            }
        }
        Ok(Literal::pos(self.atom()?))
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        let (line, col) = self.pos();
        let name = self.ident("a predicate name")?;
        if name == "not" {
            return Err(ParseError {
                line,
                col,
                message: "the name 'not' is reserved for negation".into(),
            });
        }
        let mut args = Vec::new();
        if self.peek() == Some(&Tok::LParen) {
            self.at += 1;
            loop {
                args.push(self.term()?);
                if self.peek() == Some(&Tok::Comma) {
                    self.at += 1;
                } else {
                    break;
                }
            }
            self.expect(Tok::RParen, "to close the argument list")?;
        }
        self.check_arity(&name, args.len(), line, col)?;
        Ok(Atom::new(&name, args))
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.advance() {
            Some(Tok::Ident(s)) => Ok(Term::Const(s.clone())),
            Some(Tok::Number(s)) => Ok(Term::Const(s.clone())),
            Some(Tok::Var(s)) => Ok(Term::Var(s.clone())),
            _ => {
                self.at = self.at.saturating_sub(1);
                self.fail(format!(
                    "expected a constant or variable, found {}",
                    self.describe_next()
                ))
            }
        }
    }
}

/// Ground literals from a flag value such as `"q, not r(a)"`.
pub fn parse_ground_literals(text: &str) -> Result<Vec<Literal>, ParseError> {
    let lits = parse_literals(text)?;
    for lit in &lits {
        if let Some(Term::Var(v)) =
            lit.atom.args.iter().find(|t| matches!(t, Term::Var(_)))
        {
            return Err(ParseError {
                line: 1,
                col: 1,
                message: format!("assumption {lit} must be ground, but has variable {v}"),
            });
        }
    }
    Ok(lits)
}

/// Literal list from a flag value such as `"path(1,Y), not e(Y,1)"`.
pub fn parse_literals(text: &str) -> Result<Vec<Literal>, ParseError> {
    let mut parser = Parser { toks: lex(text)?, at: 0, arities: BTreeMap::new() };
    if parser.peek().is_none() {
        return parser.fail("expected at least one literal".into());
    }
    let mut lits = vec![parser.literal()?];
    while parser.peek() == Some(&Tok::Comma) {
        parser.at += 1;
        lits.push(parser.literal()?);
    }
    if parser.peek().is_some() {
        return parser.fail(format!("unexpected {}", parser.describe_next()));
    }
    Ok(lits)
}

#[cfg(test)]
mod tests {
    use super::*;

    const PATHS: &str = "\
% reachability over a fixed edge relation
module edges defines e/2 {
  e(1,2).
  e(2,3).
}
module paths defines path/2 {
  path(X,Y) :- e(X,Y).
  path(X,Y) :- e(X,Z), path(Z,Y).
}
";

    #[test]
    fn parses_the_reachability_program() {
        let program = SourceProgram::parse(PATHS).unwrap();
        assert_eq!(program.modules.len(), 2);
        assert_eq!(program.modules[0].name, "edges");
        assert_eq!(program.modules[0].rules.len(), 2);
        assert_eq!(program.modules[1].rules.len(), 2);
        assert_eq!(program.arities()["path"], 2);
    }

    #[test]
    fn round_trips_through_the_pretty_printer() {
        for text in [
            PATHS,
            "module m defines p/0, q/1 {\n p. \n q(a) :- p, not r(X, b), s(X). }",
            "module none defines {\n}",
        ] {
            let once = SourceProgram::parse(text).unwrap();
            let again = SourceProgram::parse(&once.render()).unwrap();
            assert_eq!(once, again);
        }
    }

    #[test]
    fn reports_syntax_errors_with_positions() {
        let err = SourceProgram::parse("module m defines p/1 {\n  p(a :- q.\n}").unwrap_err();
        assert_eq!((err.line, err.col), (2, 7));
        assert!(err.message.contains("')'"), "{}", err.message);

        let err = SourceProgram::parse("module m defines p/0 { p :  q. }").unwrap_err();
        assert!(err.message.contains("expected '-'"));

        let err = SourceProgram::parse("% only a comment\n").unwrap_err();
        assert!(err.message.contains("at least one module"));
    }

    #[test]
    fn rejects_arity_clashes_anywhere_in_the_program() {
        let err = SourceProgram::parse(
            "module m defines p/1 { p(a) :- q(a,b). }\nmodule n defines q/1 { q(a). }",
        )
        .unwrap_err();
        assert!(err.message.contains("arity 1"), "{}", err.message);
        assert!(err.message.contains("arity 2"), "{}", err.message);
        assert_eq!(err.line, 2);
    }

    #[test]
    fn rejects_heads_outside_the_module_defines() {
        let err =
            SourceProgram::parse("module m defines p/0 { q(a) :- p. }").unwrap_err();
        assert!(err.message.contains("q/1"), "{}", err.message);
        assert!(err.message.contains("'m'"), "{}", err.message);
    }

    #[test]
    fn rejects_duplicate_module_names() {
        let err = SourceProgram::parse(
            "module m defines p/0 { p. }\nmodule m defines q/0 { q. }",
        )
        .unwrap_err();
        assert!(err.message.contains("declared twice"));
    }

    #[test]
    fn keywords_are_usable_as_predicate_names_inside_bodies() {
        let program = SourceProgram::parse(
            "module m defines module/1 { module(a) :- defines(a, b). }",
        );
        assert!(program.is_ok());
    }

    #[test]
    fn the_negation_marker_is_reserved() {
        let err = SourceProgram::parse("module m defines p/0 { p :- not not. }").unwrap_err();
        assert!(err.message.contains("reserved"));
    }

    #[test]
    fn flag_literals_parse_like_rule_bodies() {
        let lits = parse_literals("path(1,Y), not e(Y,1)").unwrap();
        assert_eq!(lits.len(), 2);
        assert!(!lits[1].positive);
        assert_eq!(lits[0].to_string(), "path(1,Y)");

        let ground = parse_ground_literals("q, not r(a)").unwrap();
        assert_eq!(ground.len(), 2);
        let err = parse_ground_literals("r(X)").unwrap_err();
        assert!(err.message.contains("must be ground"));
        assert!(parse_ground_literals("").is_err());
    }

    #[test]
    fn numbers_make_fine_constants_but_not_names() {
        let program =
            SourceProgram::parse("module m defines p/1 { p(1). p(22). }").unwrap();
        assert_eq!(program.modules[0].rules.len(), 2);
        let err = SourceProgram::parse("module m defines 1p/0 { }").unwrap_err();
        assert!(err.message.contains("digit"), "{}", err.message);
    }
}
